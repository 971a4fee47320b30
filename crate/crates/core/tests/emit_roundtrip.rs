// Copyright 2026 The qcompile Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Serialization round trips on arbitrary circuits.

use proptest::prelude::*;
use qcompile::circuit::count_subgates;
use qcompile::emit::{emit_json, emit_latex, emit_text, parse_json, parse_text, NumericMode};
use qcompile::{Axis, Circuit, Gate};

fn angle() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.0),
        Just(-0.0),
        Just(std::f64::consts::FRAC_PI_2),
        -std::f64::consts::PI..=std::f64::consts::PI,
        -1e-6f64..1e-6,
    ]
}

fn gate(n: u32) -> impl Strategy<Value = Gate> {
    (1..=n, proptest::collection::vec(any::<bool>(), n as usize), 0..3u8).prop_flat_map(move |(target, mask, kind)| {
        let controls: Vec<u32> = (1..=n).filter(|&q| q != target && mask[q as usize - 1]).collect();
        let len = 1usize << controls.len();
        match kind {
            0 => (Just(controls), any::<bool>(), proptest::collection::vec(angle(), len))
                .prop_map(move |(c, y, a)| Gate::rotation(if y { Axis::Y } else { Axis::Z }, target, c, a))
                .boxed(),
            1 => (Just(controls), proptest::collection::vec(any::<bool>(), len))
                .prop_map(move |(controls, flags)| Gate::Pi { target, controls, flags })
                .boxed(),
            _ => angle().prop_map(|phase| Gate::GlobalPhase { phase }).boxed(),
        }
    })
}

fn circuit() -> impl Strategy<Value = Circuit> {
    (1u32..=5).prop_flat_map(|n| {
        proptest::collection::vec(gate(n), 0..12).prop_map(move |g| Circuit::new(n, g).unwrap())
    })
}

/// Every float of a circuit, bit patterns included.
fn bits(c: &Circuit) -> Vec<u64> {
    c.gates()
        .iter()
        .flat_map(|g| match g {
            Gate::UniformRotation { angles, .. } => angles.iter().map(|a| a.to_bits()).collect(),
            Gate::GlobalPhase { phase } => vec![phase.to_bits()],
            Gate::Pi { .. } => vec![],
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn exact_text_is_lossless(c in circuit()) {
        let back = parse_text(&emit_text(&c, NumericMode::Exact), Some(c.n_qubits())).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(bits(&back), bits(&c));
    }

    #[test]
    fn display_text_is_quantized(c in circuit()) {
        let back = parse_text(&emit_text(&c, NumericMode::Display), Some(c.n_qubits())).unwrap();
        prop_assert_eq!(back.gates().len(), c.gates().len());
        for (a, b) in back.gates().iter().zip(c.gates()) {
            prop_assert_eq!(a.target(), b.target());
            prop_assert_eq!(a.controls(), b.controls());
            match (a, b) {
                (Gate::UniformRotation { angles: x, .. }, Gate::UniformRotation { angles: y, .. }) => {
                    for (p, q) in x.iter().zip(y) {
                        prop_assert!((p - q).abs() <= 0.5e-4 * std::f64::consts::PI + 1e-12);
                    }
                }
                (Gate::GlobalPhase { phase: p }, Gate::GlobalPhase { phase: q }) => {
                    prop_assert!((p - q).abs() <= 0.5e-4 * std::f64::consts::PI + 1e-12);
                }
                (x, y) => prop_assert_eq!(x, y),
            }
        }
    }

    #[test]
    fn json_is_lossless(c in circuit()) {
        let back = parse_json(&emit_json(&c)).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(bits(&back), bits(&c));
    }

    #[test]
    fn latex_has_one_column_per_subgate(c in circuit()) {
        let tol = 1e-9;
        let doc = emit_latex(&c, tol);
        let columns: usize = doc
            .lines()
            .filter(|l| l.starts_with("  \\lstick{q_{1}}"))
            .map(|l| l.matches(" & ").count() - 1)
            .sum();
        prop_assert_eq!(columns, count_subgates(&c, tol).total);
    }
}
