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

//! Gate-level intermediate representation.
//!
//! Qubits are numbered from 1, and qubit 1 is the most significant bit of a
//! basis-state index. A gate with `k` controls carries `2^k` parameters, one
//! per control pattern; the pattern index reads the controls as a binary
//! number with the first listed control most significant.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matrix::{complex_unitarity_residual, CMat, UnitaryOperator};
use crate::{Error, Result};

/// Largest qubit count [`circuit_matrix`] will expand densely.
pub const DENSE_QUBIT_CAP: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Y,
    Z,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    /// Applies `[[cos θ_k, sin θ_k], [-sin θ_k, cos θ_k]]` (axis Y) or
    /// `diag(e^{iθ_k}, e^{-iθ_k})` (axis Z) to the target for control
    /// pattern `k`.
    #[serde(rename = "rotation")]
    UniformRotation {
        axis: Axis,
        target: u32,
        controls: Vec<u32>,
        angles: Vec<f64>,
    },
    /// Applies `diag(1, -1)` to the target for every pattern whose flag is set.
    #[serde(rename = "pi")]
    Pi {
        target: u32,
        controls: Vec<u32>,
        flags: Vec<bool>,
    },
    /// Multiplies the whole state by `e^{iφ}`.
    #[serde(rename = "phase")]
    GlobalPhase { phase: f64 },
}

impl Gate {
    pub fn rotation(axis: Axis, target: u32, controls: Vec<u32>, angles: Vec<f64>) -> Gate {
        Gate::UniformRotation {
            axis,
            target,
            controls,
            angles,
        }
    }

    pub fn target(&self) -> Option<u32> {
        match self {
            Gate::UniformRotation { target, .. } | Gate::Pi { target, .. } => Some(*target),
            Gate::GlobalPhase { .. } => None,
        }
    }

    pub fn controls(&self) -> &[u32] {
        match self {
            Gate::UniformRotation { controls, .. } | Gate::Pi { controls, .. } => controls,
            Gate::GlobalPhase { .. } => &[],
        }
    }

    /// Checks qubit indices and payload length against an `n`-qubit register.
    pub fn validate(&self, n: u32) -> Result<()> {
        let (target, controls, len) = match self {
            Gate::GlobalPhase { phase } => {
                if !phase.is_finite() {
                    return Err(Error::NonFinite { row: 0, col: 0 });
                }
                return Ok(());
            }
            Gate::UniformRotation {
                target,
                controls,
                angles,
                ..
            } => {
                if let Some(k) = angles.iter().position(|a| !a.is_finite()) {
                    return Err(Error::NonFinite { row: 0, col: k });
                }
                (*target, controls, angles.len())
            }
            Gate::Pi {
                target,
                controls,
                flags,
            } => (*target, controls, flags.len()),
        };
        if target == 0 || target > n {
            return Err(Error::BadQubitIndex { qubit: target, n });
        }
        let mut prev = 0;
        for &c in controls {
            if c == 0 || c > n || c == target || c <= prev {
                return Err(Error::BadQubitIndex { qubit: c, n });
            }
            prev = c;
        }
        let expected = 1usize << controls.len();
        if len != expected {
            return Err(Error::BadPayload {
                expected,
                found: len,
            });
        }
        Ok(())
    }

    /// Number of elementary subgates that do not vanish at tolerance `tol`.
    pub fn subgate_count(&self, tol: f64) -> usize {
        match self {
            Gate::UniformRotation { angles, .. } => angles.iter().filter(|a| a.abs() > tol).count(),
            Gate::Pi { flags, .. } => flags.iter().filter(|&&f| f).count(),
            Gate::GlobalPhase { phase } => usize::from(phase.abs() > tol),
        }
    }
}

/// Ordered gate list; `gates[0]` is applied first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit")]
pub struct Circuit {
    n_qubits: u32,
    gates: Vec<Gate>,
}

#[derive(Deserialize)]
struct RawCircuit {
    n_qubits: u32,
    gates: Vec<Gate>,
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = Error;

    fn try_from(raw: RawCircuit) -> Result<Circuit> {
        Circuit::new(raw.n_qubits, raw.gates)
    }
}

impl Circuit {
    pub fn new(n_qubits: u32, gates: Vec<Gate>) -> Result<Circuit> {
        for g in &gates {
            g.validate(n_qubits)?;
        }
        Ok(Circuit { n_qubits, gates })
    }

    pub fn empty(n_qubits: u32) -> Circuit {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgateCounts {
    pub ry: usize,
    pub rz: usize,
    pub pi: usize,
    pub phase: usize,
    pub total: usize,
}

/// Counts nonvanishing subgates: one per rotation angle above `tol`, one per
/// set Π flag and one for a nonzero global phase.
pub fn count_subgates(c: &Circuit, tol: f64) -> SubgateCounts {
    let mut counts = SubgateCounts::default();
    for g in c.gates() {
        let k = g.subgate_count(tol);
        match g {
            Gate::UniformRotation { axis: Axis::Y, .. } => counts.ry += k,
            Gate::UniformRotation { axis: Axis::Z, .. } => counts.rz += k,
            Gate::Pi { .. } => counts.pi += k,
            Gate::GlobalPhase { .. } => counts.phase += k,
        }
    }
    counts.total = counts.ry + counts.rz + counts.pi + counts.phase;
    counts
}

/// Bit bookkeeping for one gate in an `n`-qubit register.
struct Layout {
    target_bit: u32,
    control_masks: Vec<usize>,
    half: usize,
}

impl Layout {
    fn new(n: u32, target: u32, controls: &[u32]) -> Layout {
        Layout {
            target_bit: n - target,
            control_masks: controls.iter().map(|&c| 1usize << (n - c)).collect(),
            half: 1usize << (n - 1),
        }
    }

    /// The `j`-th index whose target bit is 0, and its partner.
    #[inline]
    fn pair(&self, j: usize) -> (usize, usize) {
        let tb = self.target_bit;
        let low = j & ((1usize << tb) - 1);
        let r0 = ((j >> tb) << (tb + 1)) | low;
        (r0, r0 | (1usize << tb))
    }

    #[inline]
    fn pattern(&self, r: usize) -> usize {
        self.control_masks
            .iter()
            .fold(0, |k, &m| (k << 1) | usize::from(r & m != 0))
    }
}

fn apply_gate(g: &Gate, n: u32, psi: &mut [Complex64]) {
    match g {
        Gate::GlobalPhase { phase } => {
            let w = Complex64::from_polar(1.0, *phase);
            psi.iter_mut().for_each(|a| *a *= w);
        }
        Gate::UniformRotation {
            axis,
            target,
            controls,
            angles,
        } => {
            let layout = Layout::new(n, *target, controls);
            match axis {
                Axis::Y => {
                    let trig: Vec<(f64, f64)> = angles.iter().map(|a| a.sin_cos()).collect();
                    for j in 0..layout.half {
                        let (r0, r1) = layout.pair(j);
                        let (s, c) = trig[layout.pattern(r0)];
                        let (a0, a1) = (psi[r0], psi[r1]);
                        psi[r0] = a0 * c + a1 * s;
                        psi[r1] = a1 * c - a0 * s;
                    }
                }
                Axis::Z => {
                    let w: Vec<Complex64> = angles.iter().map(|a| Complex64::from_polar(1.0, *a)).collect();
                    for j in 0..layout.half {
                        let (r0, r1) = layout.pair(j);
                        let e = w[layout.pattern(r0)];
                        psi[r0] *= e;
                        psi[r1] *= e.conj();
                    }
                }
            }
        }
        Gate::Pi {
            target,
            controls,
            flags,
        } => {
            let layout = Layout::new(n, *target, controls);
            for j in 0..layout.half {
                let (r0, r1) = layout.pair(j);
                if flags[layout.pattern(r0)] {
                    psi[r1] = -psi[r1];
                }
            }
        }
    }
}

/// Full `2^n x 2^n` matrix of a single gate.
pub fn gate_matrix(g: &Gate, n: u32) -> Result<UnitaryOperator> {
    g.validate(n)?;
    if n > DENSE_QUBIT_CAP {
        return Err(Error::TooLarge {
            n,
            cap: DENSE_QUBIT_CAP,
        });
    }
    let dim = 1usize << n;
    let mut m = nalgebra::DMatrix::<Complex64>::identity(dim, dim);
    let one = Complex64::new(1.0, 0.0);
    match g {
        Gate::GlobalPhase { phase } => {
            let w = Complex64::from_polar(1.0, *phase);
            for i in 0..dim {
                m[(i, i)] = w;
            }
        }
        Gate::UniformRotation {
            axis,
            target,
            controls,
            angles,
        } => {
            let layout = Layout::new(n, *target, controls);
            for j in 0..layout.half {
                let (r0, r1) = layout.pair(j);
                let a = angles[layout.pattern(r0)];
                match axis {
                    Axis::Y => {
                        let (s, c) = a.sin_cos();
                        m[(r0, r0)] = c.into();
                        m[(r0, r1)] = s.into();
                        m[(r1, r0)] = (-s).into();
                        m[(r1, r1)] = c.into();
                    }
                    Axis::Z => {
                        m[(r0, r0)] = Complex64::from_polar(1.0, a);
                        m[(r1, r1)] = Complex64::from_polar(1.0, -a);
                    }
                }
            }
        }
        Gate::Pi {
            target,
            controls,
            flags,
        } => {
            let layout = Layout::new(n, *target, controls);
            for j in 0..layout.half {
                let (r0, r1) = layout.pair(j);
                if flags[layout.pattern(r0)] {
                    m[(r1, r1)] = -one;
                }
            }
        }
    }
    Ok(wrap_operator(m))
}

fn wrap_operator(m: nalgebra::DMatrix<Complex64>) -> UnitaryOperator {
    let residual = complex_unitarity_residual(&m);
    let mat = CMat::new(m).expect("gate entries are finite");
    let is_real = mat.max_imag() == 0.0;
    UnitaryOperator::from_parts(mat, is_real, residual)
}

/// Dense matrix of the whole circuit (last-applied gate leftmost).
pub fn circuit_matrix(c: &Circuit) -> Result<UnitaryOperator> {
    let n = c.n_qubits();
    if n > DENSE_QUBIT_CAP {
        return Err(Error::TooLarge {
            n,
            cap: DENSE_QUBIT_CAP,
        });
    }
    let dim = c.dim();
    let columns: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|j| {
            let mut psi = vec![Complex64::new(0.0, 0.0); dim];
            psi[j] = Complex64::new(1.0, 0.0);
            for g in c.gates() {
                apply_gate(g, n, &mut psi);
            }
            psi
        })
        .collect();
    let m = nalgebra::DMatrix::from_fn(dim, dim, |i, j| columns[j][i]);
    Ok(wrap_operator(m))
}

/// Applies the circuit to a state vector without building any matrix.
pub fn apply_to_state(c: &Circuit, psi: &[Complex64]) -> Result<Vec<Complex64>> {
    if psi.len() != c.dim() {
        return Err(Error::LengthMismatch {
            expected: c.dim(),
            found: psi.len(),
        });
    }
    let mut out = psi.to_vec();
    for g in c.gates() {
        apply_gate(g, c.n_qubits(), &mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn uncontrolled_ry_quarter_turn() {
        let g = Gate::rotation(Axis::Y, 1, vec![], vec![FRAC_PI_2]);
        let m = gate_matrix(&g, 1).unwrap();
        let expected = [[0.0, 1.0], [-1.0, 0.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m.matrix().get(i, j) - c(expected[i][j], 0.0)).norm() < 1e-16);
            }
        }
        assert!(m.is_real());
    }

    #[test]
    fn controlled_pi_flags() {
        let g = Gate::Pi {
            target: 2,
            controls: vec![1],
            flags: vec![false, true],
        };
        let m = gate_matrix(&g, 2).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| m.matrix().get(i, i).re).collect();
        assert_eq!(diag, vec![1.0, 1.0, 1.0, -1.0]);
        assert!(m.is_real());
    }

    #[test]
    fn doubly_controlled_rz_diagonal() {
        let angles = vec![0.1, -0.7, 1.3, 2.9];
        let g = Gate::rotation(Axis::Z, 3, vec![1, 2], angles.clone());
        let m = gate_matrix(&g, 3).unwrap();
        for (k, a) in angles.iter().enumerate() {
            let e0 = m.matrix().get(2 * k, 2 * k);
            let e1 = m.matrix().get(2 * k + 1, 2 * k + 1);
            assert!((e0 - Complex64::from_polar(1.0, *a)).norm() < 1e-16);
            assert!((e1 - Complex64::from_polar(1.0, -*a)).norm() < 1e-16);
        }
        let off: f64 = (0..8)
            .flat_map(|i| (0..8).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| m.matrix().get(i, j).norm())
            .sum();
        assert_eq!(off, 0.0);
    }

    #[test]
    fn control_on_lower_qubit() {
        // Target 1 controlled by qubit 2: pattern 1 acts on indices {1, 3}.
        let g = Gate::rotation(Axis::Y, 1, vec![2], vec![0.0, FRAC_PI_2]);
        let m = gate_matrix(&g, 2).unwrap();
        assert_eq!(m.matrix().get(0, 0), c(1.0, 0.0));
        assert!((m.matrix().get(1, 3) - c(1.0, 0.0)).norm() < 1e-16);
        assert!((m.matrix().get(3, 1) - c(-1.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn validation_errors() {
        let bad = Gate::rotation(Axis::Y, 4, vec![], vec![0.0]);
        assert!(matches!(bad.validate(3), Err(Error::BadQubitIndex { qubit: 4, n: 3 })));
        let bad = Gate::rotation(Axis::Y, 2, vec![2], vec![0.0, 0.0]);
        assert!(matches!(bad.validate(3), Err(Error::BadQubitIndex { qubit: 2, .. })));
        let bad = Gate::rotation(Axis::Y, 1, vec![3, 2], vec![0.0; 4]);
        assert!(bad.validate(3).is_err());
        let bad = Gate::Pi {
            target: 1,
            controls: vec![2],
            flags: vec![true],
        };
        assert!(matches!(bad.validate(2), Err(Error::BadPayload { expected: 2, found: 1 })));
        assert!(matches!(gate_matrix(&bad, 2), Err(Error::BadPayload { .. })));
    }

    #[test]
    fn empty_circuit_is_identity() {
        let m = circuit_matrix(&Circuit::empty(3)).unwrap();
        assert_eq!(m.matrix(), &CMat::identity(8));
        let psi: Vec<Complex64> = (0..8).map(|i| c(i as f64, -1.0)).collect();
        assert_eq!(apply_to_state(&Circuit::empty(3), &psi).unwrap(), psi);
    }

    #[test]
    fn global_phase_pi_negates() {
        let circ = Circuit::new(2, vec![Gate::GlobalPhase { phase: PI }]).unwrap();
        let mut e = vec![c(0.0, 0.0); 4];
        e[2] = c(1.0, 0.0);
        let out = apply_to_state(&circ, &e).unwrap();
        assert!((out[2] + c(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            apply_to_state(&circ, &e[..3]),
            Err(Error::LengthMismatch { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn dense_cap_is_enforced() {
        assert!(matches!(
            circuit_matrix(&Circuit::empty(11)),
            Err(Error::TooLarge { n: 11, cap: 10 })
        ));
    }

    #[test]
    fn counts_skip_vanished_subgates() {
        let circ = Circuit::new(
            2,
            vec![
                Gate::GlobalPhase { phase: 1e-12 },
                Gate::rotation(Axis::Y, 2, vec![1], vec![0.0, 0.4]),
                Gate::rotation(Axis::Z, 1, vec![], vec![0.2]),
                Gate::Pi {
                    target: 2,
                    controls: vec![1],
                    flags: vec![true, true],
                },
            ],
        )
        .unwrap();
        let k = count_subgates(&circ, 1e-9);
        assert_eq!(
            k,
            SubgateCounts {
                ry: 1,
                rz: 1,
                pi: 2,
                phase: 0,
                total: 4
            }
        );
        assert_eq!(count_subgates(&Circuit::empty(2), 1e-9).total, 0);
    }

    fn arb_gate(n: u32) -> impl Strategy<Value = Gate> {
        let qubits = proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), 1..=n as usize);
        (qubits, 0usize..4, any::<u64>()).prop_flat_map(move |(qs, kind, pick)| {
            let t = qs[(pick as usize) % qs.len()];
            let controls: Vec<u32> = qs.iter().copied().filter(|&q| q != t).collect();
            let len = 1usize << controls.len();
            match kind {
                0 | 1 => {
                    let axis = if kind == 0 { Axis::Y } else { Axis::Z };
                    proptest::collection::vec(-PI..PI, len)
                        .prop_map(move |angles| Gate::rotation(axis, t, controls.clone(), angles))
                        .boxed()
                }
                2 => proptest::collection::vec(any::<bool>(), len)
                    .prop_map(move |flags| Gate::Pi {
                        target: t,
                        controls: controls.clone(),
                        flags,
                    })
                    .boxed(),
                _ => (-PI..PI).prop_map(|phase| Gate::GlobalPhase { phase }).boxed(),
            }
        })
    }

    fn arb_state(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
            .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
    }

    proptest! {
        #[test]
        fn gate_matrices_are_unitary_and_match_state_application(
            (n, g, psi) in (1u32..=6).prop_flat_map(|n| (Just(n), arb_gate(n), arb_state(1 << n)))
        ) {
            let m = gate_matrix(&g, n).unwrap();
            prop_assert!(m.unitarity_residual() <= 1e-12);
            if matches!(g, Gate::Pi { .. } | Gate::UniformRotation { axis: Axis::Y, .. }) {
                prop_assert!(m.is_real());
            }
            let circ = Circuit::new(n, vec![g]).unwrap();
            let fast = apply_to_state(&circ, &psi).unwrap();
            let dense = m.matrix().as_matrix() * nalgebra::DVector::from_vec(psi);
            for (a, b) in fast.iter().zip(dense.iter()) {
                prop_assert!((a - b).norm() <= 1e-12);
            }
        }
    }
}
