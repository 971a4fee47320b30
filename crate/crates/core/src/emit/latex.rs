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

//! Standalone LaTeX document drawing a circuit with the Qcircuit macros.
//!
//! Every nonzero subgate gets its own column: the target carries the
//! rotation (with the 1-based control pattern as superscript), a π or a Φ
//! box, and each control shows an open dot for a 0 bit and a filled dot for
//! a 1 bit, linked toward the target. Long circuits wrap after
//! [`COLUMNS_PER_ROW`] columns.

use std::fmt::Write;

use crate::circuit::{Axis, Circuit, Gate};

pub const COLUMNS_PER_ROW: usize = 20;

/// One column of cells, indexed by qubit row (0-based).
type Column = Vec<String>;

fn subgate(n: u32, target: u32, controls: &[u32], pattern: usize, label: String) -> Column {
    let mut cells = vec![r"\qw".to_string(); n as usize];
    cells[target as usize - 1] = format!(r"\gate{{{label}}}");
    let k = controls.len();
    let mut rows: Vec<u32> = controls.to_vec();
    rows.push(target);
    rows.sort_unstable();
    for (j, &c) in controls.iter().enumerate() {
        let on = (pattern >> (k - 1 - j)) & 1 == 1;
        let toward = if c < target {
            rows.iter().copied().find(|&r| r > c).expect("target is below")
        } else {
            rows.iter().rev().copied().find(|&r| r < c).expect("target is above")
        };
        let d = i64::from(toward) - i64::from(c);
        cells[c as usize - 1] = format!(r"\{}{{{d}}}", if on { "ctrl" } else { "ctrlo" });
    }
    cells
}

fn columns(c: &Circuit, tol: f64) -> Vec<Column> {
    let n = c.n_qubits();
    let mut cols = Vec::new();
    for g in c.gates() {
        match g {
            Gate::UniformRotation {
                axis,
                target,
                controls,
                angles,
            } => {
                let name = match axis {
                    Axis::Y => "R_y",
                    Axis::Z => "R_z",
                };
                for (k, a) in angles.iter().enumerate() {
                    if a.abs() > tol {
                        cols.push(subgate(n, *target, controls, k, format!("{name}^{{{}}}", k + 1)));
                    }
                }
            }
            Gate::Pi {
                target,
                controls,
                flags,
            } => {
                for (k, &f) in flags.iter().enumerate() {
                    if f {
                        cols.push(subgate(n, *target, controls, k, r"\pi".into()));
                    }
                }
            }
            Gate::GlobalPhase { phase } => {
                if phase.abs() > tol && n > 0 {
                    cols.push(subgate(n, 1, &[], 0, r"\Phi".into()));
                }
            }
        }
    }
    cols
}

/// Renders the circuit; subgates with `|angle| <= tol` are left out, so the
/// column count equals the nonzero subgate count.
pub fn emit_latex(c: &Circuit, tol: f64) -> String {
    let n = c.n_qubits() as usize;
    let cols = columns(c, tol);
    let mut out = String::from(
        "\\documentclass{article}\n\\input{Qcircuit}\n\\begin{document}\n",
    );
    let _ = writeln!(out, "% {n} qubits, {} subgates, first applied on the left", cols.len());
    if n > 0 {
        let chunks: Vec<&[Column]> = if cols.is_empty() {
            vec![&[]]
        } else {
            cols.chunks(COLUMNS_PER_ROW).collect()
        };
        for chunk in chunks {
            out.push_str("\\[\n\\Qcircuit @C=0.6em @R=0.4em @!R {\n");
            for q in 0..n {
                let _ = write!(out, "  \\lstick{{q_{{{}}}}}", q + 1);
                for col in chunk {
                    let _ = write!(out, " & {}", col[q]);
                }
                out.push_str(" & \\qw \\\\\n");
            }
            out.push_str("}\n\\]\n");
        }
    }
    out.push_str("\\end{document}\n");
    out
}
