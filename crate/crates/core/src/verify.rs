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

//! Checks a circuit against the operator it is meant to implement.

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{apply_to_state, circuit_matrix, DENSE_QUBIT_CAP};
use crate::matrix::max_abs_diff;
use crate::{Circuit, Error, Result, UnitaryOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// The full circuit matrix was compared entry by entry.
    Dense,
    /// Columns for this many random basis states were compared.
    Sampled { states: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    /// Largest entry-wise deviation found.
    pub residual: f64,
    pub method: Method,
}

/// Dense comparison up to [`DENSE_QUBIT_CAP`] qubits; beyond that the
/// circuit is applied to `samples` distinct basis states picked with a
/// seeded generator and each output is compared with the matching column.
pub fn verify_circuit(c: &Circuit, op: &UnitaryOperator, samples: usize, seed: u64) -> Result<Verification> {
    if op.dim() != c.dim() {
        return Err(Error::ShapeMismatch {
            left: (c.dim(), c.dim()),
            right: (op.dim(), op.dim()),
        });
    }
    if c.n_qubits() <= DENSE_QUBIT_CAP {
        let m = circuit_matrix(c)?;
        return Ok(Verification {
            residual: max_abs_diff(m.matrix(), op.matrix())?,
            method: Method::Dense,
        });
    }
    sampled(c, op, samples, seed)
}

/// Matrix-free check on random basis states regardless of size.
pub fn sampled(c: &Circuit, op: &UnitaryOperator, samples: usize, seed: u64) -> Result<Verification> {
    let dim = c.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = sample(&mut rng, dim, samples.min(dim)).into_vec();
    let m = op.matrix().as_matrix();
    let residual = picks
        .par_iter()
        .map(|&k| {
            let mut psi = vec![Complex64::new(0.0, 0.0); dim];
            psi[k] = Complex64::new(1.0, 0.0);
            let out = apply_to_state(c, &psi)?;
            Ok(out
                .iter()
                .zip(m.column(k).iter())
                .fold(0.0f64, |acc, (a, b)| acc.max((a - b).norm())))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(Verification {
        residual,
        method: Method::Sampled { states: picks.len() },
    })
}
