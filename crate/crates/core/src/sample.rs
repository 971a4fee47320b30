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

//! Haar-random unitary and orthogonal operators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::{complex_unitarity_residual, real_unitarity_residual, CMat, UnitaryOperator};

/// Draws a Haar-distributed unitary of the given dimension.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryOperator {
    let g = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    // Fix the phase ambiguity of QR so the distribution is exactly Haar.
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    let residual = complex_unitarity_residual(&q);
    UnitaryOperator::from_parts(CMat::new(q).expect("finite"), false, residual)
}

/// Draws a Haar-distributed real orthogonal matrix.
pub fn haar_orthogonal<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryOperator {
    let g = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    let residual = real_unitarity_residual(&q);
    UnitaryOperator::from_parts(CMat::from_real(&q).expect("finite"), true, residual)
}

/// Uniform phases in `(-pi, pi]`.
pub fn random_phases<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    (0..len)
        .map(|_| std::f64::consts::PI * (1.0 - 2.0 * rng.random::<f64>()))
        .collect()
}
