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

//! Single-level cosine-sine decomposition.
//!
//! A `2m x 2m` unitary is factored as
//!
//! ```text
//! U = diag(u, v) · [[C, S], [-S, C]] · diag(x, y)
//! ```
//!
//! with `C = diag(cos θ)`, `S = diag(sin θ)`, every `θ_l ∈ [0, π/2]` and the
//! angles sorted ascending. The factors come from an SVD of the top-left
//! block (`u`, `C`, `x`), a column-pivoted-by-norm QR of `-U21 x†`
//! (`v`, `S`), and the combination `y = S u† U12 + C v† U22`, which needs no
//! division by small sines or cosines.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::matrix::{complex_unitarity_residual, real_unitarity_residual, CMat, UnitaryOperator};
use crate::{linalg, Error, Result, Tolerances};

/// Scalar types the kernel runs on: `f64` for the real pipeline and
/// `Complex64` otherwise.
pub(crate) use crate::linalg::Scalar as Field;

/// Result of [`csd_split`].
#[derive(Debug, Clone)]
pub struct CsdFactors {
    pub u: UnitaryOperator,
    pub v: UnitaryOperator,
    pub x: UnitaryOperator,
    pub y: UnitaryOperator,
    /// Angles in radians, ascending, each in `[0, π/2]`.
    pub theta: Vec<f64>,
}

/// Raw kernel output on plain matrices.
#[derive(Debug, Clone)]
pub(crate) struct Split<T> {
    pub u: DMatrix<T>,
    pub v: DMatrix<T>,
    pub x: DMatrix<T>,
    pub y: DMatrix<T>,
    pub theta: Vec<f64>,
}

/// Splits a certified unitary of even dimension. Real operators are
/// decomposed in real arithmetic, so their factors have exactly zero
/// imaginary parts.
pub fn csd_split(op: &UnitaryOperator, tol: &Tolerances) -> Result<CsdFactors> {
    if op.is_real() {
        let s = split(&op.matrix().real_part(), tol.reconstruct)?;
        let wrap = |m: DMatrix<f64>| {
            let residual = real_unitarity_residual(&m);
            UnitaryOperator::from_parts(CMat::from_real(&m).expect("finite"), true, residual)
        };
        Ok(CsdFactors {
            u: wrap(s.u),
            v: wrap(s.v),
            x: wrap(s.x),
            y: wrap(s.y),
            theta: s.theta,
        })
    } else {
        let s = split(op.matrix().as_matrix(), tol.reconstruct)?;
        let wrap = |m: DMatrix<Complex64>| {
            let residual = complex_unitarity_residual(&m);
            UnitaryOperator::from_parts(CMat::new(m).expect("finite"), false, residual)
        };
        Ok(CsdFactors {
            u: wrap(s.u),
            v: wrap(s.v),
            x: wrap(s.x),
            y: wrap(s.y),
            theta: s.theta,
        })
    }
}

/// The block rotation `[[C, S], [-S, C]]` for the given angles.
pub fn middle_matrix(theta: &[f64]) -> UnitaryOperator {
    let m = theta.len();
    let mut a = DMatrix::<f64>::zeros(2 * m, 2 * m);
    for (l, t) in theta.iter().enumerate() {
        let (s, c) = t.sin_cos();
        a[(l, l)] = c;
        a[(l, l + m)] = s;
        a[(l + m, l)] = -s;
        a[(l + m, l + m)] = c;
    }
    let residual = real_unitarity_residual(&a);
    UnitaryOperator::from_parts(CMat::from_real(&a).expect("finite"), true, residual)
}

fn phase_of<T: Field>(z: T) -> T {
    let r = z.modulus();
    if r > 0.0 {
        z.unscale(r)
    } else {
        T::one()
    }
}

const CLUSTER_TOL: f64 = 1e-12;

/// Change of basis `W` taking the orthonormal columns `cols` of `basis` to a
/// canonical basis of their span: greedy Gram-Schmidt over the projected
/// unit vectors, largest remaining projection first and lowest index on
/// ties, ordered by pivot row. Each new column has a real positive entry at
/// its pivot row, so identity-like spans come out as the identity.
fn canonical_basis<T: Field>(basis: &DMatrix<T>, cols: &[usize]) -> DMatrix<T> {
    let h = basis.nrows();
    let k = cols.len();
    let sub = basis.select_columns(cols);
    // r[i] is the residual of the coordinates of e_i in the span.
    let mut r: Vec<nalgebra::DVector<T>> = (0..h)
        .map(|i| sub.row(i).adjoint())
        .collect();
    let mut picked: Vec<(usize, nalgebra::DVector<T>)> = Vec::with_capacity(k);
    let mut used = vec![false; h];
    for _ in 0..k {
        let mut best = usize::MAX;
        let mut best_norm = -1.0;
        for i in 0..h {
            if used[i] {
                continue;
            }
            let nrm = r[i].norm();
            if nrm > best_norm + CLUSTER_TOL {
                best = i;
                best_norm = nrm;
            }
        }
        used[best] = true;
        let z = r[best].unscale(best_norm);
        for (i, ri) in r.iter_mut().enumerate() {
            if !used[i] {
                let c = z.dotc(ri);
                ri.axpy(-c, &z, T::one());
            }
        }
        picked.push((best, z));
    }
    picked.sort_by_key(|(i, _)| *i);
    let mut w = DMatrix::<T>::zeros(k, k);
    for (j, (_, z)) in picked.iter().enumerate() {
        w.set_column(j, z);
    }
    w
}

pub(crate) fn split<T: Field>(m: &DMatrix<T>, tol: f64) -> Result<Split<T>> {
    let dim = m.nrows();
    if !dim.is_multiple_of(2) || dim == 0 {
        return Err(Error::OddDimension(dim));
    }
    let h = dim / 2;
    let a11 = m.view((0, 0), (h, h)).clone_owned();
    let a12 = m.view((0, h), (h, h)).clone_owned();
    let a21 = m.view((h, 0), (h, h)).clone_owned();
    let a22 = m.view((h, h), (h, h)).clone_owned();

    // Top-left block: U11 = u C x.
    let (mut u, sv, mut x) = linalg::svd(&a11)?;
    let mut theta: Vec<f64> = sv.iter().map(|c| c.clamp(0.0, 1.0).acos()).collect();

    // Cosines near one do not resolve their small sines, so the leading
    // subspace is re-diagonalised against the bottom-left block, where those
    // sines are the singular values.
    let k = sv.iter().filter(|&&c| c > FRAC_1_SQRT_2).count();
    if k > 0 {
        let lead: Vec<usize> = (0..k).collect();
        let xl = x.select_rows(&lead);
        let hl = -(&a21 * xl.adjoint());
        let (_, sig, qh) = linalg::svd(&hl)?;
        let mut ord: Vec<usize> = (0..k).collect();
        ord.sort_by(|&a, &b| sig[a].total_cmp(&sig[b]).then(a.cmp(&b)));
        let qh = qh.select_rows(&ord);
        let xl = &qh * xl;
        let ul = u.select_columns(&lead) * qh.adjoint();
        for (l, &o) in ord.iter().enumerate() {
            x.set_row(l, &xl.row(l));
            u.set_column(l, &ul.column(l));
            theta[l] = sig[o].clamp(0.0, 1.0).asin();
        }
    }
    if theta.windows(2).any(|w| w[0] > w[1]) {
        let mut idx: Vec<usize> = (0..h).collect();
        idx.sort_by(|&a, &b| theta[a].total_cmp(&theta[b]).then(a.cmp(&b)));
        u = u.select_columns(&idx);
        x = x.select_rows(&idx);
        theta = idx.iter().map(|&i| theta[i]).collect();
    }

    // Equal angles leave a unitary freedom u -> uW, x -> W†x. Fix it per
    // cluster of (numerically) equal angles.
    let mut start = 0;
    while start < h {
        let mut end = start + 1;
        while end < h && theta[end] - theta[start] <= CLUSTER_TOL {
            end += 1;
        }
        let cols: Vec<usize> = (start..end).collect();
        let w = canonical_basis(&u, &cols);
        let uc = u.select_columns(&cols) * &w;
        let xc = w.adjoint() * x.select_rows(&cols);
        for (j, &l) in cols.iter().enumerate() {
            u.set_column(l, &uc.column(j));
            x.set_row(l, &xc.row(j));
        }
        start = end;
    }

    // Bottom-left block: -U21 x† = v S. Its columns are mutually orthogonal
    // with norms sin θ_l; factoring them largest first keeps the arbitrary
    // directions of vanishing columns from leaking into larger ones.
    let hmat = -(&a21 * x.adjoint());
    let rev: Vec<usize> = (0..h).rev().collect();
    let qr = hmat.select_columns(&rev).qr();
    let q = qr.q();
    let r = qr.r();
    let mut v = DMatrix::<T>::zeros(h, h);
    for j in 0..h {
        let ph = phase_of(r[(j, j)]);
        v.set_column(h - 1 - j, &q.column(j).map(|e| e * ph));
    }

    // Columns with vanishing sine are an arbitrary basis of the complement;
    // y is derived below, so v can be re-based freely there.
    let free: Vec<usize> = (0..h).filter(|&l| theta[l] <= CLUSTER_TOL).collect();
    if !free.is_empty() {
        let w = canonical_basis(&v, &free);
        let vc = v.select_columns(&free) * &w;
        for (j, &l) in free.iter().enumerate() {
            v.set_column(l, &vc.column(j));
        }
    }

    let (c, s): (Vec<f64>, Vec<f64>) = theta.iter().map(|t| (t.cos(), t.sin())).unzip();

    // U12 = u S y and U22 = v C y, so y = S u† U12 + C v† U22.
    let p = u.ad_mul(&a12);
    let q = v.ad_mul(&a22);
    let mut y = DMatrix::<T>::zeros(h, h);
    for l in 0..h {
        for j in 0..h {
            y[(l, j)] = p[(l, j)].scale(s[l]) + q[(l, j)].scale(c[l]);
        }
    }

    let residual = split_residual(&a11, &a12, &a21, &a22, &u, &v, &x, &y, &c, &s);
    if !(residual <= tol) {
        return Err(Error::NumericalFailure {
            residual,
            tolerance: tol,
        });
    }
    Ok(Split { u, v, x, y, theta })
}

#[allow(clippy::too_many_arguments)]
fn split_residual<T: Field>(
    a11: &DMatrix<T>,
    a12: &DMatrix<T>,
    a21: &DMatrix<T>,
    a22: &DMatrix<T>,
    u: &DMatrix<T>,
    v: &DMatrix<T>,
    x: &DMatrix<T>,
    y: &DMatrix<T>,
    c: &[f64],
    s: &[f64],
) -> f64 {
    let scale_cols = |m: &DMatrix<T>, f: &[f64], sign: f64| {
        let mut out = m.clone();
        for (l, mut col) in out.column_iter_mut().enumerate() {
            col.iter_mut().for_each(|e| *e = e.scale(sign * f[l]));
        }
        out
    };
    let max_diff = |a: &DMatrix<T>, b: &DMatrix<T>| {
        a.iter()
            .zip(b.iter())
            .fold(0.0f64, |acc, (p, q)| acc.max((*p - *q).modulus()))
    };
    let mut worst = max_diff(&(scale_cols(u, c, 1.0) * x), a11);
    worst = worst.max(max_diff(&(scale_cols(u, s, 1.0) * y), a12));
    worst = worst.max(max_diff(&(scale_cols(v, s, -1.0) * x), a21));
    worst = worst.max(max_diff(&(scale_cols(v, c, 1.0) * y), a22));
    let eye = DMatrix::<T>::identity(y.nrows(), y.nrows());
    worst.max(max_diff(&(y * y.adjoint()), &eye))
}
