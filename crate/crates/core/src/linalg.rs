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


//! Dense factorizations backed by `faer`, on `nalgebra` storage.
//!
//! Runs single-threaded so that results do not depend on the thread pool.
//! The SVD uses bidiagonal QR iteration throughout: the divide-and-conquer
//! path mis-deflates inputs with many exactly repeated singular values,
//! which walk operators produce routinely.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::svd::{self as fsvd, ComputeSvdVectors, SvdParams};
use faer::diag::Diag;
use faer::{Auto, Mat, Par};
use nalgebra::DMatrix;

use crate::{Error, Result};

/// Scalars understood by both libraries (`f64` and `Complex64`).
pub(crate) trait Scalar:
    nalgebra::ComplexField<RealField = f64> + faer::traits::ComplexField + Copy
{
}

impl<T> Scalar for T where
    T: nalgebra::ComplexField<RealField = f64> + faer::traits::ComplexField + Copy
{
}

fn to_faer<T: Scalar>(m: &DMatrix<T>) -> Mat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer<T: Scalar>(m: faer::MatRef<'_, T>) -> DMatrix<T> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin SVD `m = w diag(s) vt` with `s` non-increasing.
pub(crate) fn svd<T: Scalar>(m: &DMatrix<T>) -> Result<(DMatrix<T>, Vec<f64>, DMatrix<T>)> {
    let (r, c) = m.shape();
    let k = r.min(c);
    let a = to_faer(m);
    let mut u = Mat::<T>::zeros(r, k);
    let mut v = Mat::<T>::zeros(c, k);
    let mut s = Diag::<T>::zeros(k);
    let par = Par::Seq;
    let thin = ComputeSvdVectors::Thin;
    let mut params: SvdParams = Auto::<T>::auto();
    params.recursion_threshold = usize::MAX;
    let scratch = fsvd::svd_scratch::<T>(r, c, thin, thin, par, params.into());
    fsvd::svd(
        a.as_ref(),
        s.as_mut(),
        Some(u.as_mut()),
        Some(v.as_mut()),
        par,
        MemStack::new(&mut MemBuffer::new(scratch)),
        params.into(),
    )
    .map_err(|_| Error::NumericalFailure {
        residual: f64::NAN,
        tolerance: 0.0,
    })?;
    let sv: Vec<f64> = s.column_vector().iter().map(|z| nalgebra::ComplexField::modulus(*z)).collect();
    let w = from_faer(u.as_ref());
    let vt = from_faer(v.as_ref()).adjoint();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]).then(a.cmp(&b)));
    Ok((
        w.select_columns(&order),
        order.iter().map(|&i| sv[i]).collect(),
        vt.select_rows(&order),
    ))
}
