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

//! Dense complex matrices, unitarity certification and matrix file formats.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Numerical thresholds shared by the whole pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Largest accepted max-norm of `U†U - I`.
    pub unitary: f64,
    /// Largest imaginary part still treated as zero when detecting real input.
    pub real: f64,
    /// Rotation angles at or below this magnitude count as vanished.
    pub angle_zero: f64,
    /// Largest accepted reconstruction residual of a decomposition.
    pub reconstruct: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitary: 1e-10,
            real: 1e-12,
            angle_zero: 1e-9,
            reconstruct: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn with_unitary(mut self, tol: f64) -> Self {
        self.unitary = tol;
        self
    }

    pub fn with_angle_zero(mut self, tol: f64) -> Self {
        self.angle_zero = tol;
        self
    }

    /// All thresholds must be strictly positive and finite.
    pub fn is_valid(&self) -> bool {
        [self.unitary, self.real, self.angle_zero, self.reconstruct]
            .iter()
            .all(|t| t.is_finite() && *t > 0.0)
    }
}

/// Dense complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat(DMatrix<Complex64>);

impl CMat {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(CMat(m))
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        CMat::new(DMatrix::from_row_slice(rows, cols, &entries))
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        CMat::new(m.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        CMat(DMatrix::identity(dim, dim))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> CMat {
        CMat(self.0.adjoint())
    }

    pub fn mul(&self, rhs: &CMat) -> Result<CMat> {
        if self.cols() != rhs.rows() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(CMat(&self.0 * &rhs.0))
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.0.map(|z| z.re)
    }

    /// Largest `|Im a_ij|` over all entries.
    pub fn max_imag(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
    }
}

/// Max-norm distance `max_ij |a_ij - b_ij|`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(a.0
        .iter()
        .zip(b.0.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm())))
}

/// A square matrix that has been checked to be unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    mat: CMat,
    is_real: bool,
    residual: f64,
}

impl UnitaryOperator {
    /// Measures `max |U†U - I|` and rejects the matrix if it exceeds
    /// `tol.unitary`. Realness is detected with `tol.real`.
    pub fn certify(m: CMat, tol: &Tolerances) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let is_real = m.max_imag() <= tol.real;
        let residual = if is_real {
            real_unitarity_residual(&m.real_part())
        } else {
            complex_unitarity_residual(m.as_matrix())
        };
        if !(residual <= tol.unitary) {
            return Err(Error::NotUnitary {
                residual,
                tolerance: tol.unitary,
            });
        }
        Ok(UnitaryOperator {
            mat: m,
            is_real,
            residual,
        })
    }

    /// Wraps factors produced internally whose residual was already measured.
    pub(crate) fn from_parts(mat: CMat, is_real: bool, residual: f64) -> Self {
        UnitaryOperator {
            mat,
            is_real,
            residual,
        }
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryOperator {
            mat: CMat::identity(dim),
            is_real: true,
            residual: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.residual
    }

    /// Embeds the operator as `diag(U, I)` of dimension `2^n` with
    /// `2^(n-1) < N <= 2^n`. Power-of-two inputs are returned unchanged.
    pub fn pad_to_power_of_two(&self) -> (UnitaryOperator, u32) {
        let dim = self.dim();
        let padded = dim.next_power_of_two();
        let n = padded.trailing_zeros();
        if padded == dim {
            return (self.clone(), n);
        }
        let mut w = DMatrix::<Complex64>::identity(padded, padded);
        w.view_mut((0, 0), (dim, dim)).copy_from(self.mat.as_matrix());
        let op = UnitaryOperator {
            mat: CMat(w),
            is_real: self.is_real,
            residual: self.residual,
        };
        (op, n)
    }

    /// Replaces the matrix with the closest unitary in Frobenius norm
    /// (the polar factor `W V†` of its SVD). Real inputs stay real.
    pub fn project_to_unitary(&self) -> UnitaryOperator {
        let mat = if self.is_real {
            let (w, _, vt) = crate::linalg::svd(&self.mat.real_part()).expect("svd converges");
            let q = w * vt;
            CMat::from_real(&q).expect("polar factor of a finite matrix is finite")
        } else {
            let (w, _, vt) = crate::linalg::svd(self.mat.as_matrix()).expect("svd converges");
            CMat(w * vt)
        };
        let residual = if self.is_real {
            real_unitarity_residual(&mat.real_part())
        } else {
            complex_unitarity_residual(mat.as_matrix())
        };
        UnitaryOperator {
            mat,
            is_real: self.is_real,
            residual,
        }
    }
}

pub fn certify_unitary(m: CMat, tol: &Tolerances) -> Result<UnitaryOperator> {
    UnitaryOperator::certify(m, tol)
}

pub fn pad_to_power_of_two(u: &UnitaryOperator) -> (UnitaryOperator, u32) {
    u.pad_to_power_of_two()
}

pub(crate) fn real_unitarity_residual(m: &DMatrix<f64>) -> f64 {
    let g = m.tr_mul(m);
    let mut worst: f64 = 0.0;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}

pub(crate) fn complex_unitarity_residual(m: &DMatrix<Complex64>) -> f64 {
    let g = m.ad_mul(m);
    let mut worst: f64 = 0.0;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    real: bool,
    entries: Vec<[f64; 2]>,
}

/// Parses the whitespace text format: the dimension `d` on the first line,
/// then `d` rows of `d` entries written as `re` or `re,im`.
pub fn parse_matrix_text(text: &str) -> Result<CMat> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (first, header) = lines.next().ok_or(Error::Syntax {
        line: 1,
        message: "missing dimension line".into(),
    })?;
    let dim: usize = header.parse().map_err(|_| Error::Syntax {
        line: first,
        message: format!("invalid dimension `{header}`"),
    })?;
    if dim == 0 {
        return Err(Error::Syntax {
            line: first,
            message: "dimension must be positive".into(),
        });
    }
    let mut entries = Vec::with_capacity(dim * dim);
    let mut last_line = first;
    for row in 0..dim {
        let (line, content) = lines.next().ok_or(Error::Syntax {
            line: last_line + 1,
            message: format!("expected {dim} rows, found {row}"),
        })?;
        last_line = line;
        let before = entries.len();
        for token in content.split_whitespace() {
            entries.push(parse_entry(token).ok_or_else(|| Error::Syntax {
                line,
                message: format!("invalid entry `{token}`"),
            })?);
        }
        let found = entries.len() - before;
        if found != dim {
            return Err(Error::Syntax {
                line,
                message: format!("expected {dim} entries, found {found}"),
            });
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Syntax {
            line,
            message: "trailing content after matrix rows".into(),
        });
    }
    CMat::from_row_major(dim, dim, entries)
}

fn parse_entry(token: &str) -> Option<Complex64> {
    match token.split_once(',') {
        Some((re, im)) => Some(Complex64::new(re.parse().ok()?, im.parse().ok()?)),
        None => Some(Complex64::new(token.parse().ok()?, 0.0)),
    }
}

pub fn parse_matrix_json(text: &str) -> Result<CMat> {
    let doc: MatrixJson = serde_json::from_str(text)?;
    if doc.real && doc.entries.iter().any(|e| e[1] != 0.0) {
        return Err(Error::Syntax {
            line: 1,
            message: "matrix marked real has nonzero imaginary parts".into(),
        });
    }
    let entries = doc
        .entries
        .iter()
        .map(|e| Complex64::new(e[0], e[1]))
        .collect();
    CMat::from_row_major(doc.dim, doc.dim, entries)
}

/// Reads a matrix file, choosing JSON when the content starts with `{`.
pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<CMat> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        parse_matrix_json(&text)
    } else {
        parse_matrix_text(&text)
    }
}

/// Writes the text format using shortest round-trip float formatting.
pub fn write_matrix_text(m: &CMat) -> String {
    let real = m.max_imag() == 0.0;
    let mut out = format!("{}\n", m.rows());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(' ');
            }
            let z = m.get(i, j);
            if real {
                write!(out, "{}", z.re).unwrap();
            } else {
                write!(out, "{},{}", z.re, z.im).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix_json(m: &CMat) -> String {
    let mut entries = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m.get(i, j);
            entries.push([z.re, z.im]);
        }
    }
    let doc = MatrixJson {
        dim: m.rows(),
        real: m.max_imag() == 0.0,
        entries,
    };
    serde_json::to_string(&doc).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_certifies_exactly() {
        let op = UnitaryOperator::certify(CMat::identity(4), &Tolerances::default()).unwrap();
        assert_eq!(op.unitarity_residual(), 0.0);
        assert!(op.is_real());
    }

    #[test]
    fn swap_certifies_exactly() {
        let m = CMat::from_row_major(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let op = UnitaryOperator::certify(m, &Tolerances::default()).unwrap();
        assert_eq!(op.unitarity_residual(), 0.0);
        assert!(op.is_real());
    }

    #[test]
    fn complex_phase_is_not_real() {
        let m = CMat::from_row_major(1, 1, vec![c(0.0, 1.0)]).unwrap();
        let op = UnitaryOperator::certify(m, &Tolerances::default()).unwrap();
        assert!(!op.is_real());
    }

    #[test]
    fn rejects_non_square_and_non_unitary() {
        let m = CMat::from_row_major(1, 2, vec![c(1., 0.), c(0., 0.)]).unwrap();
        assert!(matches!(
            UnitaryOperator::certify(m, &Tolerances::default()),
            Err(Error::NotSquare { rows: 1, cols: 2 })
        ));
        let m = CMat::from_row_major(1, 1, vec![c(2., 0.)]).unwrap();
        match UnitaryOperator::certify(m, &Tolerances::default()) {
            Err(Error::NotUnitary { residual, .. }) => assert_eq!(residual, 3.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_finite() {
        let m = CMat::from_row_major(1, 1, vec![c(f64::NAN, 0.)]);
        assert!(matches!(m, Err(Error::NonFinite { row: 0, col: 0 })));
    }

    #[test]
    fn padding_keeps_power_of_two_inputs() {
        let op = UnitaryOperator::identity(8);
        let (padded, n) = op.pad_to_power_of_two();
        assert_eq!(n, 3);
        assert_eq!(padded, op);
    }

    #[test]
    fn padding_identity_three_to_four() {
        let op = UnitaryOperator::identity(3);
        let (padded, n) = op.pad_to_power_of_two();
        assert_eq!(n, 2);
        assert_eq!(padded.matrix(), &CMat::identity(4));
    }

    #[test]
    fn padding_preserves_top_left_block() {
        let theta: f64 = 0.3;
        let m = CMat::from_row_major(
            3,
            3,
            vec![
                c(theta.cos(), 0.),
                c(0., theta.sin()),
                c(0., 0.),
                c(0., theta.sin()),
                c(theta.cos(), 0.),
                c(0., 0.),
                c(0., 0.),
                c(0., 0.),
                c(0., 1.),
            ],
        )
        .unwrap();
        let op = UnitaryOperator::certify(m.clone(), &Tolerances::default()).unwrap();
        let (padded, n) = op.pad_to_power_of_two();
        assert_eq!(n, 2);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(padded.matrix().get(i, j), m.get(i, j));
            }
        }
        assert_eq!(padded.matrix().get(3, 3), c(1., 0.));
        assert!(!padded.is_real());
    }

    #[test]
    fn max_abs_diff_examples() {
        let i2 = CMat::identity(2);
        assert_eq!(max_abs_diff(&i2, &i2).unwrap(), 0.0);
        let neg = CMat::new(-i2.as_matrix().clone()).unwrap();
        assert_eq!(max_abs_diff(&i2, &neg).unwrap(), 2.0);
        assert!(matches!(
            max_abs_diff(&i2, &CMat::identity(3)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn text_format_accepts_mixed_entries() {
        let text = "2\n0 1.0e0,0\n1,0 0.0\n";
        let m = parse_matrix_text(text).unwrap();
        assert_eq!(m.get(0, 1), c(1., 0.));
        assert_eq!(m.get(1, 0), c(1., 0.));
        let m = parse_matrix_text("1\n-2.5e-1,9.68245836551854e-1\n").unwrap();
        assert_eq!(m.get(0, 0), c(-0.25, 0.968245836551854));
    }

    #[test]
    fn text_format_errors_carry_line_numbers() {
        match parse_matrix_text("2\n1 0\n0\n") {
            Err(Error::Syntax { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_matrix_text("2\n1 x\n0 1\n") {
            Err(Error::Syntax { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn text_and_json_round_trip() {
        let m = CMat::from_row_major(
            2,
            2,
            vec![c(0.1, -0.2), c(1e-17, 3.0), c(-0.0, 0.5), c(2.0 / 3.0, 0.0)],
        )
        .unwrap();
        assert_eq!(parse_matrix_text(&write_matrix_text(&m)).unwrap(), m);
        assert_eq!(parse_matrix_json(&write_matrix_json(&m)).unwrap(), m);
    }

    #[test]
    fn projection_repairs_rounded_entries() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rounded = (s * 1e4).round() / 1e4;
        let m = CMat::from_real(&DMatrix::from_row_slice(2, 2, &[rounded, rounded, -rounded, rounded])).unwrap();
        let loose = Tolerances::default().with_unitary(1e-3);
        let op = UnitaryOperator::certify(m, &loose).unwrap();
        assert!(op.unitarity_residual() > 1e-6);
        let fixed = op.project_to_unitary();
        assert!(fixed.unitarity_residual() < 1e-15);
        assert!(fixed.is_real());
        assert!((fixed.matrix().get(0, 0).re - s).abs() < 1e-15);
    }
}
