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

//! Recursive cosine-sine decomposition and the mapping of its factors onto
//! gates.
//!
//! Applying [`csd_split`](crate::csd::csd_split) recursively to a `2^n`
//! unitary yields
//!
//! ```text
//! U = U_1 A_1 U_2 A_2 ... U_{2^n-1} A_{2^n-1} U_{2^n}
//! ```
//!
//! where every `U_p` is diagonal and `A_p` is a block rotation acting on
//! qubit `i(p) = n - tz(p)` controlled by all other qubits. The complex
//! pipeline moves the diagonals into uniformly-controlled `R_z` layers; the
//! real pipeline folds the `±1` diagonals into the rotation angles and emits
//! a cascade of controlled Π gates for the last one.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Axis, Circuit, Gate};
use crate::csd::{split, Field};
use crate::{Error, Result, Tolerances, UnitaryOperator};

/// Phases `α_k` of a diagonal unitary `diag(e^{iα_k})`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafDiagonal {
    pub phases: Vec<f64>,
}

/// A diagonal matrix with entries exactly `±1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignDiagonal {
    signs: Vec<i8>,
}

impl SignDiagonal {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if !signs.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(signs.len()));
        }
        if let Some(k) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::NotRealDecomposition {
                position: k,
                phase: f64::from(signs[k]),
            });
        }
        Ok(SignDiagonal { signs })
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn n_qubits(&self) -> u32 {
        self.signs.len().trailing_zeros()
    }
}

/// One block-rotation factor `A_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationLayer {
    pub position: usize,
    pub level: u32,
    /// Angle for each control pattern over the non-target qubits in
    /// ascending order.
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionSequence {
    n: u32,
    layers: Vec<RotationLayer>,
    diagonals: Vec<LeafDiagonal>,
}

impl DecompositionSequence {
    pub fn n_qubits(&self) -> u32 {
        self.n
    }

    /// `A_1 .. A_{2^n - 1}` in matrix order.
    pub fn factors(&self) -> &[RotationLayer] {
        &self.layers
    }

    /// `U_1 .. U_{2^n}` in matrix order.
    pub fn diagonals(&self) -> &[LeafDiagonal] {
        &self.diagonals
    }

    /// The rightmost diagonal `U_{2^n}`.
    pub fn leaf_diagonal(&self) -> &LeafDiagonal {
        self.diagonals.last().expect("at least one diagonal")
    }
}

/// Recursion level owning position `p`: `n` minus the trailing zero count.
pub fn level_of_position(p: usize, n: u32) -> Result<u32> {
    let max = (1usize << n) - 1;
    if p == 0 || p > max {
        return Err(Error::OutOfRange { p, n, max });
    }
    Ok(n - p.trailing_zeros())
}

struct Subtree<T> {
    layers: Vec<(u32, Vec<f64>)>,
    diags: Vec<Vec<T>>,
}

fn descend<T: Field>(blocks: Vec<DMatrix<T>>, level: u32, tol: f64) -> Result<Subtree<T>> {
    use rayon::prelude::*;

    if blocks[0].nrows() == 1 {
        return Ok(Subtree {
            layers: Vec::new(),
            diags: vec![blocks.iter().map(|b| b[(0, 0)]).collect()],
        });
    }
    let splits = blocks
        .par_iter()
        .map(|b| split(b, tol))
        .collect::<Result<Vec<_>>>()?;
    drop(blocks);
    let mut left = Vec::with_capacity(2 * splits.len());
    let mut right = Vec::with_capacity(2 * splits.len());
    let mut theta = Vec::new();
    for s in splits {
        left.push(s.u);
        left.push(s.v);
        right.push(s.x);
        right.push(s.y);
        theta.extend(s.theta);
    }
    let (l, r) = rayon::join(
        || descend(left, level + 1, tol),
        || descend(right, level + 1, tol),
    );
    let (mut l, r) = (l?, r?);
    l.layers.push((level, theta));
    l.layers.extend(r.layers);
    l.diags.extend(r.diags);
    Ok(l)
}

fn assemble<T: Field>(n: u32, m: DMatrix<T>, tol: f64, phase: impl Fn(T) -> f64) -> Result<DecompositionSequence> {
    let tree = descend(vec![m], 1, tol)?;
    let layers = tree
        .layers
        .into_iter()
        .enumerate()
        .map(|(k, (level, theta))| RotationLayer {
            position: k + 1,
            level,
            theta,
        })
        .collect();
    let diagonals = tree
        .diags
        .into_iter()
        .map(|d| LeafDiagonal {
            phases: d.into_iter().map(&phase).collect(),
        })
        .collect();
    Ok(DecompositionSequence { n, layers, diagonals })
}

/// Decomposes a `2^n` unitary into `2^n - 1` block rotations separated by
/// `2^n` diagonals. Real operators are processed in real arithmetic and
/// their diagonal phases are exactly `0` or `π`.
pub fn recursive_csd(op: &UnitaryOperator, tol: &Tolerances) -> Result<DecompositionSequence> {
    let dim = op.dim();
    if !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    let n = dim.trailing_zeros();
    if op.is_real() {
        assemble(n, op.matrix().real_part(), tol.reconstruct, |z: f64| {
            if z.is_sign_negative() {
                PI
            } else {
                0.0
            }
        })
    } else {
        assemble(n, op.matrix().as_matrix().clone(), tol.reconstruct, |z: Complex64| z.arg())
    }
}

fn wrap_phase(a: f64) -> f64 {
    let w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

fn others(target: u32, n: u32) -> Vec<u32> {
    (1..=n).filter(|&q| q != target).collect()
}

/// Index pair coupled by a rotation on `target` for control pattern `k`
/// over all other qubits.
fn pair(k: usize, target: u32, n: u32) -> (usize, usize) {
    let tb = n - target;
    let r0 = ((k >> tb) << (tb + 1)) | (k & ((1usize << tb) - 1));
    (r0, r0 | (1usize << tb))
}

/// Output of [`factor_phase_diagonal`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFactorization {
    pub global_phase: f64,
    /// `R_z` gates on targets `1..=n`, target `m` controlled by `1..m`.
    pub rz_gates: Vec<Gate>,
}

/// Writes `diag(e^{iα})` as `e^{iΦ}` times a cascade of `R_z` gates. Each
/// level pairs neighbouring entries, keeps half their difference as the
/// rotation angle and passes their mean up.
pub fn factor_phase_diagonal(phases: &[f64]) -> Result<PhaseFactorization> {
    if !phases.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(phases.len()));
    }
    let n = phases.len().trailing_zeros();
    let mut cur = phases.to_vec();
    let mut rz_gates = Vec::with_capacity(n as usize);
    for m in (1..=n).rev() {
        let half = cur.len() / 2;
        let angles = (0..half).map(|c| (cur[2 * c] - cur[2 * c + 1]) / 2.0).collect();
        cur = (0..half).map(|c| (cur[2 * c] + cur[2 * c + 1]) / 2.0).collect();
        rz_gates.push(Gate::rotation(Axis::Z, m, (1..m).collect(), angles));
    }
    rz_gates.reverse();
    Ok(PhaseFactorization {
        global_phase: cur[0],
        rz_gates,
    })
}

/// Output of [`factor_sign_diagonal`].
#[derive(Debug, Clone, PartialEq)]
pub struct SignFactorization {
    pub global_sign: i8,
    /// Π gates on targets `1..=n`, target `m` controlled by `1..m`.
    pub pi_gates: Vec<Gate>,
}

/// Writes a `±1` diagonal as a global sign times controlled Π gates.
///
/// Flags are chosen greedily by increasing target and control pattern: the
/// Π gate for target `m` and pattern `c` is set when the residual sign at
/// the first index it touches is `-1`, and the residual is flipped on its
/// whole range.
pub fn factor_sign_diagonal(d: &SignDiagonal) -> SignFactorization {
    let n = d.n_qubits();
    let global_sign = d.signs[0];
    let mut residual: Vec<i8> = d.signs.iter().map(|s| s * global_sign).collect();
    let mut pi_gates = Vec::with_capacity(n as usize);
    for m in 1..=n {
        let span = 1usize << (n - m);
        let mut flags = vec![false; 1usize << (m - 1)];
        for (c, flag) in flags.iter_mut().enumerate() {
            let start = (c << (n - m + 1)) | span;
            if residual[start] < 0 {
                *flag = true;
                residual[start..start + span].iter_mut().for_each(|s| *s = -*s);
            }
        }
        pi_gates.push(Gate::Pi {
            target: m,
            controls: (1..m).collect(),
            flags,
        });
    }
    debug_assert!(residual.iter().all(|&s| s == 1));
    SignFactorization {
        global_sign,
        pi_gates,
    }
}

/// Complex pipeline: `U = (∏_p B_p A_p) Ũ_{2^n}`.
///
/// Each diagonal is split as `Ũ_p = B_p P_p†` where `P_p` is constant on the
/// index pairs rotated by `A_p` and therefore commutes with it; `B_p` then
/// has paired entries `e^{±iφ}` and is a uniformly-controlled `R_z`. The
/// leftover `P_p†` is pushed into the next diagonal. The final diagonal
/// becomes a global phase and an `R_z` cascade.
pub fn compile_complex(seq: &DecompositionSequence) -> Circuit {
    let n = seq.n;
    let dim = 1usize << n;
    let half = dim / 2;
    let mut carried = vec![0.0; dim];
    let mut pairs = Vec::with_capacity(seq.layers.len());
    for (layer, diag) in seq.layers.iter().zip(&seq.diagonals) {
        let alpha: Vec<f64> = diag
            .phases
            .iter()
            .zip(&carried)
            .map(|(a, p)| wrap_phase(a - p))
            .collect();
        let mut phi = vec![0.0; half];
        for (k, phi_k) in phi.iter_mut().enumerate() {
            let (r0, r1) = pair(k, layer.level, n);
            *phi_k = (alpha[r0] - alpha[r1]) / 2.0;
            let shared = -(alpha[r0] + alpha[r1]) / 2.0;
            carried[r0] = shared;
            carried[r1] = shared;
        }
        let controls = others(layer.level, n);
        pairs.push((
            Gate::rotation(Axis::Y, layer.level, controls.clone(), layer.theta.clone()),
            Gate::rotation(Axis::Z, layer.level, controls, phi),
        ));
    }
    let last: Vec<f64> = seq
        .leaf_diagonal()
        .phases
        .iter()
        .zip(&carried)
        .map(|(a, p)| wrap_phase(a - p))
        .collect();
    let cascade = factor_phase_diagonal(&last).expect("length is a power of two");
    let mut gates = Vec::with_capacity(2 * pairs.len() + n as usize + 1);
    gates.push(Gate::GlobalPhase {
        phase: cascade.global_phase,
    });
    gates.extend(cascade.rz_gates);
    for (a, b) in pairs.into_iter().rev() {
        gates.push(a);
        gates.push(b);
    }
    Circuit::new(n, gates).expect("compiler emits valid gates")
}

fn signs_of(diag: &LeafDiagonal, position: usize, tol: f64) -> Result<Vec<i8>> {
    diag.phases
        .iter()
        .map(|&phase| {
            let (s, c) = phase.sin_cos();
            if s.abs() > tol {
                Err(Error::NotRealDecomposition { position, phase })
            } else if c > 0.0 {
                Ok(1)
            } else {
                Ok(-1)
            }
        })
        .collect()
}

/// Real pipeline: `U = (∏_p Ã_p) Ũ_{2^n}` with `Ũ_p = U_1 ⋯ U_p` and
/// `Ã_p = Ũ_p A_p Ũ_p`. Conjugating by a `±1` diagonal only flips the sign
/// of angle `k` when the two indices of pair `k` carry opposite signs.
pub fn compile_real(seq: &DecompositionSequence, tol: &Tolerances) -> Result<Circuit> {
    let n = seq.n;
    let dim = 1usize << n;
    let mut cumulative = vec![1i8; dim];
    let mut layers = Vec::with_capacity(seq.layers.len());
    for (p, (layer, diag)) in seq.layers.iter().zip(&seq.diagonals).enumerate() {
        let signs = signs_of(diag, p + 1, tol.real)?;
        cumulative.iter_mut().zip(&signs).for_each(|(c, s)| *c *= s);
        let angles = layer
            .theta
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                let (r0, r1) = pair(k, layer.level, n);
                if cumulative[r0] != cumulative[r1] && t != 0.0 {
                    -t
                } else {
                    t
                }
            })
            .collect();
        layers.push(Gate::rotation(Axis::Y, layer.level, others(layer.level, n), angles));
    }
    let signs = signs_of(seq.leaf_diagonal(), dim, tol.real)?;
    cumulative.iter_mut().zip(&signs).for_each(|(c, s)| *c *= s);
    let cascade = factor_sign_diagonal(&SignDiagonal::new(cumulative)?);
    let mut gates = Vec::with_capacity(layers.len() + n as usize + 1);
    if cascade.global_sign < 0 {
        gates.push(Gate::GlobalPhase { phase: PI });
    }
    gates.extend(cascade.pi_gates);
    gates.extend(layers.into_iter().rev());
    Ok(Circuit::new(n, gates).expect("compiler emits valid gates"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Auto,
    Real,
    Complex,
}

/// A compiled operator together with the padded matrix it implements.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub circuit: Circuit,
    pub operator: UnitaryOperator,
    /// `Real` or `Complex`, never `Auto`.
    pub pipeline: Pipeline,
}

/// Pads, decomposes and maps an operator onto gates. `Auto` takes the real
/// pipeline exactly when the operator is real.
pub fn compile(op: &UnitaryOperator, pipeline: Pipeline, tol: &Tolerances) -> Result<Compiled> {
    let (operator, _) = op.pad_to_power_of_two();
    let seq = recursive_csd(&operator, tol)?;
    let pipeline = match pipeline {
        Pipeline::Auto if operator.is_real() => Pipeline::Real,
        Pipeline::Auto => Pipeline::Complex,
        p => p,
    };
    let circuit = match pipeline {
        Pipeline::Real => compile_real(&seq, tol)?,
        _ => compile_complex(&seq),
    };
    Ok(Compiled {
        circuit,
        operator,
        pipeline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_matrix, count_subgates};
    use crate::matrix::max_abs_diff;
    use crate::sample::{haar_orthogonal, haar_unitary, random_phases};
    use crate::CMat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Rebuilds `(∏ U_p A_p) U_{2^n}` from the block layout of `A^i`
    /// directly, without going through any gate.
    fn reassemble(seq: &DecompositionSequence) -> DMatrix<Complex64> {
        let n = seq.n_qubits();
        let dim = 1usize << n;
        let diag = |d: &LeafDiagonal| {
            DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                dim,
                d.phases.iter().map(|a| Complex64::from_polar(1.0, *a)),
            ))
        };
        let mut acc = DMatrix::<Complex64>::identity(dim, dim);
        for (layer, d) in seq.factors().iter().zip(seq.diagonals()) {
            let block = 1usize << (n - layer.level + 1);
            let sub = block / 2;
            let mut a = DMatrix::<Complex64>::zeros(dim, dim);
            for b in 0..dim / block {
                for l in 0..sub {
                    let (s, c) = layer.theta[b * sub + l].sin_cos();
                    let (r0, r1) = (b * block + l, b * block + sub + l);
                    a[(r0, r0)] = c.into();
                    a[(r0, r1)] = s.into();
                    a[(r1, r0)] = (-s).into();
                    a[(r1, r1)] = c.into();
                }
            }
            acc = acc * diag(d) * a;
        }
        acc * diag(seq.leaf_diagonal())
    }

    fn diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        a.iter().zip(b.iter()).fold(0.0, |m, (p, q)| m.max((p - q).norm()))
    }

    #[test]
    fn levels_follow_ruler_sequence() {
        let levels: Vec<u32> = (1..8).map(|p| level_of_position(p, 3).unwrap()).collect();
        assert_eq!(levels, vec![3, 2, 3, 1, 3, 2, 3]);
        assert_eq!(level_of_position(4, 3).unwrap(), 1);
        assert_eq!(level_of_position(1, 3).unwrap(), 3);
        assert_eq!(level_of_position(6, 4).unwrap(), 3);
        assert!(matches!(level_of_position(0, 3), Err(Error::OutOfRange { .. })));
        assert!(matches!(level_of_position(8, 3), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn sequence_levels_match_positions() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let seq = recursive_csd(&haar_unitary(16, &mut rng), &Tolerances::default()).unwrap();
        assert_eq!(seq.factors().len(), 15);
        assert_eq!(seq.diagonals().len(), 16);
        for layer in seq.factors() {
            assert_eq!(layer.level, level_of_position(layer.position, 4).unwrap());
            assert_eq!(layer.theta.len(), 8);
        }
    }

    #[test]
    fn identity_sequence_is_trivial() {
        let seq = recursive_csd(&UnitaryOperator::identity(8), &Tolerances::default()).unwrap();
        assert!(seq.factors().iter().all(|l| l.theta.iter().all(|&t| t == 0.0)));
        assert!(seq.diagonals().iter().all(|d| d.phases.iter().all(|&a| a == 0.0)));
        let circ = compile_complex(&seq);
        assert_eq!(count_subgates(&circ, 0.0).total, 0);
        let circ = compile_real(&seq, &Tolerances::default()).unwrap();
        assert_eq!(count_subgates(&circ, 0.0).total, 0);
    }

    #[test]
    fn single_qubit_rotation_sequence() {
        let t: f64 = 0.6;
        let m = DMatrix::from_row_slice(2, 2, &[t.cos(), t.sin(), -t.sin(), t.cos()]);
        let op = UnitaryOperator::certify(CMat::from_real(&m).unwrap(), &Tolerances::default()).unwrap();
        let seq = recursive_csd(&op, &Tolerances::default()).unwrap();
        assert_eq!(seq.factors().len(), 1);
        assert!((seq.factors()[0].theta[0] - t).abs() < 1e-15);
        assert_eq!(seq.leaf_diagonal().phases, vec![0.0, 0.0]);
    }

    #[test]
    fn random_sequence_reassembles() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for dim in [2, 4, 8, 16] {
            let op = haar_unitary(dim, &mut rng);
            let seq = recursive_csd(&op, &Tolerances::default()).unwrap();
            assert!(diff(&reassemble(&seq), op.matrix().as_matrix()) <= 1e-10);
            let op = haar_orthogonal(dim, &mut rng);
            let seq = recursive_csd(&op, &Tolerances::default()).unwrap();
            assert!(diff(&reassemble(&seq), op.matrix().as_matrix()) <= 1e-10);
            for d in seq.diagonals() {
                assert!(d.phases.iter().all(|&a| a == 0.0 || a == PI));
            }
        }
    }

    #[test]
    fn complex_pipeline_round_trip_and_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let op = haar_unitary(8, &mut rng);
        let circ = compile_complex(&recursive_csd(&op, &Tolerances::default()).unwrap());
        let m = circuit_matrix(&circ).unwrap();
        assert!(max_abs_diff(m.matrix(), op.matrix()).unwrap() <= 1e-9);
        assert_eq!(count_subgates(&circ, 1e-9).total, 64);
        // Application order: cascade (Φ + 3 R_z), then (A_p, B_p) for p = 7..1.
        let targets: Vec<u32> = circ.gates()[4..]
            .chunks(2)
            .map(|pair| {
                assert!(matches!(pair[0], Gate::UniformRotation { axis: Axis::Y, .. }));
                assert!(matches!(pair[1], Gate::UniformRotation { axis: Axis::Z, .. }));
                pair[0].target().unwrap()
            })
            .collect();
        let mut matrix_order = targets.clone();
        matrix_order.reverse();
        assert_eq!(matrix_order, vec![3, 2, 3, 1, 3, 2, 3]);
    }

    #[test]
    fn real_pipeline_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for dim in [2, 4, 8, 16, 32] {
            let op = haar_orthogonal(dim, &mut rng);
            let seq = recursive_csd(&op, &Tolerances::default()).unwrap();
            let circ = compile_real(&seq, &Tolerances::default()).unwrap();
            let k = count_subgates(&circ, 1e-9);
            assert_eq!(k.rz, 0);
            let m = circuit_matrix(&circ).unwrap();
            assert!(max_abs_diff(m.matrix(), op.matrix()).unwrap() <= 1e-9, "dim {dim}");
            for g in circ.gates() {
                if let Gate::GlobalPhase { phase } = g {
                    assert_eq!(*phase, PI);
                }
            }
            // Cross-pipeline check on the same sequence.
            let m = circuit_matrix(&compile_complex(&seq)).unwrap();
            assert!(max_abs_diff(m.matrix(), op.matrix()).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn real_pipeline_rejects_complex_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let seq = recursive_csd(&haar_unitary(4, &mut rng), &Tolerances::default()).unwrap();
        assert!(matches!(
            compile_real(&seq, &Tolerances::default()),
            Err(Error::NotRealDecomposition { .. })
        ));
    }

    #[test]
    fn non_power_of_two_is_rejected() {
        assert!(matches!(
            recursive_csd(&UnitaryOperator::identity(6), &Tolerances::default()),
            Err(Error::NotPowerOfTwo(6))
        ));
    }

    /// Direct product of the cascade, evaluated entry by entry.
    fn phase_cascade_diagonal(f: &PhaseFactorization, n: u32) -> Vec<Complex64> {
        let c = Circuit::new(n, f.rz_gates.clone()).unwrap();
        let m = circuit_matrix(&c).unwrap();
        (0..1usize << n)
            .map(|i| m.matrix().get(i, i) * Complex64::from_polar(1.0, f.global_phase))
            .collect()
    }

    #[test]
    fn phase_diagonal_examples() {
        let f = factor_phase_diagonal(&[0.4; 8]).unwrap();
        assert_eq!(f.global_phase, 0.4);
        assert!(f.rz_gates.iter().all(|g| g.subgate_count(0.0) == 0));
        let f = factor_phase_diagonal(&[0.3, -0.3]).unwrap();
        assert_eq!(f.global_phase, 0.0);
        assert_eq!(f.rz_gates, vec![Gate::rotation(Axis::Z, 1, vec![], vec![0.3])]);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let alpha = random_phases(8, &mut rng);
        let f = factor_phase_diagonal(&alpha).unwrap();
        for (z, a) in phase_cascade_diagonal(&f, 3).iter().zip(&alpha) {
            assert!((z - Complex64::from_polar(1.0, *a)).norm() <= 1e-12);
        }
    }

    #[test]
    fn sign_diagonal_examples() {
        let f = factor_sign_diagonal(&SignDiagonal::new(vec![1; 8]).unwrap());
        assert_eq!(f.global_sign, 1);
        assert!(f.pi_gates.iter().all(|g| g.subgate_count(0.0) == 0));
        assert_eq!(f.pi_gates.len(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let d: Vec<i8> = (0..16).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        let f = factor_sign_diagonal(&SignDiagonal::new(d.clone()).unwrap());
        let m = circuit_matrix(&Circuit::new(4, f.pi_gates).unwrap()).unwrap();
        for (i, s) in d.iter().enumerate() {
            assert_eq!(m.matrix().get(i, i).re * f64::from(f.global_sign), f64::from(*s));
        }
        assert!(SignDiagonal::new(vec![1, 0]).is_err());
        assert!(SignDiagonal::new(vec![1, 1, 1]).is_err());
    }
}
