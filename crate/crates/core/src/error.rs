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

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not unitary: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NotUnitary { residual: f64, tolerance: f64 },

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension {0} is odd")]
    OddDimension(usize),

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("decomposition residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NumericalFailure { residual: f64, tolerance: f64 },

    #[error("diagonal factor {position} has phase {phase} which is neither 0 nor pi")]
    NotRealDecomposition { position: usize, phase: f64 },

    #[error("position {p} is outside 1..{max} for {n} qubits")]
    OutOfRange { p: usize, n: u32, max: usize },

    #[error("qubit index {qubit} is invalid for a {n}-qubit gate")]
    BadQubitIndex { qubit: u32, n: u32 },

    #[error("gate payload has {found} entries, expected {expected}")]
    BadPayload { expected: usize, found: usize },

    #[error("{n} qubits exceeds the dense expansion cap of {cap}")]
    TooLarge { n: u32, cap: u32 },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: payload has {found} entries, expected {expected}")]
    BadPayloadLength {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("adjacency matrix is not symmetric at ({row}, {col})")]
    AsymmetricAdjacency { row: usize, col: usize },

    #[error("node {0} has no neighbours")]
    IsolatedNode(usize),

    #[error("invalid graph request: {0}")]
    BadGraphRequest(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
