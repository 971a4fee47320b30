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

//! Quantum circuit compilation by recursive cosine-sine decomposition.
//!
//! A unitary matrix of any dimension is padded to `2^n`, split recursively
//! with the cosine-sine decomposition, and mapped onto uniformly-controlled
//! `R_y`/`R_z` rotations, controlled Π gates and a global phase. Real
//! (orthogonal) inputs take a dedicated pipeline that needs no `R_z` layers.
//!
//! The main entry points are [`compile`] for the whole pipeline, and
//! [`decompose::recursive_csd`] followed by [`decompose::compile_complex`] or
//! [`decompose::compile_real`] for finer control. Circuits can be checked
//! with [`circuit::circuit_matrix`] or [`circuit::apply_to_state`] and
//! serialized with the [`emit`] module.

pub mod circuit;
pub mod csd;
pub mod decompose;
pub mod emit;
mod linalg;
mod error;
pub mod matrix;
pub mod sample;
pub mod verify;
pub mod walk;

pub use circuit::{Axis, Circuit, Gate, SubgateCounts};
pub use decompose::{compile, Compiled, Pipeline};
pub use error::{Error, Result};
pub use matrix::{CMat, Tolerances, UnitaryOperator};
