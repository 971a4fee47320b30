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

//! Serialization of circuits: the line-oriented text record format, JSON
//! and Qcircuit LaTeX.

pub mod text;
pub mod json;
pub mod latex;
mod turns;

pub use json::{emit_json, parse_json};
pub use latex::emit_latex;
pub use text::{emit_text, parse_text, NumericMode};
