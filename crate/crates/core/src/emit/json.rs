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

//! JSON dump of a circuit. Floats use the shortest representation that
//! parses back to the same bits, so a round trip is lossless.

use crate::{Circuit, Result};

pub fn emit_json(c: &Circuit) -> String {
    serde_json::to_string_pretty(c).expect("circuits always serialize")
}

pub fn parse_json(text: &str) -> Result<Circuit> {
    Ok(serde_json::from_str(text)?)
}
