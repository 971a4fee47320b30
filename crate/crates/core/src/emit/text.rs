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

//! Line-oriented gate records.
//!
//! ```text
//! GATEY
//!   3;  1,  2
//!  -0.3188  0.4501 -0.4725  0.2393
//! ```
//!
//! Each record is a keyword (`GATEY`, `GATEZ`, `GATEPI`, `GATEPHASE`), a
//! line with the target followed by `;` and the comma-separated controls,
//! then the payload. Angles are turn fractions `v = θ/π`, four per line;
//! flags are `Y`/`N` on one line. A global phase is written as a record on
//! qubit 1 with a single value. Records appear in application order.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::turns;
use crate::circuit::{Axis, Circuit, Gate};
use crate::{Error, Result};

/// How angle payloads are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    /// Fixed point with four decimals.
    #[default]
    Display,
    /// Enough digits to reproduce every angle bit for bit.
    Exact,
}

const PER_LINE: usize = 4;

fn qubit_line(target: u32, controls: &[u32]) -> String {
    let controls: Vec<String> = controls.iter().map(|c| format!("{c:>3}")).collect();
    format!("{target:>3};{}", controls.join(","))
}

fn angle_lines(out: &mut String, angles: &[f64], mode: NumericMode) {
    for chunk in angles.chunks(PER_LINE) {
        for &a in chunk {
            match mode {
                NumericMode::Display => out.push_str(&turns::display(a)),
                NumericMode::Exact => {
                    out.push(' ');
                    out.push_str(&turns::exact(a));
                }
            }
        }
        out.push('\n');
    }
}

pub fn emit_text(c: &Circuit, mode: NumericMode) -> String {
    let mut out = String::new();
    for g in c.gates() {
        match g {
            Gate::UniformRotation {
                axis,
                target,
                controls,
                angles,
            } => {
                let kw = match axis {
                    Axis::Y => "GATEY",
                    Axis::Z => "GATEZ",
                };
                let _ = writeln!(out, "{kw}\n{}", qubit_line(*target, controls));
                angle_lines(&mut out, angles, mode);
            }
            Gate::Pi {
                target,
                controls,
                flags,
            } => {
                let _ = writeln!(out, "GATEPI\n{}", qubit_line(*target, controls));
                for &f in flags {
                    out.push_str(if f { "  Y" } else { "  N" });
                }
                out.push('\n');
            }
            Gate::GlobalPhase { phase } => {
                let _ = writeln!(out, "GATEPHASE\n{}", qubit_line(1, &[]));
                angle_lines(&mut out, &[*phase], mode);
            }
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Y,
    Z,
    Pi,
    Phase,
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line with its 1-based number.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.inner
            .by_ref()
            .map(|(i, l)| (i + 1, l.trim()))
            .find(|(_, l)| !l.is_empty())
    }

    fn peek_is_keyword(&mut self) -> bool {
        while let Some((_, l)) = self.inner.peek() {
            if l.trim().is_empty() {
                self.inner.next();
            } else {
                return keyword(l.trim()).is_some();
            }
        }
        false
    }
}

fn keyword(s: &str) -> Option<Kind> {
    match s {
        "GATEY" => Some(Kind::Y),
        "GATEZ" => Some(Kind::Z),
        "GATEPI" => Some(Kind::Pi),
        "GATEPHASE" => Some(Kind::Phase),
        _ => None,
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_qubit(tok: &str, line: usize) -> Result<u32> {
    match tok.trim().parse::<u32>() {
        Ok(q) if q >= 1 => Ok(q),
        _ => Err(syntax(line, format!("bad qubit index `{}`", tok.trim()))),
    }
}

/// Parses records written by [`emit_text`]. With `n = None` the qubit count
/// is the largest index mentioned (0 for empty input).
pub fn parse_text(text: &str, n: Option<u32>) -> Result<Circuit> {
    let mut lines = Lines {
        inner: text.lines().enumerate().peekable(),
    };
    let mut gates = Vec::new();
    while let Some((kw_line, kw)) = lines.next() {
        let kind = keyword(kw).ok_or_else(|| syntax(kw_line, format!("expected a gate keyword, found `{kw}`")))?;
        let (q_line, qs) = lines
            .next()
            .ok_or_else(|| syntax(kw_line + 1, "missing target line"))?;
        let (t, rest) = qs
            .split_once(';')
            .ok_or_else(|| syntax(q_line, "expected `target;` before controls"))?;
        let target = parse_qubit(t, q_line)?;
        let controls = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',').map(|c| parse_qubit(c, q_line)).collect::<Result<Vec<_>>>()?
        };
        let expected = if kind == Kind::Phase {
            if target != 1 || !controls.is_empty() {
                return Err(syntax(q_line, "a phase record acts on `1;` only"));
            }
            1
        } else {
            1usize
                .checked_shl(controls.len() as u32)
                .filter(|_| controls.len() < 32)
                .ok_or_else(|| syntax(q_line, "too many controls"))?
        };
        let mut tokens: Vec<(usize, &str)> = Vec::with_capacity(expected);
        let mut last_line = q_line;
        while tokens.len() < expected && !lines.peek_is_keyword() {
            let Some((ln, l)) = lines.next() else { break };
            last_line = ln;
            tokens.extend(l.split_whitespace().map(|t| (ln, t)));
        }
        if tokens.len() != expected {
            return Err(Error::BadPayloadLength {
                line: last_line,
                expected,
                found: tokens.len(),
            });
        }
        let gate = match kind {
            Kind::Pi => Gate::Pi {
                target,
                controls,
                flags: tokens
                    .iter()
                    .map(|&(ln, t)| match t {
                        "Y" => Ok(true),
                        "N" => Ok(false),
                        _ => Err(syntax(ln, format!("expected Y or N, found `{t}`"))),
                    })
                    .collect::<Result<_>>()?,
            },
            _ => {
                let values = tokens
                    .iter()
                    .map(|&(ln, t)| turns::decode(t).ok_or_else(|| syntax(ln, format!("bad number `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                match kind {
                    Kind::Y => Gate::rotation(Axis::Y, target, controls, values),
                    Kind::Z => Gate::rotation(Axis::Z, target, controls, values),
                    _ => Gate::GlobalPhase { phase: values[0] },
                }
            }
        };
        gates.push((kw_line, gate));
    }
    let inferred = gates
        .iter()
        .flat_map(|(_, g)| g.target().into_iter().chain(g.controls().iter().copied()))
        .max()
        .unwrap_or(0);
    let n = n.unwrap_or(inferred);
    for (line, g) in &gates {
        g.validate(n).map_err(|e| syntax(*line, e.to_string()))?;
    }
    Circuit::new(n, gates.into_iter().map(|(_, g)| g).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn turns(v: &[f64]) -> Vec<f64> {
        v.iter().map(|x| x * PI).collect()
    }

    #[test]
    fn records_match_reference_layout() {
        let c = Circuit::new(
            3,
            vec![
                Gate::Pi {
                    target: 1,
                    controls: vec![],
                    flags: vec![true],
                },
                Gate::rotation(Axis::Y, 2, vec![1, 3], turns(&[0.0, 0.5, 0.0, 0.5])),
            ],
        )
        .unwrap();
        assert_eq!(
            emit_text(&c, NumericMode::Display),
            "GATEPI\n  1;\n  Y\nGATEY\n  2;  1,  3\n  0.0000  0.5000  0.0000  0.5000\n"
        );
    }

    #[test]
    fn long_payloads_wrap_at_four() {
        let c = Circuit::new(4, vec![Gate::rotation(Axis::Z, 4, vec![1, 2, 3], turns(&[0.125; 8]))]).unwrap();
        let text = emit_text(&c, NumericMode::Display);
        assert_eq!(text.lines().count(), 4);
        assert_eq!(parse_text(&text, None).unwrap(), c);
    }

    #[test]
    fn phase_record() {
        let c = Circuit::new(2, vec![Gate::GlobalPhase { phase: PI }]).unwrap();
        let text = emit_text(&c, NumericMode::Exact);
        assert_eq!(text, "GATEPHASE\n  1;\n 1\n");
        assert_eq!(parse_text(&text, Some(2)).unwrap(), c);
    }

    #[test]
    fn empty_input() {
        assert_eq!(emit_text(&Circuit::empty(3), NumericMode::Display), "");
        assert_eq!(parse_text("", None).unwrap().n_qubits(), 0);
        assert_eq!(parse_text("\n\n", Some(2)).unwrap(), Circuit::empty(2));
    }

    #[test]
    fn payload_length_errors() {
        let err = parse_text("GATEY\n  3;  1,  2\n  0.1  0.2  0.3\n", None).unwrap_err();
        assert!(matches!(err, Error::BadPayloadLength { expected: 4, found: 3, .. }), "{err}");
        let err = parse_text("GATEPI\n  2;  1\n  Y  N  Y\n", None).unwrap_err();
        assert!(matches!(err, Error::BadPayloadLength { expected: 2, found: 3, .. }));
        let err = parse_text("GATEPI\n  2;  1\n  Y\nGATEPI\n  1;\n  Y\n", None).unwrap_err();
        assert!(matches!(err, Error::BadPayloadLength { expected: 2, found: 1, .. }));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        match parse_text("GATEY\n  1;\n  0.1\nBOGUS\n", None) {
            Err(Error::Syntax { line: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_text("GATEPI\n  1;\n  Q\n", None) {
            Err(Error::Syntax { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_text("GATEY\n  1  2\n  0.1\n", None) {
            Err(Error::Syntax { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_text("GATEY\n  2;  2\n  0.1  0.2\n", None).is_err());
        assert!(parse_text("GATEY\n  3;\n  0.1\n", Some(2)).is_err());
    }
}
