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

//! Conversion between angles in radians and decimal turn fractions
//! `v = θ / π`.
//!
//! The exact form uses rational arithmetic against a 62-digit value of π, so
//! decoding is correctly rounded and encoding can search for the shortest
//! digit string (at least 17 significant digits) that decodes back to the
//! same bits.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

const PI_DIGITS: &str = "31415926535897932384626433832795028841971693993751058209749446";
const PI_SCALE: i64 = 61;
const MIN_DIGITS: usize = 17;
const MAX_DIGITS: usize = 40;

fn pi_numerator() -> BigUint {
    PI_DIGITS.parse().expect("valid digits")
}

fn pow10(e: u32) -> BigUint {
    BigUint::from(10u32).pow(e)
}

/// Turn fraction rounded to four decimals, without a negative zero.
pub(crate) fn display(theta: f64) -> String {
    let v = theta / std::f64::consts::PI;
    let v = if (v * 1e4).round() == 0.0 { 0.0 } else { v };
    format!("{v:8.4}")
}

/// Shortest turn-fraction string with at least 17 significant digits that
/// decodes to exactly `theta`.
pub(crate) fn exact(theta: f64) -> String {
    debug_assert!(theta.is_finite());
    if theta == 0.0 {
        return if theta.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    for digits in MIN_DIGITS..=MAX_DIGITS {
        let s = encode(theta, digits);
        if decode(&s).map(f64::to_bits) == Some(theta.to_bits()) {
            return s;
        }
    }
    unreachable!("{MAX_DIGITS} digits always round-trip")
}

/// `(mantissa, binary exponent)` with `|x| = m * 2^e`.
fn split_f64(x: f64) -> (u64, i64) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    }
}

/// Rounds `num / den` to the nearest integer, ties to even.
fn div_round(num: &BigUint, den: &BigUint) -> BigUint {
    let q = num / den;
    let r = num - &q * den;
    let twice = &r << 1u32;
    if twice > *den || (twice == *den && q.bit(0)) {
        q + 1u32
    } else {
        q
    }
}

fn encode(theta: f64, digits: usize) -> String {
    let (m, e) = split_f64(theta);
    let order = theta.abs().log10() - std::f64::consts::PI.log10();
    let mut k = digits as i64 - 1 - order.floor() as i64;
    let n = loop {
        // |v| * 10^k = m 2^e 10^(k + PI_SCALE) / P
        let mut num = BigUint::from(m);
        let mut den = pi_numerator();
        if e >= 0 {
            num <<= e as u64;
        } else {
            den <<= (-e) as u64;
        }
        let t = k + PI_SCALE;
        if t >= 0 {
            num *= pow10(t as u32);
        } else {
            den *= pow10((-t) as u32);
        }
        let n = div_round(&num, &den);
        let len = n.to_string().len();
        if len > digits {
            k -= 1;
        } else if len < digits {
            k += 1;
        } else {
            break n;
        }
    };
    format_decimal(theta.is_sign_negative(), &n.to_string(), k)
}

/// Renders `digits * 10^-k`.
fn format_decimal(negative: bool, digits: &str, k: i64) -> String {
    let sign = if negative { "-" } else { "" };
    let point = digits.len() as i64 - k;
    if !(-6..=21).contains(&point) {
        let (head, tail) = digits.split_at(1);
        let tail = tail.trim_end_matches('0');
        let dot = if tail.is_empty() { "" } else { "." };
        return format!("{sign}{head}{dot}{tail}e{}", point - 1);
    }
    let body = if point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else if point as usize >= digits.len() {
        format!("{digits}{}", "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    let body = if body.contains('.') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    format!("{sign}{body}")
}

/// Angle `θ = v π` for a decimal turn fraction `v`, correctly rounded.
/// Returns `None` for malformed or out-of-range input.
pub(crate) fn decode(token: &str) -> Option<f64> {
    let (negative, rest) = match token.as_bytes().first()? {
        b'-' => (true, &token[1..]),
        b'+' => (false, &token[1..]),
        _ => (false, token),
    };
    let (mantissa, exp10) = match rest.find(['e', 'E']) {
        Some(i) => (&rest[..i], rest[i + 1..].parse::<i64>().ok()?),
        None => (rest, 0),
    };
    let (int, frac) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let m: BigUint = if digits.is_empty() { BigUint::zero() } else { digits.parse().ok()? };
    let sign = if negative { -1.0 } else { 1.0 };
    if m.is_zero() {
        return Some(sign * 0.0);
    }
    let exp10 = exp10.checked_sub(frac.len() as i64)?;
    let order = digits.trim_start_matches('0').len() as i64 + exp10;
    if order < -330 {
        return Some(sign * 0.0);
    }
    if order > 320 {
        return None;
    }
    let mut num = m * pi_numerator();
    let mut den = BigUint::one();
    let t = exp10 - PI_SCALE;
    if t >= 0 {
        num *= pow10(t as u32);
    } else {
        den = pow10((-t) as u32);
    }
    round_to_f64(&num, &den).map(|x| sign * x)
}

fn round_to_f64(num: &BigUint, den: &BigUint) -> Option<f64> {
    // q = floor(num 2^s / den) with at least 66 significant bits.
    let s = 66 + den.bits() as i64 - num.bits() as i64;
    let (n, d) = if s >= 0 {
        (num << s as u64, den.clone())
    } else {
        (num.clone(), den << (-s) as u64)
    };
    let q = &n / &d;
    let sticky = !(n - &q * &d).is_zero();
    let lead = q.bits() as i64 - 1 - s;
    let lsb = (lead - 52).max(-1074);
    let drop = lsb + s;
    if drop < 2 {
        return Some(0.0);
    }
    let mut mant = (&q >> drop as u64).to_u64()?;
    let rem = &q - (BigUint::from(mant) << drop as u64);
    let half = BigUint::one() << (drop - 1) as u64;
    if rem > half || (rem == half && (sticky || mant & 1 == 1)) {
        mant += 1;
    }
    let mut lsb = lsb;
    if mant == 1u64 << 53 {
        mant >>= 1;
        lsb += 1;
    }
    if mant == 0 {
        return Some(0.0);
    }
    if mant < 1u64 << 52 {
        return Some(f64::from_bits(mant));
    }
    let field = lsb + 52 + 1023;
    if field >= 2047 {
        return None;
    }
    Some(f64::from_bits(((field as u64) << 52) | (mant - (1u64 << 52))))
}
