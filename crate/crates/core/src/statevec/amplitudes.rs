//! Amplitude text format.
//!
//! ```text
//! # |Φ+⟩
//! n 2
//! 00 0.7071067811865476 0
//! 11 0.7071067811865476 0
//! ```
//!
//! Omitted basis states are zero. A vector whose norm is within 1e−6 of 1 is
//! renormalized; anything further off is rejected.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{check_qubits, PureState};
use crate::error::{ParseError, Result};

const RENORMALIZE_TOL: f64 = 1e-6;

pub fn parse_amplitudes(text: &str) -> Result<PureState> {
    let mut n: Option<usize> = None;
    let mut amps: Vec<Complex64> = Vec::new();
    let mut seen: Vec<bool> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some(n) = n else {
            let count = match tokens.as_slice() {
                ["n", count] => count
                    .parse::<usize>()
                    .map_err(|_| ParseError::new(line_no, format!("bad qubit count `{count}`")))?,
                _ => return Err(ParseError::new(line_no, "expected header `n <count>`").into()),
            };
            check_qubits(count)?;
            n = Some(count);
            amps = vec![Complex64::new(0.0, 0.0); 1 << count];
            seen = vec![false; 1 << count];
            continue;
        };
        let [bits, re, im] = tokens.as_slice() else {
            return Err(ParseError::new(line_no, "expected `<bitstring> <re> <im>`").into());
        };
        if bits.len() != n || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(ParseError::new(line_no, format!("`{bits}` is not a {n}-bit string")).into());
        }
        let index = usize::from_str_radix(bits, 2).expect("validated bitstring");
        if std::mem::replace(&mut seen[index], true) {
            return Err(ParseError::new(line_no, format!("basis state {bits} listed twice")).into());
        }
        let number = |t: &str| -> Result<f64> {
            match t.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(ParseError::new(line_no, format!("bad number `{t}`")).into()),
            }
        };
        amps[index] = Complex64::new(number(re)?, number(im)?);
    }
    let Some(n) = n else {
        return Err(ParseError::new(0, "missing header `n <count>`").into());
    };
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > RENORMALIZE_TOL {
        return Err(ParseError::new(0, format!("state norm {norm} deviates from 1 by more than {RENORMALIZE_TOL}")).into());
    }
    // already unit norm: keep the values bit-for-bit
    PureState::new(n, amps.clone()).or_else(|_| PureState::normalized(n, amps))
}

/// Writes the nonzero amplitudes in basis order using round-trip float formatting.
pub fn serialize_amplitudes(psi: &PureState) -> String {
    let n = psi.n();
    let mut out = format!("n {n}\n");
    for (idx, a) in psi.amplitudes().iter().enumerate() {
        if a.re == 0.0 && a.im == 0.0 {
            continue;
        }
        let _ = writeln!(out, "{idx:0n$b} {} {}", a.re, a.im);
    }
    out
}
