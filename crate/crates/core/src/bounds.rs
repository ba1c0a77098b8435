//! Closed-form upper and lower bounds on `Qex(n)`, the largest number of
//! maximally mixed ⌊n/2⌋-party reductions an n-qubit pure state can have,
//! and the per-n bounds table.
//!
//! Every binomial is an exact big integer. Bounds whose closed forms are not
//! integers are floored (upper) or ceiled (lower) exactly, since the
//! quantity being bounded is a count.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn ratio(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn floor_nonneg(r: &BigRational) -> BigUint {
    r.floor().to_integer().to_biguint().unwrap_or_default()
}

fn ceil_nonneg(r: &BigRational) -> BigUint {
    r.ceil().to_integer().to_biguint().unwrap_or_default()
}

/// Bound for `n = 2k` from forbidding complete `(k+2)`-vertex configurations:
/// `⌊C(2k,k) − ((k−1)/(k+1))·C(2k,k)/C(k+1,k−1)⌋`. Valid for `k ≥ 2, k ≠ 3`.
pub fn upper_bound_even(k: u64) -> Result<BigUint> {
    if k < 2 || k == 3 {
        return Err(domain(format!("even-n bound needs k ≥ 2 and k ≠ 3, got {k}")));
    }
    let total = ratio(binomial(2 * k, k));
    let cover = BigRational::new(BigInt::from(k - 1), BigInt::from(k + 1)) * &total
        / ratio(binomial(k + 1, k - 1));
    Ok(floor_nonneg(&(total - cover)))
}

/// Bound for `n = 2k + 1`: `C(2k+1,k) − ⌈C(2k+1,k+2) / (C(k+1,2) + k)⌉`.
/// Valid for `k ≥ 3, k ≠ 5`.
pub fn upper_bound_odd(k: u64) -> Result<BigUint> {
    if k < 3 || k == 5 {
        return Err(domain(format!("odd-n bound needs k ≥ 3 and k ≠ 5, got {k}")));
    }
    let n = 2 * k + 1;
    let copies = binomial(n, k + 2);
    let per_edge = binomial(k + 1, 2) + k;
    let removed = Integer::div_ceil(&copies, &per_edge);
    Ok(binomial(n, k) - removed)
}

/// Bound for `n = 4m`: `C(4m, 2m−1)`. Valid for `m ≥ 2`.
pub fn upper_bound_4m(m: u64) -> Result<BigUint> {
    if m < 2 {
        return Err(domain(format!("4m bound needs m ≥ 2, got {m}")));
    }
    Ok(binomial(4 * m, 2 * m - 1))
}

/// Covering lower bound on `T(n, l, k)`, the fewest k-sets meeting every
/// l-set: `((n−l+1)/(n−k+1))·C(n,k)/C(l−1,k−1)`.
pub fn covering_lower_bound(n: u64, l: u64, k: u64) -> Result<BigRational> {
    if k == 0 || k > l || l > n {
        return Err(domain(format!("need 1 ≤ k ≤ l ≤ n, got n = {n}, l = {l}, k = {k}")));
    }
    Ok(BigRational::new(BigInt::from(n - l + 1), BigInt::from(n - k + 1))
        * ratio(binomial(n, k))
        / ratio(binomial(l - 1, k - 1)))
}

/// Number of maximally mixed k-reductions of the two-clique graph state on `2k` qubits:
/// `2^{k−2}(k²−k+2)` for even k, `2^{k−2}(k²−k+4)` for odd k.
pub fn tk_closed_form(k: u64) -> Result<BigUint> {
    if k < 2 {
        return Err(domain(format!("two-clique family needs k ≥ 2, got {k}")));
    }
    let tail = if k.is_multiple_of(2) { 2 } else { 4 };
    Ok((BigUint::one() << (k - 2)) * (k * k - k + tail))
}

/// Exact probability that a uniform k×(n−k) F₂ matrix has full rank k:
/// `L(n,k) = Π_{l=0}^{k−1} (1 − 2^{l−n+k})`.
pub fn full_rank_density(n: u64, k: u64) -> Result<BigRational> {
    if k > n / 2 {
        return Err(domain(format!("need k ≤ ⌊n/2⌋, got n = {n}, k = {k}")));
    }
    let one = BigRational::one();
    let mut acc = one.clone();
    for l in 0..k {
        let denom = BigInt::one() << (n - k - l);
        acc *= &one - BigRational::new(BigInt::one(), denom);
    }
    Ok(acc)
}

/// Expected `m_k` of a G(n, 1/2) graph state and the full-rank density `L(n,k)`, as floats.
pub fn random_lower_bound(n: u64, k: u64) -> Result<(f64, f64)> {
    let (expected, density) = random_lower_bound_exact(n, k)?;
    Ok((
        expected.to_f64().unwrap_or(f64::NAN),
        density.to_f64().unwrap_or(f64::NAN),
    ))
}

/// `(C(n,k)·L(n,k), L(n,k))` exactly.
pub fn random_lower_bound_exact(n: u64, k: u64) -> Result<(BigRational, BigRational)> {
    let density = full_rank_density(n, k)?;
    Ok((ratio(binomial(n, k)) * &density, density))
}

/// Partial product `Π_{l=1}^{terms} (1 − 2^{−l})`.
pub fn limit_constant(terms: u32) -> f64 {
    (1..=terms).map(|l| 1.0 - 0.5f64.powi(l as i32)).product()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledBound {
    pub value: u64,
    pub label: String,
}

impl LabeledBound {
    fn new(value: &BigUint, label: &str) -> Self {
        Self {
            value: value.to_u64().expect("bound fits in u64 for n ≤ 64"),
            label: label.to_owned(),
        }
    }
}

/// Everything known about `Qex(n)` for one n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub n: u64,
    pub k: u64,
    pub computed_upper: Vec<LabeledBound>,
    pub computed_lower: Vec<LabeledBound>,
    pub literature_upper: Option<LabeledBound>,
    pub literature_lower: Option<LabeledBound>,
    /// Further published brackets kept verbatim alongside the main ones.
    pub literature_other: Vec<LabeledBound>,
}

impl BoundsRow {
    pub fn best_computed_upper(&self) -> Option<&LabeledBound> {
        self.computed_upper.iter().min_by_key(|b| b.value)
    }

    pub fn best_computed_lower(&self) -> Option<&LabeledBound> {
        self.computed_lower.iter().max_by_key(|b| b.value)
    }

    /// Every lower bound (computed or published) is at most every upper bound.
    pub fn is_consistent(&self) -> bool {
        let lowers = self
            .computed_lower
            .iter()
            .chain(&self.literature_lower)
            .chain(&self.literature_other);
        let uppers: Vec<u64> = self
            .computed_upper
            .iter()
            .chain(&self.literature_upper)
            .map(|b| b.value)
            .collect();
        lowers.into_iter().all(|lo| uppers.iter().all(|&up| lo.value <= up))
    }
}

pub const LABEL_TRIVIAL: &str = "all-subsets";
pub const LABEL_EVEN: &str = "no-complete-(k+2)-set";
pub const LABEL_ODD: &str = "no-hk-configuration";
pub const LABEL_4M: &str = "no-complete-(2m+1)-set";
pub const LABEL_TK: &str = "two-clique-graph";
pub const LABEL_RANDOM: &str = "random-graph-expectation";

/// Published `(lower, upper, lower source, upper source)` brackets.
const LITERATURE: &[(u64, u64, u64, &str, &str)] = &[
    (4, 4, 4, "literature:4-qubit-optimum", "literature:4-qubit-optimum"),
    (7, 32, 32, "literature:7-qubit-constructions", "literature:7-qubit-optimum"),
    (8, 56, 56, "literature:8-qubit-constructions", "literature:complete-(2m+1)-free"),
    (9, 112, 120, "literature:9-qubit-graph-states", "literature:hk-free"),
    (10, 200, 240, "literature:10-qubit-graph-states", "literature:complete-(k+2)-free"),
    (11, 396, 461, "literature:11-qubit-graph-states", "literature:no-11-qubit-ame"),
    (12, 540, 792, "literature:circulant-1-3-6", "literature:complete-(2m+1)-free"),
];

/// Lower bound from a different published 9-qubit construction.
const LITERATURE_OTHER: &[(u64, u64, &str)] = &[(9, 110, "literature:9-qubit-mmes")];

/// One row for `n` (2 ≤ n ≤ 64).
pub fn bounds_row(n: u64) -> Result<BoundsRow> {
    if !(2..=64).contains(&n) {
        return Err(domain(format!("bounds table supports 2 ≤ n ≤ 64, got {n}")));
    }
    let k = n / 2;
    let mut upper = vec![LabeledBound::new(&binomial(n, k), LABEL_TRIVIAL)];
    if n.is_multiple_of(2) {
        if let Ok(v) = upper_bound_even(k) {
            upper.push(LabeledBound::new(&v, LABEL_EVEN));
        }
        if n.is_multiple_of(4) {
            if let Ok(v) = upper_bound_4m(n / 4) {
                upper.push(LabeledBound::new(&v, LABEL_4M));
            }
        }
    } else if let Ok(v) = upper_bound_odd(k) {
        upper.push(LabeledBound::new(&v, LABEL_ODD));
    }

    let mut lower = Vec::new();
    if n.is_multiple_of(2) {
        if let Ok(v) = tk_closed_form(k) {
            lower.push(LabeledBound::new(&v, LABEL_TK));
        }
    }
    let (expected, _) = random_lower_bound_exact(n, k)?;
    lower.push(LabeledBound::new(&ceil_nonneg(&expected), LABEL_RANDOM));

    let lit = LITERATURE.iter().find(|row| row.0 == n);
    Ok(BoundsRow {
        n,
        k,
        computed_upper: upper,
        computed_lower: lower,
        literature_lower: lit.map(|&(_, lo, _, src, _)| LabeledBound {
            value: lo,
            label: src.to_owned(),
        }),
        literature_upper: lit.map(|&(_, _, up, _, src)| LabeledBound {
            value: up,
            label: src.to_owned(),
        }),
        literature_other: LITERATURE_OTHER
            .iter()
            .filter(|row| row.0 == n)
            .map(|&(_, v, src)| LabeledBound {
                value: v,
                label: src.to_owned(),
            })
            .collect(),
    })
}

pub fn table_of_bounds(range: std::ops::RangeInclusive<u64>) -> Result<Vec<BoundsRow>> {
    range.map(bounds_row).collect()
}

/// Parses `a:b` (inclusive) or a single `n`.
pub fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<u64>> {
    let bad = || domain(format!("bad range `{text}`, expected `a:b` with 2 ≤ a ≤ b ≤ 64"));
    let (a, b) = match text.split_once(':') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text.trim(), text.trim()),
    };
    let a: u64 = a.parse().map_err(|_| bad())?;
    let b: u64 = b.parse().map_err(|_| bad())?;
    if a < 2 || a > b || b > 64 {
        return Err(bad());
    }
    Ok(a..=b)
}

fn opt_value(b: Option<&LabeledBound>) -> String {
    b.map_or_else(|| "-".to_owned(), |b| b.value.to_string())
}

fn labels(row: &BoundsRow) -> String {
    let mut parts = Vec::new();
    if let Some(b) = row.best_computed_upper() {
        parts.push(format!("upper={}", b.label));
    }
    if let Some(b) = row.best_computed_lower() {
        parts.push(format!("lower={}", b.label));
    }
    if let Some(b) = &row.literature_lower {
        parts.push(format!("lit_lower={}", b.label));
    }
    if let Some(b) = &row.literature_upper {
        parts.push(format!("lit_upper={}", b.label));
    }
    for b in &row.literature_other {
        parts.push(format!("lit_other={}:{}", b.label, b.value));
    }
    parts.join(";")
}

/// CSV with columns `n, computed_upper, computed_lower, literature_lower, literature_upper, labels`.
pub fn table_to_csv(rows: &[BoundsRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "n",
        "computed_upper",
        "computed_lower",
        "literature_lower",
        "literature_upper",
        "labels",
    ])
    .expect("in-memory write");
    for row in rows {
        w.write_record([
            row.n.to_string(),
            opt_value(row.best_computed_upper()),
            opt_value(row.best_computed_lower()),
            opt_value(row.literature_lower.as_ref()),
            opt_value(row.literature_upper.as_ref()),
            labels(row),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// Aligned plain-text table.
pub fn table_to_text(rows: &[BoundsRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>3}  {:<30}  {:<30}  {:>9}  {:>9}",
        "n", "computed upper", "computed lower", "lit lower", "lit upper"
    );
    for row in rows {
        let up = row
            .best_computed_upper()
            .map_or("-".to_owned(), |b| format!("{} ({})", b.value, b.label));
        let lo = row
            .best_computed_lower()
            .map_or("-".to_owned(), |b| format!("{} ({})", b.value, b.label));
        let _ = writeln!(
            out,
            "{:>3}  {:<30}  {:<30}  {:>9}  {:>9}",
            row.n,
            up,
            lo,
            opt_value(row.literature_lower.as_ref()),
            opt_value(row.literature_upper.as_ref())
        );
    }
    out
}
