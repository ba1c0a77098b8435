//! Forbidden-configuration checks on the family of maximally mixed k-subsets.
//!
//! The checkers take an abstract family so they apply equally to families
//! computed by the rank and statevector backends. Candidate sets `A` are
//! scanned in colex order; the reported witness is always the colex-least
//! violating set, also under parallel evaluation.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::marginal::MarginalReport;
use crate::subsets::{colex, full_mask, to_vertices, MAX_VERTICES};

/// Upper limit on candidate sets a single check may enumerate.
pub const MAX_CANDIDATES: u128 = 200_000_000;
const CHUNK: usize = 4096;

/// A family of k-subsets of `[n]`, stored as bit masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    n: usize,
    k: usize,
    members: HashSet<u64>,
}

impl SubsetFamily {
    pub fn from_masks(n: usize, k: usize, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES || k == 0 || k > n {
            return Err(invalid(format!("bad family shape n = {n}, k = {k}")));
        }
        let full = full_mask(n);
        let mut members = HashSet::new();
        for m in masks {
            if m & !full != 0 || m.count_ones() as usize != k {
                return Err(invalid(format!(
                    "{:?} is not a {k}-subset of 1..={n}",
                    to_vertices(m)
                )));
            }
            members.insert(m);
        }
        Ok(Self { n, k, members })
    }

    pub fn from_subsets(n: usize, k: usize, subsets: &[Vec<usize>]) -> Result<Self> {
        let masks = subsets
            .iter()
            .map(|s| crate::subsets::from_vertices(s, n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_masks(n, k, masks)
    }

    /// The maximally mixed k-subsets recorded in a marginal report.
    pub fn from_report(report: &MarginalReport) -> Result<Self> {
        Self::from_subsets(report.n, report.k, &report.mm_subsets)
    }

    /// All C(n, k) subsets.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        Self::from_masks(n, k, colex(n, k))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.members.contains(&mask)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreenessProperty {
    CompleteFree,
    HkFree,
    ComplementSymmetric,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessVerdict {
    pub property: FreenessProperty,
    /// Size of the subsets in the family.
    pub k: usize,
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
    /// Size of the forbidden complete set, for `complete_free`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<usize>,
    /// Whether a structural theorem guarantees `holds` for pure states with
    /// these parameters. Outside that regime the result is only an observation.
    pub in_regime: bool,
}

/// Places the low bits of `pattern` onto the set bits of `onto`, lowest first.
fn deposit(mut pattern: u64, mut onto: u64) -> u64 {
    let mut out = 0;
    while onto != 0 && pattern != 0 {
        let low = onto & onto.wrapping_neg();
        if pattern & 1 == 1 {
            out |= low;
        }
        pattern >>= 1;
        onto ^= low;
    }
    out
}

fn check_budget(n: usize, size: usize) -> Result<()> {
    let count = crate::bounds::binomial(n as u64, size as u64);
    if count > MAX_CANDIDATES.into() {
        return Err(Error::Resource(format!(
            "C({n},{size}) = {count} candidate sets exceed the limit of {MAX_CANDIDATES}"
        )));
    }
    Ok(())
}

/// Colex-least `size`-subset of `[n]` satisfying `violates`, evaluated in
/// parallel chunks.
fn first_violation(n: usize, size: usize, violates: impl Fn(u64) -> bool + Sync) -> Option<u64> {
    let mut it = colex(n, size);
    loop {
        let chunk: Vec<u64> = it.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return None;
        }
        if let Some(&hit) = chunk.par_iter().find_first(|&&a| violates(a)) {
            return Some(hit);
        }
    }
}

/// Holds iff no l-subset of `[n]` has all of its k-subsets in the family.
pub fn check_complete_free(fam: &SubsetFamily, l: usize) -> Result<FreenessVerdict> {
    let (n, k) = (fam.n, fam.k);
    if l < k || l > n {
        return Err(invalid(format!("need k ≤ l ≤ n, got k = {k}, l = {l}, n = {n}")));
    }
    check_budget(n, l)?;
    let patterns: Vec<u64> = colex(l, k).collect();
    let hit = if fam.len() < patterns.len() {
        None
    } else {
        first_violation(n, l, |a| patterns.iter().all(|&p| fam.contains(deposit(p, a))))
    };
    let even_regime = n == 2 * k && l == k + 2 && k >= 2 && k != 3;
    let quarter_regime = n % 4 == 0 && k == n / 2 && l == k + 1 && k >= 4;
    Ok(FreenessVerdict {
        property: FreenessProperty::CompleteFree,
        k,
        holds: hit.is_none(),
        witness: hit.map(to_vertices),
        l: Some(l),
        in_regime: even_regime || quarter_regime,
    })
}

/// For `n = 2k + 1`: holds iff every (k+2)-subset `A` admits a k-subset `B`
/// outside the family with `|B ∩ A| ∈ {1, k}`.
pub fn check_hk_free(fam: &SubsetFamily) -> Result<FreenessVerdict> {
    let (n, k) = (fam.n, fam.k);
    if n != 2 * k + 1 {
        return Err(domain(format!("hk check needs n = 2k + 1, got n = {n}, k = {k}")));
    }
    check_budget(n, k + 2)?;
    let full = full_mask(n);
    let inside: Vec<u64> = colex(k + 2, k).collect();
    // |B ∩ A| = 1: one vertex of A plus k − 1 vertices of Ā (all of Ā here)
    let outside: Vec<u64> = colex(n - k - 2, k - 1).collect();
    let hit = first_violation(n, k + 2, |a| {
        let rest = full & !a;
        let escapes_inside = inside.iter().any(|&p| !fam.contains(deposit(p, a)));
        let escapes_across = || {
            (0..k + 2).any(|i| {
                let single = deposit(1 << i, a);
                outside.iter().any(|&p| !fam.contains(single | deposit(p, rest)))
            })
        };
        !(escapes_inside || escapes_across())
    });
    Ok(FreenessVerdict {
        property: FreenessProperty::HkFree,
        k,
        holds: hit.is_none(),
        witness: hit.map(to_vertices),
        l: None,
        in_regime: k >= 3 && k != 5,
    })
}

/// For `n = 2k`: holds iff membership is invariant under complementation.
pub fn complement_symmetry(fam: &SubsetFamily) -> Result<FreenessVerdict> {
    let (n, k) = (fam.n, fam.k);
    if n != 2 * k {
        return Err(domain(format!("complement symmetry needs n = 2k, got n = {n}, k = {k}")));
    }
    check_budget(n, k)?;
    let full = full_mask(n);
    let hit = first_violation(n, k, |a| fam.contains(a) != fam.contains(full & !a));
    Ok(FreenessVerdict {
        property: FreenessProperty::ComplementSymmetric,
        k,
        holds: hit.is_none(),
        witness: hit.map(to_vertices),
        l: None,
        in_regime: true,
    })
}

/// Every check whose preconditions match the family's `(n, k)`.
///
/// At `n = 2k`: complement symmetry, complete-freeness with `l = k + 2`, and
/// with `l = k + 1` when `4 | n`. At `n = 2k + 1`: the hk check.
pub fn check_all(fam: &SubsetFamily) -> Result<Vec<FreenessVerdict>> {
    let (n, k) = (fam.n, fam.k);
    let mut out = Vec::new();
    if n == 2 * k {
        out.push(complement_symmetry(fam)?);
        if k + 2 <= n {
            out.push(check_complete_free(fam, k + 2)?);
        }
        if n % 4 == 0 && k >= 2 {
            out.push(check_complete_free(fam, k + 1)?);
        }
    } else if n == 2 * k + 1 && k >= 2 {
        out.push(check_hk_free(fam)?);
    }
    Ok(out)
}

/// Re-verifies a failing verdict's witness from scratch.
pub fn witness_is_valid(fam: &SubsetFamily, verdict: &FreenessVerdict) -> Result<bool> {
    let Some(w) = &verdict.witness else {
        return Ok(verdict.holds);
    };
    let a = crate::subsets::from_vertices(w, fam.n)?;
    let (n, k) = (fam.n, fam.k);
    let full = full_mask(n);
    Ok(match verdict.property {
        FreenessProperty::ComplementSymmetric => {
            a.count_ones() as usize == k && fam.contains(a) != fam.contains(full & !a)
        }
        FreenessProperty::CompleteFree => {
            let l = verdict.l.unwrap_or(0);
            a.count_ones() as usize == l
                && colex(n, k).filter(|b| b & !a == 0).all(|b| fam.contains(b))
        }
        FreenessProperty::HkFree => {
            a.count_ones() as usize == k + 2
                && colex(n, k)
                    .filter(|b| matches!((b & a).count_ones() as usize, x if x == 1 || x == k))
                    .all(|b| fam.contains(b))
        }
    })
}
