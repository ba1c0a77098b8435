//! Marginal analysis: which k-party reductions of a state are maximally mixed.
//!
//! For a graph state `|G⟩` the reduction to `K` has purity `2^{-r}` where `r`
//! is the F₂ rank of the cut submatrix `A[K, K̄]`; it is maximally mixed iff
//! `r = |K|`. [`RankBackend`] implements that criterion exactly. Any other
//! [`MarginalBackend`] (e.g. the dense statevector one) plugs into the same
//! [`analyze`] driver so reports from both routes have the same shape.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::binomial;
use crate::error::{domain, invalid, Result};
use crate::f2linalg::rank_of_words;
use crate::graphs::Graph;
use crate::rational::Exact;
use crate::subsets::{colex_vec, from_vertices, full_mask, to_vertices};

/// What a backend reports about one subset.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetVerdict {
    pub maximally_mixed: bool,
    pub cut_rank: Option<usize>,
    pub purity_exact: Option<Exact>,
    pub purity: f64,
}

pub trait MarginalBackend: Sync {
    fn n(&self) -> usize;
    /// Short label recorded in reports ("rank", "statevector").
    fn label(&self) -> &'static str;
    /// Verdict for the subset `mask` (bit `v - 1` for vertex `v`), `|mask| ≤ n/2`.
    fn inspect(&self, mask: u64) -> SubsetVerdict;
}

/// Exact backend for graph states based on cut ranks.
#[derive(Debug, Clone, Copy)]
pub struct RankBackend<'a>(pub &'a Graph);

impl MarginalBackend for RankBackend<'_> {
    fn n(&self) -> usize {
        self.0.n()
    }

    fn label(&self) -> &'static str {
        "rank"
    }

    fn inspect(&self, mask: u64) -> SubsetVerdict {
        let r = cut_rank_mask(self.0, mask);
        let purity = Exact::dyadic(r as u32);
        SubsetVerdict {
            maximally_mixed: r == mask.count_ones() as usize,
            cut_rank: Some(r),
            purity: purity.to_f64(),
            purity_exact: Some(purity),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonMmEntry {
    pub subset: Vec<usize>,
    pub cut_rank: Option<usize>,
    pub purity: Option<Exact>,
    pub purity_f64: f64,
}

/// Per-(state, k) analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalReport {
    pub n: usize,
    pub k: usize,
    pub m_k: usize,
    /// `C(n, k)`.
    pub total: usize,
    /// Maximally mixed k-subsets, colex order.
    pub mm_subsets: Vec<Vec<usize>>,
    /// The remaining k-subsets, colex order.
    pub non_mm: Vec<NonMmEntry>,
    pub uniformity_order: usize,
    /// Average purity over the ⌊n/2⌋-subsets; exact when the backend is.
    pub pi_me: Option<Exact>,
    pub pi_me_f64: f64,
    pub s_linear: Option<Exact>,
    pub s_linear_f64: f64,
}

impl MarginalReport {
    /// Multiset of exact purities over all k-subsets, smallest purity first.
    /// `None` when the backend produced floats only.
    pub fn purity_profile(&self) -> Option<Vec<(Exact, usize)>> {
        let mut hist: BTreeMap<Exact, usize> = BTreeMap::new();
        if self.m_k > 0 {
            hist.insert(Exact::dyadic(self.k as u32), self.m_k);
        }
        for e in &self.non_mm {
            *hist.entry(e.purity.clone()?).or_default() += 1;
        }
        Some(hist.into_iter().collect())
    }

    /// Checks the bookkeeping invariants of the report.
    pub fn is_consistent(&self) -> bool {
        let counts = self.m_k == self.mm_subsets.len()
            && self.m_k + self.non_mm.len() == self.total
            && binomial(self.n as u64, self.k as u64) == BigUint::from(self.total);
        let purities = self.non_mm.iter().all(|e| match (&e.purity, e.cut_rank) {
            (Some(p), Some(r)) => r < self.k && *p == Exact::dyadic(r as u32),
            _ => true,
        });
        counts && purities
    }
}

/// Rank over F₂ of `A[K, K̄]` with `K` given as a mask.
pub fn cut_rank_mask(g: &Graph, mask: u64) -> usize {
    let outside = full_mask(g.n()) & !mask;
    let mut rows = [0u64; 64];
    let mut len = 0;
    let mut m = mask;
    while m != 0 {
        let v = m.trailing_zeros() as usize + 1;
        rows[len] = g.neighbor_mask(v) & outside;
        len += 1;
        m &= m - 1;
    }
    rank_of_words(&rows[..len])
}

fn proper_subset_mask(g: &Graph, subset: &[usize]) -> Result<u64> {
    let mask = from_vertices(subset, g.n())?;
    let size = mask.count_ones() as usize;
    if size == 0 || size == g.n() {
        return Err(invalid(format!(
            "subset must be nonempty and proper, got {} of {} vertices",
            size,
            g.n()
        )));
    }
    Ok(mask)
}

fn half_subset_mask(g: &Graph, subset: &[usize]) -> Result<u64> {
    let mask = proper_subset_mask(g, subset)?;
    if mask.count_ones() as usize > g.n() / 2 {
        return Err(invalid(format!(
            "subset of size {} exceeds ⌊n/2⌋ = {}",
            mask.count_ones(),
            g.n() / 2
        )));
    }
    Ok(mask)
}

/// F₂ rank of the submatrix with rows `K` and columns `[n] \ K`.
pub fn cut_rank(g: &Graph, subset: &[usize]) -> Result<usize> {
    let mask = proper_subset_mask(g, subset)?;
    Ok(cut_rank_mask(g, mask))
}

pub fn is_maximally_mixed_rank(g: &Graph, subset: &[usize]) -> Result<bool> {
    let mask = half_subset_mask(g, subset)?;
    Ok(cut_rank_mask(g, mask) == mask.count_ones() as usize)
}

/// `Tr ρ_K² = 2^{-cut_rank}`.
pub fn marginal_purity_rank(g: &Graph, subset: &[usize]) -> Result<Exact> {
    let mask = half_subset_mask(g, subset)?;
    Ok(Exact::dyadic(cut_rank_mask(g, mask) as u32))
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n / 2 {
        return Err(invalid(format!("k = {k} must lie in 1..=⌊n/2⌋ = {}", n / 2)));
    }
    Ok(())
}

/// Verdicts for all k-subsets in colex order. Evaluated in parallel, returned in order.
fn verdicts(backend: &dyn MarginalBackend, k: usize) -> Vec<(u64, SubsetVerdict)> {
    colex_vec(backend.n(), k)
        .into_par_iter()
        .map(|m| (m, backend.inspect(m)))
        .collect()
}

/// `m_k` and the maximally mixed k-subsets (colex order).
pub fn count_mm_reductions(g: &Graph, k: usize) -> Result<(usize, Vec<Vec<usize>>)> {
    check_k(g.n(), k)?;
    let subsets: Vec<Vec<usize>> = colex_vec(g.n(), k)
        .into_par_iter()
        .filter(|&m| cut_rank_mask(g, m) == k)
        .map(to_vertices)
        .collect();
    Ok((subsets.len(), subsets))
}

/// `m_k` only; the hot path for search.
pub fn count_mm(g: &Graph, k: usize) -> usize {
    colex_vec(g.n(), k)
        .into_iter()
        .filter(|&m| cut_rank_mask(g, m) == k)
        .count()
}

/// Largest `s ≤ ⌊n/2⌋` with every s-subset maximally mixed.
pub fn uniformity_order_with(backend: &dyn MarginalBackend) -> usize {
    let n = backend.n();
    // An s-subset that is not maximally mixed spoils every superset, so the first failing size ends the scan.
    (1..=n / 2)
        .take_while(|&s| {
            colex_vec(n, s)
                .into_par_iter()
                .all(|m| backend.inspect(m).maximally_mixed)
        })
        .last()
        .unwrap_or(0)
}

pub fn uniformity_order(g: &Graph) -> usize {
    uniformity_order_with(&RankBackend(g))
}

/// Average purity over all ⌊n/2⌋-subsets: `(exact if available, float)`.
pub fn potential_me_with(backend: &dyn MarginalBackend) -> (Option<Exact>, f64) {
    let n = backend.n();
    let half = n / 2;
    let vs: Vec<SubsetVerdict> = colex_vec(n, half)
        .into_par_iter()
        .map(|m| backend.inspect(m))
        .collect();
    let count = vs.len() as f64;
    let float = vs.iter().map(|v| v.purity).sum::<f64>() / count;
    let exact = vs
        .iter()
        .map(|v| v.purity_exact.as_ref().map(|p| p.inner().clone()))
        .sum::<Option<BigRational>>()
        .map(|s| Exact(s / BigRational::from_integer(vs.len().into())));
    (exact, float)
}

/// Exact potential of multipartite entanglement of a graph state.
pub fn potential_me(g: &Graph) -> Exact {
    potential_me_with(&RankBackend(g))
        .0
        .expect("rank backend is exact")
}

/// `S_L = (1 − π_ME)·2^h / (2^h − 1)` with `h = ⌊n/2⌋`.
pub fn linear_entropy(pi_me: &Exact, half: usize) -> Result<Exact> {
    if half == 0 {
        return Err(domain("linear entropy needs ⌊n/2⌋ ≥ 1"));
    }
    let scale = BigRational::from_integer(num_bigint::BigInt::one() << half);
    let one = BigRational::one();
    Ok(Exact((&one - pi_me.inner()) * &scale / (&scale - &one)))
}

pub fn linear_entropy_f64(pi_me: f64, half: usize) -> f64 {
    let scale = 2f64.powi(half as i32);
    (1.0 - pi_me) * scale / (scale - 1.0)
}

/// Smallest `m_k` that is *not* sufficient for s-uniformity: a state with
/// `m_k` strictly above the returned value is s-uniform.
///
/// `C(n,k) − C(n−s,k−s)`, or `C(n,k) − 2·C(n−s,k−s)` when `n = 2k`
/// (maximally mixed halves come in complementary pairs).
pub fn uniformity_threshold(n: usize, k: usize, s: usize) -> Result<BigUint> {
    if s >= k || k > n / 2 {
        return Err(invalid(format!(
            "need s < k ≤ ⌊n/2⌋, got n = {n}, k = {k}, s = {s}"
        )));
    }
    if s == 0 {
        return Ok(BigUint::zero());
    }
    let (n64, k64, s64) = (n as u64, k as u64, s as u64);
    let total = binomial(n64, k64);
    let covering = binomial(n64 - s64, k64 - s64);
    let covering = if n == 2 * k { covering * 2u32 } else { covering };
    Ok(if covering > total {
        BigUint::zero()
    } else {
        total - covering
    })
}

/// Full report for one k (1 ≤ k ≤ ⌊n/2⌋).
pub fn analyze(backend: &dyn MarginalBackend, k: usize) -> Result<MarginalReport> {
    let n = backend.n();
    check_k(n, k)?;
    let mut mm_subsets = Vec::new();
    let mut non_mm = Vec::new();
    for (mask, v) in verdicts(backend, k) {
        if v.maximally_mixed {
            mm_subsets.push(to_vertices(mask));
        } else {
            non_mm.push(NonMmEntry {
                subset: to_vertices(mask),
                cut_rank: v.cut_rank,
                purity: v.purity_exact,
                purity_f64: v.purity,
            });
        }
    }
    let total = mm_subsets.len() + non_mm.len();
    let (pi_me, pi_me_f64) = potential_me_with(backend);
    let half = n / 2;
    let s_linear = pi_me.as_ref().map(|p| linear_entropy(p, half)).transpose()?;
    Ok(MarginalReport {
        n,
        k,
        m_k: mm_subsets.len(),
        total,
        mm_subsets,
        non_mm,
        uniformity_order: uniformity_order_with(backend),
        pi_me,
        pi_me_f64,
        s_linear,
        s_linear_f64: linear_entropy_f64(pi_me_f64, half),
    })
}

pub fn analyze_graph(g: &Graph, k: usize) -> Result<MarginalReport> {
    analyze(&RankBackend(g), k)
}
