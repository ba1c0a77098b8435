//! Random sampling and local search over graph states.
//!
//! Trial `i` of a run with master seed `s` draws its graph from the ChaCha8
//! stream `(s, i)`, so results do not depend on the thread count. Trial 0
//! reproduces [`crate::graphs::make_random_graph`]`(n, s)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::random_lower_bound;
use crate::error::{invalid, Result};
use crate::graphs::{random_graph_from_rng, Graph};
use crate::marginal::count_mm;
use crate::subsets::{colex, to_vertices};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub n: usize,
    pub k: usize,
    pub best_graph: Graph,
    pub best_m_k: usize,
    /// Index of the trial that produced `best_graph` (lowest index on ties).
    pub best_trial: u64,
    pub trials: u64,
    pub empirical_mean: f64,
    /// Sample standard deviation of `m_k` over the trials (0 for one trial).
    pub empirical_std: f64,
    pub expected_mean: f64,
    pub master_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hill_climb: Option<HillClimbTrace>,
}

impl SearchResult {
    /// Standard error of the empirical mean.
    pub fn standard_error(&self) -> f64 {
        self.empirical_std / (self.trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HillClimbTrace {
    pub start_m_k: usize,
    /// Edges toggled, in order of acceptance.
    pub toggles: Vec<(usize, usize)>,
    /// `m_k` after each accepted toggle.
    pub m_k_history: Vec<usize>,
    /// True when the walk stopped because no toggle improved `m_k`.
    pub local_optimum: bool,
}

fn check_params(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n / 2 {
        return Err(invalid(format!("need 1 ≤ k ≤ ⌊n/2⌋, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// The graph drawn by trial `trial` of a run seeded with `seed`.
pub fn trial_graph(n: usize, seed: u64, trial: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    random_graph_from_rng(n, &mut rng)
}

/// Samples `trials` G(n, 1/2) graph states and keeps the one with most
/// maximally mixed k-reductions.
pub fn random_search(n: usize, k: usize, trials: u64, seed: u64) -> Result<SearchResult> {
    check_params(n, k)?;
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    Graph::empty(n)?;
    let counts: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| count_mm(&trial_graph(n, seed, t).expect("validated n"), k))
        .collect();
    let (best_trial, &best_m_k) = counts
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
        .expect("at least one trial");
    let t = trials as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / t;
    let var = if trials > 1 {
        counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (t - 1.0)
    } else {
        0.0
    };
    Ok(SearchResult {
        n,
        k,
        best_graph: trial_graph(n, seed, best_trial as u64)?,
        best_m_k,
        best_trial: best_trial as u64,
        trials,
        empirical_mean: mean,
        empirical_std: var.sqrt(),
        expected_mean: random_lower_bound(n as u64, k as u64)?.0,
        master_seed: seed,
        hill_climb: None,
    })
}

/// Steepest-ascent edge toggling from `start`.
///
/// Each step evaluates every single-edge toggle and accepts the one with the
/// largest `m_k` if it strictly improves; ties go to the colex-least edge.
/// The walk is deterministic; `seed` is only recorded.
pub fn hill_climb(start: &Graph, k: usize, max_steps: usize, seed: u64) -> Result<SearchResult> {
    let n = start.n();
    check_params(n, k)?;
    let edges: Vec<(usize, usize)> = colex(n, 2)
        .map(|m| {
            let v = to_vertices(m);
            (v[0], v[1])
        })
        .collect();
    let start_m_k = count_mm(start, k);
    let mut current = start.clone();
    let mut current_m = start_m_k;
    let mut trace = HillClimbTrace {
        start_m_k,
        toggles: Vec::new(),
        m_k_history: Vec::new(),
        local_optimum: false,
    };
    for _ in 0..max_steps {
        let best = edges
            .par_iter()
            .enumerate()
            .map(|(i, &(u, v))| {
                let g = current.with_toggled(u, v).expect("valid edge");
                (count_mm(&g, k), i)
            })
            .max_by(|(a, i), (b, j)| a.cmp(b).then(j.cmp(i)));
        match best {
            Some((m, i)) if m > current_m => {
                let (u, v) = edges[i];
                current = current.with_toggled(u, v)?;
                current_m = m;
                trace.toggles.push((u, v));
                trace.m_k_history.push(m);
            }
            _ => {
                trace.local_optimum = true;
                break;
            }
        }
    }
    Ok(SearchResult {
        n,
        k,
        best_graph: current,
        best_m_k: current_m,
        best_trial: 0,
        trials: 1,
        empirical_mean: start_m_k as f64,
        empirical_std: 0.0,
        expected_mean: random_lower_bound(n as u64, k as u64)?.0,
        master_seed: seed,
        hill_climb: Some(trace),
    })
}
