//! Self-check suite: recomputes every published value the crate can reproduce
//! and compares it with the expected constant.
//!
//! The summary contains no timings, so identical builds produce identical JSON.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bounds_row, limit_constant, random_lower_bound_exact, tk_closed_form, upper_bound_4m, upper_bound_even,
    upper_bound_odd, BoundsRow,
};
use crate::error::Result;
use crate::freeness::{check_complete_free, complement_symmetry, SubsetFamily};
use crate::graphs::{make_circulant, make_turan_pair_graph, Graph};
use crate::marginal::{analyze_graph, count_mm, cut_rank, uniformity_order};
use crate::rational::Exact;
use crate::report::SCHEMA_VERSION;
use crate::search::hill_climb;
use crate::statevec::{
    graph_state_vector, m4, phi4, purity, reduced_density, weight_sector_norm, SvBackend, DEFAULT_TOL,
};
use crate::subsets::{colex, to_vertices};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub schema_version: String,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// One line per check: `PASS id: expected … actual …`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: expected {}, actual {}\n", c.id, c.expected, c.actual));
        }
        out.push_str(&format!("{} passed, {} failed\n", self.passed, self.failed));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "expected", "actual", "passed"]).expect("in-memory write");
        for c in &self.checks {
            w.write_record([c.id.as_str(), &c.expected, &c.actual, if c.passed { "true" } else { "false" }])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn eq<T: ToString>(&mut self, id: &str, expected: T, actual: Result<T>) {
        let expected = expected.to_string();
        let actual = match actual {
            Ok(a) => a.to_string(),
            Err(e) => format!("error: {e}"),
        };
        let passed = expected == actual;
        self.checks.push(Check {
            id: id.to_string(),
            expected,
            actual,
            passed,
        });
    }

    fn close(&mut self, id: &str, expected: f64, actual: Result<f64>, tol: f64) {
        let (actual, passed) = match actual {
            Ok(a) => (format!("{a:.12}"), (a - expected).abs() <= tol),
            Err(e) => (format!("error: {e}"), false),
        };
        self.checks.push(Check {
            id: id.to_string(),
            expected: format!("{expected} ± {tol:e}"),
            actual,
            passed,
        });
    }
}

fn tuple(values: &[String]) -> String {
    format!("({})", values.join(", "))
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Runs the suite with the built-in two-clique generator.
pub fn run_verify() -> VerifySummary {
    run_verify_with(&make_turan_pair_graph)
}

/// Runs the suite with a caller-supplied two-clique generator, so a faulty
/// generator can be shown to fail the cross-checks.
pub fn run_verify_with(tk: &dyn Fn(usize) -> Result<Graph>) -> VerifySummary {
    let mut s = Suite { checks: Vec::new() };
    let mk = |k: usize| -> Result<usize> { Ok(count_mm(&tk(k)?, k)) };

    // two-clique counts
    let counts: Vec<String> = (2..=6)
        .map(|k| mk(k).map_or_else(|e| format!("error: {e}"), |m| m.to_string()))
        .collect();
    s.eq("tk_counts_k2_to_k6", "(4, 20, 56, 192, 512)".to_string(), Ok(tuple(&counts)));
    for k in 2..=8 {
        let closed = tk_closed_form(k as u64).map(|v| v.to_string());
        let counted = mk(k).map(|v| v.to_string());
        match closed {
            Ok(c) => s.eq(&format!("tk_closed_form_k{k}"), c, counted),
            Err(e) => s.eq(&format!("tk_closed_form_k{k}"), "closed form".to_string(), Err(e)),
        }
    }

    // cut ranks and purities of T_4
    let t4 = tk(4);
    let t4_rank = |sub: &[usize]| t4.as_ref().map_err(clone_err).and_then(|g| cut_rank(g, sub));
    s.eq("t4_cut_rank_1234", 4, t4_rank(&[1, 2, 3, 4]));
    s.eq("t4_cut_rank_1256", 2, t4_rank(&[1, 2, 5, 6]));
    let t4_report = t4.as_ref().map_err(clone_err).and_then(|g| analyze_graph(g, 4));
    s.eq("t4_m4", 56, t4_report.as_ref().map(|r| r.m_k).map_err(clone_err));
    s.eq(
        "t4_pi_me",
        "3/35".to_string(),
        t4_report.as_ref().map_err(clone_err).map(|r| r.pi_me.as_ref().map_or("none".into(), |p| p.to_string())),
    );
    s.eq(
        "t4_purity_profile",
        "56 x 1/16, 8 x 1/8, 6 x 1/4".to_string(),
        t4_report.as_ref().map_err(clone_err).map(|r| {
            let profile = r.purity_profile().unwrap_or_default();
            profile.iter().map(|(p, c)| format!("{c} x {p}")).collect::<Vec<_>>().join(", ")
        }),
    );
    s.eq(
        "t4_linear_entropy",
        "512/525".to_string(),
        t4_report.as_ref().map_err(clone_err).map(|r| r.s_linear.as_ref().map_or("none".into(), |p| p.to_string())),
    );
    let hypothetical = (Exact::new(56, 16).0 + Exact::new(14, 4).0) / Exact::new(70, 1).0;
    s.eq("pi_me_worked_example", "1/10".to_string(), Ok(Exact(hypothetical).to_string()));

    // uniformity orders
    s.eq("t3_uniformity", 3, tk(3).map(|g| uniformity_order(&g)));
    s.eq("t4_uniformity", 3, tk(4).map(|g| uniformity_order(&g)));
    let c12 = make_circulant(12, &[1, 3, 6]);
    s.eq("circulant_12_m6", 540, c12.as_ref().map(|g| count_mm(g, 6)).map_err(clone_err));
    s.eq("circulant_12_uniformity", 5, c12.as_ref().map(uniformity_order).map_err(clone_err));

    // closed-form bounds
    for (k, v) in [(2, 5), (4, 65), (5, 240), (6, 892)] {
        s.eq(&format!("upper_bound_even_k{k}"), big(v), upper_bound_even(k));
    }
    for (k, v) in [(3, 32), (4, 120)] {
        s.eq(&format!("upper_bound_odd_k{k}"), big(v), upper_bound_odd(k));
    }
    for (m, v) in [(2, 56), (3, 792)] {
        s.eq(&format!("upper_bound_4m_m{m}"), big(v), upper_bound_4m(m));
    }
    s.close("limit_constant_60", 0.288788095, Ok(limit_constant(60)), 1e-9);
    s.eq(
        "random_expectation_n8_k4",
        "11025/512".to_string(),
        random_lower_bound_exact(8, 4).map(|(e, _)| Exact(e).to_string()),
    );

    // bounds table
    let rows: Vec<Result<BoundsRow>> = (4..=12).map(bounds_row).collect();
    let row = |n: u64| rows[(n - 4) as usize].as_ref().map_err(clone_err);
    let best_up = |n: u64| row(n).map(|r| r.best_computed_upper().map_or(0, |b| b.value));
    let best_lo = |n: u64| row(n).map(|r| r.best_computed_lower().map_or(0, |b| b.value));
    let lit_lo = |n: u64| row(n).map(|r| r.literature_lower.as_ref().map_or(0, |b| b.value));
    let lit_up = |n: u64| row(n).map(|r| r.literature_upper.as_ref().map_or(0, |b| b.value));
    s.eq("table_n7_computed_upper", 32, best_up(7));
    s.eq("table_n8_computed_upper", 56, best_up(8));
    s.eq("table_n8_computed_lower", 56, best_lo(8));
    s.eq("table_n10_computed_upper", 240, best_up(10));
    s.eq("table_n10_computed_lower", 192, best_lo(10));
    s.eq("table_n12_computed_upper", 792, best_up(12));
    let lit: Vec<String> = [4, 7, 8, 9, 10, 11, 12]
        .into_iter()
        .map(|n| match (lit_lo(n), lit_up(n)) {
            (Ok(a), Ok(b)) => format!("{n}:{a}/{b}"),
            _ => format!("{n}:error"),
        })
        .collect();
    s.eq(
        "table_literature_brackets",
        "(4:4/4, 7:32/32, 8:56/56, 9:112/120, 10:200/240, 11:396/461, 12:540/792)".to_string(),
        Ok(tuple(&lit)),
    );
    s.eq(
        "table_n9_other_lower",
        "110".to_string(),
        row(9).map(|r| r.literature_other.iter().map(|b| b.value.to_string()).collect::<Vec<_>>().join(",")),
    );
    let consistent = (4..=12).all(|n| row(n).map(|r| r.is_consistent()).unwrap_or(false));
    s.eq("table_brackets_consistent", true, Ok(consistent));

    // statevector examples
    let phi = phi4();
    let phi_backend = SvBackend { psi: &phi, tol: DEFAULT_TOL };
    s.eq("phi4_m2", 4, crate::marginal::analyze(&phi_backend, 2).map(|r| r.m_k));
    let m4_state = m4();
    let max_dev = colex(4, 2)
        .map(|m| reduced_density(&m4_state, &to_vertices(m)).map(|r| (purity(&r) - 1.0 / 3.0).abs()))
        .collect::<Result<Vec<f64>>>()
        .map(|v| v.into_iter().fold(0.0, f64::max));
    s.close("m4_pair_purity_deviation", 0.0, max_dev, 1e-12);
    let t4_sectors = tk(4).and_then(|g| graph_state_vector(&g)).and_then(|psi| {
        (1..=3).map(|j| weight_sector_norm(&psi, j)).sum::<Result<f64>>()
    });
    s.close("t4_bloch_weight_1_to_3", 0.0, t4_sectors, 1e-12);

    // structural checks on T_4
    let t4_family = t4_report.as_ref().map_err(clone_err).and_then(SubsetFamily::from_report);
    s.eq(
        "t4_complete_free_l5",
        true,
        t4_family.as_ref().map_err(clone_err).and_then(|f| check_complete_free(f, 5)).map(|v| v.holds),
    );
    s.eq(
        "t4_complement_symmetric",
        true,
        t4_family.as_ref().map_err(clone_err).and_then(complement_symmetry).map(|v| v.holds),
    );
    s.eq(
        "t4_hill_climb_local_optimum",
        56,
        t4.as_ref().map_err(clone_err).and_then(|g| hill_climb(g, 4, 5, 0)).map(|r| r.best_m_k),
    );

    let passed = s.checks.iter().filter(|c| c.passed).count();
    let failed = s.checks.len() - passed;
    VerifySummary {
        schema_version: SCHEMA_VERSION.to_string(),
        checks: s.checks,
        passed,
        failed,
    }
}

fn clone_err(e: &crate::error::Error) -> crate::error::Error {
    crate::error::Error::InvalidInput(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let s = run_verify();
        let failures: Vec<_> = s.checks.iter().filter(|c| !c.passed).collect();
        assert!(failures.is_empty(), "{failures:#?}");
        assert!(s.all_passed());
        assert!(s.passed > 40);
        assert!(s.to_text().contains("PASS tk_counts_k2_to_k6: expected (4, 20, 56, 192, 512)"));
    }

    #[test]
    fn corrupted_generator_is_caught() {
        // drop one edge from the true graph
        let broken = |k: usize| -> Result<Graph> {
            let g = make_turan_pair_graph(k)?;
            g.with_toggled(1, 2)
        };
        let s = run_verify_with(&broken);
        assert!(!s.all_passed());
        let failed: Vec<&str> = s.checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
        assert!(failed.contains(&"tk_closed_form_k4"), "{failed:?}");
        assert!(failed.contains(&"tk_counts_k2_to_k6"));
    }

    #[test]
    fn deterministic() {
        assert_eq!(run_verify(), run_verify());
    }
}
