//! Analysis reports: state resolution, backend selection, and the JSON / CSV /
//! text renderings used by the command-line tool.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{bounds_row, BoundsRow};
use crate::error::{invalid, Error, Result};
use crate::freeness::{check_all, FreenessVerdict, SubsetFamily};
use crate::graphs::{parse_edge_list, serialize_edge_list};
use crate::marginal::{analyze, MarginalBackend, MarginalReport, RankBackend};
use crate::named::{named_state, State};
use crate::search::SearchResult;
use crate::statevec::{parse_amplitudes, serialize_amplitudes, PureState, SvBackend};
use crate::subsets::{colex, to_vertices};

pub const SCHEMA_VERSION: &str = "1";

/// Purity tolerance used when comparing the two backends.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSource {
    Name,
    GraphFile,
    AmplitudeFile,
}

/// Where a state came from, with a SHA-256 of its content.
///
/// For files the hash covers the raw bytes; for names it covers the canonical
/// edge-list or amplitude serialization of the generated state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDescriptor {
    pub source: StateSource,
    pub spec: String,
    pub n: usize,
    pub sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn canonical_text(state: &State) -> String {
    match state {
        State::Graph(g) => serialize_edge_list(g),
        State::Vector(psi) => serialize_amplitudes(psi),
    }
}

/// Whether file content is in the amplitude format: the first body line after
/// the header has three tokens.
fn looks_like_amplitudes(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .nth(1)
        .is_some_and(|l| l.split_whitespace().count() == 3)
}

/// Parses file content as either supported format.
pub fn parse_state_text(text: &str) -> Result<State> {
    if looks_like_amplitudes(text) {
        Ok(State::Vector(parse_amplitudes(text)?))
    } else {
        Ok(State::Graph(parse_edge_list(text)?))
    }
}

/// Resolves `--state`: the name grammar first, then a path to a graph or
/// amplitude file.
pub fn resolve_state(spec: &str) -> Result<(State, StateDescriptor)> {
    match named_state(spec) {
        Ok(state) => {
            let descriptor = StateDescriptor {
                source: StateSource::Name,
                spec: spec.to_string(),
                n: state.n(),
                sha256: sha256_hex(canonical_text(&state).as_bytes()),
            };
            return Ok((state, descriptor));
        }
        Err(Error::UnknownState(_)) if Path::new(spec).is_file() => {}
        Err(e) => return Err(e),
    }
    let bytes = std::fs::read(spec).map_err(|e| invalid(format!("cannot read {spec}: {e}")))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| invalid(format!("{spec} is not UTF-8")))?;
    let state = parse_state_text(text)?;
    let source = match state {
        State::Graph(_) => StateSource::GraphFile,
        State::Vector(_) => StateSource::AmplitudeFile,
    };
    Ok((
        state.clone(),
        StateDescriptor {
            source,
            spec: spec.to_string(),
            n: state.n(),
            sha256: sha256_hex(&bytes),
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendChoice {
    /// Rank for graph states, statevector otherwise.
    Auto,
    Rank,
    Statevector,
    /// Rank results, cross-checked subset by subset against the statevector.
    Both,
}

impl BackendChoice {
    pub fn label(self) -> &'static str {
        match self {
            Self::Auto => "auto",
            Self::Rank => "rank",
            Self::Statevector => "statevector",
            Self::Both => "both",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub state: StateDescriptor,
    pub backend: String,
    /// Max-norm tolerance of the statevector backend, when it was used.
    pub tol: Option<f64>,
    pub marginals: Vec<MarginalReport>,
    pub freeness: Vec<FreenessVerdict>,
    pub bounds_context: Option<BoundsRow>,
}

impl Report {
    pub fn is_consistent(&self) -> bool {
        self.schema_version == SCHEMA_VERSION
            && self.marginals.iter().all(|m| m.is_consistent() && m.n == self.state.n)
    }
}

/// Compares the two backends on every subset of size 1..=⌊n/2⌋.
pub fn cross_check(rank: &dyn MarginalBackend, sv: &dyn MarginalBackend) -> Result<()> {
    let n = rank.n();
    for size in 1..=n / 2 {
        for mask in colex(n, size) {
            let a = rank.inspect(mask);
            let b = sv.inspect(mask);
            let detail = if a.maximally_mixed != b.maximally_mixed {
                Some(format!(
                    "{} says maximally mixed = {}, {} says {}",
                    rank.label(),
                    a.maximally_mixed,
                    sv.label(),
                    b.maximally_mixed
                ))
            } else if (a.purity - b.purity).abs() > CROSS_CHECK_TOL {
                Some(format!(
                    "purity {} ({}) vs {} ({})",
                    a.purity,
                    rank.label(),
                    b.purity,
                    sv.label()
                ))
            } else {
                None
            };
            if let Some(detail) = detail {
                return Err(Error::BackendDisagreement {
                    subset: to_vertices(mask),
                    detail,
                });
            }
        }
    }
    Ok(())
}

/// Runs the marginal analysis for each `k` plus the applicable freeness checks.
pub fn analyze_state(
    state: &State,
    descriptor: StateDescriptor,
    ks: &[usize],
    backend: BackendChoice,
    tol: f64,
) -> Result<Report> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(invalid(format!("tolerance {tol} must be finite and non-negative")));
    }
    let n = state.n();
    if ks.is_empty() {
        return Err(invalid("no k requested"));
    }
    let resolved = match (backend, state) {
        (BackendChoice::Auto, State::Graph(_)) => BackendChoice::Rank,
        (BackendChoice::Auto, State::Vector(_)) => BackendChoice::Statevector,
        (BackendChoice::Rank | BackendChoice::Both, State::Vector(_)) => {
            return Err(invalid(format!(
                "the {} backend needs a graph state",
                backend.label()
            )))
        }
        (b, _) => b,
    };
    let vector: Option<PureState> = match resolved {
        BackendChoice::Statevector | BackendChoice::Both => Some(state.to_vector()?),
        _ => None,
    };
    let sv = vector.as_ref().map(|psi| SvBackend { psi, tol });
    let rank = state.as_graph().map(RankBackend);
    let primary: &dyn MarginalBackend = match resolved {
        BackendChoice::Statevector => sv.as_ref().expect("vector built"),
        _ => rank.as_ref().expect("graph state"),
    };
    if resolved == BackendChoice::Both {
        cross_check(rank.as_ref().expect("graph state"), sv.as_ref().expect("vector built"))?;
    }
    let mut marginals = Vec::with_capacity(ks.len());
    let mut freeness = Vec::new();
    for &k in ks {
        let m = analyze(primary, k)?;
        freeness.extend(check_all(&SubsetFamily::from_report(&m)?)?);
        marginals.push(m);
    }
    Ok(Report {
        schema_version: SCHEMA_VERSION.to_string(),
        state: descriptor,
        backend: resolved.label().to_string(),
        tol: sv.map(|_| tol),
        marginals,
        freeness,
        bounds_context: if n >= 2 { Some(bounds_row(n as u64)?) } else { None },
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn opt_exact(e: &Option<crate::rational::Exact>) -> String {
    e.as_ref().map_or(String::new(), |x| x.to_string())
}

/// One CSV row per k.
pub fn report_to_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "state",
        "backend",
        "n",
        "k",
        "m_k",
        "total",
        "uniformity_order",
        "pi_me",
        "pi_me_f64",
        "s_linear",
        "s_linear_f64",
        "freeness",
    ])
    .expect("in-memory write");
    for m in &report.marginals {
        let verdicts: Vec<String> = report
            .freeness
            .iter()
            .filter(|v| v.k == m.k)
            .map(verdict_tag)
            .collect();
        w.write_record([
            report.state.spec.clone(),
            report.backend.clone(),
            m.n.to_string(),
            m.k.to_string(),
            m.m_k.to_string(),
            m.total.to_string(),
            m.uniformity_order.to_string(),
            opt_exact(&m.pi_me),
            m.pi_me_f64.to_string(),
            opt_exact(&m.s_linear),
            m.s_linear_f64.to_string(),
            verdicts.join(";"),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn verdict_tag(v: &FreenessVerdict) -> String {
    let name = serde_json::to_value(v.property)
        .ok()
        .and_then(|x| x.as_str().map(str::to_owned))
        .unwrap_or_default();
    let l = v.l.map_or(String::new(), |l| format!("(l={l})"));
    format!("{name}{l}={}", if v.holds { "holds" } else { "fails" })
}

pub fn report_to_text(report: &Report) -> String {
    let mut out = String::new();
    let s = &report.state;
    let _ = writeln!(out, "state     {} (n = {}, sha256 {})", s.spec, s.n, &s.sha256[..16]);
    let _ = writeln!(out, "backend   {}", report.backend);
    for m in &report.marginals {
        let _ = writeln!(out);
        let _ = writeln!(out, "k = {}", m.k);
        let _ = writeln!(out, "  m_k               {} / {}", m.m_k, m.total);
        let _ = writeln!(out, "  uniformity order  {}", m.uniformity_order);
        let _ = writeln!(out, "  pi_ME             {} ({})", opt_exact(&m.pi_me), m.pi_me_f64);
        let _ = writeln!(out, "  S_L               {} ({})", opt_exact(&m.s_linear), m.s_linear_f64);
        if let Some(profile) = m.purity_profile() {
            let parts: Vec<String> = profile.iter().map(|(p, c)| format!("{c} x {p}")).collect();
            let _ = writeln!(out, "  purity profile    {}", parts.join(", "));
        }
        for v in report.freeness.iter().filter(|v| v.k == m.k) {
            let regime = if v.in_regime { "" } else { " [observation]" };
            let witness = v.witness.as_ref().map_or(String::new(), |w| format!(" witness {w:?}"));
            let _ = writeln!(out, "  {}{witness}{regime}", verdict_tag(v));
        }
    }
    if let Some(row) = &report.bounds_context {
        let _ = writeln!(out);
        let up = row.best_computed_upper().map_or("-".into(), |b| b.value.to_string());
        let lo = row.best_computed_lower().map_or("-".into(), |b| b.value.to_string());
        let _ = writeln!(out, "bounds    {lo} <= Qex({}) <= {up}", row.n);
    }
    out
}

/// JSON envelope for search output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub schema_version: String,
    pub search: SearchResult,
}

impl SearchReport {
    pub fn new(search: SearchResult) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            search,
        }
    }
}

pub fn search_to_csv(r: &SearchResult) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "n",
        "k",
        "trials",
        "master_seed",
        "best_trial",
        "best_m_k",
        "empirical_mean",
        "empirical_std",
        "expected_mean",
        "best_edges",
    ])
    .expect("in-memory write");
    let edges: Vec<String> = r.best_graph.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    w.write_record([
        r.n.to_string(),
        r.k.to_string(),
        r.trials.to_string(),
        r.master_seed.to_string(),
        r.best_trial.to_string(),
        r.best_m_k.to_string(),
        r.empirical_mean.to_string(),
        r.empirical_std.to_string(),
        r.expected_mean.to_string(),
        edges.join(" "),
    ])
    .expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn search_to_text(r: &SearchResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n = {}, k = {}, trials = {}, seed = {}", r.n, r.k, r.trials, r.master_seed);
    let _ = writeln!(out, "expected mean   {:.6}", r.expected_mean);
    let _ = writeln!(out, "empirical mean  {:.6} (std {:.6}, s.e. {:.6})", r.empirical_mean, r.empirical_std, r.standard_error());
    let _ = writeln!(out, "best m_k        {} (trial {})", r.best_m_k, r.best_trial);
    if let Some(t) = &r.hill_climb {
        let _ = writeln!(
            out,
            "hill climb      {} -> {} in {} steps{}",
            t.start_m_k,
            r.best_m_k,
            t.toggles.len(),
            if t.local_optimum { " (local optimum)" } else { "" }
        );
    }
    let _ = write!(out, "best graph\n{}", serialize_edge_list(&r.best_graph));
    out
}

/// JSON envelope for bounds output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub schema_version: String,
    pub rows: Vec<BoundsRow>,
}

impl BoundsReport {
    pub fn new(rows: Vec<BoundsRow>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            rows,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{make_random_graph, Graph};
    use crate::rational::Exact;
    use crate::search::random_search;

    fn run(spec: &str, ks: &[usize], backend: BackendChoice) -> Result<Report> {
        let (state, d) = resolve_state(spec)?;
        analyze_state(&state, d, ks, backend, 1e-9)
    }

    #[test]
    fn tk4_report() {
        let r = run("tk4", &[4], BackendChoice::Auto).unwrap();
        assert_eq!(r.backend, "rank");
        assert_eq!(r.marginals[0].m_k, 56);
        assert_eq!(r.marginals[0].pi_me, Some(Exact::new(3, 35)));
        assert!(r.is_consistent());
        assert_eq!(r.freeness.len(), 3);
        assert!(r.freeness.iter().all(|v| v.holds));
        assert_eq!(r.bounds_context.as_ref().unwrap().n, 8);
        assert_eq!(r.tol, None);
        let json = to_json(&r);
        assert!(json.contains("\"pi_me\": \"3/35\""));
        assert!(json.contains("\"schema_version\": \"1\""));
    }

    #[test]
    fn json_round_trip() {
        for (spec, k, backend) in [
            ("tk3", 3, BackendChoice::Both),
            ("m4", 2, BackendChoice::Auto),
            ("random:9:4", 4, BackendChoice::Statevector),
        ] {
            let r = run(spec, &[k], backend).unwrap();
            let back: Report = serde_json::from_str(&to_json(&r)).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn phi4_statevector() {
        let r = run("phi4", &[2], BackendChoice::Statevector).unwrap();
        assert_eq!(r.marginals[0].m_k, 4);
        assert_eq!(r.marginals[0].pi_me, None);
        assert_eq!(r.tol, Some(1e-9));
        assert!(matches!(run("phi4", &[2], BackendChoice::Rank), Err(Error::InvalidInput(_))));
        assert!(matches!(run("phi4", &[2], BackendChoice::Both), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn both_backends_agree() {
        let r = run("circulant:10:1,2", &[1, 2, 3, 4, 5], BackendChoice::Both).unwrap();
        assert_eq!(r.backend, "both");
        assert_eq!(r.marginals.len(), 5);
        assert!(r.is_consistent());
    }

    /// A deliberately wrong backend: flips the verdict on one subset.
    struct Liar<'a>(RankBackend<'a>, u64);

    impl MarginalBackend for Liar<'_> {
        fn n(&self) -> usize {
            self.0.n()
        }
        fn label(&self) -> &'static str {
            "liar"
        }
        fn inspect(&self, mask: u64) -> crate::marginal::SubsetVerdict {
            let mut v = self.0.inspect(mask);
            if mask == self.1 {
                v.maximally_mixed = !v.maximally_mixed;
            }
            v
        }
    }

    #[test]
    fn disagreement_names_the_subset() {
        let g = make_random_graph(6, 1).unwrap();
        let liar = Liar(RankBackend(&g), 0b10_0100);
        match cross_check(&RankBackend(&g), &liar) {
            Err(Error::BackendDisagreement { subset, .. }) => assert_eq!(subset, vec![3, 6]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn files_are_detected_by_content() {
        let dir = std::env::temp_dir().join(format!("qex-report-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let graph = dir.join("g.txt");
        std::fs::write(&graph, "# pair\nn 2\n1 2\n").unwrap();
        let amps = dir.join("a.txt");
        std::fs::write(&amps, "n 1\n0 1 0\n").unwrap();
        let (s, d) = resolve_state(graph.to_str().unwrap()).unwrap();
        assert_eq!(s, State::Graph(Graph::from_edges(2, &[(1, 2)]).unwrap()));
        assert_eq!(d.source, StateSource::GraphFile);
        assert_eq!(d.sha256, sha256_hex(b"# pair\nn 2\n1 2\n"));
        let (s, d) = resolve_state(amps.to_str().unwrap()).unwrap();
        assert_eq!(s.n(), 1);
        assert_eq!(d.source, StateSource::AmplitudeFile);
        assert!(matches!(resolve_state("no/such/file"), Err(Error::UnknownState(_))));
        std::fs::write(&graph, "n 2\n1 1\n").unwrap();
        assert!(matches!(resolve_state(graph.to_str().unwrap()), Err(Error::Parse(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn name_hash_is_content_hash() {
        let (_, a) = resolve_state("tk2").unwrap();
        let (_, b) = resolve_state(" tk2").unwrap();
        assert_eq!(a.sha256, b.sha256);
        assert_eq!(a.sha256.len(), 64);
    }

    #[test]
    fn csv_and_text() {
        let r = run("tk4", &[3, 4], BackendChoice::Rank).unwrap();
        let csv = report_to_csv(&r);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("tk4,rank,8,4,56,70,3,3/35,"));
        assert!(lines[2].contains("complement_symmetric=holds"));
        let text = report_to_text(&r);
        assert!(text.contains("56 / 70"));
        assert!(text.contains("8 x 1/8"));
    }

    #[test]
    fn search_envelope_round_trip() {
        let s = SearchReport::new(random_search(8, 4, 20, 7).unwrap());
        let back: SearchReport = serde_json::from_str(&to_json(&s)).unwrap();
        assert_eq!(back, s);
        assert_eq!(search_to_csv(&s.search).lines().count(), 2);
        assert!(search_to_text(&s.search).contains("expected mean   21.533203"));
    }

    #[test]
    fn bad_requests() {
        assert!(run("tk4", &[], BackendChoice::Rank).is_err());
        assert!(run("tk4", &[5], BackendChoice::Rank).is_err());
        let (s, d) = resolve_state("tk2").unwrap();
        assert!(analyze_state(&s, d, &[1], BackendChoice::Rank, f64::NAN).is_err());
    }
}
