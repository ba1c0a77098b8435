use std::path::PathBuf;

use qex_core::graphs::{make_random_graph, make_turan_pair_graph, parse_edge_list, serialize_edge_list};
use qex_core::marginal::count_mm;
use qex_core::named::State;
use qex_core::report::{analyze_state, parse_state_text, resolve_state, to_json, BackendChoice, Report};
use qex_core::search::random_search;
use qex_core::statevec::phi4;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

#[test]
fn golden_random_graph() {
    let text = read("random_n10_seed42.txt");
    let frozen = parse_edge_list(&text).unwrap();
    assert_eq!(make_random_graph(10, 42).unwrap(), frozen);
    let recorded: usize = text
        .lines()
        .find_map(|l| l.strip_prefix("# m_5 = "))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(count_mm(&frozen, 5), recorded);
    // the single-trial search reproduces the same graph
    assert_eq!(random_search(10, 5, 1, 42).unwrap().best_graph, frozen);
}

#[test]
fn tk4_file_matches_generator() {
    let g = parse_edge_list(&read("tk4.txt")).unwrap();
    let t4 = make_turan_pair_graph(4).unwrap();
    assert_eq!(g, t4);
    assert_eq!(
        read("tk4.txt").lines().skip(1).collect::<Vec<_>>().join("\n") + "\n",
        serialize_edge_list(&t4)
    );
}

#[test]
fn phi4_file_matches_named_state() {
    assert_eq!(parse_state_text(&read("phi4.amp")).unwrap(), State::Vector(phi4()));
}

#[test]
fn file_and_name_reports_agree() {
    let (file_state, file_desc) = resolve_state(data("tk4.txt").to_str().unwrap()).unwrap();
    let (name_state, name_desc) = resolve_state("tk4").unwrap();
    assert_eq!(file_state, name_state);
    let a = analyze_state(&file_state, file_desc, &[4], BackendChoice::Both, 1e-9).unwrap();
    let b = analyze_state(&name_state, name_desc, &[4], BackendChoice::Rank, 1e-9).unwrap();
    assert_eq!(a.marginals, b.marginals);
    assert_eq!(a.freeness, b.freeness);
    assert_ne!(a.state.sha256, b.state.sha256);
    let back: Report = serde_json::from_str(&to_json(&a)).unwrap();
    assert_eq!(back, a);
}
