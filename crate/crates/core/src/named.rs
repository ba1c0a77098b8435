//! Registry of states addressable by name.
//!
//! Grammar: `tk<k>`, `circulant:<n>:<d1,d2,...>`, `phi4`, `m4`,
//! `random:<n>:<seed>`.

use crate::error::{Error, Result};
use crate::graphs::{make_circulant, make_random_graph, make_turan_pair_graph, Graph};
use crate::statevec::{graph_state_vector, m4, phi4, PureState};

/// A resolved input state.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Graph(Graph),
    Vector(PureState),
}

impl State {
    pub fn n(&self) -> usize {
        match self {
            Self::Graph(g) => g.n(),
            Self::Vector(psi) => psi.n(),
        }
    }

    pub fn as_graph(&self) -> Option<&Graph> {
        match self {
            Self::Graph(g) => Some(g),
            Self::Vector(_) => None,
        }
    }

    /// Dense amplitudes, building the graph state vector when needed.
    pub fn to_vector(&self) -> Result<PureState> {
        match self {
            Self::Graph(g) => graph_state_vector(g),
            Self::Vector(psi) => Ok(psi.clone()),
        }
    }
}

fn unknown(name: &str) -> Error {
    Error::UnknownState(name.to_string())
}

fn number<T: std::str::FromStr>(text: &str, name: &str) -> Result<T> {
    text.parse().map_err(|_| unknown(name))
}

/// Resolves a name; anything outside the grammar is [`Error::UnknownState`].
/// Names inside the grammar with bad parameters (e.g. `tk1`) give the
/// generator's own error.
pub fn named_state(name: &str) -> Result<State> {
    let name = name.trim();
    match name {
        "phi4" => return Ok(State::Vector(phi4())),
        "m4" => return Ok(State::Vector(m4())),
        _ => {}
    }
    if let Some(k) = name.strip_prefix("tk") {
        return Ok(State::Graph(make_turan_pair_graph(number(k, name)?)?));
    }
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["circulant", n, ds] => {
            let distances = ds
                .split(',')
                .map(|d| number::<usize>(d.trim(), name))
                .collect::<Result<Vec<_>>>()?;
            Ok(State::Graph(make_circulant(number(n, name)?, &distances)?))
        }
        ["random", n, seed] => Ok(State::Graph(make_random_graph(number(n, name)?, number(seed, name)?)?)),
        _ => Err(unknown(name)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marginal::count_mm;

    #[test]
    fn grammar() {
        let t4 = named_state("tk4").unwrap();
        assert_eq!(count_mm(t4.as_graph().unwrap(), 4), 56);
        let c = named_state("circulant:12:1,3,6").unwrap();
        assert_eq!(c.as_graph().unwrap().edge_count(), 30);
        assert_eq!(named_state("random:9:5").unwrap().as_graph().unwrap(), &make_random_graph(9, 5).unwrap());
        assert_eq!(named_state("phi4").unwrap(), State::Vector(phi4()));
        assert_eq!(named_state("m4").unwrap().n(), 4);
        assert!(named_state("m4").unwrap().as_graph().is_none());
    }

    #[test]
    fn unknown_names() {
        for bad in ["", "tk", "tkx", "ghz3", "circulant:12", "random:9:x", "circulant:a:1"] {
            assert!(matches!(named_state(bad), Err(Error::UnknownState(_))), "{bad}");
        }
        assert!(matches!(named_state("tk1"), Err(Error::InvalidInput(_) | Error::Domain(_))));
    }

    #[test]
    fn vector_of_graph_state() {
        let v = named_state("tk2").unwrap().to_vector().unwrap();
        assert_eq!(v.n(), 4);
    }
}
