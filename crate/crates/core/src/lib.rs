//! Maximally mixed half-body reductions of qubit pure states.
//!
//! The crate counts how many `k`-party reductions of an `n`-qubit pure state
//! are maximally mixed, brackets the largest achievable count with closed-form
//! hypergraph bounds, and searches for good graph states. Two independent
//! backends are provided:
//!
//! * [`marginal`] works on graph states only and decides maximal mixedness from
//!   the F₂ rank of the cut submatrix of the adjacency matrix ([`f2linalg`]).
//! * [`statevec`] works on arbitrary dense pure states by explicit partial
//!   trace, and also hosts the Pauli/Bloch machinery.
//!
//! [`bounds`] evaluates the upper and lower bounds, [`freeness`] checks the
//! forbidden-configuration properties every pure state must satisfy, and
//! [`search`] samples random graph states.
//!
//! Vertices and qubits are 1-indexed in every public API and file format.

pub mod bounds;
pub mod error;
pub mod f2linalg;
pub mod freeness;
pub mod graphs;
pub mod marginal;
pub mod named;
pub mod rational;
pub mod report;
pub mod search;
pub mod statevec;
pub mod subsets;
pub mod verify;

pub use error::{Error, ParseError, Result};
pub use f2linalg::F2Matrix;
pub use graphs::Graph;
pub use marginal::MarginalReport;
pub use statevec::{DensityMatrix, PureState};
