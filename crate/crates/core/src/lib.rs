//! Exact stable commutator length for elements of free groups.
//!
//! Given a word in free-group generators (lowercase letters; uppercase
//! means inverse), the crate computes `scl(w)` as an exact rational
//! number together with a combinatorial certificate surface, entirely in
//! arbitrary-precision rational arithmetic:
//!
//! 1. parse and cyclically reduce the word ([`word`]);
//! 2. build the turn graph with its dual-edge involution ([`turngraph`]);
//! 3. enumerate its embedded directed circuits ([`circuits`]);
//! 4. maximize the total circuit weight subject to the dual-pair
//!    equalities and a degree normalization, by exact simplex
//!    ([`ratlp`], [`sclcore`]);
//! 5. realize the optimal integer weights as a taut surface and check
//!    every identity it must satisfy ([`surface`]).
//!
//! Words outside the commutator subgroup get `scl = infinity`. Everything
//! is deterministic: the same input always produces byte-identical
//! output.

pub mod circuits;
pub mod error;
pub mod ratlp;
pub mod sclcore;
pub mod surface;
pub mod turngraph;
pub mod word;

pub use circuits::{enumerate_embedded_circuits, incidence, Circuit, IncidenceProfile};
pub use error::{Error, ErrorCategory, Result};
pub use ratlp::{enumerate_vertices, simplex_solve, ExactLp, LpSolution, LpStatus};
pub use sclcore::{
    assemble_lp, compute_scl, scale_to_integer, IntegerWeights, SclOptions, SclResult, SclValue,
    WeightVector,
};
pub use surface::{
    brute_force_scl_bound, build_surface, is_taut, make_taut, to_handle_diagram, trace_boundary,
    turn_surgery, verify_certificate, HandleDiagram, OracleOptions, SurfaceDescription,
};
pub use turngraph::{build_turn_graph, dual_edge, export_dot, TurnEdge, TurnGraph};
pub use word::{cyclically_reduce, exponent_sums, parse_word, CyclicWord, Letter};
