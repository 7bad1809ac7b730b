//! The Causal Friendliness polytope of the two-setting, two-outcome
//! scenario and the numerical work around it.

mod boxworld;
mod membership;
mod search;
pub mod simplex;
mod vertices;

use thiserror::Error;

pub use boxworld::{boxworld_construction, ContextDependentModel};
pub use membership::{membership, Facet, FacetKind, MembershipCertificate, MEMBERSHIP_TOL};
pub use search::{
    refine, simulated_chsh, tsirelson_search, tsirelson_search_in, Refinement, SearchResult,
    SearchSpace, MIN_GRID,
};
pub use vertices::{
    chsh, enumerate_strategies, enumerate_vertices, signalling_check, ChshVariant,
    DeterministicStrategy, SignallingReport,
};

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("numerically ill-conditioned: {0}")]
    IllConditioned(String),
    #[error(transparent)]
    Simplex(#[from] simplex::SimplexError),
    #[error("grid of {0} points is below the minimum of 8")]
    GridTooSmall(usize),
    #[error("search: {0}")]
    Search(String),
    #[error(transparent)]
    Wigner(#[from] crate::wigner::WignerError),
}
