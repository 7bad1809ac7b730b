//! Simulation and numerical checks for the timelike Wigner's-friend
//! (Causal Friendliness) scenario.
//!
//! - [`tensor`]: small dense complex linear algebra.
//! - [`wigner`]: circuit-level simulation producing behavior tables.
//! - [`causal`]: classical tables and the assumptions placed on them.
//! - [`polytope`]: CHSH, polytope membership, Tsirelson search, Boxworld.
//!
//! Outcome `+1` is table index `0` and `-1` is index `1`, everywhere.

pub mod behavior;
pub mod causal;
pub mod outcome;
pub mod polytope;
pub mod tensor;
pub mod wigner;

pub use behavior::{BehaviorTable, TableError};
pub use outcome::Outcome;

// Guide chapters, compiled as doctests so the book cannot drift.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/tensor.md")]
    mod tensor {}
    #[doc = include_str!("../../../book/src/wigner.md")]
    mod wigner {}
    #[doc = include_str!("../../../book/src/causal.md")]
    mod causal {}
    #[doc = include_str!("../../../book/src/polytope.md")]
    mod polytope {}
}
