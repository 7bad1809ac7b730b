//! Classical probability tables and the assumptions placed on them.
//!
//! Outcomes are stored as table indices, `0` for `+1` and `1` for `-1`;
//! settings are `0` and `1`. A [`JointTable`] is `p(c,a,d,b|x,y)`, a
//! [`MarginalBundle`] holds only the operational marginals.

mod bundle;
pub mod campaign;
pub mod examples;
mod joint;
mod ledger;
mod lemmas;
mod model;
mod opem;
mod predicates;
pub mod sampler;

pub use bundle::{MarginalBundle, PcdArray, QArray, QTable, ResponseA, ResponseB};
pub use joint::{marginalize_ab, JointArray, JointTable, Var};
pub use ledger::{aoe_identity, atoe_from_eom, check_ape, check_ejpd, ejpd_joint};
pub use lemmas::{lemma1_check, lemma2_check, LemmaReport};
pub use model::{build_cf_model, build_reverse_cf_model, CfFactors};
pub use opem::{ats_compatibility, opem_mediator_independence, opem_q};
pub use predicates::{
    check_ats, check_nrc, check_om, check_reverse_factorization, check_spe, AssumptionReport,
    ClauseReport, Verdict, Witness, DEFAULT_TOL, ZERO_EVENT_TOL,
};
