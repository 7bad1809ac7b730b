//! How the pieces of absoluteness relate: operational marginals plus a
//! global joint give back the observed behavior, and operational marginals
//! alone already give a behavior for `a, b`.

use super::bundle::{MarginalBundle, PcdArray};
use super::joint::{JointTable, Var};
use super::opem::opem_q;
use super::predicates::{AssumptionReport, ClauseOutcome, Witness, ZERO_EVENT_TOL};
use crate::behavior::BehaviorTable;

/// A global joint reproducing every marginal of `bundle`: the product
/// `p(c,d|x,y) p(a|x,c) p(b|y,c,d)`.
pub fn ejpd_joint(bundle: &MarginalBundle) -> JointTable {
    opem_q(bundle)
        .to_joint()
        .expect("product of valid marginals is a valid joint")
}

fn outcome(name: &str, dev: f64, at: Vec<(Var, usize)>, indeterminate: usize) -> ClauseOutcome {
    ClauseOutcome {
        name: name.to_string(),
        max_deviation: dev,
        indeterminate,
        witness: Some(Witness {
            clause: name.to_string(),
            at,
            against: Vec::new(),
        }),
    }
}

/// Does `joint` reproduce `p(c,d|x,y)`, `p(a|x,c)` (for every `y`) and
/// `p(b|y,c,d)` (for every `x`) of `bundle`?
pub fn check_ejpd(bundle: &MarginalBundle, joint: &JointTable, tol: f64) -> AssumptionReport {
    let mut cd = (0.0, Vec::new());
    let mut a_resp = (0.0, Vec::new());
    let mut b_resp = (0.0, Vec::new());
    let mut a_skip = 0;
    let mut b_skip = 0;
    let marginal = joint.pseudo_marginal();
    let bump = |slot: &mut (f64, Vec<(Var, usize)>), dev: f64, at: Vec<(Var, usize)>| {
        if dev > slot.0 {
            *slot = (dev, at);
        }
    };
    for x in 0..2 {
        for y in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let at = vec![(Var::C, c), (Var::D, d), (Var::X, x), (Var::Y, y)];
                    bump(
                        &mut cd,
                        (marginal[c][d][x][y] - bundle.pcd()[c][d][x][y]).abs(),
                        at,
                    );
                    let pcd = joint.event_probability(&[(Var::C, c), (Var::D, d)], x, y);
                    if pcd < ZERO_EVENT_TOL {
                        b_skip += 1;
                        continue;
                    }
                    for b in 0..2 {
                        let p =
                            joint.event_probability(&[(Var::C, c), (Var::D, d), (Var::B, b)], x, y)
                                / pcd;
                        let at = vec![
                            (Var::B, b),
                            (Var::C, c),
                            (Var::D, d),
                            (Var::X, x),
                            (Var::Y, y),
                        ];
                        bump(&mut b_resp, (p - bundle.pb()[b][y][c][d]).abs(), at);
                    }
                }
                let pc = joint.event_probability(&[(Var::C, c)], x, y);
                if pc < ZERO_EVENT_TOL {
                    a_skip += 1;
                    continue;
                }
                for a in 0..2 {
                    let p = joint.event_probability(&[(Var::C, c), (Var::A, a)], x, y) / pc;
                    let at = vec![(Var::A, a), (Var::C, c), (Var::X, x), (Var::Y, y)];
                    bump(&mut a_resp, (p - bundle.pa()[a][x][c]).abs(), at);
                }
            }
        }
    }
    AssumptionReport::from_outcomes(
        "EJPD",
        vec![
            outcome("p(c,d|x,y) reproduced", cd.0, cd.1, 0),
            outcome("p(a|x,c) reproduced", a_resp.0, a_resp.1, a_skip),
            outcome("p(b|y,c,d) reproduced", b_resp.0, b_resp.1, b_skip),
        ],
        tol,
    )
}

/// The behavior implied by the operational marginals alone.
pub fn atoe_from_eom(bundle: &MarginalBundle) -> BehaviorTable {
    bundle.behavior()
}

/// `Σ_{c,d} joint = Σ_{c,d} p(c,d|x,y) p(a|x,c) p(b|y,c,d)` entrywise.
pub fn aoe_identity(bundle: &MarginalBundle, joint: &JointTable, tol: f64) -> AssumptionReport {
    let lhs = joint.marginalize_ab();
    let rhs = atoe_from_eom(bundle);
    let mut worst = (0.0, Vec::new());
    for a in 0..2 {
        for b in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    let dev = (lhs.prob(a, b, x, y) - rhs.prob(a, b, x, y)).abs();
                    if dev > worst.0 {
                        worst = (
                            dev,
                            vec![(Var::A, a), (Var::B, b), (Var::X, x), (Var::Y, y)],
                        );
                    }
                }
            }
        }
    }
    AssumptionReport::entrywise(
        "AOE",
        "marginal of the joint = operational behavior",
        worst.0,
        worst.1,
        tol,
    )
}

/// Pseudo events with a single setting-free distribution `p(c,d)`.
pub fn check_ape(pcd: &PcdArray, tol: f64) -> AssumptionReport {
    let mut worst = (0.0, Vec::new());
    for c in 0..2 {
        for d in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    let dev = (pcd[c][d][x][y] - pcd[c][d][0][0]).abs();
                    if dev > worst.0 {
                        worst = (
                            dev,
                            vec![(Var::C, c), (Var::D, d), (Var::X, x), (Var::Y, y)],
                        );
                    }
                }
            }
        }
    }
    AssumptionReport::entrywise("APE", "p(c,d|x,y) = p(c,d)", worst.0, worst.1, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::{examples, sampler, DEFAULT_TOL};

    #[test]
    fn product_joint_reproduces_the_bundle() {
        let (fwd, _) = sampler::sample_opem_pair(2, 9);
        let joint = ejpd_joint(&fwd);
        assert!(check_ejpd(&fwd, &joint, DEFAULT_TOL).passed());
        assert!(aoe_identity(&fwd, &joint, DEFAULT_TOL).passed());
        assert!(check_ape(fwd.pcd(), DEFAULT_TOL).passed());
    }

    #[test]
    fn a_foreign_joint_does_not() {
        let bundle = MarginalBundle::from_factors(&examples::asymmetric_factors()).unwrap();
        let report = check_ejpd(&bundle, &JointTable::uniform(), DEFAULT_TOL);
        assert!(!report.passed());
        assert!(report.witness.is_some());
    }
}
