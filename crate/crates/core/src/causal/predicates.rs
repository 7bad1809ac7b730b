//! Assumption predicates over joint tables.
//!
//! Every conditional-independence clause is checked the same way: for each
//! assignment of the conditioning variables that are kept, the conditional
//! distribution of the target must not change as the dropped variables
//! range over their values. The reported deviation is the largest spread
//! (max minus min) of a conditional probability across dropped values.
//! Conditioning events of probability below [`ZERO_EVENT_TOL`] are skipped
//! and counted as indeterminate; they never cause a failure.

use serde::Serialize;

use super::joint::{JointTable, Var};

/// Conditioning events lighter than this are treated as impossible.
pub const ZERO_EVENT_TOL: f64 = 1e-12;

/// Default absolute tolerance for every predicate.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// A lemma whose hypotheses do not hold: its conclusion is not tested
    /// against it.
    Vacuous,
}

/// Index tuple where a predicate was violated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub clause: String,
    /// Assignment at which the conditional probability was largest.
    pub at: Vec<(Var, usize)>,
    /// Assignment (differing only in dropped variables) where it was smallest.
    pub against: Vec<(Var, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClauseReport {
    pub clause: String,
    pub max_deviation: f64,
    pub indeterminate: usize,
}

/// Outcome of one assumption predicate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub predicate: String,
    pub verdict: Verdict,
    pub max_deviation: f64,
    /// Present exactly when `verdict` is [`Verdict::Fail`].
    pub witness: Option<Witness>,
    pub indeterminate: usize,
    pub clauses: Vec<ClauseReport>,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub(crate) fn from_outcomes(predicate: &str, outcomes: Vec<ClauseOutcome>, tol: f64) -> Self {
        let max_deviation = outcomes.iter().map(|o| o.max_deviation).fold(0.0, f64::max);
        let indeterminate = outcomes.iter().map(|o| o.indeterminate).sum();
        let failed = max_deviation > tol;
        let witness = if failed {
            outcomes
                .iter()
                .filter(|o| o.max_deviation > tol)
                .max_by(|l, r| l.max_deviation.total_cmp(&r.max_deviation))
                .and_then(|o| o.witness.clone())
        } else {
            None
        };
        Self {
            predicate: predicate.to_string(),
            verdict: if failed { Verdict::Fail } else { Verdict::Pass },
            max_deviation,
            witness,
            indeterminate,
            clauses: outcomes
                .into_iter()
                .map(|o| ClauseReport {
                    clause: o.name,
                    max_deviation: o.max_deviation,
                    indeterminate: o.indeterminate,
                })
                .collect(),
        }
    }

    /// Single-clause report for entrywise comparisons.
    pub(crate) fn entrywise(
        predicate: &str,
        clause: &str,
        deviation: f64,
        at: Vec<(Var, usize)>,
        tol: f64,
    ) -> Self {
        Self::from_outcomes(
            predicate,
            vec![ClauseOutcome {
                name: clause.to_string(),
                max_deviation: deviation,
                indeterminate: 0,
                witness: Some(Witness {
                    clause: clause.to_string(),
                    at,
                    against: Vec::new(),
                }),
            }],
            tol,
        )
    }
}

/// "The conditional of `target` given `given` and `dropped` does not depend
/// on `dropped`." Both settings must appear in `given` or `dropped`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Clause {
    pub name: &'static str,
    pub target: &'static [Var],
    pub given: &'static [Var],
    pub dropped: &'static [Var],
}

#[derive(Clone, Debug)]
pub(crate) struct ClauseOutcome {
    pub name: String,
    pub max_deviation: f64,
    pub indeterminate: usize,
    pub witness: Option<Witness>,
}

fn assignments(vars: &[Var]) -> Vec<Vec<(Var, usize)>> {
    (0..1usize << vars.len())
        .map(|mask| {
            vars.iter()
                .enumerate()
                .map(|(i, &v)| (v, (mask >> (vars.len() - 1 - i)) & 1))
                .collect()
        })
        .collect()
}

impl Clause {
    pub(crate) fn evaluate(&self, joint: &JointTable) -> ClauseOutcome {
        debug_assert!(
            [Var::X, Var::Y]
                .iter()
                .all(|s| self.given.contains(s) || self.dropped.contains(s)),
            "clause {} leaves a setting unspecified",
            self.name
        );
        let mut worst = 0.0;
        let mut witness = None;
        let mut indeterminate = 0;
        let targets = assignments(self.target);
        for kept in assignments(self.given) {
            for (ti, t) in targets.iter().enumerate() {
                let mut hi: Option<(f64, Vec<(Var, usize)>)> = None;
                let mut lo: Option<(f64, Vec<(Var, usize)>)> = None;
                for delta in assignments(self.dropped) {
                    let mut cond: Vec<(Var, usize)> = kept.clone();
                    cond.extend(delta.iter().copied());
                    let setting = |s: Var| {
                        cond.iter()
                            .find(|(v, _)| *v == s)
                            .map(|&(_, val)| val)
                            .expect("settings are always specified")
                    };
                    let (x, y) = (setting(Var::X), setting(Var::Y));
                    let outcomes: Vec<(Var, usize)> = cond
                        .iter()
                        .copied()
                        .filter(|(v, _)| !v.is_setting())
                        .collect();
                    let denom = joint.event_probability(&outcomes, x, y);
                    if denom < ZERO_EVENT_TOL {
                        if ti == 0 {
                            indeterminate += 1;
                        }
                        continue;
                    }
                    let mut with_target = outcomes.clone();
                    with_target.extend(t.iter().copied());
                    let value = joint.event_probability(&with_target, x, y) / denom;
                    let mut full = t.clone();
                    full.extend(cond.iter().copied());
                    if hi.as_ref().is_none_or(|(h, _)| value > *h) {
                        hi = Some((value, full.clone()));
                    }
                    if lo.as_ref().is_none_or(|(l, _)| value < *l) {
                        lo = Some((value, full));
                    }
                }
                if let (Some((h, at)), Some((l, against))) = (hi, lo) {
                    if h - l > worst {
                        worst = h - l;
                        witness = Some(Witness {
                            clause: self.name.to_string(),
                            at,
                            against,
                        });
                    }
                }
            }
        }
        ClauseOutcome {
            name: self.name.to_string(),
            max_deviation: worst,
            indeterminate,
            witness,
        }
    }
}

pub(crate) fn evaluate_all(
    predicate: &str,
    clauses: &[Clause],
    joint: &JointTable,
    tol: f64,
) -> AssumptionReport {
    AssumptionReport::from_outcomes(
        predicate,
        clauses.iter().map(|c| c.evaluate(joint)).collect(),
        tol,
    )
}

use Var::{A, B, C, D, X, Y};

pub(crate) const NRC_CLAUSES: [Clause; 4] = [
    Clause {
        name: "p(c|x,y) = p(c)",
        target: &[C],
        given: &[],
        dropped: &[X, Y],
    },
    Clause {
        name: "p(a|c,x,y) = p(a|c,x)",
        target: &[A],
        given: &[C, X],
        dropped: &[Y],
    },
    Clause {
        name: "p(d|c,a,x,y) = p(d|c,a,x)",
        target: &[D],
        given: &[C, A, X],
        dropped: &[Y],
    },
    Clause {
        name: "p(a|c,x,d,y) = p(a|c,x,y)",
        target: &[A],
        given: &[C, X, Y],
        dropped: &[D],
    },
];

/// Reverse-order factorization `p(d) p(c|y,d) p(b|d,y,c) p(a|d,y,b,c,x)`,
/// stated in forward variable names.
pub(crate) const REVERSE_FACTORIZATION_CLAUSES: [Clause; 3] = [
    Clause {
        name: "p(d|y,x) = p(d)",
        target: &[D],
        given: &[],
        dropped: &[X, Y],
    },
    Clause {
        name: "p(c|y,d,x) = p(c|y,d)",
        target: &[C],
        given: &[D, Y],
        dropped: &[X],
    },
    Clause {
        name: "p(b|d,y,c,x) = p(b|d,y,c)",
        target: &[B],
        given: &[C, D, Y],
        dropped: &[X],
    },
];

pub(crate) const SPE_CLAUSE: Clause = Clause {
    name: "p(b|c,x,a,d,y) = p(b|c,x,d,y)",
    target: &[B],
    given: &[C, X, D, Y],
    dropped: &[A],
};

pub(crate) const OM_CLAUSE: Clause = Clause {
    name: "p(b|a,c,d,x,y) = p(b|c,d,y)",
    target: &[B],
    given: &[C, D, Y],
    dropped: &[A, X],
};

pub(crate) const LEMMA1_CLAUSE: Clause = Clause {
    name: "p(c,d|x,y) = p(c,d)",
    target: &[C, D],
    given: &[],
    dropped: &[X, Y],
};

pub(crate) const LEMMA2_CLAUSES: [Clause; 3] = [
    Clause {
        name: "p(a|c,d,x,y) = p(a|c,x,d)",
        target: &[A],
        given: &[C, D, X],
        dropped: &[Y],
    },
    Clause {
        name: "p(b|y,c,x,d) = p(b|y,c,d)",
        target: &[B],
        given: &[C, D, Y],
        dropped: &[X],
    },
    Clause {
        name: "p(a|c,x,d) = p(a|c,x)",
        target: &[A],
        given: &[C, X],
        dropped: &[D, Y],
    },
];

/// No Retrocausality on a forward-time joint: pseudo events do not depend
/// on later choices, and `a` does not depend on the later pseudo event `d`.
pub fn check_nrc(joint: &JointTable, tol: f64) -> AssumptionReport {
    evaluate_all("NRC", &NRC_CLAUSES, joint, tol)
}

/// Checks that a time-reversed table (layout `[d][b][c][a][y][x]`, see
/// [`JointTable::time_reversed`]) factorizes as
/// `p(d) p(c|y,d) p(b|d,y,c) p(a|d,y,b,c,x)`.
pub fn check_reverse_factorization(rev: &JointTable, tol: f64) -> AssumptionReport {
    evaluate_all(
        "reverse factorization",
        &REVERSE_FACTORIZATION_CLAUSES,
        &rev.time_reversed(),
        tol,
    )
}

/// Axiological Time Symmetry: `p_←(d,b,c,a|y,x) = p_→(c,a,d,b|x,y)`, with
/// `rev` stored in its own temporal layout `[d][b][c][a][y][x]`.
pub fn check_ats(fwd: &JointTable, rev: &JointTable, tol: f64) -> AssumptionReport {
    let (dev, i) = fwd.max_abs_diff(&rev.time_reversed());
    AssumptionReport::entrywise(
        "ATS",
        "p_rev(d,b,c,a|y,x) = p_fwd(c,a,d,b|x,y)",
        dev,
        Var::ALL.iter().copied().zip(i).collect(),
        tol,
    )
}

/// Screening via Pseudo Events: `b` is independent of `a` given
/// `c, x, d, y`. The dependence on `x` is kept.
pub fn check_spe(joint: &JointTable, tol: f64) -> AssumptionReport {
    evaluate_all("SPE", &[SPE_CLAUSE], joint, tol)
}

/// Operational Mediation: `b` depends on nothing beyond `c, d, y`.
pub fn check_om(joint: &JointTable, tol: f64) -> AssumptionReport {
    evaluate_all("OM", &[OM_CLAUSE], joint, tol)
}
