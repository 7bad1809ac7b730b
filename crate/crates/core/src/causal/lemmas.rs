//! The two lemmas behind the no-go theorem, checked on concrete tables.

use serde::Serialize;

use super::joint::JointTable;
use super::predicates::{
    check_ats, check_nrc, check_reverse_factorization, evaluate_all, AssumptionReport, Verdict,
    LEMMA1_CLAUSE, LEMMA2_CLAUSES,
};

/// A conclusion together with the hypotheses it was derived from.
///
/// The conclusion is always evaluated; `verdict` is [`Verdict::Vacuous`]
/// whenever a hypothesis fails, otherwise it is the conclusion's verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub verdict: Verdict,
    pub preconditions: Vec<AssumptionReport>,
    pub conclusion: AssumptionReport,
}

impl LemmaReport {
    pub(crate) fn assemble(
        lemma: &str,
        preconditions: Vec<AssumptionReport>,
        conclusion: AssumptionReport,
    ) -> Self {
        let verdict = if preconditions.iter().all(AssumptionReport::passed) {
            conclusion.verdict
        } else {
            Verdict::Vacuous
        };
        Self {
            lemma: lemma.to_string(),
            verdict,
            preconditions,
            conclusion,
        }
    }

    pub fn preconditions_hold(&self) -> bool {
        self.verdict != Verdict::Vacuous
    }

    /// A genuine counterexample: hypotheses hold, conclusion does not.
    pub fn is_counterexample(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

fn preconditions(fwd: &JointTable, rev: &JointTable, tol: f64) -> Vec<AssumptionReport> {
    vec![
        check_nrc(fwd, tol),
        check_reverse_factorization(rev, tol),
        check_ats(fwd, rev, tol),
    ]
}

/// `p(c,d|x,y) = p(c,d)`, given NRC on `fwd`, the reverse factorization
/// of `rev` and ATS between them. `rev` is in reverse layout.
pub fn lemma1_check(fwd: &JointTable, rev: &JointTable, tol: f64) -> LemmaReport {
    LemmaReport::assemble(
        "Lemma 1",
        preconditions(fwd, rev, tol),
        evaluate_all("p(c,d) setting-free", &[LEMMA1_CLAUSE], fwd, tol),
    )
}

/// `a` is screened off by `c` and `b` by `(c,d)`, under the same
/// hypotheses as [`lemma1_check`].
pub fn lemma2_check(fwd: &JointTable, rev: &JointTable, tol: f64) -> LemmaReport {
    LemmaReport::assemble(
        "Lemma 2",
        preconditions(fwd, rev, tol),
        evaluate_all("screening by pseudo events", &LEMMA2_CLAUSES, fwd, tol),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::examples;
    use crate::causal::DEFAULT_TOL;

    #[test]
    fn cf_pair_passes_both() {
        let f = examples::asymmetric_factors();
        let (fwd, _) = f.build().unwrap();
        let rev = f.build_reverse().unwrap();
        assert_eq!(lemma1_check(&fwd, &rev, DEFAULT_TOL).verdict, Verdict::Pass);
        assert_eq!(lemma2_check(&fwd, &rev, DEFAULT_TOL).verdict, Verdict::Pass);
    }

    #[test]
    fn nrc_without_ats_is_vacuous_but_conclusion_fails() {
        let (fwd, rev) = examples::nrc_not_ats_pair();
        let report = lemma1_check(&fwd, &rev, DEFAULT_TOL);
        assert_eq!(report.verdict, Verdict::Vacuous);
        assert!(report.preconditions[0].passed());
        assert!(!report.preconditions[2].passed());
        assert_eq!(report.conclusion.verdict, Verdict::Fail);
        assert!(report.conclusion.max_deviation >= 0.5 - 1e-12);
    }
}
