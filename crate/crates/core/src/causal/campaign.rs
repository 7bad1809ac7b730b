//! Randomized checks of the lemmas and of the OPEM step. Samples run in
//! parallel; the summary is reduced in sample order.

use rayon::prelude::*;
use serde::Serialize;

use super::bundle::MarginalBundle;
use super::joint::JointTable;
use super::lemmas::{lemma1_check, lemma2_check};
use super::opem::{opem_mediator_independence, opem_q};
use super::predicates::{check_nrc, check_om, check_spe, Verdict};
use super::sampler::{random_joint, sample_cf_pair, sample_opem_pair, sample_rng};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointCounterexample {
    pub index: usize,
    pub fwd: JointTable,
    pub rev: JointTable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaCampaign {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Samples whose hypotheses failed numerically.
    pub vacuous: usize,
    pub lemma1_failures: usize,
    pub lemma2_failures: usize,
    /// Samples satisfying SPE but not OM. Lemma 2 rules these out.
    pub spe_without_om: usize,
    pub max_lemma1_deviation: f64,
    pub max_lemma2_deviation: f64,
    pub counterexample: Option<JointCounterexample>,
}

impl LemmaCampaign {
    pub fn clean(&self) -> bool {
        self.vacuous == 0
            && self.lemma1_failures == 0
            && self.lemma2_failures == 0
            && self.spe_without_om == 0
    }
}

struct LemmaSample {
    vacuous: bool,
    l1_fail: bool,
    l2_fail: bool,
    spe_not_om: bool,
    l1_dev: f64,
    l2_dev: f64,
    fwd: JointTable,
    rev: JointTable,
}

pub fn lemma_campaign(samples: usize, seed: u64, tol: f64) -> LemmaCampaign {
    let results: Vec<LemmaSample> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let (_, fwd, rev) = sample_cf_pair(seed, i as u64);
            let l1 = lemma1_check(&fwd, &rev, tol);
            let l2 = lemma2_check(&fwd, &rev, tol);
            LemmaSample {
                vacuous: !l1.preconditions_hold(),
                l1_fail: l1.is_counterexample(),
                l2_fail: l2.is_counterexample(),
                spe_not_om: check_spe(&fwd, tol).passed() && !check_om(&fwd, tol).passed(),
                l1_dev: l1.conclusion.max_deviation,
                l2_dev: l2.conclusion.max_deviation,
                fwd,
                rev,
            }
        })
        .collect();
    let mut out = LemmaCampaign {
        samples,
        seed,
        tol,
        vacuous: 0,
        lemma1_failures: 0,
        lemma2_failures: 0,
        spe_without_om: 0,
        max_lemma1_deviation: 0.0,
        max_lemma2_deviation: 0.0,
        counterexample: None,
    };
    for (i, s) in results.into_iter().enumerate() {
        out.vacuous += s.vacuous as usize;
        out.lemma1_failures += s.l1_fail as usize;
        out.lemma2_failures += s.l2_fail as usize;
        out.spe_without_om += s.spe_not_om as usize;
        out.max_lemma1_deviation = out.max_lemma1_deviation.max(s.l1_dev);
        out.max_lemma2_deviation = out.max_lemma2_deviation.max(s.l2_dev);
        if out.counterexample.is_none() && (s.l1_fail || s.l2_fail || s.spe_not_om) {
            out.counterexample = Some(JointCounterexample {
                index: i,
                fwd: s.fwd,
                rev: s.rev,
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BundleCounterexample {
    pub index: usize,
    pub fwd: MarginalBundle,
    pub rev: MarginalBundle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpemCampaign {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub vacuous: usize,
    pub failures: usize,
    pub max_deviation: f64,
    pub max_q_normalization_error: f64,
    pub counterexample: Option<BundleCounterexample>,
}

impl OpemCampaign {
    pub fn clean(&self) -> bool {
        self.vacuous == 0 && self.failures == 0
    }
}

pub fn opem_campaign(samples: usize, seed: u64, tol: f64) -> OpemCampaign {
    let results: Vec<_> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let (fwd, rev) = sample_opem_pair(seed, i as u64);
            let report = opem_mediator_independence(&fwd, &rev, tol);
            let norm = opem_q(&fwd)
                .normalization_error()
                .max(opem_q(&rev).normalization_error());
            (report, norm, fwd, rev)
        })
        .collect();
    let mut out = OpemCampaign {
        samples,
        seed,
        tol,
        vacuous: 0,
        failures: 0,
        max_deviation: 0.0,
        max_q_normalization_error: 0.0,
        counterexample: None,
    };
    for (i, (report, norm, fwd, rev)) in results.into_iter().enumerate() {
        out.vacuous += (report.verdict == Verdict::Vacuous) as usize;
        let failed = report.verdict == Verdict::Fail;
        out.failures += failed as usize;
        out.max_deviation = out.max_deviation.max(report.conclusion.max_deviation);
        out.max_q_normalization_error = out.max_q_normalization_error.max(norm);
        if failed && out.counterexample.is_none() {
            out.counterexample = Some(BundleCounterexample { index: i, fwd, rev });
        }
    }
    out
}

/// How many unstructured random joints pass NRC.
pub fn random_joint_nrc_passes(samples: usize, seed: u64, tol: f64) -> usize {
    (0..samples)
        .into_par_iter()
        .filter(|&i| check_nrc(&random_joint(&mut sample_rng(seed, i as u64)), tol).passed())
        .count()
}
