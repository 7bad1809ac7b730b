//! The report every command produces, and its text rendering.

use std::fmt::Write;

use cfriend::causal::campaign::{LemmaCampaign, OpemCampaign};
use cfriend::causal::{AssumptionReport, LemmaReport};
use cfriend::polytope::{
    ContextDependentModel, MembershipCertificate, SearchResult, SignallingReport,
};
use cfriend::wigner::{NstReport, Verdict};
use cfriend::BehaviorTable;
use serde::Serialize;

use crate::spec_file::SpecFile;

/// A named invariant the command verified. A failing check makes the
/// process exit with status 2.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaSection {
    pub lemmas: LemmaCampaign,
    pub opem: OpemCampaign,
    /// The hand-built NRC-without-ATS pair, showing the hypotheses matter.
    pub non_vacuity_witness: LemmaReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxworldSection {
    pub model: ContextDependentModel,
    /// `S` summed context by context, without forming `p(a,b|x,y)`.
    pub s_by_contexts: f64,
    pub ape: AssumptionReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WignerDemoSection {
    /// Lab amplitudes as `[re, im]`, basis `|system, device, friend>`.
    pub lab_amplitudes: Vec<[f64; 2]>,
    /// Reduced system state, entries as `[re, im]`.
    pub reduced_system: [[[f64; 2]; 2]; 2],
    pub reduced_distance_from_mixture: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<SpecFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reverse: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub behavior: Option<BehaviorTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlators: Option<[[f64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_correlators: Option<[[f64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nst: Option<NstReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ots: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signalling: Option<SignallingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub membership: Option<MembershipCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boxworld: Option<BoxworldSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wigner_demo: Option<WignerDemoSection>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            config: None,
            reverse: None,
            behavior: None,
            correlators: None,
            oracle_correlators: None,
            s: None,
            nst: None,
            ots: None,
            signalling: None,
            membership: None,
            lemmas: None,
            boxworld: None,
            search: None,
            wigner_demo: None,
            checks: Vec::new(),
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite data")
    }
}

/// `v` to nine significant digits.
pub fn sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    if !(-4..9).contains(&magnitude) {
        return format!("{v:.8e}");
    }
    let decimals = (8 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

fn vector(v: &cfriend::tensor::BlochVector) -> String {
    let [x, y, z] = v.components();
    format!("({}, {}, {})", sig9(x), sig9(y), sig9(z))
}

fn verdict_line(out: &mut String, label: &str, passed: bool, deviation: f64) {
    let word = if passed { "holds" } else { "FAILS" };
    let _ = writeln!(
        out,
        "  {label:<34} {word}  (max deviation {})",
        sig9(deviation)
    );
}

fn assumption(out: &mut String, r: &AssumptionReport) {
    verdict_line(out, &r.predicate, r.passed(), r.max_deviation);
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "    witness [{}] at {:?}", w.clause, w.at);
    }
}

fn lemma(out: &mut String, r: &LemmaReport) {
    let _ = writeln!(out, "  {}: {:?}", r.lemma, r.verdict);
    for p in &r.preconditions {
        out.push_str("  ");
        assumption(out, p);
    }
    out.push_str("  ");
    assumption(out, &r.conclusion);
}

pub fn render_text(r: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "cfriend {} — {}", r.tool_version, r.command);
    if let Some(seed) = r.seed {
        let _ = writeln!(out, "seed: {seed}");
    }
    if let Some(c) = &r.config {
        let _ = writeln!(out, "input state: {:?}", c.input_state);
        for (name, v) in [
            ("charlie", &c.charlie),
            ("alice", &c.alice),
            ("debbie", &c.debbie),
            ("bob", &c.bob),
        ] {
            let _ = writeln!(out, "  {name:<8} {}", vector(v));
        }
    }
    if let Some(true) = r.reverse {
        let _ = writeln!(out, "ordering: reversed (Debbie–Bob first)");
    }
    if let Some(e) = &r.correlators {
        let _ = writeln!(out, "correlators <A_x B_y>:");
        for x in 0..2 {
            for y in 0..2 {
                let oracle = r
                    .oracle_correlators
                    .map(|o| format!("   oracle {}", sig9(o[x][y])))
                    .unwrap_or_default();
                let _ = writeln!(out, "  x={x} y={y}  {}{oracle}", sig9(e[x][y]));
            }
        }
    }
    if let Some(s) = r.s {
        let _ = writeln!(out, "S = {}", sig9(s));
    }
    if let Some(n) = &r.nst {
        let _ = writeln!(out, "no-signalling in time:");
        verdict_line(
            &mut out,
            "Alice's marginal ignores y",
            n.past_unaffected_by_future.holds,
            n.past_unaffected_by_future.max_deviation,
        );
        verdict_line(
            &mut out,
            "Bob's marginal ignores x",
            n.future_unaffected_by_past.holds,
            n.future_unaffected_by_past.max_deviation,
        );
    }
    if let Some(v) = &r.ots {
        let _ = writeln!(out, "operational time symmetry:");
        verdict_line(&mut out, "forward = reverse", v.holds, v.max_deviation);
    }
    if let Some(s) = &r.signalling {
        let _ = writeln!(out, "signalling:");
        verdict_line(
            &mut out,
            "Alice's marginal ignores y",
            s.alice_independent_of_y,
            s.alice_deviation,
        );
        verdict_line(
            &mut out,
            "Bob's marginal ignores x",
            s.bob_independent_of_x,
            s.bob_deviation,
        );
    }
    if let Some(m) = &r.membership {
        match m {
            MembershipCertificate::Inside {
                weights,
                reconstruction_error,
            } => {
                let _ = writeln!(
                    out,
                    "membership: inside (reconstruction error {})",
                    sig9(*reconstruction_error)
                );
                for (k, w) in weights.iter().enumerate().filter(|(_, w)| **w > 0.0) {
                    let _ = writeln!(out, "  vertex {k:>2}: weight {}", sig9(*w));
                }
            }
            MembershipCertificate::Outside { facet } => {
                let _ = writeln!(out, "membership: outside");
                let _ = writeln!(
                    out,
                    "  facet {:?}: value {} > bound {}",
                    facet.kind,
                    sig9(facet.value),
                    sig9(facet.bound)
                );
            }
        }
    }
    if let Some(b) = &r.boxworld {
        let _ = writeln!(out, "boxworld: S by contexts = {}", sig9(b.s_by_contexts));
        assumption(&mut out, &b.ape);
    }
    if let Some(l) = &r.lemmas {
        let c = &l.lemmas;
        let _ = writeln!(
            out,
            "lemma campaign: {} samples, seed {}, tolerance {}",
            c.samples,
            c.seed,
            sig9(c.tol)
        );
        let _ = writeln!(
            out,
            "  Lemma 1 failures {}   Lemma 2 failures {}   vacuous {}",
            c.lemma1_failures, c.lemma2_failures, c.vacuous
        );
        let _ = writeln!(
            out,
            "  SPE without OM {}   max conclusion deviations {} / {}",
            c.spe_without_om,
            sig9(c.max_lemma1_deviation),
            sig9(c.max_lemma2_deviation)
        );
        let o = &l.opem;
        let _ = writeln!(out, "OPEM campaign: {} samples", o.samples);
        let _ = writeln!(
            out,
            "  failures {}   vacuous {}   max deviation {}   max |Σq - 1| {}",
            o.failures,
            o.vacuous,
            sig9(o.max_deviation),
            sig9(o.max_q_normalization_error)
        );
        let _ = writeln!(out, "non-vacuity witness:");
        lemma(&mut out, &l.non_vacuity_witness);
    }
    if let Some(s) = &r.search {
        let _ = writeln!(
            out,
            "search ({:?}, grid {}): grid S {}, best S {}",
            s.space,
            s.grid,
            sig9(s.grid_s),
            sig9(s.best_s)
        );
        for (name, v) in [
            ("charlie", &s.charlie),
            ("alice", &s.alice),
            ("debbie", &s.debbie),
            ("bob", &s.bob),
        ] {
            let _ = writeln!(out, "  {name:<8} {}", vector(v));
        }
        let _ = writeln!(
            out,
            "  charlie·alice = {}   debbie·bob = {}",
            sig9(s.charlie.dot(&s.alice)),
            sig9(s.debbie.dot(&s.bob))
        );
    }
    if let Some(w) = &r.wigner_demo {
        let _ = writeln!(out, "lab wave function (|system, device, friend>):");
        for (i, [re, im]) in w.lab_amplitudes.iter().enumerate() {
            if re.abs() > 0.0 || im.abs() > 0.0 {
                let _ = writeln!(out, "  |{i:03b}>  {} + {}i", sig9(*re), sig9(*im));
            }
        }
        let _ = writeln!(out, "reduced system state:");
        for row in &w.reduced_system {
            let _ = writeln!(
                out,
                "  [{} + {}i, {} + {}i]",
                sig9(row[0][0]),
                sig9(row[0][1]),
                sig9(row[1][0]),
                sig9(row[1][1])
            );
        }
    }
    if !r.checks.is_empty() {
        let _ = writeln!(out, "checks:");
        for c in &r.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            if c.detail.is_empty() {
                let _ = writeln!(out, "  [{mark}] {}", c.name);
            } else {
                let _ = writeln!(out, "  [{mark}] {} — {}", c.name, c.detail);
            }
        }
    }
    out
}
