//! One function per subcommand. Each returns a [`RunReport`]; failing
//! invariants are recorded as checks rather than returned as errors.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::path::Path;

use cfriend::causal::campaign::{lemma_campaign, opem_campaign};
use cfriend::causal::{check_ape, examples, lemma1_check, Verdict, DEFAULT_TOL};
use cfriend::polytope::{
    boxworld_construction, chsh, membership, signalling_check, tsirelson_search,
    MembershipCertificate, MEMBERSHIP_TOL, MIN_GRID,
};
use cfriend::tensor::{partial_trace, Complex64, DensityMatrix};
use cfriend::wigner::{
    channel_correlator, lab_map_f, lab_map_f_amplitudes, nst_check, ots_check, run_forward,
    run_reverse, PrepMeasureRecord,
};
use cfriend::BehaviorTable;

use crate::report::{sig9, BoxworldSection, Check, LemmaSection, RunReport, WignerDemoSection};
use crate::spec_file::{InputSpec, SpecFile};
use crate::CliError;

/// Tolerance for the time-symmetry and no-signalling checks unless the
/// spec or `--tol` says otherwise.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-12;
pub const DEFAULT_SAMPLES: usize = 500;
pub const DEFAULT_SEED: u64 = 20240601;
pub const DEFAULT_GRID: usize = 64;
pub const DEFAULT_REFINE: usize = 200;
const TSIRELSON: f64 = 2.0 * SQRT_2;

fn certificate_check(cert: &MembershipCertificate, behavior: &BehaviorTable) -> Check {
    Check::new(
        "membership certificate verifies",
        cert.verify(behavior, MEMBERSHIP_TOL),
        match cert {
            MembershipCertificate::Inside { .. } => {
                "convex weights reproduce the behavior".to_string()
            }
            MembershipCertificate::Outside { facet } => {
                format!(
                    "facet value {} against vertex bound {}",
                    sig9(facet.value),
                    sig9(facet.bound)
                )
            }
        },
    )
}

pub fn simulate(spec_path: &Path, reverse: bool, tol: Option<f64>) -> Result<RunReport, CliError> {
    let spec = SpecFile::load(spec_path)?;
    let tol = tol.or(spec.tolerance).unwrap_or(DEFAULT_SYMMETRY_TOL);
    let config = spec.config();
    let forward = run_forward(&config)?;
    let backward = run_reverse(&config)?;
    let behavior = if reverse { backward } else { forward };
    let rho = config.input_state();
    let mut oracle = [[0.0; 2]; 2];
    for (x, row) in oracle.iter_mut().enumerate() {
        for (y, v) in row.iter_mut().enumerate() {
            let (n, m) = (config.first_side(x), config.second_side(y));
            // the earlier measurement is the first argument
            *v = if reverse {
                channel_correlator(m, n, rho)
            } else {
                channel_correlator(n, m, rho)
            };
        }
    }
    let correlators = behavior.correlators();
    let oracle_gap = (0..4)
        .map(|k| (correlators[k / 2][k % 2] - oracle[k / 2][k % 2]).abs())
        .fold(0.0, f64::max);
    let ots = ots_check(
        &PrepMeasureRecord::from_behavior(&forward),
        &PrepMeasureRecord::from_behavior(&backward),
        tol,
    )?;
    let cert = membership(&behavior, MEMBERSHIP_TOL)?;

    let mut report = RunReport::new("simulate");
    report.seed = spec.seed;
    report.reverse = Some(reverse);
    report.s = Some(chsh(&behavior));
    report.correlators = Some(correlators);
    report.oracle_correlators = Some(oracle);
    report.nst = Some(nst_check(&config, tol)?);
    report.ots = Some(ots);
    report.checks.push(Check::new(
        "circuit matches channel oracle",
        oracle_gap <= 1e-10,
        format!("max |circuit - oracle| = {}", sig9(oracle_gap)),
    ));
    report.checks.push(certificate_check(&cert, &behavior));
    report.behavior = Some(behavior);
    report.membership = Some(cert);
    report.config = Some(spec);
    Ok(report)
}

pub fn membership_cmd(behavior_path: &Path, tol: Option<f64>) -> Result<RunReport, CliError> {
    let text = std::fs::read_to_string(behavior_path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", behavior_path.display())))?;
    let behavior: BehaviorTable = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", behavior_path.display())))?;
    let tol = tol.unwrap_or(MEMBERSHIP_TOL);
    let cert = membership(&behavior, tol)?;
    let mut report = RunReport::new("membership");
    report.s = Some(chsh(&behavior));
    report.correlators = Some(behavior.correlators());
    report.signalling = Some(signalling_check(&behavior, tol));
    report.checks.push(certificate_check(&cert, &behavior));
    report.membership = Some(cert);
    report.behavior = Some(behavior);
    Ok(report)
}

pub fn lemmas(samples: usize, seed: u64, tol: Option<f64>) -> Result<RunReport, CliError> {
    let tol = tol.unwrap_or(DEFAULT_TOL);
    let l = lemma_campaign(samples, seed, tol);
    let o = opem_campaign(samples, seed, tol);
    let (fwd, rev) = examples::nrc_not_ats_pair();
    let witness = lemma1_check(&fwd, &rev, tol);
    let mut report = RunReport::new("lemmas");
    report.seed = Some(seed);
    report.checks.push(Check::new(
        "Lemma 1 and Lemma 2 hold on every sample",
        l.clean(),
        format!(
            "{} + {} failures, {} vacuous, {} SPE-without-OM",
            l.lemma1_failures, l.lemma2_failures, l.vacuous, l.spe_without_om
        ),
    ));
    report.checks.push(Check::new(
        "OPEM: setting-free pseudo events on every sample",
        o.clean(),
        format!("{} failures, {} vacuous", o.failures, o.vacuous),
    ));
    report.checks.push(Check::new(
        "q normalized",
        o.max_q_normalization_error <= 1e-12,
        format!("max |Σq - 1| = {}", sig9(o.max_q_normalization_error)),
    ));
    report.checks.push(Check::new(
        "NRC without ATS breaks the Lemma 1 conclusion",
        witness.verdict == Verdict::Vacuous && witness.conclusion.verdict == Verdict::Fail,
        format!(
            "conclusion deviation {}",
            sig9(witness.conclusion.max_deviation)
        ),
    ));
    report.lemmas = Some(LemmaSection {
        lemmas: l,
        opem: o,
        non_vacuity_witness: witness,
    });
    Ok(report)
}

pub fn boxworld(tol: Option<f64>) -> Result<RunReport, CliError> {
    let tol = tol.unwrap_or(MEMBERSHIP_TOL);
    let (model, behavior) = boxworld_construction();
    let cert = membership(&behavior, tol)?;
    let s = chsh(&behavior);
    let mut report = RunReport::new("boxworld");
    report.s = Some(s);
    report.correlators = Some(behavior.correlators());
    report.signalling = Some(signalling_check(&behavior, tol));
    report.checks.push(Check::new(
        "S = 4",
        s == 4.0 && model.chsh_by_contexts() == 4.0,
        format!("S = {}", sig9(s)),
    ));
    report.checks.push(Check::new(
        "behavior is outside the polytope",
        !cert.is_inside(),
        "",
    ));
    report.checks.push(certificate_check(&cert, &behavior));
    let ape = check_ape(&model.pcd, DEFAULT_TOL);
    report
        .checks
        .push(Check::new("APE fails by construction", !ape.passed(), ""));
    report.boxworld = Some(BoxworldSection {
        s_by_contexts: model.chsh_by_contexts(),
        model,
        ape,
    });
    report.membership = Some(cert);
    report.behavior = Some(behavior);
    Ok(report)
}

pub fn sweep(
    grid: usize,
    refine: usize,
    seed: Option<u64>,
    spec_path: Option<&Path>,
) -> Result<RunReport, CliError> {
    let input = match spec_path {
        Some(p) => SpecFile::load(p)?.input_state,
        None => InputSpec::MaximallyMixed,
    };
    if grid < MIN_GRID {
        return Err(CliError::Usage(format!(
            "--grid must be at least {MIN_GRID}, got {grid}"
        )));
    }
    let result = tsirelson_search(&input.state(), grid, refine)?;
    let mut report = RunReport::new("sweep");
    report.seed = seed;
    report.s = Some(result.best_s);
    report.checks.push(Check::new(
        "refinement is monotone",
        result.history.windows(2).all(|w| w[0] <= w[1]) && result.best_s >= result.grid_s,
        format!(
            "grid S {} -> best S {}",
            sig9(result.grid_s),
            sig9(result.best_s)
        ),
    ));
    if input == InputSpec::MaximallyMixed {
        report.checks.push(Check::new(
            "below the Tsirelson bound",
            result.best_s <= TSIRELSON + 1e-6,
            format!("S - 2√2 = {}", sig9(result.best_s - TSIRELSON)),
        ));
    }
    report.search = Some(result);
    Ok(report)
}

pub fn wigner_demo() -> Result<RunReport, CliError> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let amplitudes = lab_map_f_amplitudes([h, h]);
    let psi = DensityMatrix::from_pure(&[h, h])?;
    let lab = lab_map_f(&psi)?;
    let reduced = partial_trace(&lab, &[2, 2, 2], 0)?;
    let mixture = DensityMatrix::maximally_mixed(2)?;
    let distance = reduced.matrix().max_abs_diff(mixture.matrix());
    let amp_error = amplitudes
        .iter()
        .enumerate()
        .map(|(i, a)| {
            (a - if i == 0 || i == 7 {
                h
            } else {
                Complex64::new(0.0, 0.0)
            })
            .norm()
        })
        .fold(0.0, f64::max);
    let m = reduced.matrix();
    let entry = |r, c| {
        let z: Complex64 = m.get(r, c);
        [z.re, z.im]
    };
    let mut report = RunReport::new("wigner-demo");
    report.checks.push(Check::new(
        "lab state is (|↑↑↑> + |↓↓↓>)/√2",
        amp_error <= 1e-12,
        format!("max amplitude error {}", sig9(amp_error)),
    ));
    report.checks.push(Check::new(
        "system alone is the even mixture of |↑> and |↓>",
        distance <= 1e-12,
        format!("max |ρ_S - I/2| = {}", sig9(distance)),
    ));
    report.wigner_demo = Some(WignerDemoSection {
        lab_amplitudes: amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        reduced_system: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]],
        reduced_distance_from_mixture: distance,
    });
    Ok(report)
}
