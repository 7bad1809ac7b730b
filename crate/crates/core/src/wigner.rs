//! Circuit-level simulation of the Wigner's Friend lab map and of the
//! timelike Causal Friendliness protocol.
//!
//! Each friend's measurement is a dilation: a unitary that copies the
//! system's eigenbasis label into a fresh memory qubit. The super-observer
//! either reads the memory (setting `0`, so `a := c`) or applies the inverse
//! unitary and measures the restored system in their own basis (setting
//! `1`). Only the system qubit travels on to the next lab, so the pipeline
//! never holds more than one system and one memory qubit at a time.
//!
//! Memory convention: the memory starts in `|0>` and ends in `|1>` exactly
//! when the friend saw `-1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::behavior::{check_sum, BehaviorTable, TableError};
use crate::outcome::Outcome;
use crate::tensor::{
    kron, partial_trace_matrix, projector_from_bloch, BlochVector, ComplexMatrix, DensityMatrix,
    TensorError,
};

/// Branches rarer than this contribute zero and are not renormalized.
pub const BRANCH_EPS: f64 = 1e-14;

/// Maximum residual entanglement with the memory tolerated after a rewind.
pub const REWIND_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WignerError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("input state must be a qubit, got dimension {0}")]
    InputDimension(usize),
    #[error("memory qubit not restored by the rewind (deviation {0:e})")]
    RewindFailed(f64),
    #[error("setting labels differ: {0}")]
    LabelMismatch(String),
}

/// One of the four agents of the protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Charlie,
    Alice,
    Debbie,
    Bob,
}

/// Input state plus the four observables. Charlie's observable is the one
/// read out at `x = 0`, Alice's is measured at `x = 1`; likewise Debbie and
/// Bob for `y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioConfig {
    input_state: DensityMatrix,
    charlie: BlochVector,
    alice: BlochVector,
    debbie: BlochVector,
    bob: BlochVector,
}

impl ScenarioConfig {
    pub fn new(
        input_state: DensityMatrix,
        charlie: BlochVector,
        alice: BlochVector,
        debbie: BlochVector,
        bob: BlochVector,
    ) -> Result<Self, WignerError> {
        if input_state.dim() != 2 {
            return Err(WignerError::InputDimension(input_state.dim()));
        }
        Ok(Self {
            input_state,
            charlie,
            alice,
            debbie,
            bob,
        })
    }

    /// Maximally mixed input with the optimal settings: Charlie `σ_z`,
    /// Alice `σ_x`, Debbie `(σ_z+σ_x)/√2`, Bob `(σ_z−σ_x)/√2`.
    pub fn paper_optimal() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            input_state: DensityMatrix::maximally_mixed(2).expect("I/2"),
            charlie: BlochVector::z_axis(),
            alice: BlochVector::x_axis(),
            debbie: BlochVector::new(h, 0.0, h).expect("unit"),
            bob: BlochVector::new(-h, 0.0, h).expect("unit"),
        }
    }

    pub fn with_input(&self, input_state: DensityMatrix) -> Result<Self, WignerError> {
        Self::new(input_state, self.charlie, self.alice, self.debbie, self.bob)
    }

    pub fn input_state(&self) -> &DensityMatrix {
        &self.input_state
    }

    pub fn observable(&self, party: Party) -> &BlochVector {
        match party {
            Party::Charlie => &self.charlie,
            Party::Alice => &self.alice,
            Party::Debbie => &self.debbie,
            Party::Bob => &self.bob,
        }
    }

    /// Observable behind Alice's reported outcome for setting `x`.
    pub fn first_side(&self, x: usize) -> &BlochVector {
        if x == 0 {
            &self.charlie
        } else {
            &self.alice
        }
    }

    /// Observable behind Bob's reported outcome for setting `y`.
    pub fn second_side(&self, y: usize) -> &BlochVector {
        if y == 0 {
            &self.debbie
        } else {
            &self.bob
        }
    }
}

/// Isometry `|↑> -> |↑↑↑>`, `|↓> -> |↓↓↓>` from the system into
/// system ⊗ device ⊗ friend, with `|↑> = |0>`.
fn lab_isometry() -> ComplexMatrix {
    ComplexMatrix::from_fn(8, 2, |r, c| match (r, c) {
        (0, 0) | (7, 1) => Complex64::new(1.0, 0.0),
        _ => Complex64::new(0.0, 0.0),
    })
}

/// The lab map on amplitudes: `α|↑> + β|↓>  ->  α|↑↑↑> + β|↓↓↓>`.
pub fn lab_map_f_amplitudes(psi: [Complex64; 2]) -> [Complex64; 8] {
    let out = lab_isometry().apply(&psi).expect("8x2 isometry on a qubit");
    out.try_into().expect("eight amplitudes")
}

/// The lab map as a channel `ρ -> V ρ V†` onto the three-qubit lab.
pub fn lab_map_f(system_state: &DensityMatrix) -> Result<DensityMatrix, WignerError> {
    if system_state.dim() != 2 {
        return Err(WignerError::InputDimension(system_state.dim()));
    }
    let v = lab_isometry();
    let lab = v.conjugate(system_state.matrix())?;
    Ok(DensityMatrix::new(lab.hermitian_part())?)
}

/// `U = Π₊ ⊗ I + Π₋ ⊗ X` on system ⊗ memory: flips the memory exactly when
/// the system is in the `-1` eigenstate of `basis·σ`. For `basis = z` this is
/// the CNOT matrix. `U` is Hermitian, so `U† = U`.
pub fn dilation_unitary(basis: &BlochVector) -> ComplexMatrix {
    let plus = projector_from_bloch(basis, Outcome::Plus);
    let minus = projector_from_bloch(basis, Outcome::Minus);
    let flip = crate::tensor::pauli::x();
    kron(&plus, &ComplexMatrix::identity(2))
        .add(&kron(&minus, &flip))
        .expect("4x4")
}

#[derive(Clone, Debug)]
struct Branch {
    probability: f64,
    state: Option<ComplexMatrix>,
}

impl Branch {
    fn from_unnormalized(unnormalized: ComplexMatrix) -> Self {
        let probability = unnormalized.trace().expect("square").re;
        if probability < BRANCH_EPS {
            return Self {
                probability: 0.0,
                state: None,
            };
        }
        Self {
            probability,
            state: Some(unnormalized.hermitian_part().scale_real(1.0 / probability)),
        }
    }
}

/// One friend + super-observer stage acting on a qubit state. Returns the
/// branch for each reported outcome, indexed `+1 -> 0`, `-1 -> 1`.
fn friend_stage(
    rho: &ComplexMatrix,
    friend: &BlochVector,
    observer: &BlochVector,
    rewind: bool,
) -> Result<[Branch; 2], WignerError> {
    let fresh_memory = ComplexMatrix::diag(&[1.0, 0.0]);
    let u = dilation_unitary(friend);
    let after_friend = u.conjugate(&kron(rho, &fresh_memory))?;

    if !rewind {
        // open the lab: read the memory, report the friend's outcome
        let branch = |o: usize| -> Result<Branch, WignerError> {
            let mut ket = [0.0, 0.0];
            ket[o] = 1.0;
            let proj = kron(&ComplexMatrix::identity(2), &ComplexMatrix::diag(&ket));
            let collapsed = proj.matmul(&after_friend)?.matmul(&proj)?;
            Ok(Branch::from_unnormalized(partial_trace_matrix(
                &collapsed,
                &[2, 2],
                0,
            )?))
        };
        return Ok([branch(0)?, branch(1)?]);
    }

    let restored = u.dagger().conjugate(&after_friend)?;
    let system = partial_trace_matrix(&restored, &[2, 2], 0)?;
    let residual = restored.max_abs_diff(&kron(&system, &fresh_memory));
    if residual > REWIND_TOL {
        return Err(WignerError::RewindFailed(residual));
    }
    let branch = |o: Outcome| -> Result<Branch, WignerError> {
        let proj = projector_from_bloch(observer, o);
        Ok(Branch::from_unnormalized(proj.conjugate(&system)?))
    };
    Ok([branch(Outcome::Plus)?, branch(Outcome::Minus)?])
}

/// Simulates the forward-time protocol (Charlie–Alice, then Debbie–Bob)
/// and returns `p(a,b|x,y)`.
pub fn run_forward(config: &ScenarioConfig) -> Result<BehaviorTable, WignerError> {
    let rho = config.input_state.matrix();
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        let first = friend_stage(rho, &config.charlie, &config.alice, x == 1)?;
        for y in 0..2 {
            for (a, branch) in first.iter().enumerate() {
                let Some(state) = &branch.state else { continue };
                let second = friend_stage(state, &config.debbie, &config.bob, y == 1)?;
                for (b, inner) in second.iter().enumerate() {
                    p[a][b][x][y] = branch.probability * inner.probability;
                }
            }
        }
    }
    Ok(BehaviorTable::new(p)?)
}

/// Simulates the time-reversed ordering (Debbie–Bob first, then
/// Charlie–Alice). The result `p_←(b,a|y,x)` is re-indexed into the same
/// `[a][b][x][y]` layout as [`run_forward`].
pub fn run_reverse(config: &ScenarioConfig) -> Result<BehaviorTable, WignerError> {
    let rho = config.input_state.matrix();
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for y in 0..2 {
        let first = friend_stage(rho, &config.debbie, &config.bob, y == 1)?;
        for x in 0..2 {
            for (b, branch) in first.iter().enumerate() {
                let Some(state) = &branch.state else { continue };
                let second = friend_stage(state, &config.charlie, &config.alice, x == 1)?;
                for (a, inner) in second.iter().enumerate() {
                    p[a][b][x][y] = branch.probability * inner.probability;
                }
            }
        }
    }
    Ok(BehaviorTable::new(p)?)
}

/// `Σ_{a,b} a·b·Tr[Π_b^m Π_a^n ρ Π_a^n]`: two sequential projective
/// measurements with no dilation. Independent of the circuit pipeline.
pub fn channel_correlator(n: &BlochVector, m: &BlochVector, rho_in: &DensityMatrix) -> f64 {
    let mut acc = 0.0;
    for a in Outcome::ALL {
        let pa = projector_from_bloch(n, a);
        let post = pa.conjugate(rho_in.matrix()).expect("2x2");
        for b in Outcome::ALL {
            let pb = projector_from_bloch(m, b);
            let prob = pb.matmul(&post).expect("2x2").trace().expect("square").re;
            acc += a.value() * b.value() * prob;
        }
    }
    acc
}

/// A prepare–measure table `p(e,f|u,v)`.
///
/// Records are always indexed by the forward-time roles: `(e, u)` belong to
/// the preparing pair and `(f, v)` to the measuring pair. A record of the
/// time-reversed experiment therefore stores `p_←(f,e|v,u)` at `[u][v][e][f]`,
/// which is exactly how [`run_reverse`] lays out its output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrepMeasureRecord {
    prep_settings: Vec<String>,
    meas_settings: Vec<String>,
    p: Vec<Vec<[[f64; 2]; 2]>>,
}

impl PrepMeasureRecord {
    pub fn new(
        prep_settings: Vec<String>,
        meas_settings: Vec<String>,
        p: Vec<Vec<[[f64; 2]; 2]>>,
    ) -> Result<Self, WignerError> {
        if p.len() != prep_settings.len() || p.iter().any(|row| row.len() != meas_settings.len()) {
            return Err(WignerError::LabelMismatch(
                "table shape does not match the setting labels".to_string(),
            ));
        }
        for (u, row) in p.iter().enumerate() {
            for (v, cell) in row.iter().enumerate() {
                let mut sum = 0.0;
                for (e, line) in cell.iter().enumerate() {
                    for (f, &value) in line.iter().enumerate() {
                        crate::behavior::check_probability(value, &[e, f, u, v])?;
                        sum += value;
                    }
                }
                check_sum(sum, &[u, v])?;
            }
        }
        Ok(Self {
            prep_settings,
            meas_settings,
            p,
        })
    }

    /// Labels `x=0, x=1` for the preparation and `y=0, y=1` for the
    /// measurement.
    pub fn from_behavior(behavior: &BehaviorTable) -> Self {
        let p = (0..2)
            .map(|u| {
                (0..2)
                    .map(|v| {
                        let mut cell = [[0.0; 2]; 2];
                        for (e, line) in cell.iter_mut().enumerate() {
                            for (f, value) in line.iter_mut().enumerate() {
                                *value = behavior.prob(e, f, u, v);
                            }
                        }
                        cell
                    })
                    .collect()
            })
            .collect();
        Self {
            prep_settings: vec!["x=0".into(), "x=1".into()],
            meas_settings: vec!["y=0".into(), "y=1".into()],
            p,
        }
    }

    pub fn prob(&self, e: usize, f: usize, u: usize, v: usize) -> f64 {
        self.p[u][v][e][f]
    }

    pub fn prep_settings(&self) -> &[String] {
        &self.prep_settings
    }

    pub fn meas_settings(&self) -> &[String] {
        &self.meas_settings
    }

    /// Returns a copy with `delta` added to one entry; no renormalization.
    pub fn perturbed(&self, e: usize, f: usize, u: usize, v: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.p[u][v][e][f] += delta;
        out
    }
}

/// Verdict plus the largest deviation seen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub max_deviation: f64,
}

/// Operational time symmetry: `p_←(f,e|v,u) = p_→(e,f|u,v)` for every
/// argument, within `tol`.
pub fn ots_check(
    forward: &PrepMeasureRecord,
    reverse: &PrepMeasureRecord,
    tol: f64,
) -> Result<Verdict, WignerError> {
    if forward.prep_settings != reverse.prep_settings
        || forward.meas_settings != reverse.meas_settings
    {
        return Err(WignerError::LabelMismatch(format!(
            "forward ({:?} / {:?}) vs reverse ({:?} / {:?})",
            forward.prep_settings,
            forward.meas_settings,
            reverse.prep_settings,
            reverse.meas_settings
        )));
    }
    let mut worst: f64 = 0.0;
    for (fu, ru) in forward.p.iter().zip(&reverse.p) {
        for (fc, rc) in fu.iter().zip(ru) {
            for e in 0..2 {
                for f in 0..2 {
                    worst = worst.max((fc[e][f] - rc[e][f]).abs());
                }
            }
        }
    }
    Ok(Verdict {
        holds: worst <= tol,
        max_deviation: worst,
    })
}

/// No-signalling-in-time conditions on the forward behavior.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NstReport {
    /// `Σ_b p(a,b|x,y)` independent of `y`: later choices leave earlier
    /// outcomes alone.
    pub past_unaffected_by_future: Verdict,
    /// `Σ_a p(a,b|x,y)` independent of `x`: earlier choices leave later
    /// outcomes alone. This is the condition that defines the NS_T sector.
    pub future_unaffected_by_past: Verdict,
    pub max_deviation: f64,
}

impl NstReport {
    pub fn in_sector(&self) -> bool {
        self.past_unaffected_by_future.holds && self.future_unaffected_by_past.holds
    }
}

pub fn nst_check(config: &ScenarioConfig, tol: f64) -> Result<NstReport, WignerError> {
    Ok(nst_from_behavior(&run_forward(config)?, tol))
}

pub(crate) fn nst_from_behavior(behavior: &BehaviorTable, tol: f64) -> NstReport {
    let past = behavior.alice_marginal_spread();
    let future = behavior.bob_marginal_spread();
    NstReport {
        past_unaffected_by_future: Verdict {
            holds: past <= tol,
            max_deviation: past,
        },
        future_unaffected_by_past: Verdict {
            holds: future <= tol,
            max_deviation: future,
        },
        max_deviation: past.max(future),
    }
}

/// Correlators `<A_x B_y>` predicted by [`channel_correlator`] for a config.
pub fn oracle_correlators(config: &ScenarioConfig) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for (x, row) in out.iter_mut().enumerate() {
        for (y, value) in row.iter_mut().enumerate() {
            *value = channel_correlator(
                config.first_side(x),
                config.second_side(y),
                &config.input_state,
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{is_unitary, partial_trace};
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn lab_map_on_basis_state() {
        let out = lab_map_f_amplitudes([c(1.0), c(0.0)]);
        assert_eq!(out[0], c(1.0));
        assert!(out[1..].iter().all(|z| *z == c(0.0)));
    }

    #[test]
    fn lab_map_superposition_and_marginal() {
        let amps = lab_map_f_amplitudes([c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]);
        assert!((amps[0] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((amps[7] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        let psi = DensityMatrix::from_pure(&[c(1.0), c(1.0)]).unwrap();
        let lab = lab_map_f(&psi).unwrap();
        assert!((lab.purity() - 1.0).abs() < 1e-12);
        let system = partial_trace(&lab, &[2, 2, 2], 0).unwrap();
        assert!(system.approx_eq(&DensityMatrix::maximally_mixed(2).unwrap(), 1e-15));
        assert!(matches!(
            lab_map_f(&DensityMatrix::maximally_mixed(4).unwrap()),
            Err(WignerError::InputDimension(4))
        ));
    }

    #[test]
    fn dilation_in_z_is_cnot() {
        let cnot = ComplexMatrix::from_real(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, 1.0, 0.0,
            ],
        )
        .unwrap();
        assert!(dilation_unitary(&BlochVector::z_axis()).approx_eq(&cnot, 0.0));
    }

    #[test]
    fn dilation_is_unitary_and_entangles() {
        let u = dilation_unitary(&BlochVector::x_axis());
        assert!(is_unitary(&u, 1e-12).unwrap());
        let uz = dilation_unitary(&BlochVector::z_axis());
        let out = uz
            .apply(&[c(FRAC_1_SQRT_2), c(0.0), c(FRAC_1_SQRT_2), c(0.0)])
            .unwrap();
        let bell = [c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)];
        for (o, e) in out.iter().zip(bell.iter()) {
            assert!((o - e).norm() < 1e-15);
        }
    }

    #[test]
    fn optimal_settings_reach_two_root_two() {
        let behavior = run_forward(&ScenarioConfig::paper_optimal()).unwrap();
        let e = behavior.correlators();
        let s = e[0][0] + e[0][1] + e[1][0] - e[1][1];
        assert!((s - 2.0 * SQRT_2).abs() < 1e-9);
        assert!((e[1][1] + FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn repeated_eigenstate_measurement_is_certain() {
        let z = BlochVector::z_axis();
        let cfg = ScenarioConfig::new(DensityMatrix::basis(2, 0).unwrap(), z, z, z, z).unwrap();
        let behavior = run_forward(&cfg).unwrap();
        assert_eq!(behavior.prob(0, 0, 0, 0), 1.0);
    }

    #[test]
    fn config_rejects_non_qubit_input() {
        let z = BlochVector::z_axis();
        assert!(matches!(
            ScenarioConfig::new(DensityMatrix::maximally_mixed(4).unwrap(), z, z, z, z),
            Err(WignerError::InputDimension(4))
        ));
    }

    #[test]
    fn channel_correlator_cases() {
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let z = BlochVector::z_axis();
        assert!((channel_correlator(&z, &z, &mixed) - 1.0).abs() < 1e-15);
        assert!(channel_correlator(&z, &BlochVector::x_axis(), &mixed).abs() < 1e-15);
        let m = BlochVector::new(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2).unwrap();
        assert!((channel_correlator(&z, &m, &mixed) - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn ots_label_mismatch_and_perturbation() {
        let rec = PrepMeasureRecord::from_behavior(&BehaviorTable::uniform());
        assert!(ots_check(&rec, &rec, 1e-12).unwrap().holds);
        let bumped = rec.perturbed(0, 0, 1, 1, 0.01);
        let verdict = ots_check(&rec, &bumped, 1e-12).unwrap();
        assert!(!verdict.holds);
        assert!((verdict.max_deviation - 0.01).abs() < 1e-15);
        let relabeled = PrepMeasureRecord::new(
            vec!["u0".into(), "u1".into()],
            vec!["y=0".into(), "y=1".into()],
            vec![vec![[[0.25; 2]; 2]; 2]; 2],
        )
        .unwrap();
        assert!(matches!(
            ots_check(&rec, &relabeled, 1e-12),
            Err(WignerError::LabelMismatch(_))
        ));
    }

    #[test]
    fn record_validation() {
        assert!(PrepMeasureRecord::new(
            vec!["u".into()],
            vec!["v".into()],
            vec![vec![[[0.5, 0.5], [0.5, 0.5]]]],
        )
        .is_err());
        assert!(PrepMeasureRecord::new(vec!["u".into()], vec![], vec![vec![]]).is_ok());
    }
}
