//! Operational mediation: the constructed `q` and the step from ATS and
//! NRC to setting-free pseudo events, without a global joint.

use super::bundle::{MarginalBundle, PcdArray, QTable};
use super::joint::Var;
use super::lemmas::LemmaReport;
use super::predicates::AssumptionReport;

/// `q(a,b,c,d|x,y) = p(c,d|x,y) p(a|x,c) p(b|y,c,d)`.
pub fn opem_q(bundle: &MarginalBundle) -> QTable {
    let (pcd, pa, pb) = (bundle.pcd(), bundle.pa(), bundle.pb());
    let mut q = [[[[[[0.0; 2]; 2]; 2]; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    for x in 0..2 {
                        for y in 0..2 {
                            q[a][b][c][d][x][y] = pcd[c][d][x][y] * pa[a][x][c] * pb[b][y][c][d];
                        }
                    }
                }
            }
        }
    }
    QTable::from_array(q)
}

/// Largest difference between the forward construction and the
/// time-reversed one, `q_rev(b,a,d,c|y,x)`, with the index where it occurs
/// (`[a, b, c, d, x, y]`).
pub fn ats_compatibility(fwd: &MarginalBundle, rev: &MarginalBundle) -> (f64, [usize; 6]) {
    let qf = opem_q(fwd);
    let qr = opem_q(rev);
    let mut worst = (0.0, [0; 6]);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    for x in 0..2 {
                        for y in 0..2 {
                            let dev = (qf.prob(a, b, c, d, x, y) - qr.prob(b, a, d, c, y, x)).abs();
                            if dev > worst.0 {
                                worst = (dev, [a, b, c, d, x, y]);
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}

/// Largest change of `pcd[p1][p2][s1][s2]` as the settings flagged in
/// `vary` (`[s1, s2]`) change. `names` translates the four indices back
/// to forward variables.
fn pcd_spread(pcd: &PcdArray, vary: [bool; 2], names: [Var; 4]) -> (f64, Vec<(Var, usize)>) {
    let mut worst = (0.0, Vec::new());
    for p1 in 0..2 {
        for p2 in 0..2 {
            for s1 in 0..2 {
                for s2 in 0..2 {
                    let t1 = if vary[0] { 1 - s1 } else { s1 };
                    let t2 = if vary[1] { 1 - s2 } else { s2 };
                    for (u1, u2) in [(t1, s2), (s1, t2), (t1, t2)] {
                        let dev = (pcd[p1][p2][s1][s2] - pcd[p1][p2][u1][u2]).abs();
                        if dev > worst.0 {
                            worst = (
                                dev,
                                vec![
                                    (names[0], p1),
                                    (names[1], p2),
                                    (names[2], s1),
                                    (names[3], s2),
                                ],
                            );
                        }
                    }
                }
            }
        }
    }
    worst
}

fn spread_report(
    predicate: &str,
    clause: &str,
    pcd: &PcdArray,
    vary: [bool; 2],
    names: [Var; 4],
    tol: f64,
) -> AssumptionReport {
    let (dev, at) = pcd_spread(pcd, vary, names);
    AssumptionReport::entrywise(predicate, clause, dev, at, tol)
}

/// Given ATS-compatible constructions and NRC in both time directions,
/// `p(c,d|x,y) = p(c,d)`. `rev` uses the exchanged roles described on
/// [`MarginalBundle`].
pub fn opem_mediator_independence(
    fwd: &MarginalBundle,
    rev: &MarginalBundle,
    tol: f64,
) -> LemmaReport {
    let (dev, [a, b, c, d, x, y]) = ats_compatibility(fwd, rev);
    let ats = AssumptionReport::entrywise(
        "ATS",
        "q(a,b,c,d|x,y) = q_rev(b,a,d,c|y,x)",
        dev,
        vec![
            (Var::A, a),
            (Var::B, b),
            (Var::C, c),
            (Var::D, d),
            (Var::X, x),
            (Var::Y, y),
        ],
        tol,
    );
    let forward_names = [Var::C, Var::D, Var::X, Var::Y];
    let reverse_names = [Var::D, Var::C, Var::Y, Var::X];
    LemmaReport::assemble(
        "OPEM mediator independence",
        vec![
            ats,
            spread_report(
                "NRC (forward)",
                "p(c,d|x,y) = p(c,d|x)",
                fwd.pcd(),
                [false, true],
                forward_names,
                tol,
            ),
            spread_report(
                "NRC (reverse)",
                "p(d,c|y,x) = p(d,c|y)",
                rev.pcd(),
                [false, true],
                reverse_names,
                tol,
            ),
        ],
        spread_report(
            "p(c,d) setting-free",
            "p(c,d|x,y) = p(c,d)",
            fwd.pcd(),
            [true, true],
            forward_names,
            tol,
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::{examples, sampler, Verdict, DEFAULT_TOL};

    #[test]
    fn q_of_setting_free_bundle_is_the_model_joint() {
        let f = examples::asymmetric_factors();
        let bundle = MarginalBundle::from_factors(&f).unwrap();
        let (joint, behavior) = f.build().unwrap();
        let q = opem_q(&bundle);
        assert!(q.normalization_error() < 1e-12);
        assert!(q.to_joint().unwrap().max_abs_diff(&joint).0 < 1e-15);
        assert!(q.reconstructed_behavior().unwrap().max_abs_diff(&behavior) < 1e-15);
        assert!(bundle.behavior().max_abs_diff(&behavior) < 1e-15);
    }

    #[test]
    fn sampled_pair_passes() {
        let (fwd, rev) = sampler::sample_opem_pair(7, 3);
        let report = opem_mediator_independence(&fwd, &rev, DEFAULT_TOL);
        assert_eq!(report.verdict, Verdict::Pass, "{report:?}");
    }

    #[test]
    fn x_dependent_pcd_is_vacuous() {
        let (fwd, _) = sampler::sample_opem_pair(7, 3);
        let rev = examples::role_swapped(&fwd).unwrap();
        let shifted = examples::x_dependent_pcd(&fwd, 0.2).unwrap();
        let report = opem_mediator_independence(&shifted, &rev, DEFAULT_TOL);
        assert_eq!(report.verdict, Verdict::Vacuous);
        assert_eq!(report.conclusion.verdict, Verdict::Fail);
    }
}
