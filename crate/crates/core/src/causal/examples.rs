//! Hand-built tables that separate the assumptions from one another.

use super::bundle::MarginalBundle;
use super::joint::JointTable;
use super::model::CfFactors;
use crate::behavior::TableError;

/// A model with no symmetry between its two sides.
pub fn asymmetric_factors() -> CfFactors {
    CfFactors {
        pcd: [[0.1, 0.2], [0.3, 0.4]],
        pa: [[[0.9, 0.2], [0.4, 0.5]], [[0.1, 0.8], [0.6, 0.5]]],
        pb: [
            [[[0.7, 0.1], [0.3, 0.5]], [[0.2, 0.6], [1.0, 0.0]]],
            [[[0.3, 0.9], [0.7, 0.5]], [[0.8, 0.4], [0.0, 1.0]]],
        ],
    }
}

/// `p(c=+1|x) = 1/2 + delta (1/2 - x)`; everything else uniform. Violates
/// the first NRC clause by `delta`.
pub fn c_depends_on_x(delta: f64) -> Result<JointTable, TableError> {
    JointTable::from_fn(|[c, _, _, _, x, _]| {
        let plus = 0.5 + delta * (0.5 - x as f64);
        (if c == 0 { plus } else { 1.0 - plus }) / 8.0
    })
}

/// `b` depends on `x` (by 0.3) but not on `a`: SPE holds, OM does not.
pub fn spe_not_om() -> JointTable {
    JointTable::from_fn(|[_, _, _, b, x, _]| {
        let plus = if x == 0 { 0.65 } else { 0.35 };
        (if b == 0 { plus } else { 1.0 - plus }) / 8.0
    })
    .expect("normalized by construction")
}

/// `b` copies `a` with probability 0.8: both SPE and OM fail.
pub fn b_depends_on_a() -> JointTable {
    JointTable::from_fn(|[_, a, _, b, _, _]| if a == b { 0.8 / 8.0 } else { 0.2 / 8.0 })
        .expect("normalized by construction")
}

/// A forward table obeying NRC in which `d = c XOR x`, paired with a
/// uniform reverse table. ATS fails, and so does `p(c,d|x,y) = p(c,d)`.
pub fn nrc_not_ats_pair() -> (JointTable, JointTable) {
    let fwd = JointTable::from_fn(
        |[c, a, d, _, x, _]| {
            if a == c && d == c ^ x {
                0.25
            } else {
                0.0
            }
        },
    )
    .expect("normalized by construction");
    (fwd, JointTable::uniform())
}

/// The time-reversed bundle of a forward bundle whose `p(b|y,c,d)` does
/// not depend on `c`: `p(d,c|y,x) = p(c,d|x,y)`, `p(b|y,d)`, `p(a|x,d,c) =
/// p(a|x,c)`. `None` if `b` does depend on `c`.
pub fn role_swapped(fwd: &MarginalBundle) -> Option<MarginalBundle> {
    let (pcd, pa, pb) = (fwd.pcd(), fwd.pa(), fwd.pb());
    let mut rpcd = [[[[0.0; 2]; 2]; 2]; 2];
    let mut rpa = [[[0.0; 2]; 2]; 2];
    let mut rpb = [[[[0.0; 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for s in 0..2 {
                for t in 0..2 {
                    // i = c, j = d, s = x, t = y
                    rpcd[j][i][t][s] = pcd[i][j][s][t];
                    // i = b, s = y, j = d, t = c
                    if (pb[i][s][t][j] - pb[i][s][0][j]).abs() > 1e-12 {
                        return None;
                    }
                    rpa[i][s][j] = pb[i][s][0][j];
                    // i = a, s = x, j = d, t = c
                    rpb[i][s][j][t] = pa[i][s][t];
                }
            }
        }
    }
    MarginalBundle::new(rpcd, rpa, rpb).ok()
}

/// `bundle` with `p(c,d|x=1,y)` mixed towards the point mass on
/// `(c,d) = (+1,+1)` with weight `lambda`.
pub fn x_dependent_pcd(bundle: &MarginalBundle, lambda: f64) -> Result<MarginalBundle, TableError> {
    let mut pcd = *bundle.pcd();
    for c in 0..2 {
        for d in 0..2 {
            for y in 0..2 {
                let point = if (c, d) == (0, 0) { 1.0 } else { 0.0 };
                pcd[c][d][1][y] = (1.0 - lambda) * pcd[c][d][1][y] + lambda * point;
            }
        }
    }
    MarginalBundle::new(pcd, *bundle.pa(), *bundle.pb())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::{check_nrc, check_om, check_spe, Var, Verdict, DEFAULT_TOL};

    #[test]
    fn c_on_x_fails_first_clause() {
        let report = check_nrc(&c_depends_on_x(0.2).unwrap(), DEFAULT_TOL);
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(report.clauses[0].max_deviation >= 0.2 - 1e-12);
        let witness = report.witness.unwrap();
        assert_eq!(witness.clause, "p(c|x,y) = p(c)");
        assert!(witness.at.iter().any(|(v, _)| *v == Var::C));
    }

    #[test]
    fn spe_and_om_separate() {
        let j = spe_not_om();
        assert!(check_spe(&j, DEFAULT_TOL).passed());
        let om = check_om(&j, DEFAULT_TOL);
        assert!(!om.passed());
        assert!((om.max_deviation - 0.3).abs() < 1e-12);
        let k = b_depends_on_a();
        assert!(!check_spe(&k, DEFAULT_TOL).passed());
        assert!(!check_om(&k, DEFAULT_TOL).passed());
    }

    #[test]
    fn role_swap_refuses_c_dependent_b() {
        let f = asymmetric_factors();
        let bundle = MarginalBundle::from_factors(&f).unwrap();
        assert!(role_swapped(&bundle).is_none());
    }
}
