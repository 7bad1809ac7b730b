//! Causal-Friendliness models: `p(c,d) p(a|x,c) p(b|y,c,d)`.

use serde::{Deserialize, Serialize};

use super::bundle::{check_pcd_free, check_response_a, check_response_b, ResponseA, ResponseB};
use super::joint::{for_each_index, JointTable, ZERO_JOINT};
use crate::behavior::{BehaviorTable, TableError};

/// The three factors of a model, `pcd[c][d]`, `pa[a][x][c]`,
/// `pb[b][y][c][d]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CfFactors {
    pub pcd: [[f64; 2]; 2],
    pub pa: ResponseA,
    pub pb: ResponseB,
}

impl CfFactors {
    pub fn validate(&self) -> Result<(), TableError> {
        check_pcd_free(&self.pcd)?;
        check_response_a(&self.pa)?;
        check_response_b(&self.pb)
    }

    pub fn build(&self) -> Result<(JointTable, BehaviorTable), TableError> {
        build_cf_model(&self.pcd, &self.pa, &self.pb)
    }

    pub fn build_reverse(&self) -> Result<JointTable, TableError> {
        build_reverse_cf_model(&self.pcd, &self.pa, &self.pb)
    }

    /// Deterministic factors: `c`, `d` fixed, `a = alpha[x]`, `b = beta[y]`
    /// (outcome indices).
    pub fn deterministic(alpha: [usize; 2], beta: [usize; 2]) -> Self {
        let mut pa = [[[0.0; 2]; 2]; 2];
        let mut pb = [[[[0.0; 2]; 2]; 2]; 2];
        for x in 0..2 {
            for c in 0..2 {
                pa[alpha[x]][x][c] = 1.0;
            }
        }
        for y in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    pb[beta[y]][y][c][d] = 1.0;
                }
            }
        }
        Self {
            pcd: [[1.0, 0.0], [0.0, 0.0]],
            pa,
            pb,
        }
    }
}

/// Joint `p(c,d) p(a|x,c) p(b|y,c,d)` and its observed behavior. The
/// behavior is summed directly, not read off the joint.
pub fn build_cf_model(
    pcd: &[[f64; 2]; 2],
    pa: &ResponseA,
    pb: &ResponseB,
) -> Result<(JointTable, BehaviorTable), TableError> {
    check_pcd_free(pcd)?;
    check_response_a(pa)?;
    check_response_b(pb)?;
    let joint = JointTable::from_fn(|[c, a, d, b, x, y]| pcd[c][d] * pa[a][x][c] * pb[b][y][c][d])?;
    let behavior = BehaviorTable::from_fn(|a, b, x, y| {
        let mut acc = 0.0;
        for c in 0..2 {
            for d in 0..2 {
                acc += pcd[c][d] * pa[a][x][c] * pb[b][y][c][d];
            }
        }
        acc
    })?;
    Ok((joint, behavior))
}

/// The same model assembled in reverse temporal order,
/// `p(d) p(c|d) p(b|y,c,d) p(a|x,c)`, stored in reverse layout
/// `[d][b][c][a][y][x]`.
pub fn build_reverse_cf_model(
    pcd: &[[f64; 2]; 2],
    pa: &ResponseA,
    pb: &ResponseB,
) -> Result<JointTable, TableError> {
    check_pcd_free(pcd)?;
    check_response_a(pa)?;
    check_response_b(pb)?;
    let pd = [pcd[0][0] + pcd[1][0], pcd[0][1] + pcd[1][1]];
    let c_given_d = |c: usize, d: usize| if pd[d] > 0.0 { pcd[c][d] / pd[d] } else { 0.0 };
    let mut p = ZERO_JOINT;
    for_each_index(|[d, b, c, a, y, x]| {
        p[d][b][c][a][y][x] = pd[d] * c_given_d(c, d) * pb[b][y][c][d] * pa[a][x][c];
    });
    JointTable::new(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::{check_ats, check_nrc, check_om, check_spe, DEFAULT_TOL};

    #[test]
    fn uniform_model_is_uniform() {
        let f = CfFactors {
            pcd: [[0.25; 2]; 2],
            pa: [[[0.5; 2]; 2]; 2],
            pb: [[[[0.5; 2]; 2]; 2]; 2],
        };
        let (joint, behavior) = f.build().unwrap();
        assert_eq!(behavior, BehaviorTable::uniform());
        assert_eq!(joint, JointTable::uniform());
    }

    #[test]
    fn deterministic_model_is_deterministic() {
        let (_, behavior) = CfFactors::deterministic([0, 1], [1, 1]).build().unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(behavior.prob([0, 1][x], 1, x, y), 1.0);
            }
        }
    }

    #[test]
    fn model_passes_its_own_assumptions() {
        let f = CfFactors {
            pcd: [[0.1, 0.2], [0.3, 0.4]],
            pa: [[[0.9, 0.2], [0.4, 0.5]], [[0.1, 0.8], [0.6, 0.5]]],
            pb: [
                [[[0.7, 0.1], [0.3, 0.5]], [[0.2, 0.6], [1.0, 0.0]]],
                [[[0.3, 0.9], [0.7, 0.5]], [[0.8, 0.4], [0.0, 1.0]]],
            ],
        };
        let (fwd, behavior) = f.build().unwrap();
        let rev = f.build_reverse().unwrap();
        assert!(check_nrc(&fwd, DEFAULT_TOL).passed());
        assert!(check_spe(&fwd, DEFAULT_TOL).passed());
        assert!(check_om(&fwd, DEFAULT_TOL).passed());
        let ats = check_ats(&fwd, &rev, DEFAULT_TOL);
        assert!(ats.passed(), "{ats:?}");
        assert!(behavior.max_abs_diff(&fwd.marginalize_ab()) < 1e-15);
    }

    #[test]
    fn rejects_unnormalized_factors() {
        let mut f = CfFactors::deterministic([0, 0], [0, 0]);
        f.pa[0][1][1] = 0.5;
        assert!(f.build().is_err());
    }
}
