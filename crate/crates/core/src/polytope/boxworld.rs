//! Dropping absoluteness of the pseudo events: a setting-dependent
//! `p(c,d|x,y)` with deterministic responses reaches `S = 4`.

use serde::{Deserialize, Serialize};

use crate::behavior::{BehaviorTable, TableError};
use crate::causal::{MarginalBundle, PcdArray};
use crate::outcome::sign;

/// `p(c,d|x,y)` together with response expectations `A[x][c]` and
/// `B[y][c][d]` in `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContextDependentModel {
    pub pcd: PcdArray,
    pub a_response: [[f64; 2]; 2],
    pub b_response: [[[f64; 2]; 2]; 2],
}

impl ContextDependentModel {
    /// `p(a|x,c) = (1 + a A[x][c]) / 2`, likewise for `b`.
    pub fn bundle(&self) -> Result<MarginalBundle, TableError> {
        let mut pa = [[[0.0; 2]; 2]; 2];
        let mut pb = [[[[0.0; 2]; 2]; 2]; 2];
        for o in 0..2 {
            for s in 0..2 {
                for c in 0..2 {
                    pa[o][s][c] = (1.0 + sign(o) * self.a_response[s][c]) / 2.0;
                    for d in 0..2 {
                        pb[o][s][c][d] = (1.0 + sign(o) * self.b_response[s][c][d]) / 2.0;
                    }
                }
            }
        }
        MarginalBundle::new(self.pcd, pa, pb)
    }

    /// `Σ_{c,d} p(c,d|x,y) p(a|x,c) p(b|y,c,d)`.
    pub fn behavior(&self) -> Result<BehaviorTable, TableError> {
        Ok(self.bundle()?.behavior())
    }

    /// CHSH summed directly over contexts,
    /// `Σ_{x,y} s_xy Σ_{c,d} p(c,d|x,y) A[x][c] B[y][c][d]`.
    pub fn chsh_by_contexts(&self) -> f64 {
        let mut s = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                let sign_xy = if x == 1 && y == 1 { -1.0 } else { 1.0 };
                for c in 0..2 {
                    for d in 0..2 {
                        s += sign_xy
                            * self.pcd[c][d][x][y]
                            * self.a_response[x][c]
                            * self.b_response[y][c][d];
                    }
                }
            }
        }
        s
    }
}

/// The pseudo events copy the settings, `(c,d) = (x,y)`, with responses
/// `A_0^(0) = A_1^(1) = B_0^(00) = B_1^(01) = B_0^(10) = +1`,
/// `B_1^(11) = -1`. Responses in contexts that never occur are set to `+1`.
pub fn boxworld_construction() -> (ContextDependentModel, BehaviorTable) {
    let mut pcd = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            pcd[x][y][x][y] = 1.0;
        }
    }
    let mut b_response = [[[1.0; 2]; 2]; 2];
    b_response[1][1][1] = -1.0;
    let model = ContextDependentModel {
        pcd,
        a_response: [[1.0; 2]; 2],
        b_response,
    };
    let behavior = model.behavior().expect("construction is normalized");
    (model, behavior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::{check_ape, DEFAULT_TOL};
    use crate::polytope::chsh;

    #[test]
    fn reaches_four_both_ways() {
        let (model, behavior) = boxworld_construction();
        assert_eq!(chsh(&behavior), 4.0);
        assert_eq!(model.chsh_by_contexts(), 4.0);
        assert!(!check_ape(&model.pcd, DEFAULT_TOL).passed());
    }
}
