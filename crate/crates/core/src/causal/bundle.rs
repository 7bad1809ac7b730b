//! Operational marginals without a presumed global joint.

use serde::{Deserialize, Serialize};

use super::joint::{JointTable, ZERO_JOINT};
use super::model::CfFactors;
use crate::behavior::{check_probability, check_sum, BehaviorTable, TableError};

/// `pcd[c][d][x][y] = p(c,d|x,y)`.
pub type PcdArray = [[[[f64; 2]; 2]; 2]; 2];
/// `pa[a][x][c] = p(a|x,c)`.
pub type ResponseA = [[[f64; 2]; 2]; 2];
/// `pb[b][y][c][d] = p(b|y,c,d)`.
pub type ResponseB = [[[[f64; 2]; 2]; 2]; 2];
/// `q[a][b][c][d][x][y]`.
pub type QArray = [[[[[[f64; 2]; 2]; 2]; 2]; 2]; 2];

pub(crate) fn check_pcd_free(pcd: &[[f64; 2]; 2]) -> Result<(), TableError> {
    let mut sum = 0.0;
    for c in 0..2 {
        for d in 0..2 {
            check_probability(pcd[c][d], &[c, d])?;
            sum += pcd[c][d];
        }
    }
    check_sum(sum, &[])
}

pub(crate) fn check_pcd(pcd: &PcdArray) -> Result<(), TableError> {
    for x in 0..2 {
        for y in 0..2 {
            let mut sum = 0.0;
            for c in 0..2 {
                for d in 0..2 {
                    check_probability(pcd[c][d][x][y], &[c, d, x, y])?;
                    sum += pcd[c][d][x][y];
                }
            }
            check_sum(sum, &[x, y])?;
        }
    }
    Ok(())
}

pub(crate) fn check_response_a(pa: &ResponseA) -> Result<(), TableError> {
    for x in 0..2 {
        for c in 0..2 {
            check_probability(pa[0][x][c], &[0, x, c])?;
            check_probability(pa[1][x][c], &[1, x, c])?;
            check_sum(pa[0][x][c] + pa[1][x][c], &[x, c])?;
        }
    }
    Ok(())
}

pub(crate) fn check_response_b(pb: &ResponseB) -> Result<(), TableError> {
    for y in 0..2 {
        for c in 0..2 {
            for d in 0..2 {
                check_probability(pb[0][y][c][d], &[0, y, c, d])?;
                check_probability(pb[1][y][c][d], &[1, y, c, d])?;
                check_sum(pb[0][y][c][d] + pb[1][y][c][d], &[y, c, d])?;
            }
        }
    }
    Ok(())
}

/// `p(c,d|x,y)`, `p(a|x,c)` and `p(b|y,c,d)`.
///
/// The same type describes the time-reversed experiment with the roles
/// exchanged, `(c,a,x) <-> (d,b,y)`: there `pcd` is `p(d,c|y,x)`, `pa` is
/// `p(b|y,d)` and `pb` is `p(a|x,d,c)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBundle")]
pub struct MarginalBundle {
    pcd: PcdArray,
    pa: ResponseA,
    pb: ResponseB,
}

#[derive(Deserialize)]
struct RawBundle {
    pcd: PcdArray,
    pa: ResponseA,
    pb: ResponseB,
}

impl TryFrom<RawBundle> for MarginalBundle {
    type Error = TableError;

    fn try_from(raw: RawBundle) -> Result<Self, Self::Error> {
        MarginalBundle::new(raw.pcd, raw.pa, raw.pb)
    }
}

impl MarginalBundle {
    pub fn new(pcd: PcdArray, pa: ResponseA, pb: ResponseB) -> Result<Self, TableError> {
        check_pcd(&pcd)?;
        check_response_a(&pa)?;
        check_response_b(&pb)?;
        Ok(Self { pcd, pa, pb })
    }

    /// Bundle with the setting-free `p(c,d)` of a model.
    pub fn from_factors(f: &CfFactors) -> Result<Self, TableError> {
        let mut pcd = [[[[0.0; 2]; 2]; 2]; 2];
        for c in 0..2 {
            for d in 0..2 {
                pcd[c][d] = [[f.pcd[c][d]; 2]; 2];
            }
        }
        Self::new(pcd, f.pa, f.pb)
    }

    pub fn pcd(&self) -> &PcdArray {
        &self.pcd
    }

    pub fn pa(&self) -> &ResponseA {
        &self.pa
    }

    pub fn pb(&self) -> &ResponseB {
        &self.pb
    }

    /// `Σ_{c,d} p(c,d|x,y) p(a|x,c) p(b|y,c,d)`, summed directly.
    pub fn behavior(&self) -> BehaviorTable {
        BehaviorTable::from_fn(|a, b, x, y| {
            let mut acc = 0.0;
            for c in 0..2 {
                let mut inner = 0.0;
                for d in 0..2 {
                    inner += self.pcd[c][d][x][y] * self.pb[b][y][c][d];
                }
                acc += self.pa[a][x][c] * inner;
            }
            acc
        })
        .expect("a valid bundle yields a valid behavior")
    }
}

/// Operationally constructed `q(a,b,c,d|x,y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QTable {
    q: QArray,
}

impl QTable {
    pub(crate) fn from_array(q: QArray) -> Self {
        Self { q }
    }

    pub fn as_array(&self) -> &QArray {
        &self.q
    }

    #[inline]
    pub fn prob(&self, a: usize, b: usize, c: usize, d: usize, x: usize, y: usize) -> f64 {
        self.q[a][b][c][d][x][y]
    }

    /// Largest `|Σ_{a,b,c,d} q - 1|` over setting pairs.
    pub fn normalization_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                let mut sum = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        for c in 0..2 {
                            for d in 0..2 {
                                sum += self.q[a][b][c][d][x][y];
                            }
                        }
                    }
                }
                worst = worst.max((sum - 1.0).abs());
            }
        }
        worst
    }

    /// `p̃(a,b|x,y) = Σ_{c,d} q(a,b,c,d|x,y)`.
    pub fn reconstructed_behavior(&self) -> Result<BehaviorTable, TableError> {
        BehaviorTable::from_fn(|a, b, x, y| {
            let mut acc = 0.0;
            for c in 0..2 {
                for d in 0..2 {
                    acc += self.q[a][b][c][d][x][y];
                }
            }
            acc
        })
    }

    /// Re-indexed as `p(c,a,d,b|x,y)`.
    pub fn to_joint(&self) -> Result<JointTable, TableError> {
        let mut p = ZERO_JOINT;
        super::joint::for_each_index(|[c, a, d, b, x, y]| {
            p[c][a][d][b][x][y] = self.q[a][b][c][d][x][y];
        });
        JointTable::new(p)
    }
}
