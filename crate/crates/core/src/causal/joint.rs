use serde::{Deserialize, Serialize};

use crate::behavior::{check_probability, check_sum, BehaviorTable, TableError};

/// `p[c][a][d][b][x][y]`.
pub type JointArray = [[[[[[f64; 2]; 2]; 2]; 2]; 2]; 2];

/// A variable of the four-event scenario. The order of the variants is the
/// storage order of [`JointTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    C,
    A,
    D,
    B,
    X,
    Y,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::C, Var::A, Var::D, Var::B, Var::X, Var::Y];
    pub const OUTCOMES: [Var; 4] = [Var::C, Var::A, Var::D, Var::B];

    pub fn position(self) -> usize {
        self as usize
    }

    pub fn is_setting(self) -> bool {
        matches!(self, Var::X | Var::Y)
    }
}

/// Hypothetical joint `p(c,a,d,b|x,y)` over both pseudo events and both
/// truly-observed events.
///
/// Serialized as `{"p": ...}` nested in index order `c, a, d, b, x, y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJoint")]
pub struct JointTable {
    p: JointArray,
}

#[derive(Deserialize)]
struct RawJoint {
    p: JointArray,
}

impl TryFrom<RawJoint> for JointTable {
    type Error = TableError;

    fn try_from(raw: RawJoint) -> Result<Self, Self::Error> {
        JointTable::new(raw.p)
    }
}

pub(crate) const ZERO_JOINT: JointArray = [[[[[[0.0; 2]; 2]; 2]; 2]; 2]; 2];

impl JointTable {
    pub fn new(p: JointArray) -> Result<Self, TableError> {
        for x in 0..2 {
            for y in 0..2 {
                let mut sum = 0.0;
                for_each_outcome(|[c, a, d, b]| {
                    sum += p[c][a][d][b][x][y];
                });
                let mut err = None;
                for_each_outcome(|[c, a, d, b]| {
                    if err.is_none() {
                        err = check_probability(p[c][a][d][b][x][y], &[c, a, d, b, x, y]).err();
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
                check_sum(sum, &[x, y])?;
            }
        }
        Ok(Self { p })
    }

    /// Builds a table from `f([c, a, d, b, x, y])`.
    pub fn from_fn(mut f: impl FnMut([usize; 6]) -> f64) -> Result<Self, TableError> {
        let mut p = ZERO_JOINT;
        for_each_index(|i| {
            p[i[0]][i[1]][i[2]][i[3]][i[4]][i[5]] = f(i);
        });
        Self::new(p)
    }

    pub fn uniform() -> Self {
        Self {
            p: [[[[[[1.0 / 16.0; 2]; 2]; 2]; 2]; 2]; 2],
        }
    }

    pub fn as_array(&self) -> &JointArray {
        &self.p
    }

    #[inline]
    pub fn prob(&self, c: usize, a: usize, d: usize, b: usize, x: usize, y: usize) -> f64 {
        self.p[c][a][d][b][x][y]
    }

    #[inline]
    pub fn at(&self, i: [usize; 6]) -> f64 {
        self.p[i[0]][i[1]][i[2]][i[3]][i[4]][i[5]]
    }

    /// Probability that the variables in `fixed` take the given values, at
    /// the setting pair `(x, y)`; unfixed outcomes are summed out. Settings
    /// listed in `fixed` must agree with `(x, y)`.
    pub(crate) fn event_probability(&self, fixed: &[(Var, usize)], x: usize, y: usize) -> f64 {
        let mut acc = 0.0;
        for_each_outcome(|o| {
            let index = [o[0], o[1], o[2], o[3], x, y];
            if fixed.iter().all(|&(v, val)| index[v.position()] == val) {
                acc += self.at(index);
            }
        });
        acc
    }

    /// The time-reversed table: entry `[d][b][c][a][y][x]` of the result is
    /// entry `[c][a][d][b][x][y]` of `self`. Applying it twice is the
    /// identity.
    pub fn time_reversed(&self) -> Self {
        let mut p = ZERO_JOINT;
        for_each_index(|[c, a, d, b, x, y]| {
            p[d][b][c][a][y][x] = self.p[c][a][d][b][x][y];
        });
        Self { p }
    }

    /// Flips every outcome, `+1 <-> -1`, simultaneously.
    pub fn relabeled(&self) -> Self {
        let mut p = ZERO_JOINT;
        for_each_index(|[c, a, d, b, x, y]| {
            p[1 - c][1 - a][1 - d][1 - b][x][y] = self.p[c][a][d][b][x][y];
        });
        Self { p }
    }

    /// `p(a,b|x,y) = Σ_{c,d} p(c,a,d,b|x,y)`.
    pub fn marginalize_ab(&self) -> BehaviorTable {
        marginalize_ab(self)
    }

    /// `p(c,d|x,y)` as `[c][d][x][y]`.
    pub fn pseudo_marginal(&self) -> [[[[f64; 2]; 2]; 2]; 2] {
        let mut out = [[[[0.0; 2]; 2]; 2]; 2];
        for_each_index(|[c, a, d, b, x, y]| {
            out[c][d][x][y] += self.p[c][a][d][b][x][y];
        });
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> (f64, [usize; 6]) {
        let mut worst = (0.0, [0; 6]);
        for_each_index(|i| {
            let dev = (self.at(i) - other.at(i)).abs();
            if dev > worst.0 {
                worst = (dev, i);
            }
        });
        worst
    }

    /// Adds `delta` to one entry and rescales its `(x, y)` slice back to
    /// unit sum.
    pub fn perturbed(&self, index: [usize; 6], delta: f64) -> Result<Self, TableError> {
        let mut p = self.p;
        let [c, a, d, b, x, y] = index;
        p[c][a][d][b][x][y] += delta;
        let total: f64 = {
            let mut s = 0.0;
            for_each_outcome(|[c, a, d, b]| s += p[c][a][d][b][x][y]);
            s
        };
        for_each_outcome(|[c, a, d, b]| p[c][a][d][b][x][y] /= total);
        Self::new(p)
    }
}

/// `p(a,b|x,y) = Σ_{c,d} p(c,a,d,b|x,y)`.
pub fn marginalize_ab(joint: &JointTable) -> BehaviorTable {
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for_each_index(|[c, a, d, b, x, y]| {
        p[a][b][x][y] += joint.p[c][a][d][b][x][y];
    });
    BehaviorTable::new(p).expect("marginal of a valid joint is a valid behavior")
}

pub(crate) fn for_each_outcome(mut f: impl FnMut([usize; 4])) {
    for c in 0..2 {
        for a in 0..2 {
            for d in 0..2 {
                for b in 0..2 {
                    f([c, a, d, b]);
                }
            }
        }
    }
}

pub(crate) fn for_each_index(mut f: impl FnMut([usize; 6])) {
    for_each_outcome(|[c, a, d, b]| {
        for x in 0..2 {
            for y in 0..2 {
                f([c, a, d, b, x, y]);
            }
        }
    });
}
