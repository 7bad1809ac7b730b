//! The observed behavior `p(a,b|x,y)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::outcome::sign;

/// Normalization tolerance for every probability table in the crate.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error("entry {value} at {index:?} is not a probability")]
    OutOfRange { index: Vec<usize>, value: f64 },
    #[error("distribution at {index:?} sums to {sum}, not 1")]
    NotNormalized { index: Vec<usize>, sum: f64 },
}

pub(crate) fn check_probability(value: f64, index: &[usize]) -> Result<(), TableError> {
    if !value.is_finite() || !(-NORMALIZATION_TOL..=1.0 + NORMALIZATION_TOL).contains(&value) {
        return Err(TableError::OutOfRange {
            index: index.to_vec(),
            value,
        });
    }
    Ok(())
}

pub(crate) fn check_sum(sum: f64, index: &[usize]) -> Result<(), TableError> {
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(TableError::NotNormalized {
            index: index.to_vec(),
            sum,
        });
    }
    Ok(())
}

/// `p[a][b][x][y]` with outcome index `0 -> +1`, `1 -> -1`.
pub type BehaviorArray = [[[[f64; 2]; 2]; 2]; 2];

/// Observed statistics of the two truly-observed events, one distribution
/// over `(a, b)` per setting pair `(x, y)`.
///
/// Serialized as `{"p": [[[[..]]]]}` nested in index order `a, b, x, y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBehavior")]
pub struct BehaviorTable {
    p: BehaviorArray,
}

#[derive(Deserialize)]
struct RawBehavior {
    p: BehaviorArray,
}

impl TryFrom<RawBehavior> for BehaviorTable {
    type Error = TableError;

    fn try_from(raw: RawBehavior) -> Result<Self, Self::Error> {
        BehaviorTable::new(raw.p)
    }
}

impl BehaviorTable {
    pub fn new(p: BehaviorArray) -> Result<Self, TableError> {
        for x in 0..2 {
            for y in 0..2 {
                let mut sum = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        check_probability(p[a][b][x][y], &[a, b, x, y])?;
                        sum += p[a][b][x][y];
                    }
                }
                check_sum(sum, &[x, y])?;
            }
        }
        Ok(Self { p })
    }

    /// Builds a table from `f(a, b, x, y)` over table indices.
    pub fn from_fn(
        mut f: impl FnMut(usize, usize, usize, usize) -> f64,
    ) -> Result<Self, TableError> {
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for (a, pa) in p.iter_mut().enumerate() {
            for (b, pab) in pa.iter_mut().enumerate() {
                for (x, pabx) in pab.iter_mut().enumerate() {
                    for (y, v) in pabx.iter_mut().enumerate() {
                        *v = f(a, b, x, y);
                    }
                }
            }
        }
        Self::new(p)
    }

    pub fn uniform() -> Self {
        Self {
            p: [[[[0.25; 2]; 2]; 2]; 2],
        }
    }

    /// The PR box: `a·b = -1` exactly when `x = y = 1`, uniform marginals.
    pub fn pr_box() -> Self {
        Self::from_fn(|a, b, x, y| {
            let product = sign(a) * sign(b);
            let wanted = if x == 1 && y == 1 { -1.0 } else { 1.0 };
            if product == wanted {
                0.5
            } else {
                0.0
            }
        })
        .expect("PR box is normalized")
    }

    pub fn as_array(&self) -> &BehaviorArray {
        &self.p
    }

    #[inline]
    pub fn prob(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.p[a][b][x][y]
    }

    /// `<A_x B_y> = sum_{a,b} a b p(a,b|x,y)`.
    pub fn correlator(&self, x: usize, y: usize) -> f64 {
        let mut acc = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                acc += sign(a) * sign(b) * self.p[a][b][x][y];
            }
        }
        acc
    }

    /// `[[<A0B0>, <A0B1>], [<A1B0>, <A1B1>]]`.
    pub fn correlators(&self) -> [[f64; 2]; 2] {
        [
            [self.correlator(0, 0), self.correlator(0, 1)],
            [self.correlator(1, 0), self.correlator(1, 1)],
        ]
    }

    /// `sum_b p(a,b|x,y)`.
    pub fn alice_marginal(&self, a: usize, x: usize, y: usize) -> f64 {
        self.p[a][0][x][y] + self.p[a][1][x][y]
    }

    /// `sum_a p(a,b|x,y)`.
    pub fn bob_marginal(&self, b: usize, x: usize, y: usize) -> f64 {
        self.p[0][b][x][y] + self.p[1][b][x][y]
    }

    /// Largest change of Alice's marginal when only `y` changes.
    pub fn alice_marginal_spread(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..2 {
            for x in 0..2 {
                worst =
                    worst.max((self.alice_marginal(a, x, 0) - self.alice_marginal(a, x, 1)).abs());
            }
        }
        worst
    }

    /// Largest change of Bob's marginal when only `x` changes.
    pub fn bob_marginal_spread(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for b in 0..2 {
            for y in 0..2 {
                worst = worst.max((self.bob_marginal(b, 0, y) - self.bob_marginal(b, 1, y)).abs());
            }
        }
        worst
    }

    /// Entries flattened in index order `a, b, x, y`.
    pub fn flatten(&self) -> [f64; 16] {
        let mut out = [0.0; 16];
        for a in 0..2 {
            for b in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        out[flat_index(a, b, x, y)] = self.p[a][b][x][y];
                    }
                }
            }
        }
        out
    }

    /// Convex combination `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self, TableError> {
        Self::from_fn(|a, b, x, y| {
            lambda * self.p[a][b][x][y] + (1.0 - lambda) * other.p[a][b][x][y]
        })
    }

    /// Exchanges the roles `(a, x) <-> (b, y)`.
    pub fn swap_parties(&self) -> Self {
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        p[b][a][y][x] = self.p[a][b][x][y];
                    }
                }
            }
        }
        Self { p }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.flatten()
            .iter()
            .zip(other.flatten().iter())
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max)
    }
}

/// Position of `(a, b, x, y)` in [`BehaviorTable::flatten`].
#[inline]
pub fn flat_index(a: usize, b: usize, x: usize, y: usize) -> usize {
    ((a * 2 + b) * 2 + x) * 2 + y
}
