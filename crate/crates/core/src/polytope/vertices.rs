use serde::Serialize;

use crate::behavior::{flat_index, BehaviorTable};
use crate::outcome::{sign, Outcome};

/// `S = <A0B0> + <A0B1> + <A1B0> - <A1B1>`.
pub fn chsh(behavior: &BehaviorTable) -> f64 {
    let e = behavior.correlators();
    e[0][0] + e[0][1] + e[1][0] - e[1][1]
}

/// One of the eight CHSH expressions `Σ s[x][y] <AxBy>`, each with an odd
/// number of minus signs. Variant 0 is [`chsh`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChshVariant {
    pub signs: [[i8; 2]; 2],
}

impl ChshVariant {
    pub fn all() -> [ChshVariant; 8] {
        let mut out = [ChshVariant { signs: [[1; 2]; 2] }; 8];
        for (k, slot) in out.iter_mut().enumerate() {
            let minus = 3 - (k % 4); // the correlator carrying the odd sign
            let overall = if k < 4 { 1 } else { -1 };
            let mut s = [[overall; 2]; 2];
            s[minus / 2][minus % 2] = -overall;
            *slot = ChshVariant { signs: s };
        }
        out
    }

    pub fn value(&self, behavior: &BehaviorTable) -> f64 {
        let mut acc = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                acc += self.signs[x][y] as f64 * behavior.correlator(x, y);
            }
        }
        acc
    }

    /// Coefficients over [`BehaviorTable::flatten`]: `s[x][y]·a·b`.
    pub fn coefficients(&self) -> [f64; 16] {
        let mut f = [0.0; 16];
        for a in 0..2 {
            for b in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        f[flat_index(a, b, x, y)] = self.signs[x][y] as f64 * sign(a) * sign(b);
                    }
                }
            }
        }
        f
    }
}

/// Local deterministic responses `a(x)`, `b(y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DeterministicStrategy {
    pub a_of_x: [Outcome; 2],
    pub b_of_y: [Outcome; 2],
}

impl DeterministicStrategy {
    /// Strategy `k` in `0..16`; bits (from high to low) are `a(0)`, `a(1)`,
    /// `b(0)`, `b(1)`, set meaning `-1`.
    pub fn from_index(k: usize) -> Self {
        let bit = |i: usize| Outcome::from_index((k >> (3 - i)) & 1);
        Self {
            a_of_x: [bit(0), bit(1)],
            b_of_y: [bit(2), bit(3)],
        }
    }

    pub fn behavior(&self) -> BehaviorTable {
        BehaviorTable::from_fn(|a, b, x, y| {
            if self.a_of_x[x].index() == a && self.b_of_y[y].index() == b {
                1.0
            } else {
                0.0
            }
        })
        .expect("deterministic tables are normalized")
    }
}

pub fn enumerate_strategies() -> Vec<DeterministicStrategy> {
    (0..16).map(DeterministicStrategy::from_index).collect()
}

/// The 16 local deterministic behaviors, in [`DeterministicStrategy::from_index`]
/// order.
pub fn enumerate_vertices() -> Vec<BehaviorTable> {
    enumerate_strategies()
        .iter()
        .map(DeterministicStrategy::behavior)
        .collect()
}

/// Whether each party's marginal ignores the other party's setting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SignallingReport {
    /// `Σ_b p(a,b|x,y)` does not depend on `y`.
    pub alice_independent_of_y: bool,
    /// `Σ_a p(a,b|x,y)` does not depend on `x`.
    pub bob_independent_of_x: bool,
    pub alice_deviation: f64,
    pub bob_deviation: f64,
}

impl SignallingReport {
    pub fn no_signalling(&self) -> bool {
        self.alice_independent_of_y && self.bob_independent_of_x
    }
}

pub fn signalling_check(behavior: &BehaviorTable, tol: f64) -> SignallingReport {
    let alice = behavior.alice_marginal_spread();
    let bob = behavior.bob_marginal_spread();
    SignallingReport {
        alice_independent_of_y: alice <= tol,
        bob_independent_of_x: bob <= tol,
        alice_deviation: alice,
        bob_deviation: bob,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_distinct_vertices() {
        let v = enumerate_vertices();
        assert_eq!(v.len(), 16);
        for i in 0..16 {
            for j in 0..i {
                assert_ne!(v[i], v[j]);
            }
        }
    }

    #[test]
    fn vertex_chsh_values() {
        let mut best = f64::NEG_INFINITY;
        for v in enumerate_vertices() {
            best = best.max(chsh(&v));
            for variant in ChshVariant::all() {
                let s = variant.value(&v);
                assert!(s == 2.0 || s == -2.0 || s == 0.0, "{s}");
            }
            assert!(signalling_check(&v, 0.0).no_signalling());
        }
        assert_eq!(best, 2.0);
    }

    #[test]
    fn variants_are_distinct_and_odd() {
        let all = ChshVariant::all();
        assert_eq!(all[0].signs, [[1, 1], [1, -1]]);
        for (i, v) in all.iter().enumerate() {
            let minus = v.signs.iter().flatten().filter(|s| **s < 0).count();
            assert!(minus % 2 == 1);
            assert!(all[..i].iter().all(|w| w != v));
        }
    }

    #[test]
    fn coefficients_agree_with_value() {
        let pr = BehaviorTable::pr_box();
        for variant in ChshVariant::all() {
            let dot: f64 = variant
                .coefficients()
                .iter()
                .zip(pr.flatten())
                .map(|(f, p)| f * p)
                .sum();
            assert!((dot - variant.value(&pr)).abs() < 1e-15);
        }
        assert_eq!(chsh(&pr), 4.0);
        assert_eq!(chsh(&BehaviorTable::uniform()), 0.0);
    }
}
