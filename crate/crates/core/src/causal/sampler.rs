//! Seeded random tables. Sample `i` of a campaign with master seed `s`
//! draws from its own ChaCha stream, so results do not depend on how the
//! campaign is scheduled across threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use super::bundle::MarginalBundle;
use super::examples::role_swapped;
use super::joint::{JointTable, ZERO_JOINT};
use super::model::CfFactors;

pub fn sample_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// A point drawn uniformly from the probability simplex.
pub fn dirichlet<const N: usize>(rng: &mut impl Rng) -> [f64; N] {
    loop {
        let mut w = [0.0; N];
        for v in w.iter_mut() {
            *v = rng.sample(Exp1);
        }
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            for v in w.iter_mut() {
                *v /= total;
            }
            return w;
        }
    }
}

fn binary(rng: &mut impl Rng) -> [f64; 2] {
    let [p, _] = dirichlet::<2>(rng);
    [p, 1.0 - p]
}

pub fn sample_cf_factors(rng: &mut impl Rng) -> CfFactors {
    let w = dirichlet::<4>(rng);
    let pcd = [[w[0], w[1]], [w[2], 1.0 - w[0] - w[1] - w[2]]];
    let mut pa = [[[0.0; 2]; 2]; 2];
    let mut pb = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        for c in 0..2 {
            let [p, q] = binary(rng);
            pa[0][x][c] = p;
            pa[1][x][c] = q;
        }
    }
    for y in 0..2 {
        for c in 0..2 {
            for d in 0..2 {
                let [p, q] = binary(rng);
                pb[0][y][c][d] = p;
                pb[1][y][c][d] = q;
            }
        }
    }
    CfFactors {
        pcd: pcd.map(|row| row.map(|v| v.max(0.0))),
        pa,
        pb,
    }
}

/// A model with its forward joint and its reverse-layout joint, built
/// independently from the same factors.
pub fn sample_cf_pair(master_seed: u64, index: u64) -> (CfFactors, JointTable, JointTable) {
    let f = sample_cf_factors(&mut sample_rng(master_seed, index));
    let (fwd, _) = f.build().expect("sampled factors are normalized");
    let rev = f.build_reverse().expect("sampled factors are normalized");
    (f, fwd, rev)
}

/// A forward bundle with setting-free `p(c,d)`, `p(a|x,c)` and `p(b|y,d)`,
/// and its time-reversed counterpart.
pub fn sample_opem_pair(master_seed: u64, index: u64) -> (MarginalBundle, MarginalBundle) {
    let mut rng = sample_rng(master_seed, index);
    let mut f = sample_cf_factors(&mut rng);
    for y in 0..2 {
        for d in 0..2 {
            let [p, q] = binary(&mut rng);
            for c in 0..2 {
                f.pb[0][y][c][d] = p;
                f.pb[1][y][c][d] = q;
            }
        }
    }
    let fwd = MarginalBundle::from_factors(&f).expect("sampled factors are normalized");
    let rev = role_swapped(&fwd).expect("b does not depend on c");
    (fwd, rev)
}

/// An unstructured joint: each `(x, y)` slice uniform on the simplex.
pub fn random_joint(rng: &mut impl Rng) -> JointTable {
    let mut p = ZERO_JOINT;
    for x in 0..2 {
        for y in 0..2 {
            let w = dirichlet::<16>(rng);
            for (k, v) in w.iter().enumerate() {
                p[k >> 3][(k >> 2) & 1][(k >> 1) & 1][k & 1][x][y] = *v;
            }
        }
    }
    JointTable::new(p).expect("simplex points are normalized")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = sample_rng(1, 5).random();
        let b: f64 = sample_rng(1, 5).random();
        let c: f64 = sample_rng(1, 6).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn dirichlet_is_on_the_simplex() {
        let mut rng = sample_rng(0, 0);
        for _ in 0..100 {
            let w = dirichlet::<16>(&mut rng);
            assert!(w.iter().all(|v| *v >= 0.0));
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }
}
