//! Search for the largest CHSH value reachable by the simulated protocol.
//!
//! A coarse grid fixes the four observables, then coordinate descent
//! polishes them. Every correlator depends only on the pair of observables
//! involved, so the grid is scored from a table `E[i][j]` of simulated
//! correlators rather than by simulating every quadruple.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use super::vertices::chsh;
use super::PolytopeError;
use crate::tensor::{BlochVector, DensityMatrix};
use crate::wigner::{run_forward, ScenarioConfig};

pub const MIN_GRID: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSpace {
    /// Observables in the x–z plane, one angle each.
    Planar,
    /// Planar grid, then refinement over polar and azimuthal angles.
    FullSphere,
    /// Every party measures `±n` for one shared grid axis `n`.
    SharedAxis,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub space: SearchSpace,
    pub grid: usize,
    pub best_s: f64,
    /// Best value on the coarse grid, before refinement.
    pub grid_s: f64,
    pub charlie: BlochVector,
    pub alice: BlochVector,
    pub debbie: BlochVector,
    pub bob: BlochVector,
    /// Best value after each refinement sweep; nondecreasing.
    pub history: Vec<f64>,
}

impl SearchResult {
    pub fn settings(&self) -> [BlochVector; 4] {
        [self.charlie, self.alice, self.debbie, self.bob]
    }
}

fn angle(i: usize, grid: usize) -> f64 {
    TAU * i as f64 / grid as f64
}

/// CHSH value of the simulated protocol for four observables.
pub fn simulated_chsh(
    input: &DensityMatrix,
    settings: [BlochVector; 4],
) -> Result<f64, PolytopeError> {
    let [c, a, d, b] = settings;
    let config = ScenarioConfig::new(input.clone(), c, a, d, b)?;
    Ok(chsh(&run_forward(&config)?))
}

fn grid_correlators(input: &DensityMatrix, grid: usize) -> Result<Vec<Vec<f64>>, PolytopeError> {
    (0..grid)
        .into_par_iter()
        .map(|i| {
            let n = BlochVector::planar(angle(i, grid));
            (0..grid)
                .map(|j| {
                    let m = BlochVector::planar(angle(j, grid));
                    let config = ScenarioConfig::new(input.clone(), n, n, m, m)?;
                    Ok(run_forward(&config)?.correlator(0, 0))
                })
                .collect()
        })
        .collect()
}

/// First index of the maximum (ties resolve to the smallest index).
fn argmax(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| {
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        })
}

/// Best `(i, j, k, l)` on the planar grid, lexicographically smallest
/// among ties.
fn planar_grid(input: &DensityMatrix, grid: usize) -> Result<([usize; 4], f64), PolytopeError> {
    let e = grid_correlators(input, grid)?;
    let rows: Vec<([usize; 4], f64)> = (0..grid * grid)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / grid, ij % grid);
            // S = (E_ik + E_jk) + (E_il - E_jl) separates over k and l
            let (k, sk) = argmax((0..grid).map(|k| e[i][k] + e[j][k]));
            let (l, sl) = argmax((0..grid).map(|l| e[i][l] - e[j][l]));
            ([i, j, k, l], sk + sl)
        })
        .collect();
    let (best, _) = argmax(rows.iter().map(|r| r.1));
    Ok(rows[best])
}

fn shared_axis(
    input: &DensityMatrix,
    grid: usize,
) -> Result<([BlochVector; 4], f64), PolytopeError> {
    let candidates: Vec<([BlochVector; 4], f64)> = (0..grid * 16)
        .into_par_iter()
        .map(|idx| {
            let n = BlochVector::planar(angle(idx / 16, grid));
            let pick = |bit: usize| {
                if (idx >> bit) & 1 == 1 {
                    n.negated()
                } else {
                    n
                }
            };
            let settings = [pick(3), pick(2), pick(1), pick(0)];
            simulated_chsh(input, settings).map(|s| (settings, s))
        })
        .collect::<Result<_, _>>()?;
    let (best, _) = argmax(candidates.iter().map(|c| c.1));
    Ok(candidates[best])
}

/// Coordinate descent on the angles: each sweep tries `±step` on every
/// coordinate in turn and keeps strict improvements; a sweep without one
/// halves the step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Refinement {
    pub angles: Vec<f64>,
    pub best_s: f64,
    pub history: Vec<f64>,
}

/// `angles` holds one polar angle per party (planar) or `(θ, φ)` pairs in
/// party order (full sphere), parties ordered Charlie, Alice, Debbie, Bob.
pub fn refine(
    input: &DensityMatrix,
    angles: &[f64],
    sweeps: usize,
    initial_step: f64,
) -> Result<Refinement, PolytopeError> {
    let settings_of = |t: &[f64]| -> [BlochVector; 4] {
        std::array::from_fn(|p| match t.len() {
            4 => BlochVector::planar(t[p]),
            _ => BlochVector::from_angles(t[2 * p], t[2 * p + 1]),
        })
    };
    if angles.len() != 4 && angles.len() != 8 {
        return Err(PolytopeError::Search(format!(
            "expected 4 or 8 angles, got {}",
            angles.len()
        )));
    }
    let mut current = angles.to_vec();
    let mut best = simulated_chsh(input, settings_of(&current))?;
    let mut step = initial_step;
    let mut history = Vec::with_capacity(sweeps);
    for _ in 0..sweeps {
        let mut improved = false;
        for coord in 0..current.len() {
            for delta in [step, -step] {
                let mut trial = current.clone();
                trial[coord] += delta;
                let s = simulated_chsh(input, settings_of(&trial))?;
                if s > best {
                    best = s;
                    current = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
        history.push(best);
    }
    Ok(Refinement {
        angles: current,
        best_s: best,
        history,
    })
}

/// Planar search from a `grid`-point angle grid followed by `refine_iters`
/// refinement sweeps.
pub fn tsirelson_search(
    input: &DensityMatrix,
    grid: usize,
    refine_iters: usize,
) -> Result<SearchResult, PolytopeError> {
    tsirelson_search_in(SearchSpace::Planar, input, grid, refine_iters)
}

pub fn tsirelson_search_in(
    space: SearchSpace,
    input: &DensityMatrix,
    grid: usize,
    refine_iters: usize,
) -> Result<SearchResult, PolytopeError> {
    if grid < MIN_GRID {
        return Err(PolytopeError::GridTooSmall(grid));
    }
    if input.dim() != 2 {
        return Err(PolytopeError::Search(format!(
            "input state has dimension {}",
            input.dim()
        )));
    }
    let (settings, grid_s, history) = match space {
        SearchSpace::SharedAxis => {
            let (settings, s) = shared_axis(input, grid)?;
            (settings, s, vec![s])
        }
        SearchSpace::Planar | SearchSpace::FullSphere => {
            let (idx, _) = planar_grid(input, grid)?;
            let theta = idx.map(|i| angle(i, grid));
            let start: Vec<f64> = match space {
                SearchSpace::Planar => theta.to_vec(),
                // planar vectors are (θ, φ = 0) on the sphere
                _ => theta.iter().flat_map(|t| [*t, 0.0]).collect(),
            };
            let grid_s = simulated_chsh(input, theta.map(BlochVector::planar))?;
            let r = refine(input, &start, refine_iters, TAU / grid as f64)?;
            let settings = std::array::from_fn(|p| match space {
                SearchSpace::Planar => BlochVector::planar(r.angles[p]),
                _ => BlochVector::from_angles(r.angles[2 * p], r.angles[2 * p + 1]),
            });
            (settings, grid_s, r.history)
        }
    };
    let best_s = history.last().copied().unwrap_or(grid_s).max(grid_s);
    let [charlie, alice, debbie, bob] = settings;
    Ok(SearchResult {
        space,
        grid,
        best_s,
        grid_s,
        charlie,
        alice,
        debbie,
        bob,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed() -> DensityMatrix {
        DensityMatrix::maximally_mixed(2).unwrap()
    }

    #[test]
    fn small_grid_finds_tsirelson() {
        let r = tsirelson_search(&mixed(), 8, 5).unwrap();
        assert!((r.best_s - 2.0 * 2f64.sqrt()).abs() < 1e-9, "{}", r.best_s);
        assert!(r.charlie.dot(&r.alice).abs() < 1e-9);
        assert!(r.history.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn shared_axis_is_classical() {
        let r = tsirelson_search_in(SearchSpace::SharedAxis, &mixed(), 8, 0).unwrap();
        assert!((r.best_s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grid_too_small() {
        assert!(matches!(
            tsirelson_search(&mixed(), 4, 0),
            Err(PolytopeError::GridTooSmall(4))
        ));
    }
}
