//! Dense two-phase simplex for `min c·w  s.t.  A w = b, w >= 0`.
//!
//! Bland's rule throughout, so no cycling. Sized for the 17-row problems of
//! this crate, but nothing here depends on that.

use thiserror::Error;

/// Smallest pivot element accepted in a ratio test.
pub const PIVOT_TOL: f64 = 1e-11;
/// Reduced costs above `-OPTIMALITY_TOL` count as nonnegative.
pub const OPTIMALITY_TOL: f64 = 1e-11;
pub const MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimplexError {
    #[error("constraint matrix has inconsistent shape: {0}")]
    Shape(String),
    #[error("non-finite value in the problem data")]
    NonFinite,
    #[error("no convergence after {0} pivots")]
    IterationLimit(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Phase1 {
    /// `w >= 0` with `A w = b` up to `residual = Σ|artificial|`.
    Feasible { w: Vec<f64>, residual: f64 },
    /// `y·A_j <= 0` for every column `j` while `y·b = residual > 0`.
    Infeasible { farkas: Vec<f64>, residual: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { w: Vec<f64>, value: f64 },
    Infeasible { farkas: Vec<f64>, residual: f64 },
    Unbounded,
}

struct Tableau {
    m: usize,
    n: usize,
    /// `m` constraint rows then the objective row; the last column is the
    /// right-hand side. Columns `n..n+m` are artificials.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    sign: Vec<f64>,
    pivots: usize,
}

enum Status {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn new(a: &[Vec<f64>], b: &[f64]) -> Result<Self, SimplexError> {
        let m = a.len();
        if b.len() != m {
            return Err(SimplexError::Shape(format!(
                "{m} rows but {} right-hand sides",
                b.len()
            )));
        }
        let n = a.first().map_or(0, Vec::len);
        if a.iter().any(|row| row.len() != n) {
            return Err(SimplexError::Shape("rows of different lengths".into()));
        }
        if a.iter().flatten().chain(b).any(|v| !v.is_finite()) {
            return Err(SimplexError::NonFinite);
        }
        let rhs = n + m;
        let mut t = vec![vec![0.0; rhs + 1]; m + 1];
        let mut sign = vec![1.0; m];
        for i in 0..m {
            sign[i] = if b[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..n {
                t[i][j] = sign[i] * a[i][j];
            }
            t[i][n + i] = 1.0;
            t[i][rhs] = sign[i] * b[i];
        }
        // phase-one objective: sum of artificials, priced out
        for j in 0..n {
            t[m][j] = -(0..m).map(|i| t[i][j]).sum::<f64>();
        }
        t[m][rhs] = -(0..m).map(|i| t[i][rhs]).sum::<f64>();
        Ok(Self {
            m,
            n,
            t,
            basis: (n..n + m).collect(),
            sign,
            pivots: 0,
        })
    }

    fn rhs(&self) -> usize {
        self.n + self.m
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.rhs() + 1;
        let p = self.t[r][c];
        for j in 0..width {
            self.t[r][j] /= p;
        }
        let row = self.t[r].clone();
        for (i, line) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = line[c];
            if f != 0.0 {
                for j in 0..width {
                    line[j] -= f * row[j];
                }
                line[c] = 0.0;
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    fn run(&mut self, allowed: impl Fn(usize) -> bool) -> Result<Status, SimplexError> {
        let rhs = self.rhs();
        loop {
            if self.pivots >= MAX_ITERATIONS {
                return Err(SimplexError::IterationLimit(self.pivots));
            }
            let entering = (0..rhs).find(|&j| allowed(j) && self.t[self.m][j] < -OPTIMALITY_TOL);
            let Some(c) = entering else {
                return Ok(Status::Optimal);
            };
            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let coef = self.t[i][c];
                if coef > PIVOT_TOL {
                    let ratio = self.t[i][rhs] / coef;
                    let better = match leaving {
                        None => true,
                        Some((r, best)) => {
                            ratio < best || (ratio == best && self.basis[i] < self.basis[r])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            match leaving {
                Some((r, _)) => self.pivot(r, c),
                None => return Ok(Status::Unbounded),
            }
        }
    }

    fn solution(&self) -> Vec<f64> {
        let rhs = self.rhs();
        let mut w = vec![0.0; self.n];
        for (i, &j) in self.basis.iter().enumerate() {
            if j < self.n {
                w[j] = self.t[i][rhs];
            }
        }
        w
    }

    fn phase_one(&mut self, feas_tol: f64) -> Result<Option<Phase1>, SimplexError> {
        let n = self.n;
        self.run(|_| true)?;
        let residual = -self.t[self.m][self.rhs()];
        if residual > feas_tol {
            // at the optimum the artificial reduced costs are 1 - y_k
            let farkas = (0..self.m)
                .map(|k| self.sign[k] * (1.0 - self.t[self.m][n + k]))
                .collect();
            return Ok(Some(Phase1::Infeasible { farkas, residual }));
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..self.m {
            if self.basis[r] >= n {
                if let Some(c) = (0..n).find(|&j| self.t[r][j].abs() > PIVOT_TOL) {
                    self.pivot(r, c);
                }
            }
        }
        Ok(None)
    }
}

/// Phase one only: is `{w >= 0 : A w = b}` nonempty?
pub fn feasibility(a: &[Vec<f64>], b: &[f64], feas_tol: f64) -> Result<Phase1, SimplexError> {
    let mut tab = Tableau::new(a, b)?;
    if let Some(infeasible) = tab.phase_one(feas_tol)? {
        return Ok(infeasible);
    }
    let residual = (-tab.t[tab.m][tab.rhs()]).max(0.0);
    Ok(Phase1::Feasible {
        w: tab.solution(),
        residual,
    })
}

/// Full two-phase solve.
pub fn minimize(
    c: &[f64],
    a: &[Vec<f64>],
    b: &[f64],
    feas_tol: f64,
) -> Result<LpOutcome, SimplexError> {
    let mut tab = Tableau::new(a, b)?;
    if c.len() != tab.n {
        return Err(SimplexError::Shape(format!(
            "{} costs for {} columns",
            c.len(),
            tab.n
        )));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(SimplexError::NonFinite);
    }
    if let Some(Phase1::Infeasible { farkas, residual }) = tab.phase_one(feas_tol)? {
        return Ok(LpOutcome::Infeasible { farkas, residual });
    }
    let (m, n, rhs) = (tab.m, tab.n, tab.rhs());
    let cost = |j: usize| if j < n { c[j] } else { 0.0 };
    for j in 0..=rhs {
        let base = if j < rhs { cost(j) } else { 0.0 };
        tab.t[m][j] = base
            - (0..m)
                .map(|i| cost(tab.basis[i]) * tab.t[i][j])
                .sum::<f64>();
    }
    match tab.run(|j| j < n)? {
        Status::Unbounded => Ok(LpOutcome::Unbounded),
        Status::Optimal => {
            let w = tab.solution();
            let value = w.iter().zip(c).map(|(x, k)| x * k).sum();
            Ok(LpOutcome::Optimal { w, value })
        }
    }
}
