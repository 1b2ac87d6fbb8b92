//! Dense bounded-variable primal simplex with Bland's pivoting rule.

use thiserror::Error;

/// Phase-one optimum at or below this is treated as feasible.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-7;

const PIVOT_TOLERANCE: f64 = 1e-9;
const COST_TOLERANCE: f64 = 1e-10;
const BOUND_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("simplex did not converge within {0} iterations")]
    IterationLimit(usize),
    #[error("objective is unbounded below")]
    Unbounded,
}

/// `lower ≤ Σ coeffs · x ≤ upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub coeffs: Vec<(usize, f64)>,
    pub lower: f64,
    pub upper: f64,
}

/// `min cost · x` subject to the rows and variable bounds. Infinite bounds
/// are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub names: Vec<String>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub cost: Vec<f64>,
    pub rows: Vec<LinearRow>,
}

impl LpProblem {
    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    /// Largest bound or row violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        for row in &self.rows {
            let a: f64 = row.coeffs.iter().map(|&(j, c)| c * x[j]).sum();
            worst = worst.max(row.lower - a).max(a - row.upper);
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

/// True when the constraint set admits a point, judged by the phase-one
/// optimum.
pub fn lp_feasible(lp: &LpProblem) -> Result<bool, LpError> {
    let mut t = Tableau::new(lp);
    Ok(t.phase_one()? <= FEASIBILITY_TOLERANCE)
}

/// Optimal point, or `None` when infeasible.
pub fn lp_minimize(lp: &LpProblem) -> Result<Option<LpSolution>, LpError> {
    let mut t = Tableau::new(lp);
    if t.phase_one()? > FEASIBILITY_TOLERANCE {
        return Ok(None);
    }
    t.phase_two(&lp.cost)?;
    let x = t.x[..lp.num_vars()].to_vec();
    let objective = lp.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(Some(LpSolution { x, objective }))
}

/// Columns are structural variables, one logical per row (`s_r = a_r · x`,
/// carrying the row bounds) and one artificial per row that starts basic.
struct Tableau {
    m: usize,
    n_struct: usize,
    ncols: usize,
    /// `B⁻¹ A`, row-major `m × ncols`.
    a: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
}

impl Tableau {
    fn new(lp: &LpProblem) -> Self {
        let n = lp.num_vars();
        let m = lp.rows.len();
        let ncols = n + 2 * m;
        let mut a = vec![0.0; m * ncols];
        let mut lower = Vec::with_capacity(ncols);
        let mut upper = Vec::with_capacity(ncols);
        lower.extend_from_slice(&lp.lower);
        upper.extend_from_slice(&lp.upper);
        lower.extend(lp.rows.iter().map(|r| r.lower));
        upper.extend(lp.rows.iter().map(|r| r.upper));
        lower.extend(std::iter::repeat_n(0.0, m));
        upper.extend(std::iter::repeat_n(f64::INFINITY, m));

        let mut x = vec![0.0; ncols];
        for j in 0..n + m {
            x[j] = initial_value(lower[j], upper[j]);
        }
        let mut basis = Vec::with_capacity(m);
        let mut is_basic = vec![false; ncols];
        for (r, row) in lp.rows.iter().enumerate() {
            let base = r * ncols;
            let mut activity = 0.0;
            for &(j, c) in &row.coeffs {
                a[base + j] += c;
                activity += c * x[j];
            }
            a[base + n + r] = -1.0;
            // Residual the artificial absorbs: a·x - s + σ·art = 0.
            let resid = activity - x[n + r];
            let sigma = if resid > 0.0 { -1.0 } else { 1.0 };
            a[base + n + m + r] = sigma;
            // Scale the row so the basic artificial has unit coefficient.
            if sigma < 0.0 {
                for v in &mut a[base..base + ncols] {
                    *v = -*v;
                }
            }
            x[n + m + r] = resid.abs();
            basis.push(n + m + r);
            is_basic[n + m + r] = true;
        }
        Self {
            m,
            n_struct: n,
            ncols,
            a,
            lower,
            upper,
            x,
            basis,
            is_basic,
        }
    }

    fn artificial(&self, j: usize) -> bool {
        j >= self.n_struct + self.m
    }

    fn phase_one(&mut self) -> Result<f64, LpError> {
        let mut cost = vec![0.0; self.ncols];
        for c in &mut cost[self.n_struct + self.m..] {
            *c = 1.0;
        }
        self.optimize(&cost)?;
        Ok((self.n_struct + self.m..self.ncols)
            .map(|j| self.x[j])
            .sum())
    }

    fn phase_two(&mut self, structural_cost: &[f64]) -> Result<(), LpError> {
        for j in self.n_struct + self.m..self.ncols {
            self.upper[j] = 0.0;
            if !self.is_basic[j] {
                self.x[j] = 0.0;
            }
        }
        let mut cost = vec![0.0; self.ncols];
        cost[..self.n_struct].copy_from_slice(structural_cost);
        self.optimize(&cost)
    }

    fn optimize(&mut self, cost: &[f64]) -> Result<(), LpError> {
        let limit = 100 * (self.m + self.ncols).max(10);
        for _ in 0..limit {
            let Some((j, dir)) = self.entering(cost) else {
                return Ok(());
            };
            self.step(j, dir)?;
        }
        Err(LpError::IterationLimit(limit))
    }

    /// Bland: the lowest-index improving nonbasic column.
    fn entering(&self, cost: &[f64]) -> Option<(usize, f64)> {
        for j in 0..self.ncols {
            if self.is_basic[j] {
                continue;
            }
            let mut d = cost[j];
            for r in 0..self.m {
                let cb = cost[self.basis[r]];
                if cb != 0.0 {
                    d -= cb * self.a[r * self.ncols + j];
                }
            }
            let can_rise = self.x[j] < self.upper[j] - BOUND_TOLERANCE;
            let can_fall = self.x[j] > self.lower[j] + BOUND_TOLERANCE;
            if d < -COST_TOLERANCE && can_rise {
                return Some((j, 1.0));
            }
            if d > COST_TOLERANCE && can_fall {
                return Some((j, -1.0));
            }
        }
        None
    }

    fn step(&mut self, j: usize, dir: f64) -> Result<(), LpError> {
        // Basic variable r moves at rate -dir·a[r][j] per unit step.
        let mut best_t = f64::INFINITY;
        let mut leave: Option<usize> = None;
        for r in 0..self.m {
            let rate = -dir * self.a[r * self.ncols + j];
            let b = self.basis[r];
            let room = if rate < -PIVOT_TOLERANCE {
                (self.x[b] - self.lower[b]) / -rate
            } else if rate > PIVOT_TOLERANCE {
                (self.upper[b] - self.x[b]) / rate
            } else {
                continue;
            };
            let room = room.max(0.0);
            let better =
                room < best_t || (room == best_t && leave.is_some_and(|l| b < self.basis[l]));
            if better {
                best_t = room;
                leave = Some(r);
            }
        }
        let flip = self.upper[j] - self.lower[j];
        if flip <= best_t {
            if !flip.is_finite() {
                return Err(LpError::Unbounded);
            }
            self.advance(j, dir, flip);
            self.x[j] = if dir > 0.0 {
                self.upper[j]
            } else {
                self.lower[j]
            };
            return Ok(());
        }
        let r = leave.ok_or(LpError::Unbounded)?;
        self.advance(j, dir, best_t);
        let b = self.basis[r];
        let rate = -dir * self.a[r * self.ncols + j];
        self.x[b] = if rate < 0.0 {
            self.lower[b]
        } else {
            self.upper[b]
        };
        if self.artificial(b) {
            // A departed artificial never re-enters.
            self.upper[b] = 0.0;
            self.x[b] = 0.0;
        }
        self.pivot(r, j);
        Ok(())
    }

    fn advance(&mut self, j: usize, dir: f64, t: f64) {
        if t == 0.0 {
            return;
        }
        for r in 0..self.m {
            let rate = -dir * self.a[r * self.ncols + j];
            self.x[self.basis[r]] += rate * t;
        }
        self.x[j] += dir * t;
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let nc = self.ncols;
        let p = self.a[r * nc + j];
        for v in &mut self.a[r * nc..(r + 1) * nc] {
            *v /= p;
        }
        let (before, rest) = self.a.split_at_mut(r * nc);
        let (pivot_row, after) = rest.split_at_mut(nc);
        for row in before
            .chunks_exact_mut(nc)
            .chain(after.chunks_exact_mut(nc))
        {
            let f = row[j];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * pv;
                }
                row[j] = 0.0;
            }
        }
        self.is_basic[self.basis[r]] = false;
        self.basis[r] = j;
        self.is_basic[j] = true;
    }
}

fn initial_value(lo: f64, hi: f64) -> f64 {
    if lo.is_finite() {
        lo
    } else if hi.is_finite() {
        hi
    } else {
        0.0
    }
}
