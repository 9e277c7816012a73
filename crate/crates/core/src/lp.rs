//! Dense two-phase simplex for `minimize c^T x : A x = b, x >= 0`.
//!
//! Bland's rule throughout: the moment systems solved here have `b = e_1`
//! and are heavily degenerate.

use crate::error::{Error, Result};
use crate::linalg::solve;

const REDUCED_COST_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-9;
const PHASE_ONE_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// Optimal basic feasible solution and its basic column indices.
    Optimal { x: Vec<f64>, basic: Vec<usize> },
    /// Farkas vector `y` with `y^T A >= 0` and `y^T b < 0`.
    Infeasible { y: Vec<f64> },
    Unbounded,
}

struct Tableau {
    rows: usize,
    width: usize,
    /// rows x width, last column is the right-hand side
    t: Vec<f64>,
    basic: Vec<usize>,
    /// reduced costs, one per column (rhs slot holds minus the objective)
    cost: Vec<f64>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.t[row * w + col];
        for c in 0..w {
            self.t[row * w + c] /= p;
        }
        let pivot_row: Vec<f64> = self.t[row * w..(row + 1) * w].to_vec();
        for r in 0..self.rows {
            if r == row {
                continue;
            }
            let f = self.t[r * w + col];
            if f != 0.0 {
                for (x, p) in self.t[r * w..(r + 1) * w].iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
                self.t[r * w + col] = 0.0;
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for (x, p) in self.cost.iter_mut().zip(&pivot_row) {
                *x -= f * p;
            }
            self.cost[col] = 0.0;
        }
        self.basic[row] = col;
    }

    /// Runs Bland's rule over columns `0..allowed`. Returns `false` when unbounded.
    fn optimize(&mut self, allowed: usize, pivots: &mut usize) -> Result<bool> {
        loop {
            let Some(col) = (0..allowed).find(|&c| self.cost[c] < -REDUCED_COST_TOL) else {
                return Ok(true);
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, col);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    best = match best {
                        Some((br, bv)) if bv < ratio || (bv == ratio && self.basic[br] < self.basic[r]) => Some((br, bv)),
                        _ => Some((r, ratio)),
                    };
                }
            }
            let Some((row, _)) = best else {
                return Ok(false);
            };
            self.pivot(row, col);
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(Error::PivotLimit(MAX_PIVOTS));
            }
        }
    }
}

/// Solves `minimize c^T x : A x = b, x >= 0` with `A` row-major `rows x cols`.
pub fn solve_standard_form(a: &[f64], b: &[f64], c: &[f64], rows: usize, cols: usize) -> Result<LpOutcome> {
    assert_eq!(a.len(), rows * cols);
    if b.len() != rows {
        return Err(Error::DimensionMismatch { expected: rows, found: b.len() });
    }
    if c.len() != cols {
        return Err(Error::DimensionMismatch { expected: cols, found: c.len() });
    }
    let width = cols + rows + 1;
    let sign: Vec<f64> = b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    let mut t = vec![0.0; rows * width];
    for r in 0..rows {
        for j in 0..cols {
            t[r * width + j] = sign[r] * a[r * cols + j];
        }
        t[r * width + cols + r] = 1.0;
        t[r * width + width - 1] = sign[r] * b[r];
    }
    // phase one: minimize the sum of artificials
    let mut cost = vec![0.0; width];
    for r in 0..rows {
        for j in 0..cols {
            cost[j] -= t[r * width + j];
        }
        cost[width - 1] -= t[r * width + width - 1];
    }
    let mut tab = Tableau {
        rows,
        width,
        t,
        basic: (cols..cols + rows).collect(),
        cost,
    };
    let mut pivots = 0;
    tab.optimize(cols, &mut pivots)?;

    let infeasibility: f64 = (0..rows).filter(|&r| tab.basic[r] >= cols).map(|r| tab.rhs(r)).sum();
    if infeasibility > PHASE_ONE_TOL {
        // reduced cost of artificial r is 1 - π_r
        let y = (0..rows).map(|r| -(1.0 - tab.cost[cols + r]) * sign[r]).collect();
        return Ok(LpOutcome::Infeasible { y });
    }

    // drive zero-level artificials out of the basis where possible
    for r in 0..rows {
        if tab.basic[r] >= cols {
            if let Some(col) = (0..cols).find(|&j| tab.at(r, j).abs() > PIVOT_TOL) {
                tab.pivot(r, col);
            }
        }
    }

    // phase two
    let mut cost = vec![0.0; width];
    cost[..cols].copy_from_slice(c);
    for r in 0..rows {
        let cb = if tab.basic[r] < cols { c[tab.basic[r]] } else { 0.0 };
        if cb != 0.0 {
            for (j, x) in cost.iter_mut().enumerate().take(width) {
                *x -= cb * tab.at(r, j);
            }
        }
    }
    tab.cost = cost;
    if !tab.optimize(cols, &mut pivots)? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut x = vec![0.0; cols];
    let mut basic = Vec::with_capacity(rows);
    for r in 0..rows {
        if tab.basic[r] < cols {
            x[tab.basic[r]] = tab.rhs(r).max(0.0);
            basic.push(tab.basic[r]);
        }
    }
    polish(a, b, rows, cols, &basic, &mut x);
    basic.sort_unstable();
    Ok(LpOutcome::Optimal { x, basic })
}

/// Re-solves `B x_B = b` from the original data when the basis is square,
/// undoing tableau round-off.
fn polish(a: &[f64], b: &[f64], rows: usize, cols: usize, basic: &[usize], x: &mut [f64]) {
    if basic.len() != rows {
        return;
    }
    let mut bmat = vec![0.0; rows * rows];
    for r in 0..rows {
        for (k, &j) in basic.iter().enumerate() {
            bmat[r * rows + k] = a[r * cols + j];
        }
    }
    if let Some(xb) = solve(&bmat, b, rows) {
        let scale = xb.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        if xb.iter().all(|&v| v > -1e-9 * scale) {
            for (&j, v) in basic.iter().zip(xb) {
                x[j] = v.max(0.0);
            }
        }
    }
}
