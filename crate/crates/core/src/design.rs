//! Sparse nonnegative designs: `w >= 0` with at most `ell` nonzero entries and
//! `⟨φ_j, w⟩ = 0` for `2 <= j <= ell`, normalized to a probability measure.
//!
//! Such a `w` is a nonnegative solution of the moment system `M w = e_1`,
//! where the rows of `M` are `φ_1, ..., φ_ell`. The scaled constant vector
//! `1/sqrt(n) = φ_1` always solves it, so the default construction reduces
//! that interior point to a vertex by Carathéodory pivoting. The LP route
//! returns an optimal basic feasible solution instead.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, null_vector};
use crate::lp::{solve_standard_form, LpOutcome};
use crate::spectral::SpectralBasis;

/// Default tolerance on `|⟨φ_j, w⟩|` for `2 <= j <= ell`.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;
/// Weights below this fraction of the largest weight are set to zero.
pub const ZERO_CLAMP_REL: f64 = 1e-11;
/// Rank tolerance used when extracting null vectors.
pub const RANK_TOL: f64 = 1e-11;
const INPUT_RESIDUAL_TOL: f64 = 1e-10;
const NEGATIVE_TOL: f64 = 1e-12;

/// `M w = e_1` with `M` the `ell x n` matrix of leading eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSystem {
    pub ell: usize,
    pub n: usize,
    /// Row-major `ell x n`.
    pub matrix: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl MomentSystem {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.matrix[i * self.n..(i + 1) * self.n]
    }

    /// `max_i |(M w - e_1)_i|`.
    pub fn residual(&self, w: &[f64]) -> f64 {
        (0..self.ell)
            .map(|i| (dot(self.row(i), w) - self.rhs[i]).abs())
            .fold(0.0, f64::max)
    }

    fn restricted(&self, columns: &[usize]) -> Vec<f64> {
        let s = columns.len();
        let mut out = vec![0.0; self.ell * s];
        for i in 0..self.ell {
            for (k, &c) in columns.iter().enumerate() {
                out[i * s + k] = self.matrix[i * self.n + c];
            }
        }
        out
    }
}

pub fn build_moment_system(basis: &SpectralBasis, ell: usize) -> Result<MomentSystem> {
    let n = basis.n();
    check_ell(ell, n)?;
    let matrix = basis.eigenvectors()[..ell].concat();
    let mut rhs = vec![0.0; ell];
    rhs[0] = 1.0;
    Ok(MomentSystem { ell, n, matrix, rhs })
}

fn check_ell(ell: usize, n: usize) -> Result<()> {
    if ell == 0 || ell + 1 > n {
        return Err(Error::EllOutOfRange { ell, max: n.saturating_sub(1) });
    }
    Ok(())
}

fn clamp_small(w: &mut [f64]) {
    let max = w.iter().cloned().fold(0.0_f64, f64::max);
    let floor = ZERO_CLAMP_REL * max;
    for x in w.iter_mut() {
        if *x <= floor {
            *x = 0.0;
        }
    }
}

/// Shrinks the support of a nonnegative solution of `M w = e_1` to at most
/// `ell` coordinates.
pub fn caratheodory_reduce(system: &MomentSystem, w: &[f64]) -> Result<Vec<f64>> {
    caratheodory_reduce_observed(system, w, |_| {})
}

/// [`caratheodory_reduce`], calling `observe` with the iterate after every
/// pivot step.
pub fn caratheodory_reduce_observed(
    system: &MomentSystem,
    w: &[f64],
    mut observe: impl FnMut(&[f64]),
) -> Result<Vec<f64>> {
    if w.len() != system.n {
        return Err(Error::DimensionMismatch { expected: system.n, found: w.len() });
    }
    if let Some((i, &v)) = w.iter().enumerate().find(|(_, &v)| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("starting point has entry {v} at vertex {i}")));
    }
    let res = system.residual(w);
    if res > INPUT_RESIDUAL_TOL {
        return Err(Error::InvalidParameter(format!(
            "starting point violates M w = e1 by {res:e}"
        )));
    }

    let mut w = w.to_vec();
    clamp_small(&mut w);
    loop {
        let support: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 0.0).collect();
        if support.len() <= system.ell {
            return Ok(w);
        }
        let restricted = system.restricted(&support);
        let mut z = null_vector(&restricted, system.ell, support.len(), RANK_TOL).ok_or(Error::NullSpace {
            support: support.len(),
            ell: system.ell,
        })?;
        let zmax = z.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tiny = 1e-14 * zmax;
        if !z.iter().any(|&v| v > tiny) {
            z.iter_mut().for_each(|v| *v = -*v);
        }
        let (hit, step) = support
            .iter()
            .zip(&z)
            .filter(|(_, &zi)| zi > tiny)
            .map(|(&i, &zi)| (i, w[i] / zi))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(Error::NullSpace { support: support.len(), ell: system.ell })?;

        for (&i, &zi) in support.iter().zip(&z) {
            w[i] -= step * zi;
        }
        w[hit] = 0.0;
        let max = w.iter().cloned().fold(0.0_f64, f64::max);
        if let Some((index, &value)) = w.iter().enumerate().find(|(_, &v)| v < -NEGATIVE_TOL * max.max(1.0)) {
            return Err(Error::NegativeWeight { index, value });
        }
        clamp_small(&mut w);
        observe(&w);
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum DesignMethod {
    /// Carathéodory reduction of `1/sqrt(n)`.
    #[default]
    ReduceUniform,
    /// Optimal vertex of `min ⟨c, w⟩ : M w = e_1, w >= 0`; `None` uses `c = 1`.
    LpVertex(Option<Vec<f64>>),
}

/// Outcome of the feasibility check of `M w = e_1, w >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibilityCertificate {
    Feasible(Vec<f64>),
    /// `y^T M >= 0` and `y_1 < 0`. Cannot occur for an orthonormal basis with
    /// `φ_1 = 1/sqrt(n)`; seeing it means the numerics broke down.
    Infeasible { y: Vec<f64> },
}

impl FeasibilityCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityCertificate::Feasible(_))
    }

    pub fn y_first(&self) -> f64 {
        match self {
            FeasibilityCertificate::Feasible(_) => f64::NAN,
            FeasibilityCertificate::Infeasible { y } => y[0],
        }
    }

    /// Checks the Farkas conditions against `system` within `tol`.
    pub fn is_valid_farkas(&self, system: &MomentSystem, tol: f64) -> bool {
        let FeasibilityCertificate::Infeasible { y } = self else {
            return false;
        };
        let nonneg = (0..system.n).all(|j| (0..system.ell).map(|i| y[i] * system.row(i)[j]).sum::<f64>() >= -tol);
        nonneg && y[0] < 0.0
    }
}

/// Phase-one check of `M w = e_1, w >= 0`.
pub fn check_feasibility(system: &MomentSystem) -> Result<FeasibilityCertificate> {
    let zero = vec![0.0; system.n];
    Ok(match solve_standard_form(&system.matrix, &system.rhs, &zero, system.ell, system.n)? {
        LpOutcome::Optimal { x, .. } => FeasibilityCertificate::Feasible(x),
        LpOutcome::Infeasible { y } => FeasibilityCertificate::Infeasible { y },
        LpOutcome::Unbounded => unreachable!("zero objective is bounded"),
    })
}

/// A probability measure on vertices with small support.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignMeasure {
    pub ell: usize,
    pub n: usize,
    /// Ascending vertex ids.
    pub support: Vec<usize>,
    /// Aligned with `support`, positive, summing to 1.
    pub weights: Vec<f64>,
    /// `max_{2<=j<=ell} |⟨φ_j, w⟩|`.
    pub orthogonality_residual: f64,
    pub l2_norm_sq: f64,
    /// Largest `L <= n-1` with `|⟨φ_j, w⟩| <= 1e-9` for all `2 <= j <= L`.
    pub effective_depth: usize,
}

impl DesignMeasure {
    /// Wraps an arbitrary nonnegative vertex weighting, normalized to sum 1.
    pub fn from_weights(basis: &SpectralBasis, ell: usize, w: &[f64]) -> Result<Self> {
        let n = basis.n();
        check_ell(ell, n)?;
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: w.len() });
        }
        if let Some((i, &v)) = w.iter().enumerate().find(|(_, &v)| v < 0.0 || !v.is_finite()) {
            return Err(Error::NotAProbability(format!("weight {v} at vertex {i}")));
        }
        let mut w = w.to_vec();
        clamp_small(&mut w);
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return Err(Error::NotAProbability("all weights are zero".into()));
        }
        w.iter_mut().for_each(|x| *x /= total);
        let coeffs = basis.coefficients(&w)?;
        let orthogonality_residual = coeffs[1..ell].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        let support: Vec<usize> = (0..n).filter(|&i| w[i] > 0.0).collect();
        Ok(DesignMeasure {
            ell,
            n,
            weights: support.iter().map(|&i| w[i]).collect(),
            support,
            orthogonality_residual,
            l2_norm_sq: w.iter().map(|x| x * x).sum(),
            effective_depth: effective_depth(&coeffs, ORTHOGONALITY_TOL),
        })
    }

    pub fn dirac(basis: &SpectralBasis, v: usize) -> Result<Self> {
        let n = basis.n();
        if v >= n {
            return Err(Error::InvalidParameter(format!("vertex {v} outside 0..{n}")));
        }
        let mut w = vec![0.0; n];
        w[v] = 1.0;
        DesignMeasure::from_weights(basis, 1, &w)
    }

    pub fn uniform(basis: &SpectralBasis) -> Result<Self> {
        let n = basis.n();
        DesignMeasure::from_weights(basis, 1, &vec![1.0 / n as f64; n])
    }

    /// Dense vertex-indexed vector.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n];
        for (&v, &a) in self.support.iter().zip(&self.weights) {
            w[v] = a;
        }
        w
    }
}

fn effective_depth(coeffs: &[f64], tol: f64) -> usize {
    let n = coeffs.len();
    let first_bad = coeffs.iter().skip(1).position(|c| c.abs() > tol).map(|k| k + 2);
    match first_bad {
        Some(j) => j - 1,
        None => n,
    }
    .min(n.saturating_sub(1))
    .max(1)
}

/// Constructs a design for `ell` with the chosen method.
pub fn solve_design(basis: &SpectralBasis, ell: usize, method: &DesignMethod) -> Result<DesignMeasure> {
    let system = build_moment_system(basis, ell)?;
    let w = match method {
        DesignMethod::ReduceUniform => caratheodory_reduce(&system, basis.eigenvector(1))?,
        DesignMethod::LpVertex(objective) => {
            let ones;
            let c = match objective {
                Some(c) => c.as_slice(),
                None => {
                    ones = vec![1.0; system.n];
                    ones.as_slice()
                }
            };
            match solve_standard_form(&system.matrix, &system.rhs, c, system.ell, system.n)? {
                LpOutcome::Optimal { x, .. } => x,
                LpOutcome::Infeasible { y } => {
                    return Err(Error::Infeasible(Box::new(FeasibilityCertificate::Infeasible { y })))
                }
                LpOutcome::Unbounded => return Err(Error::Unbounded),
            }
        }
    };
    DesignMeasure::from_weights(basis, ell, &w)
}

/// The two-vertex `ell = 2` design read off the sign pattern of `φ_2`:
/// weights `(-β, α) / (α - β)` on the argmax `α > 0` and argmin `β < 0`.
pub fn design_from_sign_pattern(basis: &SpectralBasis) -> Result<DesignMeasure> {
    let n = basis.n();
    check_ell(2, n)?;
    let phi2 = basis.eigenvector(2);
    let (i, alpha) = phi2
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, x| if x.1 > b.1 { x } else { b });
    let (j, beta) = phi2
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |b, x| if x.1 < b.1 { x } else { b });
    if !(alpha > 0.0 && beta < 0.0) {
        return Err(Error::InvalidParameter("second eigenvector has no sign change".into()));
    }
    let mut w = vec![0.0; n];
    w[i] = -beta / (alpha - beta);
    w[j] = alpha / (alpha - beta);
    DesignMeasure::from_weights(basis, 2, &w)
}

/// Recomputed checks of a design against a basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignReport {
    pub ell: usize,
    pub support_size: usize,
    pub support_ok: bool,
    pub weights_positive: bool,
    pub weight_sum: f64,
    pub sum_ok: bool,
    /// `⟨φ_j, w⟩` for `j = 2..=n`.
    pub inner_products: Vec<f64>,
    pub orthogonality_residual: f64,
    pub orthogonality_ok: bool,
    pub effective_depth: usize,
    pub l2_norm_sq: f64,
    pub l2_ok: bool,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn verify_design(basis: &SpectralBasis, m: &DesignMeasure, tol: f64) -> Result<DesignReport> {
    if m.n != basis.n() {
        return Err(Error::DimensionMismatch { expected: basis.n(), found: m.n });
    }
    let w = m.to_dense();
    let coeffs = basis.coefficients(&w)?;
    let weight_sum: f64 = m.weights.iter().sum();
    let orthogonality_residual = coeffs[1..m.ell.min(coeffs.len())].iter().fold(0.0_f64, |a, c| a.max(c.abs()));
    let l2_norm_sq: f64 = m.weights.iter().map(|x| x * x).sum();
    let support_size = m.support.len();
    let support_ok = support_size <= m.ell;
    let weights_positive = m.weights.iter().all(|&x| x > 0.0);
    let sum_ok = (weight_sum - 1.0).abs() <= 1e-12;
    let orthogonality_ok = orthogonality_residual <= tol;
    let l2_ok = l2_norm_sq <= 1.0 + 1e-12;
    Ok(DesignReport {
        ell: m.ell,
        support_size,
        support_ok,
        weights_positive,
        weight_sum,
        sum_ok,
        inner_products: coeffs[1..].to_vec(),
        orthogonality_residual,
        orthogonality_ok,
        effective_depth: effective_depth(&coeffs, tol),
        l2_norm_sq,
        l2_ok,
        tolerance: tol,
        passed: support_ok && weights_positive && sum_ok && orthogonality_ok && l2_ok,
    })
}
