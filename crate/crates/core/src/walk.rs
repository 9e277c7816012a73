//! Distribution dynamics `μ_{k+1} = A/d · μ_k` and their distance to uniform.

use std::io::Write;

use serde::Serialize;

use crate::design::DesignMeasure;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{OperatorKind, SpectralBasis};

/// Absolute slack on every bound comparison.
pub const BOUND_TOL: f64 = 1e-9;
/// Distances at or below this are excluded from rate fitting.
pub const RATE_FIT_FLOOR: f64 = 1e-24;
const PROBABILITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkTrace {
    pub mu0: Vec<f64>,
    pub steps: usize,
    /// `d_k = Σ_v (μ_k(v) - 1/n)^2` for `k = 0..=steps`.
    pub distances: Vec<f64>,
    pub fitted_rate: Option<f64>,
    /// Decay base the trace is compared against, if any.
    pub bound_base: Option<f64>,
}

fn check_probability(mu0: &[f64], n: usize) -> Result<()> {
    if mu0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: mu0.len() });
    }
    if let Some((v, &x)) = mu0.iter().enumerate().find(|(_, &x)| x < 0.0 || !x.is_finite()) {
        return Err(Error::NotAProbability(format!("entry {x} at vertex {v}")));
    }
    let total: f64 = mu0.iter().sum();
    if (total - 1.0).abs() > PROBABILITY_TOL {
        return Err(Error::NotAProbability(format!("total mass {total}")));
    }
    Ok(())
}

fn distance_to_uniform(mu: &[f64]) -> f64 {
    let u = 1.0 / mu.len() as f64;
    mu.iter().map(|x| (x - u) * (x - u)).sum()
}

/// Iterates the walk `steps` times from `mu0`.
pub fn iterate_walk(g: &Graph, mu0: &[f64], steps: usize) -> Result<WalkTrace> {
    check_probability(mu0, g.n())?;
    let mut mu = mu0.to_vec();
    let mut distances = Vec::with_capacity(steps + 1);
    distances.push(distance_to_uniform(&mu));
    for _ in 0..steps {
        mu = g.walk_matrix_apply(&mu)?;
        distances.push(distance_to_uniform(&mu));
    }
    let mut trace = WalkTrace {
        mu0: mu0.to_vec(),
        steps,
        distances,
        fitted_rate: None,
        bound_base: None,
    };
    trace.fitted_rate = rate_fit(&trace);
    Ok(trace)
}

fn require_walk(basis: &SpectralBasis) -> Result<()> {
    if basis.operator() != OperatorKind::WalkMatrix {
        return Err(Error::OperatorMismatch {
            expected: OperatorKind::WalkMatrix,
            found: basis.operator(),
        });
    }
    Ok(())
}

/// `Σ_{j>=2} λ_j^{2k} ⟨μ_0, φ_j⟩^2`, the exact `d_k` without iterating.
pub fn spectral_distance(basis: &SpectralBasis, mu0: &[f64], k: usize) -> Result<f64> {
    Ok(spectral_distances(basis, mu0, k)?[k])
}

/// [`spectral_distance`] for every `k = 0..=steps`.
pub fn spectral_distances(basis: &SpectralBasis, mu0: &[f64], steps: usize) -> Result<Vec<f64>> {
    require_walk(basis)?;
    let sq: Vec<f64> = basis.coefficients(mu0)?.iter().map(|c| c * c).collect();
    let lambdas = &basis.eigenvalues()[1..];
    let mut powers: Vec<f64> = vec![1.0; lambdas.len()];
    let squares: Vec<f64> = lambdas.iter().map(|l| l * l).collect();
    let mut out = Vec::with_capacity(steps + 1);
    for _ in 0..=steps {
        out.push(powers.iter().zip(&sq[1..]).map(|(p, c)| p * c).sum());
        powers.iter_mut().zip(&squares).for_each(|(p, s)| *p *= s);
    }
    Ok(out)
}

/// Least-squares fit of `log(d_k) / 2` against `k` over the points with
/// `d_k > 1e-24`; returns the per-step base `exp(slope)`.
pub fn rate_fit(trace: &WalkTrace) -> Option<f64> {
    if trace.steps < 4 {
        return None;
    }
    let pts: Vec<(f64, f64)> = trace
        .distances
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > RATE_FIT_FLOOR)
        .map(|(k, &d)| (k as f64, 0.5 * d.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let m = pts.len() as f64;
    let kx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let ky = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - kx) * (y - ky)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - kx) * (x - kx)).sum();
    Some((sxy / sxx).exp())
}

/// Per-step comparison row of [`Theorem1Report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRow {
    pub k: usize,
    pub iterated: f64,
    pub spectral: f64,
    pub bound: f64,
    pub sharpened_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub ell: usize,
    pub bound_base: f64,
    pub l2_norm_sq: f64,
    pub tolerance: f64,
    pub rows: Vec<BoundRow>,
    pub max_disagreement: f64,
    pub fitted_rate: Option<f64>,
    pub violations: Vec<String>,
    pub passed: bool,
    #[serde(skip)]
    pub trace: WalkTrace,
}

/// Checks `d_k <= base^{2k}` and `d_k <= ||w||^2 base^{2k}` for `k = 0..=steps`,
/// with `d_k` evaluated both by iteration and spectrally, where
/// `base = max_{j>ell} |λ_j|`.
pub fn verify_theorem1(
    g: &Graph,
    basis: &SpectralBasis,
    m: &DesignMeasure,
    steps: usize,
    tol: f64,
) -> Result<Theorem1Report> {
    require_walk(basis)?;
    let mu0 = m.to_dense();
    let mut trace = iterate_walk(g, &mu0, steps)?;
    let spectral = spectral_distances(basis, &mu0, steps)?;
    let base = basis.decay_base(m.ell);
    trace.bound_base = Some(base);

    let mut rows = Vec::with_capacity(steps + 1);
    let mut violations = Vec::new();
    let mut max_disagreement = 0.0_f64;
    let mut bound = 1.0;
    for (k, (&iterated, &exact)) in trace.distances.iter().zip(&spectral).enumerate() {
        let sharpened_bound = m.l2_norm_sq * bound;
        let gap = (iterated - exact).abs();
        max_disagreement = max_disagreement.max(gap);
        if gap > tol {
            violations.push(format!("k={k}: iterated {iterated:e} and spectral {exact:e} disagree"));
        }
        for (what, d) in [("iterated", iterated), ("spectral", exact)] {
            if d > bound + tol {
                violations.push(format!("k={k}: {what} distance {d:e} exceeds bound {bound:e}"));
            }
            if d > sharpened_bound + tol {
                violations.push(format!("k={k}: {what} distance {d:e} exceeds sharpened bound {sharpened_bound:e}"));
            }
        }
        rows.push(BoundRow { k, iterated, spectral: exact, bound, sharpened_bound });
        bound *= base * base;
    }
    Ok(Theorem1Report {
        ell: m.ell,
        bound_base: base,
        l2_norm_sq: m.l2_norm_sq,
        tolerance: tol,
        max_disagreement,
        fitted_rate: trace.fitted_rate,
        passed: violations.is_empty(),
        violations,
        rows,
        trace,
    })
}

impl Theorem1Report {
    /// CSV with columns `k, distance_sq, bound, sharpened_bound, distance`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "distance_sq", "bound", "sharpened_bound", "distance"])?;
        for r in &self.rows {
            w.write_record([
                r.k.to_string(),
                format!("{:?}", r.iterated),
                format!("{:?}", r.bound),
                format!("{:?}", r.sharpened_bound),
                format!("{:?}", r.iterated.sqrt()),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
