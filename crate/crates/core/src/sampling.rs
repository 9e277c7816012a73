//! Designs as quadrature rules for the global mean of a graph function.
//!
//! For a design `w` of depth `ell`, the error `f̄ - ⟨f, w⟩` equals
//! `-Σ_{i>ell} ⟨φ_i, f⟩⟨φ_i, w⟩` and is bounded by the norm of the
//! high-frequency part of `f`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::design::{solve_design, verify_design, DesignMeasure, DesignMethod, ORTHOGONALITY_TOL};
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::spectral::SpectralBasis;

/// Agreement required between the direct error and its spectral expansion.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Name of the generator behind every seeded test function.
pub const RNG_NAME: &str = "ChaCha8Rng";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphFunction {
    pub values: Vec<f64>,
    /// `⟨φ_i, f⟩` for `i = 1..=n` against the basis it was built with.
    pub coefficients: Vec<f64>,
    /// How the function was produced, including generator and seed.
    pub label: String,
}

impl GraphFunction {
    pub fn new(basis: &SpectralBasis, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        let coefficients = basis.coefficients(&values)?;
        Ok(GraphFunction { values, coefficients, label: label.into() })
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn norm_sq(&self) -> f64 {
        dot(&self.values, &self.values)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// Gaussian coefficients on `φ_1..φ_L`.
    LowPass { band: usize, seed: u64 },
    /// Gaussian coefficients on `φ_{L+1}..φ_n`.
    HighPass { band: usize, seed: u64 },
    /// Standard normal vertex values.
    Random { seed: u64 },
    Indicator(Vec<usize>),
}

fn combine(basis: &SpectralBasis, coeffs: impl Iterator<Item = (usize, f64)>) -> Vec<f64> {
    let mut f = vec![0.0; basis.n()];
    for (j, c) in coeffs {
        f.iter_mut().zip(basis.eigenvector(j)).for_each(|(x, p)| *x += c * p);
    }
    f
}

pub fn make_test_function(basis: &SpectralBasis, kind: &TestFunction) -> Result<GraphFunction> {
    let n = basis.n();
    let check_band = |band: usize| {
        if band == 0 || band > n {
            Err(Error::InvalidParameter(format!("band {band} outside 1..={n}")))
        } else {
            Ok(())
        }
    };
    let (values, label) = match *kind {
        TestFunction::LowPass { band, seed } => {
            check_band(band)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coeffs: Vec<(usize, f64)> = (1..=band).map(|j| (j, rng.sample(StandardNormal))).collect();
            (combine(basis, coeffs.into_iter()), format!("low_pass(L={band},seed={seed},rng={RNG_NAME})"))
        }
        TestFunction::HighPass { band, seed } => {
            check_band(band)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coeffs: Vec<(usize, f64)> = (band + 1..=n).map(|j| (j, rng.sample(StandardNormal))).collect();
            (combine(basis, coeffs.into_iter()), format!("high_pass(L={band},seed={seed},rng={RNG_NAME})"))
        }
        TestFunction::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            (values, format!("random(seed={seed},rng={RNG_NAME})"))
        }
        TestFunction::Indicator(ref set) => {
            let mut values = vec![0.0; n];
            for &v in set {
                if v >= n {
                    return Err(Error::InvalidParameter(format!("vertex {v} outside 0..{n}")));
                }
                values[v] = 1.0;
            }
            (values, format!("indicator({set:?})"))
        }
    };
    GraphFunction::new(basis, values, label)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingReport {
    pub function: String,
    pub ell: usize,
    pub support: Vec<usize>,
    pub weights: Vec<f64>,
    /// `Σ_u a_u f(u)`.
    pub quadrature: f64,
    pub mean: f64,
    pub error: f64,
    /// `-Σ_{i>ell} ⟨φ_i, f⟩⟨φ_i, w⟩`, which should equal `mean - quadrature`.
    pub error_identity: f64,
    pub identity_gap: f64,
    pub identity_ok: bool,
    /// `(Σ_{i>ell} ⟨φ_i, f⟩^2)^{1/2}`.
    pub bound: f64,
    /// `bound · ||w||_2`, the intermediate Cauchy-Schwarz bound.
    pub cauchy_schwarz_bound: f64,
    pub high_freq_energy_fraction: f64,
    /// `error / bound`, absent when the bound vanishes.
    pub tightness: Option<f64>,
    pub within_bound: bool,
}

/// Uses `m` as a quadrature rule for the mean of `f`.
pub fn quadrature(basis: &SpectralBasis, m: &DesignMeasure, f: &GraphFunction, tol: f64) -> Result<SamplingReport> {
    let n = basis.n();
    for len in [m.n, f.values.len(), f.coefficients.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
    }
    let quad: f64 = m.support.iter().zip(&m.weights).map(|(&u, &a)| a * f.values[u]).sum();
    let mean = f.mean();
    let w_coeffs = basis.coefficients(&m.to_dense())?;
    let high = m.ell..n;
    let error_identity = -high.clone().map(|i| f.coefficients[i] * w_coeffs[i]).sum::<f64>();
    let tail: f64 = high.map(|i| f.coefficients[i] * f.coefficients[i]).sum();
    let bound = tail.sqrt();
    let error = (mean - quad).abs();
    let norm_sq = f.norm_sq();
    let identity_gap = ((mean - quad) - error_identity).abs();
    Ok(SamplingReport {
        function: f.label.clone(),
        ell: m.ell,
        support: m.support.clone(),
        weights: m.weights.clone(),
        quadrature: quad,
        mean,
        error,
        error_identity,
        identity_gap,
        identity_ok: identity_gap <= IDENTITY_TOL,
        bound,
        cauchy_schwarz_bound: bound * m.l2_norm_sq.sqrt(),
        high_freq_energy_fraction: if norm_sq > 0.0 { tail / norm_sq } else { 0.0 },
        tightness: (bound > 0.0).then(|| error / bound),
        within_bound: error <= bound + tol,
    })
}

/// A design orthogonal to the eigenvectors at the given positions (each in
/// `2..=n`), built by moving them to the front of the ordering.
pub fn tailored_design_for(basis: &SpectralBasis, frequencies: &[usize]) -> Result<(SpectralBasis, DesignMeasure)> {
    let reordered = basis.with_leading(frequencies)?;
    let ell = frequencies.len() + 1;
    let m = solve_design(&reordered, ell, &DesignMethod::ReduceUniform)?;
    let rep = verify_design(&reordered, &m, ORTHOGONALITY_TOL)?;
    if !rep.passed {
        return Err(Error::InvalidParameter(format!(
            "tailored design failed verification (orthogonality residual {:e})",
            rep.orthogonality_residual
        )));
    }
    Ok((reordered, m))
}

/// Batch CSV: `function_id, error, bound, fraction`.
pub fn write_batch_csv<W: Write>(reports: &[SamplingReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["function_id", "error", "bound", "fraction"])?;
    for r in reports {
        w.write_record([
            r.function.clone(),
            format!("{:?}", r.error),
            format!("{:?}", r.bound),
            format!("{:?}", r.high_freq_energy_fraction),
        ])?;
    }
    w.flush()?;
    Ok(())
}
