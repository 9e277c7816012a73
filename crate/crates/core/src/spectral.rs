//! Orthonormal eigenbases of the walk matrix `A/d` or the Laplacian `D - A`.
//!
//! Position 1 of every basis is the trivial eigenpair: the exact vector
//! `1/sqrt(n)` with eigenvalue 1 (walk matrix) or 0 (Laplacian). The remaining
//! positions follow an [`OrderingPolicy`]. Positions are 1-based throughout
//! the public API, matching `ell`.
//!
//! Repeated eigenvalues make the eigenvectors ambiguous. Each eigenspace is
//! rebuilt from the projections of the coordinate vectors `e_0, e_1, ...`
//! (Gram-Schmidt in coordinate order), so the chosen basis depends only on the
//! subspace and not on the rotation sequence of the eigensolver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{dot, jacobi_eigen, norm};

/// Eigenvalues closer than this are treated as one eigenspace.
pub const EIGEN_GROUP_TOL: f64 = 1e-9;
/// Minimal residual norm for a projected coordinate vector to seed a new
/// basis vector.
const SEED_ACCEPT_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    WalkMatrix,
    Laplacian,
}

impl OperatorKind {
    /// Eigenvalue of the constant vector.
    pub fn trivial_eigenvalue(self) -> f64 {
        match self {
            OperatorKind::WalkMatrix => 1.0,
            OperatorKind::Laplacian => 0.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingPolicy {
    /// Walk matrix: `|λ_2| >= ... >= |λ_n|`. Laplacian: ascending eigenvalue.
    #[default]
    AbsDesc,
    /// `perm[p - 2]` is the default-order position placed at position `p`,
    /// for `p = 2..=n`. A permutation of `2..=n`.
    Custom(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    operator: OperatorKind,
    ordering: OrderingPolicy,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<f64>>,
    residual: f64,
}

/// One row of [`SpectralBasis::gap_report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapEntry {
    pub ell: usize,
    /// Guaranteed per-step decay base for a design of this `ell`.
    pub decay_base: f64,
    /// `|λ_ell| = |λ_{ell+1}|`: the cut splits an eigenvalue level.
    pub tie: bool,
}

/// Dense row-major operator matrix.
pub fn operator_matrix(g: &Graph, op: OperatorKind) -> Result<Vec<f64>> {
    let n = g.n();
    let mut m = g.adjacency_matrix();
    match op {
        OperatorKind::WalkMatrix => {
            let inv_d = 1.0 / g.degree()? as f64;
            m.iter_mut().for_each(|x| *x *= inv_d);
        }
        OperatorKind::Laplacian => {
            m.iter_mut().for_each(|x| *x = -*x);
            for (v, d) in g.degrees().into_iter().enumerate() {
                m[v * n + v] = d as f64;
            }
        }
    }
    Ok(m)
}

fn mat_vec(m: &[f64], x: &[f64]) -> Vec<f64> {
    m.chunks_exact(x.len()).map(|row| dot(row, x)).collect()
}

/// Orthonormal basis of `span(vectors)` rebuilt from projected coordinate
/// vectors, after the vectors in `fixed` (already orthonormal, inside the span).
fn canonical_subspace_basis(vectors: &[Vec<f64>], fixed: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let dim = vectors.len();
    let n = vectors[0].len();
    let mut basis = fixed;
    for i in 0..n {
        if basis.len() >= dim {
            break;
        }
        // P e_i = sum_k v_k v_k[i]
        let mut x = vec![0.0; n];
        for v in vectors {
            let c = v[i];
            x.iter_mut().zip(v).for_each(|(xj, vj)| *xj += c * vj);
        }
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&x, b);
                x.iter_mut().zip(b).for_each(|(xj, bj)| *xj -= c * bj);
            }
        }
        let len = norm(&x);
        if len > SEED_ACCEPT_TOL {
            x.iter_mut().for_each(|xj| *xj /= len);
            basis.push(x);
        }
    }
    debug_assert_eq!(basis.len(), dim);
    basis
}

/// Eigen-decomposition of the chosen operator under an ordering policy.
pub fn decompose(g: &Graph, op: OperatorKind, policy: OrderingPolicy) -> Result<SpectralBasis> {
    let n = g.n();
    let matrix = operator_matrix(g, op)?;
    let (raw_values, raw_vectors) = jacobi_eigen(&matrix, n)?;

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| raw_values[a].total_cmp(&raw_values[b]));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &idx {
        match groups.last_mut() {
            Some(grp) if raw_values[i] - raw_values[*grp.last().unwrap()] <= EIGEN_GROUP_TOL => grp.push(i),
            _ => groups.push(vec![i]),
        }
    }

    let trivial = op.trivial_eigenvalue();
    let trivial_group = groups
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let da = (raw_values[a.1[0]] - trivial).abs();
            let db = (raw_values[b.1[0]] - trivial).abs();
            da.total_cmp(&db)
        })
        .map(|(k, _)| k)
        .expect("non-empty spectrum");
    let ones = vec![1.0 / (n as f64).sqrt(); n];

    // (eigenvalue, eigenvector) in ascending eigenvalue order, trivial pair tagged
    let mut pairs: Vec<(f64, Vec<f64>, bool)> = Vec::with_capacity(n);
    for (k, grp) in groups.iter().enumerate() {
        let vectors: Vec<Vec<f64>> = grp.iter().map(|&i| raw_vectors[i].clone()).collect();
        let fixed = if k == trivial_group { vec![ones.clone()] } else { Vec::new() };
        for (pos, phi) in canonical_subspace_basis(&vectors, fixed).into_iter().enumerate() {
            let is_trivial = k == trivial_group && pos == 0;
            let value = if is_trivial {
                trivial
            } else {
                dot(&phi, &mat_vec(&matrix, &phi))
            };
            pairs.push((value, phi, is_trivial));
        }
    }

    let trivial_pos = pairs.iter().position(|p| p.2).expect("trivial pair present");
    let (_, phi1, _) = pairs.remove(trivial_pos);
    let mut rest: Vec<(f64, Vec<f64>)> = pairs.into_iter().map(|(v, phi, _)| (v, phi)).collect();
    match op {
        OperatorKind::WalkMatrix => sort_abs_desc(&mut rest),
        // already ascending
        OperatorKind::Laplacian => {}
    }

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    eigenvalues.push(trivial);
    eigenvectors.push(phi1);
    for (v, phi) in rest {
        eigenvalues.push(v);
        eigenvectors.push(phi);
    }

    let mut basis = SpectralBasis {
        operator: op,
        ordering: OrderingPolicy::AbsDesc,
        eigenvalues,
        eigenvectors,
        residual: 0.0,
    };
    basis.residual = basis.reconstruction_residual(&matrix);
    if let OrderingPolicy::Custom(perm) = policy {
        basis = basis.reordered(&perm)?;
    }
    Ok(basis)
}

/// Sorts by `|λ|` descending. Ties (within the grouping tolerance): positive
/// before negative, then by the incoming (ascending value) order.
fn sort_abs_desc(pairs: &mut Vec<(f64, Vec<f64>)>) {
    let mut keyed: Vec<(usize, (f64, Vec<f64>))> = pairs.drain(..).enumerate().collect();
    keyed.sort_by(|a, b| b.1 .0.abs().total_cmp(&a.1 .0.abs()));
    let mut start = 0;
    while start < keyed.len() {
        let mut end = start + 1;
        while end < keyed.len() && keyed[end - 1].1 .0.abs() - keyed[end].1 .0.abs() <= EIGEN_GROUP_TOL {
            end += 1;
        }
        keyed[start..end].sort_by_key(|(orig, (v, _))| (*v < -EIGEN_GROUP_TOL, *orig));
        start = end;
    }
    pairs.extend(keyed.into_iter().map(|(_, p)| p));
}

impl SpectralBasis {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn operator(&self) -> OperatorKind {
        self.operator
    }

    pub fn ordering(&self) -> &OrderingPolicy {
        &self.ordering
    }

    /// Eigenvalues in policy order; `eigenvalues()[j - 1]` is `λ_j`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors in policy order; `eigenvectors()[j - 1]` is `φ_j`.
    pub fn eigenvectors(&self) -> &[Vec<f64>] {
        &self.eigenvectors
    }

    /// `λ_j` for 1-based position `j`.
    pub fn eigenvalue(&self, j: usize) -> f64 {
        self.eigenvalues[j - 1]
    }

    /// `φ_j` for 1-based position `j`.
    pub fn eigenvector(&self, j: usize) -> &[f64] {
        &self.eigenvectors[j - 1]
    }

    /// Maximum entrywise error of the eigen-equations and of the
    /// reconstruction `Σ λ_i φ_i φ_i^T` against the operator.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Coefficients `⟨φ_i, x⟩` for all positions.
    pub fn coefficients(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: x.len(),
            });
        }
        Ok(self.eigenvectors.iter().map(|phi| dot(phi, x)).collect())
    }

    /// `max_{j > ell} |λ_j|`, the per-step contraction of any measure
    /// orthogonal to `φ_2..φ_ell`. Equals `|λ_{ell+1}|` under [`OrderingPolicy::AbsDesc`]
    /// for the walk matrix.
    pub fn decay_base(&self, ell: usize) -> f64 {
        self.eigenvalues[ell.min(self.n())..]
            .iter()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// The menu of decay bases for `ell = 1..n-1`.
    pub fn gap_report(&self) -> Vec<GapEntry> {
        (1..self.n())
            .map(|ell| GapEntry {
                ell,
                decay_base: self.decay_base(ell),
                tie: (self.eigenvalue(ell).abs() - self.eigenvalue(ell + 1).abs()).abs() <= EIGEN_GROUP_TOL,
            })
            .collect()
    }

    /// Max `|⟨φ_i, φ_j⟩ - δ_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut err = 0.0_f64;
        for (i, a) in self.eigenvectors.iter().enumerate() {
            for (j, b) in self.eigenvectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((dot(a, b) - target).abs());
            }
        }
        err
    }

    fn reconstruction_residual(&self, matrix: &[f64]) -> f64 {
        let n = self.n();
        let mut err = 0.0_f64;
        for (l, phi) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let ax = mat_vec(matrix, phi);
            for (a, p) in ax.iter().zip(phi) {
                err = err.max((a - l * p).abs());
            }
        }
        for r in 0..n {
            for c in r..n {
                let s: f64 = self
                    .eigenvalues
                    .iter()
                    .zip(&self.eigenvectors)
                    .map(|(l, phi)| l * phi[r] * phi[c])
                    .sum();
                err = err.max((s - matrix[r * n + c]).abs());
            }
        }
        err
    }

    /// Reorders positions `2..=n`: `order[p - 2]` is the current position
    /// moved to position `p`. The result records the composed permutation
    /// relative to the default order.
    pub fn reordered(&self, order: &[usize]) -> Result<SpectralBasis> {
        let n = self.n();
        validate_permutation(order, n)?;
        let current: Vec<usize> = match &self.ordering {
            OrderingPolicy::AbsDesc => (2..=n).collect(),
            OrderingPolicy::Custom(p) => p.clone(),
        };
        let composed: Vec<usize> = order.iter().map(|&pos| current[pos - 2]).collect();
        let mut eigenvalues = vec![self.eigenvalues[0]];
        let mut eigenvectors = vec![self.eigenvectors[0].clone()];
        for &pos in order {
            eigenvalues.push(self.eigenvalues[pos - 1]);
            eigenvectors.push(self.eigenvectors[pos - 1].clone());
        }
        let ordering = if composed.iter().copied().eq(2..=n) {
            OrderingPolicy::AbsDesc
        } else {
            OrderingPolicy::Custom(composed)
        };
        Ok(SpectralBasis {
            operator: self.operator,
            ordering,
            eigenvalues,
            eigenvectors,
            residual: self.residual,
        })
    }

    /// Moves the given positions (in the given order) to positions
    /// `2..=chosen.len()+1`, keeping the rest in their current relative order.
    pub fn with_leading(&self, chosen: &[usize]) -> Result<SpectralBasis> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        for &j in chosen {
            if !(2..=n).contains(&j) {
                return Err(Error::InvalidOrdering(format!("position {j} outside 2..={n}")));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidOrdering(format!("position {j} repeated")));
            }
        }
        let order: Vec<usize> = chosen.iter().copied().chain((2..=n).filter(|&j| !seen[j])).collect();
        self.reordered(&order)
    }
}

fn validate_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n - 1 {
        return Err(Error::InvalidOrdering(format!(
            "expected a permutation of 2..={n} ({} entries), got {} entries",
            n - 1,
            order.len()
        )));
    }
    let mut seen = vec![false; n + 1];
    for &p in order {
        if !(2..=n).contains(&p) || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidOrdering(format!("{p} breaks the permutation of 2..={n}")));
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct BasisDocument {
    operator: OperatorKind,
    ordering: OrderingPolicy,
    n: usize,
    eigenvalues: Vec<f64>,
    /// Row-major, row `i` is `φ_{i+1}`.
    eigenvectors: Vec<f64>,
    residual: f64,
}

impl Serialize for SpectralBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BasisDocument {
            operator: self.operator,
            ordering: self.ordering.clone(),
            n: self.n(),
            eigenvalues: self.eigenvalues.clone(),
            eigenvectors: self.eigenvectors.concat(),
            residual: self.residual,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpectralBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = BasisDocument::deserialize(d)?;
        if doc.eigenvalues.len() != doc.n || doc.eigenvectors.len() != doc.n * doc.n {
            return Err(D::Error::custom("eigen arrays do not match n"));
        }
        Ok(SpectralBasis {
            operator: doc.operator,
            ordering: doc.ordering,
            eigenvectors: doc.eigenvectors.chunks_exact(doc.n).map(<[f64]>::to_vec).collect(),
            eigenvalues: doc.eigenvalues,
            residual: doc.residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn walk(family: Family) -> SpectralBasis {
        decompose(&generate(&family).unwrap(), OperatorKind::WalkMatrix, OrderingPolicy::AbsDesc).unwrap()
    }

    fn assert_spectrum(basis: &SpectralBasis, expected: &[f64]) {
        for (got, want) in basis.eigenvalues().iter().zip(expected) {
            assert!((got - want).abs() < 1e-9, "{:?} vs {expected:?}", basis.eigenvalues());
        }
    }

    #[test]
    fn four_cycle_spectrum() {
        let b = walk(Family::Cycle { n: 4 });
        assert_spectrum(&b, &[1.0, -1.0, 0.0, 0.0]);
        // sign fixed by seeding from e_0
        for (x, y) in b.eigenvector(2).iter().zip([0.5, -0.5, 0.5, -0.5]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn petersen_spectrum() {
        let t = 1.0 / 3.0;
        assert_spectrum(
            &walk(Family::Petersen),
            &[1.0, -2.0 * t, -2.0 * t, -2.0 * t, -2.0 * t, t, t, t, t, t],
        );
    }

    #[test]
    fn k33_spectrum() {
        assert_spectrum(&walk(Family::CompleteBipartite { m: 3 }), &[1.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn trivial_vector_is_exact() {
        let b = walk(Family::Petersen);
        assert!(b.eigenvector(1).iter().all(|&x| x == 1.0 / 10f64.sqrt()));
        assert_eq!(b.eigenvalue(1), 1.0);
    }

    #[test]
    fn positive_precedes_negative_on_ties() {
        // C_6 walk spectrum: 1, 1/2, 1/2, -1/2, -1/2, -1
        let b = walk(Family::Cycle { n: 6 });
        assert_spectrum(&b, &[1.0, -1.0, 0.5, 0.5, -0.5, -0.5]);
    }

    #[test]
    fn gap_report_petersen() {
        let rep = walk(Family::Petersen).gap_report();
        assert_eq!(rep.len(), 9);
        assert!((rep[0].decay_base - 2.0 / 3.0).abs() < 1e-9 && !rep[0].tie);
        for e in &rep[1..4] {
            assert!(e.tie && (e.decay_base - 2.0 / 3.0).abs() < 1e-9);
        }
        assert!((rep[4].decay_base - 1.0 / 3.0).abs() < 1e-9 && !rep[4].tie);
    }

    #[test]
    fn gap_report_four_cycle() {
        let rep = walk(Family::Cycle { n: 4 }).gap_report();
        assert!((rep[0].decay_base - 1.0).abs() < 1e-12);
        assert!(rep[1].decay_base.abs() < 1e-12);
        assert!(rep[2].decay_base.abs() < 1e-12);
    }

    #[test]
    fn walk_matrix_requires_regular() {
        let g = Graph::parse_edge_list("0 1\n1 2").unwrap();
        assert!(matches!(
            decompose(&g, OperatorKind::WalkMatrix, OrderingPolicy::AbsDesc),
            Err(Error::Irregular { .. })
        ));
        let b = decompose(&g, OperatorKind::Laplacian, OrderingPolicy::AbsDesc).unwrap();
        assert_spectrum(&b, &[0.0, 1.0, 3.0]);
    }

    #[test]
    fn custom_ordering() {
        let b = walk(Family::Petersen);
        let perm: Vec<usize> = (2..=10).rev().collect();
        let c = decompose(
            &generate(&Family::Petersen).unwrap(),
            OperatorKind::WalkMatrix,
            OrderingPolicy::Custom(perm.clone()),
        )
        .unwrap();
        assert_eq!(c.ordering(), &OrderingPolicy::Custom(perm));
        assert_eq!(c.eigenvalue(2), b.eigenvalue(10));
        assert_eq!(c.eigenvector(10), b.eigenvector(2));
        // reversing again restores the default
        let back = c.reordered(&(2..=10).rev().collect::<Vec<_>>()).unwrap();
        assert_eq!(back, b);
        assert!(b.reordered(&[2, 3]).is_err());
        assert!(b.reordered(&[2, 2, 3, 4, 5, 6, 7, 8, 9]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let b = walk(Family::Cycle { n: 5 });
        let text = serde_json::to_string(&b).unwrap();
        let back: SpectralBasis = serde_json::from_str(&text).unwrap();
        assert_eq!(back, b);
    }
}
