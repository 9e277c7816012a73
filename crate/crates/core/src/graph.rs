//! Simple undirected graphs: edge-list ingestion, family generators and the
//! random-walk operator `AD^{-1} = A/d`.
//!
//! A [`Graph`] is always simple and connected. Regularity is only required by
//! the walk-matrix pipeline and is checked by [`Graph::degree`] /
//! [`load_edge_list`]; the Laplacian pipeline accepts any degree sequence.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Pairing attempts before giving up.
pub const RANDOM_REGULAR_RETRY_BUDGET: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Canonical edges `(i, j)` with `i < j`, sorted lexicographically.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbor lists.
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a simple connected graph on vertices `0..n`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if e.1 >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge {{{},{}}} references a vertex outside 0..{n}",
                    e.0, e.1
                )));
            }
            if !set.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let g = Graph { n, edges, adjacency };
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(unreached) => Err(Error::Disconnected { unreached }),
            None => Ok(()),
        }
    }

    /// Parses an edge-list document without requiring regularity.
    ///
    /// One edge `i j` per line; blank lines and lines starting with `#` are
    /// ignored. The vertex set is `0..=max id`.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_id = None::<usize>;
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut next_id = |what: &str| -> Result<usize> {
                let tok = fields.next().ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("missing {what} vertex"),
                })?;
                tok.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid vertex id {tok:?}"),
                })
            };
            let a = next_id("first")?;
            let b = next_id("second")?;
            if let Some(extra) = fields.next() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unexpected trailing field {extra:?}"),
                });
            }
            if a == b {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("self-loop at vertex {a}"),
                });
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::DuplicateEdge(a.min(b), a.max(b)));
            }
            max_id = Some(max_id.map_or(a.max(b), |m| m.max(a).max(b)));
            edges.push((a, b));
        }
        let n = max_id.ok_or(Error::EmptyGraph)? + 1;
        Graph::from_edges(n, edges)
    }

    /// Emits the canonical edge list: `i j` with `i < j`, lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edges.len() * 8);
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn is_regular(&self) -> bool {
        self.degree().is_ok()
    }

    /// The common degree `d`, or the first vertex violating regularity.
    ///
    /// The reference degree is the maximum degree (first vertex attaining it).
    pub fn degree(&self) -> Result<usize> {
        let degrees = self.degrees();
        let (reference, expected) = degrees
            .iter()
            .copied()
            .enumerate()
            .fold((0, 0), |best, (v, d)| if d > best.1 { (v, d) } else { best });
        match degrees.iter().position(|&d| d != expected) {
            Some(vertex) => Err(Error::Irregular {
                vertex,
                degree: degrees[vertex],
                expected,
                reference,
            }),
            None => Ok(expected),
        }
    }

    /// Applies the walk matrix `AD^{-1} = A/d` by neighbor accumulation.
    pub fn walk_matrix_apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let d = self.degree()?;
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        let inv_d = 1.0 / d as f64;
        Ok(self
            .adjacency
            .iter()
            .map(|nbrs| nbrs.iter().map(|&u| v[u]).sum::<f64>() * inv_d)
            .collect())
    }

    /// Dense row-major adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for &(i, j) in &self.edges {
            a[i * self.n + j] = 1.0;
            a[j * self.n + i] = 1.0;
        }
        a
    }
}

/// Parses an edge list and requires the result to be regular.
pub fn load_edge_list(text: &str) -> Result<Graph> {
    let g = Graph::parse_edge_list(text)?;
    g.degree()?;
    Ok(g)
}

/// Named graph families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Cycle { n: usize },
    Complete { n: usize },
    /// `K_{m,m}`; unequal parts would not be regular.
    CompleteBipartite { m: usize },
    Hypercube { dim: usize },
    Petersen,
    /// Vertex `i` adjacent to `i ± s (mod n)` for each offset `s`.
    Circulant { n: usize, offsets: Vec<usize> },
    RandomRegular { n: usize, degree: usize, seed: u64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Cycle { .. } => "cycle",
            Family::Complete { .. } => "complete",
            Family::CompleteBipartite { .. } => "complete_bipartite",
            Family::Hypercube { .. } => "hypercube",
            Family::Petersen => "petersen",
            Family::Circulant { .. } => "circulant",
            Family::RandomRegular { .. } => "random_regular",
        }
    }
}

/// Generates a connected regular graph from a named family.
pub fn generate(family: &Family) -> Result<Graph> {
    let invalid = |msg: String| Err(Error::InvalidParameter(msg));
    let g = match *family {
        Family::Cycle { n } => {
            if n < 3 {
                return invalid(format!("cycle needs n >= 3, got {n}"));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))?
        }
        Family::Complete { n } => {
            if n < 2 {
                return invalid(format!("complete graph needs n >= 2, got {n}"));
            }
            Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))?
        }
        Family::CompleteBipartite { m } => {
            if m < 1 {
                return invalid("complete_bipartite needs m >= 1".into());
            }
            Graph::from_edges(2 * m, (0..m).flat_map(|i| (m..2 * m).map(move |j| (i, j))))?
        }
        Family::Hypercube { dim } => {
            if !(1..=20).contains(&dim) {
                return invalid(format!("hypercube dimension must be in 1..=20, got {dim}"));
            }
            let n = 1usize << dim;
            Graph::from_edges(
                n,
                (0..n).flat_map(|v| (0..dim).map(move |b| (v, v ^ (1 << b))).filter(|&(a, b)| a < b)),
            )?
        }
        Family::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            Graph::from_edges(10, outer.chain(spokes).chain(inner))?
        }
        Family::Circulant { n, ref offsets } => {
            if n < 3 {
                return invalid(format!("circulant needs n >= 3, got {n}"));
            }
            let mut uniq = BTreeSet::new();
            for &s in offsets {
                if s == 0 || s > n / 2 {
                    return invalid(format!("circulant offset {s} outside 1..={}", n / 2));
                }
                if !uniq.insert(s) {
                    return invalid(format!("repeated circulant offset {s}"));
                }
            }
            if uniq.is_empty() {
                return invalid("circulant needs at least one offset".into());
            }
            let mut edges = BTreeSet::new();
            for i in 0..n {
                for &s in &uniq {
                    let j = (i + s) % n;
                    edges.insert((i.min(j), i.max(j)));
                }
            }
            Graph::from_edges(n, edges)?
        }
        Family::RandomRegular { n, degree, seed } => random_regular(n, degree, seed)?,
    };
    Ok(g)
}

/// Configuration (pairing) model with rejection of loops, multi-edges and
/// disconnected outcomes. Deterministic in `seed`.
/// Steger-Wormald pairing: repeatedly joins two random free stubs whose
/// vertices are distinct and not yet adjacent. `None` when stuck.
fn pair_stubs(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<BTreeSet<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut edges = BTreeSet::new();
    let ok = |edges: &BTreeSet<(usize, usize)>, a: usize, b: usize| a != b && !edges.contains(&(a.min(b), a.max(b)));
    while !stubs.is_empty() {
        let r = stubs.len();
        let mut pick = None;
        for _ in 0..4 * r {
            let (i, j) = (rng.random_range(0..r), rng.random_range(0..r));
            if i != j && ok(&edges, stubs[i], stubs[j]) {
                pick = Some((i, j));
                break;
            }
        }
        if pick.is_none() {
            let valid: Vec<(usize, usize)> = (0..r)
                .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
                .filter(|&(i, j)| ok(&edges, stubs[i], stubs[j]))
                .collect();
            if valid.is_empty() {
                return None;
            }
            pick = Some(valid[rng.random_range(0..valid.len())]);
        }
        let (i, j) = pick?;
        let (a, b) = (stubs[i], stubs[j]);
        edges.insert((a.min(b), a.max(b)));
        let (hi, lo) = (i.max(j), i.min(j));
        stubs.swap_remove(hi);
        stubs.swap_remove(lo);
    }
    Some(edges)
}

fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d == 0 || d >= n || !(n * d).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "random_regular needs 1 <= d < n and n*d even, got n={n}, d={d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_REGULAR_RETRY_BUDGET {
        let Some(edges) = pair_stubs(n, d, &mut rng) else { continue };
        match Graph::from_edges(n, edges) {
            Ok(g) => return Ok(g),
            Err(Error::Disconnected { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenerationFailed {
        seed,
        budget: RANDOM_REGULAR_RETRY_BUDGET,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_four_cycle() {
        let g = load_edge_list("0 1\n1 2\n2 3\n3 0").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.degree().unwrap(), 2);
        assert_eq!(g.edges(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn path_is_rejected_as_irregular() {
        let err = load_edge_list("0 1\n1 2").unwrap_err();
        assert_eq!(err.to_string(), "vertex 0 has degree 1 \u{2260} degree 2 of vertex 1");
    }

    #[test]
    fn duplicate_edge_rejected() {
        let err = load_edge_list("0 1\n1 0").unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge(0, 1)), "{err}");
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = load_edge_list("# square\n\n0 1\n  1 2\n# mid\n2 3\n3 0\n").unwrap();
        assert_eq!(g.n(), 4);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match load_edge_list("0 1\n1 x\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e}"),
        }
        match load_edge_list("0 1\n\n2\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e}"),
        }
        assert!(matches!(load_edge_list("3 3").unwrap_err(), Error::Parse { line: 1, .. }));
        assert!(matches!(load_edge_list("# nothing\n").unwrap_err(), Error::EmptyGraph));
    }

    #[test]
    fn disconnected_rejected() {
        let err = load_edge_list("0 1\n2 3").unwrap_err();
        assert!(matches!(err, Error::Disconnected { unreached: 2 }), "{err}");
        // vertex 2 never appears, so it is isolated
        let err = Graph::parse_edge_list("0 1\n1 3\n3 0").unwrap_err();
        assert!(matches!(err, Error::Disconnected { unreached: 2 }), "{err}");
    }

    #[test]
    fn irregular_graph_accepted_without_regularity() {
        let g = Graph::parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g.degrees(), vec![1, 2, 1]);
        assert!(g.walk_matrix_apply(&[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn family_sizes() {
        let c4 = generate(&Family::Cycle { n: 4 }).unwrap();
        assert_eq!(c4.edges(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);
        let p = generate(&Family::Petersen).unwrap();
        assert_eq!((p.n(), p.degree().unwrap(), p.edges().len()), (10, 3, 15));
        let k33 = generate(&Family::CompleteBipartite { m: 3 }).unwrap();
        assert_eq!((k33.n(), k33.degree().unwrap()), (6, 3));
        let q3 = generate(&Family::Hypercube { dim: 3 }).unwrap();
        assert_eq!((q3.n(), q3.degree().unwrap()), (8, 3));
        let k5 = generate(&Family::Complete { n: 5 }).unwrap();
        assert_eq!(k5.degree().unwrap(), 4);
        let circ = generate(&Family::Circulant { n: 8, offsets: vec![1, 4] }).unwrap();
        assert_eq!(circ.degree().unwrap(), 3);
    }

    #[test]
    fn invalid_family_parameters() {
        assert!(generate(&Family::Cycle { n: 2 }).is_err());
        assert!(generate(&Family::Circulant { n: 8, offsets: vec![5] }).is_err());
        // offsets {2} on n = 8 split into two 4-cycles
        assert!(matches!(
            generate(&Family::Circulant { n: 8, offsets: vec![2] }),
            Err(Error::Disconnected { .. })
        ));
        assert!(generate(&Family::RandomRegular { n: 7, degree: 3, seed: 1 }).is_err());
    }

    #[test]
    fn random_regular_is_deterministic_and_regular() {
        let fam = Family::RandomRegular { n: 30, degree: 4, seed: 11 };
        let a = generate(&fam).unwrap();
        let b = generate(&fam).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree().unwrap(), 4);
        let c = generate(&Family::RandomRegular { n: 30, degree: 4, seed: 12 }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn walk_on_four_cycle() {
        let g = generate(&Family::Cycle { n: 4 }).unwrap();
        assert_eq!(g.walk_matrix_apply(&[1.0, 0.0, 0.0, 0.0]).unwrap(), vec![0.0, 0.5, 0.0, 0.5]);
        assert_eq!(g.walk_matrix_apply(&[1.0; 4]).unwrap(), vec![1.0; 4]);
        assert!(matches!(
            g.walk_matrix_apply(&[1.0; 3]),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn walk_on_petersen_spreads_to_neighbors() {
        let g = generate(&Family::Petersen).unwrap();
        let mut delta = vec![0.0; 10];
        delta[0] = 1.0;
        let out = g.walk_matrix_apply(&delta).unwrap();
        for (v, &x) in out.iter().enumerate() {
            let expected = if g.neighbors(0).contains(&v) { 1.0 / 3.0 } else { 0.0 };
            assert_eq!(x, expected);
        }
    }

    #[test]
    fn cycle_round_trips_through_edge_list() {
        for n in 3..12 {
            let g = generate(&Family::Cycle { n }).unwrap();
            assert_eq!(load_edge_list(&g.to_edge_list()).unwrap(), g);
        }
    }
}
