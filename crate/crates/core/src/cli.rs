//! The `designwalk` command line: `gen`, `spectrum`, `design`, `walk`,
//! `sample` and `sweep`. Every artifact lands in `--out` as one JSON or CSV
//! file; the exit status is 0 only when every verification in the run passed.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::design::{solve_design, verify_design, DesignMeasure, DesignMethod, DesignReport, ORTHOGONALITY_TOL};
use crate::error::{Error, Result};
use crate::graph::{generate, load_edge_list, Family, Graph};
use crate::io::{write_atomic, write_json_atomic};
use crate::sampling::{make_test_function, quadrature, write_batch_csv, SamplingReport, TestFunction};
use crate::spectral::{decompose, OperatorKind, OrderingPolicy, SpectralBasis};
use crate::walk::verify_theorem1;

/// Environment variable overriding the verification tolerance.
pub const TOLERANCE_ENV: &str = "DESIGNWALK_TOL";

#[derive(Debug, Parser)]
#[command(name = "designwalk", version, about = "Graphical designs, random-walk equidistribution and graph quadrature")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the edge list of a graph.
    Gen(CommonArgs),
    /// Eigenbasis and decay-base menu.
    Spectrum(CommonArgs),
    /// Construct and verify a design.
    Design {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        ell: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Reduce)]
        method: MethodArg,
    },
    /// Iterate the walk from an initial measure and check the decay bound.
    Walk {
        #[command(flatten)]
        common: CommonArgs,
        /// `dirac:<v>`, `uniform`, `file:<path>` or `design`.
        #[arg(long, default_value = "design")]
        mu0: String,
        /// Required for `--mu0 design`; otherwise the nominal depth (default 1).
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::Reduce)]
        method: MethodArg,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// Use a design as a quadrature rule for seeded random functions.
    Sample {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        ell: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Reduce)]
        method: MethodArg,
        #[arg(long, default_value_t = 100)]
        functions: usize,
    },
    /// Design and walk for every ell = 1..n-1.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Reduce)]
        method: MethodArg,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Edge-list file.
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub degree: Option<usize>,
    /// Circulant offsets, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub offsets: Vec<usize>,
    #[arg(long, value_enum, default_value_t = OperatorArg::Walk)]
    pub operator: OperatorArg,
    /// `abs` or `custom:<perm-file>`.
    #[arg(long, default_value = "abs")]
    pub order: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum FamilyArg {
    Cycle,
    Complete,
    CompleteBipartite,
    Hypercube,
    Petersen,
    Circulant,
    RandomRegular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorArg {
    Walk,
    Laplacian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Reduce,
    Lp,
}

impl From<OperatorArg> for OperatorKind {
    fn from(op: OperatorArg) -> Self {
        match op {
            OperatorArg::Walk => OperatorKind::WalkMatrix,
            OperatorArg::Laplacian => OperatorKind::Laplacian,
        }
    }
}

impl From<MethodArg> for DesignMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Reduce => DesignMethod::ReduceUniform,
            MethodArg::Lp => DesignMethod::LpVertex(None),
        }
    }
}

/// Result of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub passed: bool,
    pub files: Vec<PathBuf>,
}

impl CommonArgs {
    fn family(&self) -> Result<Family> {
        let need = |v: Option<usize>, flag: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required for this family")))
        };
        let family = self
            .family
            .ok_or_else(|| Error::InvalidParameter("one of --graph or --family is required".into()))?;
        Ok(match family {
            FamilyArg::Cycle => Family::Cycle { n: need(self.n, "n")? },
            FamilyArg::Complete => Family::Complete { n: need(self.n, "n")? },
            FamilyArg::CompleteBipartite => Family::CompleteBipartite { m: need(self.m, "m")? },
            FamilyArg::Hypercube => Family::Hypercube { dim: need(self.dim, "dim")? },
            FamilyArg::Petersen => Family::Petersen,
            FamilyArg::Circulant => Family::Circulant { n: need(self.n, "n")?, offsets: self.offsets.clone() },
            FamilyArg::RandomRegular => Family::RandomRegular {
                n: need(self.n, "n")?,
                degree: need(self.degree, "degree")?,
                seed: self.seed,
            },
        })
    }

    pub fn load_graph(&self) -> Result<Graph> {
        match &self.graph {
            Some(path) => {
                let text = read_text(path.as_ref())?;
                match self.operator {
                    OperatorArg::Walk => load_edge_list(&text),
                    OperatorArg::Laplacian => Graph::parse_edge_list(&text),
                }
            }
            None => generate(&self.family()?),
        }
    }

    fn ordering(&self) -> Result<OrderingPolicy> {
        if self.order == "abs" {
            return Ok(OrderingPolicy::AbsDesc);
        }
        let path = self
            .order
            .strip_prefix("custom:")
            .ok_or_else(|| Error::InvalidParameter(format!("unknown --order {:?}", self.order)))?;
        let text = read_text(path.as_ref())?;
        let perm = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidOrdering(format!("{t:?} is not a position")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OrderingPolicy::Custom(perm))
    }

    fn basis(&self, g: &Graph) -> Result<SpectralBasis> {
        decompose(g, self.operator.into(), self.ordering()?)
    }

    fn output(&self, name: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out)?;
        Ok(self.out.join(name))
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

/// Verification tolerance, `DESIGNWALK_TOL` if set.
pub fn tolerance() -> Result<f64> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t >= 0.0)
            .ok_or_else(|| Error::InvalidParameter(format!("{TOLERANCE_ENV}={v:?} is not a tolerance"))),
        Err(_) => Ok(ORTHOGONALITY_TOL),
    }
}

#[derive(Serialize)]
struct SpectrumSummary<'a> {
    residual: f64,
    orthonormality_error: f64,
    passed: bool,
    gap_report: &'a [crate::spectral::GapEntry],
}

/// Parses an initial-measure specifier.
fn initial_measure(spec: &str, basis: &SpectralBasis, ell: usize) -> Result<DesignMeasure> {
    let n = basis.n();
    if spec == "uniform" {
        return DesignMeasure::from_weights(basis, ell, &vec![1.0 / n as f64; n]);
    }
    if let Some(v) = spec.strip_prefix("dirac:") {
        let v: usize = v
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad vertex in {spec:?}")))?;
        if v >= n {
            return Err(Error::InvalidParameter(format!("vertex {v} outside 0..{n}")));
        }
        let mut w = vec![0.0; n];
        w[v] = 1.0;
        return DesignMeasure::from_weights(basis, ell, &w);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        return DesignMeasure::from_weights(basis, ell, &read_vertex_weights(Path::new(path), n)?);
    }
    Err(Error::InvalidParameter(format!("unknown --mu0 {spec:?}")))
}

/// Reads `vertex,weight` rows (optional header, `#` comments).
pub fn read_vertex_weights(path: &Path, n: usize) -> Result<Vec<f64>> {
    let text = read_text(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut w = vec![0.0; n];
    for (idx, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(idx + 1, |p| p.line() as usize);
        if idx == 0 && rec.get(0) == Some("vertex") {
            continue;
        }
        let bad = |message: String| Error::Parse { line, message };
        if rec.len() != 2 {
            return Err(bad(format!("expected 2 fields, got {}", rec.len())));
        }
        let v: usize = rec[0].parse().map_err(|_| bad(format!("invalid vertex {:?}", &rec[0])))?;
        let x: f64 = rec[1].parse().map_err(|_| bad(format!("invalid weight {:?}", &rec[1])))?;
        if v >= n {
            return Err(bad(format!("vertex {v} outside 0..{n}")));
        }
        w[v] += x;
    }
    Ok(w)
}

#[derive(Serialize)]
struct DesignVerification<'a> {
    design: &'a DesignReport,
    feasibility_breakdown: bool,
}

/// Executes one configured command.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let tol = tolerance()?;
    let mut files = Vec::new();
    let passed = match &config.command {
        Command::Gen(common) => {
            let g = common.load_graph()?;
            let path = common.output("graph.edges")?;
            write_atomic(&path, g.to_edge_list().as_bytes())?;
            files.push(path);
            true
        }
        Command::Spectrum(common) => {
            let g = common.load_graph()?;
            let basis = common.basis(&g)?;
            let gaps = basis.gap_report();
            let orth = basis.orthonormality_error();
            let ok = basis.residual() <= 1e-10 && orth <= 1e-10;
            let path = common.output("spectrum.json")?;
            write_json_atomic(&path, &basis)?;
            files.push(path);
            let path = common.output("gap_report.json")?;
            write_json_atomic(
                &path,
                &SpectrumSummary { residual: basis.residual(), orthonormality_error: orth, passed: ok, gap_report: &gaps },
            )?;
            files.push(path);
            ok
        }
        Command::Design { common, ell, method } => {
            let g = common.load_graph()?;
            let basis = common.basis(&g)?;
            let m = solve_design(&basis, *ell, &(*method).into())?;
            let rep = verify_design(&basis, &m, tol)?;
            let path = common.output("design.json")?;
            write_json_atomic(&path, &m)?;
            files.push(path);
            let path = common.output("design_report.json")?;
            write_json_atomic(&path, &DesignVerification { design: &rep, feasibility_breakdown: false })?;
            files.push(path);
            rep.passed
        }
        Command::Walk { common, mu0, ell, method, steps } => {
            let g = common.load_graph()?;
            let basis = common.basis(&g)?;
            let m = if mu0 == "design" {
                let ell = ell.ok_or_else(|| Error::InvalidParameter("--mu0 design requires --ell".into()))?;
                solve_design(&basis, ell, &(*method).into())?
            } else {
                initial_measure(mu0, &basis, ell.unwrap_or(1))?
            };
            let design_rep = verify_design(&basis, &m, tol)?;
            let rep = verify_theorem1(&g, &basis, &m, *steps, tol)?;
            let path = common.output("walk.csv")?;
            let mut buf = Vec::new();
            rep.write_csv(&mut buf)?;
            write_atomic(&path, &buf)?;
            files.push(path);
            let path = common.output("theorem1.json")?;
            write_json_atomic(&path, &rep)?;
            files.push(path);
            // the bound only applies to measures orthogonal to φ_2..φ_ell
            design_rep.orthogonality_ok && rep.passed
        }
        Command::Sample { common, ell, method, functions } => {
            let g = common.load_graph()?;
            let basis = common.basis(&g)?;
            let m = solve_design(&basis, *ell, &(*method).into())?;
            let design_ok = verify_design(&basis, &m, tol)?.passed;
            let reports = (0..*functions as u64)
                .map(|i| {
                    let f = make_test_function(&basis, &TestFunction::Random { seed: common.seed.wrapping_add(i) })?;
                    quadrature(&basis, &m, &f, tol)
                })
                .collect::<Result<Vec<SamplingReport>>>()?;
            let ok = design_ok && reports.iter().all(|r| r.within_bound && r.identity_ok);
            let path = common.output("sampling.json")?;
            write_json_atomic(&path, &reports)?;
            files.push(path);
            let path = common.output("sampling.csv")?;
            let mut buf = Vec::new();
            write_batch_csv(&reports, &mut buf)?;
            write_atomic(&path, &buf)?;
            files.push(path);
            ok
        }
        Command::Sweep { common, method, steps } => {
            let g = common.load_graph()?;
            let basis = common.basis(&g)?;
            let method: DesignMethod = (*method).into();
            let rows = (1..basis.n())
                .into_par_iter()
                .map(|ell| {
                    let m = solve_design(&basis, ell, &method)?;
                    let design_ok = verify_design(&basis, &m, tol)?.passed;
                    let rep = verify_theorem1(&g, &basis, &m, *steps, tol)?;
                    Ok(SweepRow {
                        ell,
                        support_size: m.support.len(),
                        decay_base: rep.bound_base,
                        fitted_rate: rep.fitted_rate,
                        bound_satisfied: design_ok && rep.passed,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let path = common.output("sweep.csv")?;
            let mut buf = Vec::new();
            write_sweep_csv(&rows, &mut buf)?;
            write_atomic(&path, &buf)?;
            files.push(path);
            rows.iter().all(|r| r.bound_satisfied)
        }
    };
    Ok(RunOutcome { passed, files })
}

/// One line of the sweep summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub ell: usize,
    pub support_size: usize,
    pub decay_base: f64,
    pub fitted_rate: Option<f64>,
    pub bound_satisfied: bool,
}

fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["ell", "support_size", "decay_base", "fitted_rate", "bound_satisfied"])?;
    for r in rows {
        w.write_record([
            r.ell.to_string(),
            r.support_size.to_string(),
            format!("{:?}", r.decay_base),
            r.fitted_rate.map(|x| format!("{x:?}")).unwrap_or_default(),
            if r.bound_satisfied { "yes" } else { "no" }.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Entry point for the binary: parses arguments, runs, maps to an exit code
/// (0 passed, 1 verification failed, 2 error).
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            eprintln!("designwalk: error kind=usage message={:?}", e.to_string().lines().next().unwrap_or(""));
            return 2;
        }
    };
    match run(&config) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.passed {
                println!("verification: pass");
                0
            } else {
                println!("verification: FAIL");
                1
            }
        }
        Err(e) => {
            eprintln!("designwalk: error kind={} message={:?}", e.kind(), e.to_string());
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("designwalk").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn parses_design_flags() {
        let c = parse(&["design", "--family", "petersen", "--ell", "5", "--method", "lp"]);
        let Command::Design { common, ell, method } = c.command else { panic!() };
        assert_eq!((ell, method), (5, MethodArg::Lp));
        assert_eq!(common.family().unwrap(), Family::Petersen);
    }

    #[test]
    fn family_parameters_required() {
        let c = parse(&["gen", "--family", "cycle"]);
        let Command::Gen(common) = c.command else { panic!() };
        assert!(common.load_graph().is_err());
        let c = parse(&["gen", "--family", "circulant", "--n", "9", "--offsets", "1,3"]);
        let Command::Gen(common) = c.command else { panic!() };
        assert_eq!(common.load_graph().unwrap().degree().unwrap(), 4);
    }

    #[test]
    fn walk_four_cycle_dirac() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let c = parse(&["walk", "--family", "cycle", "--n", "4", "--mu0", "dirac:0", "--steps", "3", "--out", out]);
        let outcome = run(&c).unwrap();
        assert!(outcome.passed);
        let csv = fs::read_to_string(dir.path().join("walk.csv")).unwrap();
        let mut lines = csv.lines().skip(1);
        assert!(lines.next().unwrap().starts_with("0,0.75,1.0,"));
        assert!(lines.next().unwrap().starts_with("1,0.25,1.0,"));
    }

    #[test]
    fn vertex_weight_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("mu0.csv");
        fs::write(&p, "vertex,weight\n# half and half\n0, 0.5\n1,0.5\n").unwrap();
        assert_eq!(read_vertex_weights(&p, 4).unwrap(), vec![0.5, 0.5, 0.0, 0.0]);
        fs::write(&p, "0,0.5\n7,0.5\n").unwrap();
        assert!(matches!(read_vertex_weights(&p, 4), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn errors_exit_with_two() {
        assert_eq!(main_with_args(["designwalk", "design", "--family", "petersen", "--ell", "10", "--out", "/nonexistent/x"]), 2);
        assert_eq!(main_with_args(["designwalk", "bogus"]), 2);
    }
}
