use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn designwalk(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_designwalk"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("DESIGNWALK_TOL")
        .output()
        .unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn floats(v: &serde_json::Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn petersen_design() {
    let dir = tempfile::tempdir().unwrap();
    let out = designwalk(&["design", "--family", "petersen", "--ell", "5"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let design = json(&dir.path().join("design.json"));
    assert!(design["support"].as_array().unwrap().len() <= 5);
    assert!(design["orthogonality_residual"].as_f64().unwrap() <= 1e-9);
    let weights = floats(&design["weights"]);
    assert!((weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    assert_eq!(json(&dir.path().join("design_report.json"))["design"]["passed"], true);
}

#[test]
fn four_cycle_dirac_walk() {
    let dir = tempfile::tempdir().unwrap();
    let out = designwalk(&["walk", "--family", "cycle", "--n", "4", "--mu0", "dirac:0", "--steps", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("walk.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("k,distance_sq,bound,sharpened_bound"));
    assert!(lines[1].starts_with("0,0.75,1.0"), "{}", lines[1]);
    for line in &lines[2..] {
        assert_eq!(line.split(',').nth(1), Some("0.25"));
    }
    assert_eq!(json(&dir.path().join("theorem1.json"))["passed"], true);
}

#[test]
fn complete_bipartite_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let out = designwalk(&["spectrum", "--family", "complete_bipartite", "--m", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&dir.path().join("spectrum.json"));
    let eig = floats(&doc["eigenvalues"]);
    let want = [1.0, -1.0, 0.0, 0.0, 0.0, 0.0];
    for (a, b) in eig.iter().zip(want) {
        assert!((a - b).abs() <= 1e-9, "{eig:?}");
    }
    assert_eq!(doc["n"], 6);
    assert_eq!(floats(&doc["eigenvectors"]).len(), 36);
    let text = fs::read_to_string(dir.path().join("spectrum.json")).unwrap();
    assert!(text.contains("1.0000000000000000e0"));
}

#[test]
fn irregular_graph_file_is_a_single_line_error() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("path.edges");
    fs::write(&graph, "0 1\n1 2\n").unwrap();
    let out = designwalk(&["design", "--graph", graph.to_str().unwrap(), "--ell", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.contains("kind=irregular"), "{stderr}");
    assert!(stderr.contains("vertex 0 has degree 1"), "{stderr}");
}

#[test]
fn laplacian_accepts_irregular_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("path.edges");
    fs::write(&graph, "# path\n0 1\n1 2\n2 3\n").unwrap();
    let g = graph.to_str().unwrap();
    let out = designwalk(&["design", "--graph", g, "--operator", "laplacian", "--ell", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let spectrum = designwalk(&["spectrum", "--graph", g, "--operator", "laplacian"], dir.path());
    assert_eq!(spectrum.status.code(), Some(0));
    assert_eq!(json(&dir.path().join("spectrum.json"))["operator"], "laplacian");
}

#[test]
fn parse_error_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("bad.edges");
    fs::write(&graph, "0 1\n1 x\n").unwrap();
    let out = designwalk(&["spectrum", "--graph", graph.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("kind=parse") && stderr.contains("line 2"), "{stderr}");
}

#[test]
fn gen_writes_canonical_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = designwalk(&["gen", "--family", "cycle", "--n", "5"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("graph.edges")).unwrap();
    assert_eq!(text, "0 1\n0 4\n1 2\n2 3\n3 4\n");
}

#[test]
fn custom_order_file() {
    let dir = tempfile::tempdir().unwrap();
    let perm = dir.path().join("perm.txt");
    fs::write(&perm, "6 7 8 9 10 2 3 4 5\n").unwrap();
    let order = format!("custom:{}", perm.display());
    let out = designwalk(&["spectrum", "--family", "petersen", "--order", &order], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&dir.path().join("spectrum.json"));
    let eig = floats(&doc["eigenvalues"]);
    assert!((eig[1] - 1.0 / 3.0).abs() < 1e-9 && (eig[9] + 2.0 / 3.0).abs() < 1e-9, "{eig:?}");
    assert_eq!(doc["ordering"]["custom"].as_array().unwrap().len(), 9);

    fs::write(&perm, "2 2 3\n").unwrap();
    let bad = designwalk(&["spectrum", "--family", "petersen", "--order", &order], dir.path());
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn tolerance_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_designwalk"))
            .args(["design", "--family", "petersen", "--ell", "5", "--out"])
            .arg(dir.path())
            .env("DESIGNWALK_TOL", tol)
            .output()
            .unwrap()
    };
    assert_eq!(run("1e-6").status.code(), Some(0));
    assert_eq!(json(&dir.path().join("design_report.json"))["design"]["tolerance"].as_f64(), Some(1e-6));
    assert_eq!(run("-1").status.code(), Some(2));
}

#[test]
fn sample_and_sweep_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = designwalk(&["sample", "--family", "hypercube", "--dim", "3", "--ell", "4", "--functions", "10"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("sampling.csv")).unwrap();
    assert!(csv.starts_with("function_id,error,bound,fraction\n"));
    assert_eq!(csv.lines().count(), 11);

    let sweep = designwalk(&["sweep", "--family", "cycle", "--n", "8", "--steps", "30"], dir.path());
    assert_eq!(sweep.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("ell,support_size,decay_base,fitted_rate,bound_satisfied\n"));
    assert_eq!(csv.lines().count(), 8);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",yes")), "{csv}");
}

#[test]
fn walk_from_weight_file() {
    let dir = tempfile::tempdir().unwrap();
    let weights = dir.path().join("mu0.csv");
    fs::write(&weights, "vertex,weight\n0,0.5\n2,0.5\n").unwrap();
    let mu0 = format!("file:{}", weights.display());
    let out = designwalk(&["walk", "--family", "cycle", "--n", "4", "--mu0", &mu0, "--steps", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("walk.csv")).unwrap();
    // Mass on both even vertices moves to both odd vertices and back.
    assert!(csv.lines().nth(2).unwrap().starts_with("1,0.25,"), "{csv}");
}
