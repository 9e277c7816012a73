//! Runs the design pipeline with the combinatorial Laplacian on graphs that
//! are not regular.

use designwalk::{
    decompose, make_test_function, quadrature, solve_design, DesignMethod, Graph, OperatorKind, OrderingPolicy,
    TestFunction,
};

fn main() -> designwalk::Result<()> {
    let mut lollipop: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
    lollipop.extend((4..12).map(|i| (i, i + 1)));
    let graphs = [
        ("path", Graph::from_edges(12, (0..11).map(|i| (i, i + 1)))?),
        ("star", Graph::from_edges(10, (1..10).map(|i| (0, i)))?),
        ("lollipop", Graph::from_edges(13, lollipop)?),
    ];
    for (name, g) in &graphs {
        let basis = decompose(g, OperatorKind::Laplacian, OrderingPolicy::AbsDesc)?;
        let low: Vec<String> = basis.eigenvalues().iter().take(4).map(|l| format!("{l:.4}")).collect();
        println!("{name} (n = {}): lowest frequencies {}", g.n(), low.join(", "));
        for ell in [2, 4, 6] {
            let m = solve_design(&basis, ell, &DesignMethod::ReduceUniform)?;
            let smooth = make_test_function(&basis, &TestFunction::LowPass { band: ell, seed: 9 })?;
            let rough = make_test_function(&basis, &TestFunction::Random { seed: 9 })?;
            let a = quadrature(&basis, &m, &smooth, 1e-9)?;
            let b = quadrature(&basis, &m, &rough, 1e-9)?;
            println!(
                "  ell = {ell}: support {:?}  smooth error {:.1e}  random error {:.3} <= {:.3}",
                m.support, a.error, b.error, b.bound
            );
        }
    }
    Ok(())
}
