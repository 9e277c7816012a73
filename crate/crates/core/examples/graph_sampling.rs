//! Uses designs as quadrature rules for the mean of graph functions.

use designwalk::{
    decompose, generate, make_test_function, quadrature, solve_design, DesignMethod, Family, OperatorKind,
    OrderingPolicy, TestFunction,
};

fn main() -> designwalk::Result<()> {
    let g = generate(&Family::RandomRegular { n: 40, degree: 4, seed: 3 })?;
    let basis = decompose(&g, OperatorKind::WalkMatrix, OrderingPolicy::AbsDesc)?;

    for ell in [2, 10, 20] {
        let m = solve_design(&basis, ell, &DesignMethod::ReduceUniform)?;
        println!("ell = {ell}: {} sample vertices", m.support.len());
        for kind in [
            TestFunction::LowPass { band: ell, seed: 1 },
            TestFunction::Random { seed: 1 },
            TestFunction::HighPass { band: ell, seed: 1 },
            TestFunction::Indicator((0..10).collect()),
        ] {
            let f = make_test_function(&basis, &kind)?;
            let r = quadrature(&basis, &m, &f, 1e-9)?;
            println!(
                "  {:<42} mean {:+.5} estimate {:+.5} error {:.2e} bound {:.2e}",
                r.function, r.mean, r.quadrature, r.error, r.bound
            );
        }
    }
    Ok(())
}
