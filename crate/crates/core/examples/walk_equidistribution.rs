//! Compares the walk started from a design with the walk started from a
//! single vertex on the Petersen graph.

use designwalk::{
    decompose, generate, rate_fit, solve_design, verify_theorem1, DesignMeasure, DesignMethod, Family, OperatorKind,
    OrderingPolicy,
};

fn main() -> designwalk::Result<()> {
    let g = generate(&Family::Petersen)?;
    let basis = decompose(&g, OperatorKind::WalkMatrix, OrderingPolicy::AbsDesc)?;
    let steps = 40;

    let design = solve_design(&basis, 5, &DesignMethod::ReduceUniform)?;
    let dirac = DesignMeasure::dirac(&basis, 0)?;
    let from_design = verify_theorem1(&g, &basis, &design, steps, 1e-9)?;
    let from_dirac = verify_theorem1(&g, &basis, &dirac, steps, 1e-9)?;

    println!("{:>3} {:>14} {:>14} {:>14}", "k", "design d_k", "bound", "dirac d_k");
    for (a, b) in from_design.rows.iter().zip(&from_dirac.rows).step_by(4) {
        println!("{:>3} {:>14.4e} {:>14.4e} {:>14.4e}", a.k, a.iterated, a.bound, b.iterated);
    }
    println!();
    println!("design support {:?}, bound holds: {}", design.support, from_design.passed);
    println!("fitted rate from design: {:.6} (bound base 1/3)", rate_fit(&from_design.trace).unwrap_or(f64::NAN));
    println!("fitted rate from vertex: {:.6} (|λ_2| = 2/3)", rate_fit(&from_dirac.trace).unwrap_or(f64::NAN));
    Ok(())
}
