//! Finds designs as vertices of the moment polytope with the simplex method,
//! and shows how the objective picks among them.

use designwalk::{
    build_moment_system, check_feasibility, decompose, generate, solve_design, DesignMethod, Family, OperatorKind,
    OrderingPolicy,
};

fn main() -> designwalk::Result<()> {
    let g = generate(&Family::Hypercube { dim: 4 })?;
    let basis = decompose(&g, OperatorKind::WalkMatrix, OrderingPolicy::AbsDesc)?;
    let ell = 5;

    let system = build_moment_system(&basis, ell)?;
    println!("moment system feasible: {}", check_feasibility(&system)?.is_feasible());

    let reduced = solve_design(&basis, ell, &DesignMethod::ReduceUniform)?;
    println!("reduction from uniform: support {:?}", reduced.support);

    // Cheaper vertices are preferred; steer toward different supports.
    for favored in [0, 7, 15] {
        let mut c = vec![1.0; g.n()];
        c[favored] = -1.0;
        let m = solve_design(&basis, ell, &DesignMethod::LpVertex(Some(c)))?;
        println!(
            "simplex favoring vertex {favored:>2}: support {:?}, weights {:?}",
            m.support,
            m.weights.iter().map(|w| (w * 1e6).round() / 1e6).collect::<Vec<_>>()
        );
    }
    Ok(())
}
