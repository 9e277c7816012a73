//! Constructs a design for every depth on the Petersen graph and a random
//! cubic graph, reporting support size and orthogonality.

use designwalk::design::ORTHOGONALITY_TOL;
use designwalk::{decompose, generate, solve_design, verify_design, DesignMethod, Family, OperatorKind, OrderingPolicy};

fn main() -> designwalk::Result<()> {
    for family in [Family::Petersen, Family::RandomRegular { n: 20, degree: 3, seed: 1 }] {
        let g = generate(&family)?;
        let basis = decompose(&g, OperatorKind::WalkMatrix, OrderingPolicy::AbsDesc)?;
        println!("{} (n = {})", family.name(), g.n());
        println!("{:>4} {:>8} {:>12} {:>10} {:>6}", "ell", "support", "residual", "||w||^2", "depth");
        for ell in 1..g.n() {
            let m = solve_design(&basis, ell, &DesignMethod::ReduceUniform)?;
            let report = verify_design(&basis, &m, ORTHOGONALITY_TOL)?;
            assert!(report.passed);
            println!(
                "{ell:>4} {:>8} {:>12.2e} {:>10.4} {:>6}",
                m.support.len(),
                m.orthogonality_residual,
                m.l2_norm_sq,
                m.effective_depth
            );
        }
        println!();
    }

    let petersen = generate(&Family::Petersen)?;
    let basis = decompose(&petersen, OperatorKind::WalkMatrix, OrderingPolicy::AbsDesc)?;
    let m = solve_design(&basis, 5, &DesignMethod::ReduceUniform)?;
    println!("Petersen ell = 5 design:");
    for (v, w) in m.support.iter().zip(&m.weights) {
        println!("  vertex {v}: {w:.6}");
    }
    Ok(())
}
