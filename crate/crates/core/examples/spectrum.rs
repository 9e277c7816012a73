//! Decomposes the walk matrix of a few graphs and prints the ordered
//! spectrum with the decay base `max_{j>ell} |λ_j|` for each depth.

use designwalk::{decompose, generate, Family, OperatorKind, OrderingPolicy};

fn main() -> designwalk::Result<()> {
    for family in [Family::Petersen, Family::Cycle { n: 8 }, Family::CompleteBipartite { m: 3 }] {
        let g = generate(&family)?;
        let basis = decompose(&g, OperatorKind::WalkMatrix, OrderingPolicy::AbsDesc)?;
        println!(
            "{} (n = {}): residual {:.1e}, orthonormality {:.1e}",
            family.name(),
            g.n(),
            basis.residual(),
            basis.orthonormality_error()
        );
        for (j, l) in basis.eigenvalues().iter().enumerate() {
            println!("  λ_{:<2} = {l:+.6}", j + 1);
        }
        for gap in basis.gap_report() {
            let tie = if gap.tie { "  (tie)" } else { "" };
            println!("  ell = {:<2} decay base {:.6}{tie}", gap.ell, gap.decay_base);
        }
        println!();
    }
    Ok(())
}
