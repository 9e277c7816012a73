//! Builds each graph family, prints its size and degree, and round-trips one
//! through the edge-list format.

use designwalk::{generate, load_edge_list, Family};

fn main() -> designwalk::Result<()> {
    let families = [
        Family::Cycle { n: 12 },
        Family::Complete { n: 6 },
        Family::CompleteBipartite { m: 4 },
        Family::Hypercube { dim: 4 },
        Family::Petersen,
        Family::Circulant { n: 13, offsets: vec![1, 5] },
        Family::RandomRegular { n: 30, degree: 3, seed: 42 },
    ];
    println!("{:<20} {:>4} {:>6} {:>6}", "family", "n", "edges", "degree");
    for family in &families {
        let g = generate(family)?;
        println!("{:<20} {:>4} {:>6} {:>6}", family.name(), g.n(), g.edges().len(), g.degree()?);
    }

    let petersen = generate(&Family::Petersen)?;
    let text = petersen.to_edge_list();
    assert_eq!(load_edge_list(&text)?, petersen);
    println!("\nPetersen edge list:\n{text}");
    Ok(())
}
