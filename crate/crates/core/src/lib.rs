//! Sparse graphical designs on graphs.
//!
//! A design of depth `ell` is a probability measure supported on at most
//! `ell` vertices that is orthogonal to the eigenvectors `φ_2, ..., φ_ell` of
//! the walk matrix `A/d`. Started from such a measure, the random walk
//! approaches the uniform distribution with squared 2-distance at most
//! `|λ_{ell+1}|^{2k}` after `k` steps, and the same measure estimates the mean
//! of any graph function with error at most the norm of its components
//! beyond `φ_ell`.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`graph`] | edge lists, generators, the walk operator |
//! | [`spectral`] | ordered orthonormal eigenbases (walk matrix or Laplacian) |
//! | [`design`] | moment system, Carathéodory reduction, LP vertex, verification |
//! | [`walk`] | iterated and spectral distances to uniform, bound checks, rate fit |
//! | [`sampling`] | designs as quadrature rules and their error bound |
//! | [`cli`] | the `designwalk` command line |
//!
//! ```
//! use designwalk::{decompose, generate, solve_design, DesignMethod, Family, OperatorKind, OrderingPolicy};
//!
//! let g = generate(&Family::Petersen).unwrap();
//! let basis = decompose(&g, OperatorKind::WalkMatrix, OrderingPolicy::AbsDesc).unwrap();
//! let m = solve_design(&basis, 5, &DesignMethod::ReduceUniform).unwrap();
//! assert!(m.support.len() <= 5);
//! assert!((basis.decay_base(5) - 1.0 / 3.0).abs() < 1e-9);
//! ```

pub mod cli;
pub mod design;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod sampling;
pub mod spectral;
pub mod walk;

pub use design::{
    build_moment_system, caratheodory_reduce, check_feasibility, design_from_sign_pattern, solve_design,
    verify_design, DesignMeasure, DesignMethod, DesignReport, FeasibilityCertificate, MomentSystem,
};
pub use error::{Error, Result};
pub use graph::{generate, load_edge_list, Family, Graph};
pub use sampling::{make_test_function, quadrature, tailored_design_for, GraphFunction, SamplingReport, TestFunction};
pub use spectral::{decompose, GapEntry, OperatorKind, OrderingPolicy, SpectralBasis};
pub use walk::{iterate_walk, rate_fit, spectral_distance, spectral_distances, verify_theorem1, Theorem1Report, WalkTrace};
