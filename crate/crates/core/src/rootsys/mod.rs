//! Quivers, Kac-Moody root systems and the `Σ^λ` criterion.

pub mod quiver;
pub mod roots;
pub mod sigma;

pub use quiver::Quiver;
pub use roots::{pair_with_lambda, CartanMatrix, EdgeCounting, RootClass};
pub use sigma::{
    in_sigma_lambda, lambda_roots, sigma_lambda_report, DecompositionSearch, SigmaReport,
    DEFAULT_BUDGET,
};
