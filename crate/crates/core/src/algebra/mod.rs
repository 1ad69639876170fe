//! Exact linear algebra over the Gaussian rationals.

pub mod laurent;
pub mod matrix;
pub mod orbit;
pub mod partition;
pub mod poly;
pub mod scalar;

pub use laurent::LaurentMatrix;
pub use matrix::{solve_sylvester, Matrix};
pub use orbit::{EigenBlock, OrbitSpec};
pub use partition::{partitions_of, Partition};
pub use poly::{exact_roots, Poly};
pub use scalar::Scalar;
