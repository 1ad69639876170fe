//! Formal connections `d + M(z) dz/z` on the punctured disk.

pub mod coxeter_type;
pub mod parahoric;
pub mod regsing;

pub use coxeter_type::{airy, frenkel_gross, omega_inverse, CoxeterFormalType};
pub use parahoric::{certify_slope, leading_stratum, SlopeCertificate, StandardParahoric, Stratum};
pub use regsing::{
    exact_eigenvalues, gauge_transform, is_nonresonant, regsing_normalize, series_inverse,
};
