//! Deligne-Simpson existence and rigidity checks for connections on the
//! projective line.

pub mod algebra;
pub mod cli;
pub mod coxeter;
pub mod error;
pub mod formal;
pub mod fuchsian;
pub mod rootsys;
pub mod unramified;

pub use error::{DsError, Result};
