//! Exact arithmetic for truncated formal (pseudo)differential operators in several
//! variables, with Schur and Sato constructions on top.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod coeffs;
pub mod error;
pub mod opcore;
pub mod sato;
pub mod schur_hat;
pub mod schur_sym;
pub mod special_ops;

pub use error::{Error, Result};
