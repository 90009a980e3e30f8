//! Threshold energies of the two-dimensional discrete Laplacian with Chebyshev long-range
//! terms: band endpoints from Chebyshev chain systems, their minimal polynomials, the
//! coefficient interpolation problem `Mρ = 0` and positivity checks of the Mourre symbol.

pub mod band;
pub mod chebyshev;
pub mod cli;
pub mod error;
pub mod highprec;
pub mod mourre;
pub mod plot;
pub mod rate;
pub mod real;
pub mod refdata;

pub use error::{Error, Result};
