//! Finite models of coarse spaces, Følner-type witnesses, band-dominated
//! operators and operator norm localization.

pub mod coarse;
pub mod error;
pub mod gallery;
pub mod io;
pub mod linalg;
pub mod onl;
pub mod pipeline;
pub mod roe;
pub mod witness;

pub use coarse::{DegreeBound, Entourage, Space};
pub use error::{Error, Result, Violation};
