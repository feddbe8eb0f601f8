pub(crate) mod bits;
pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod fam;
pub mod family;
pub mod search;
mod selftest;
pub mod spectra;

pub use error::{Error, Result};
