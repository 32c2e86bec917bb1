pub mod cli;
pub mod contour;
pub mod error;
pub mod identities;
pub mod laurent;
pub mod onerow;
pub mod operator;
pub mod qfield;
pub mod weyl;

pub use error::{Error, Result};
