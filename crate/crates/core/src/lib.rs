pub mod acceptance;
pub mod error;
pub mod measures;
pub mod numeric;
pub mod operator;
pub mod orthopoly;
pub mod probes;

pub use error::{Error, Result};
