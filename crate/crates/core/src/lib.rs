pub mod complex;
pub mod dehn;
pub mod error;
pub mod fans;
pub mod homology;
pub mod log;
pub mod praag;
pub mod stats;
pub mod word;

pub use error::{Error, Result};
