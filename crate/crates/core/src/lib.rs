pub mod cli;
pub mod coins;
pub mod engine;
pub mod error;
pub mod noise;
pub mod oracle;
pub mod tensor;

pub use error::{Error, Result};
