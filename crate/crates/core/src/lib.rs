pub mod cliquesum;
pub mod engine;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod division;
pub mod profiles;
pub mod range;

pub use error::{Error, ErrorCategory, Result};
