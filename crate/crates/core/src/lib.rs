pub mod coding;
pub mod diagonal;
pub mod error;
pub mod eval;
pub mod interp;
pub mod sample;
pub mod syntax;
pub mod terms;
pub mod universal;

pub use error::{Error, Result};
