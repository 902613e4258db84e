//! Codes of surface map terms.

pub mod bytes;
pub mod code;
pub mod enumerate;

pub use bytes::{parse, serialize, tag_table, TAGS};
pub use code::{code_compose, code_iter, code_product, decode, encode, from_hex, to_hex, Code};
pub use enumerate::{Enumeration, DEFAULT_MAX_LENGTH};
