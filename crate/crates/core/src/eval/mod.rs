//! Operational semantics: closures by term surgery, iteration by primitive
//! recursion on numerals.

mod machine;
pub mod stdlib;
mod value;

pub use machine::{
    apply, apply_with_fuel, eval, eval_name, eval_name_with_fuel, eval_with_fuel, inhabits, Fuel,
    MAX_DEPTH, MAX_NESTING,
};
pub use value::{Arrow, Value};
