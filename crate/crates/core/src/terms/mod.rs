//! Object terms, map terms, typing, the order stratification and the derived
//! schemata of the closed structure.

mod map;
mod obj;
pub mod schema;

pub use map::{check_obj, Term, Typing};
pub use obj::{x_predicate, Obj, Pred};
pub use schema::{coconj, conj, hom_co, hom_contra, name_term};
