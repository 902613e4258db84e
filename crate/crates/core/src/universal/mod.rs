pub mod chain;
pub mod codec;

pub use chain::{
    chain_down, chain_embed_term, chain_retract_term, chain_up, embed_object, embed_term_at,
    embedding, level, retract_object, retract_term_at, Embedding,
};
pub use codec::{default_point, embed_first_order, retract_first_order, XTuple};
