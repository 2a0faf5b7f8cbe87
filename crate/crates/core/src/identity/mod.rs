//! Agent and word identities, enregisterment, and identity similarity.

mod enregister;
mod schema;
mod similarity;

pub use enregister::{
    category_weights, enregister_word, median, quantile_in, CategoryWeights, WordIdentity,
};
pub use schema::{Category, CategorySchema, Population};
pub use similarity::{
    neighbor_similarities, similarity_between_agents, similarity_to_word, word_similarities,
    LogStats, SIMILARITY_FLOOR,
};
