//! The weighted directed agent graph and the procedures that build or
//! rewire it.

mod county;
mod graph;
mod sci;
mod shuffle;
mod weights;

pub use county::{County, CountyAssignment};
pub use graph::{AgentId, EdgeRef, SocialGraph};
pub use sci::{generate_sci_network, AffinityMatrix};
pub use shuffle::{shuffle_network, ShuffleOutcome};
pub use weights::compute_edge_weights;
