//! The relation catalog, relation instances, instance generation and the
//! four relation metrics.

mod catalog;
mod generate;
mod instance;
mod score;

pub use catalog::{catalog, relation, relation_index, Anchor, Relation, Term};
pub use generate::{generate_catalog, generate_instances, RETRY_BUDGET};
pub use instance::{
    enumerate_instances, instance_space_size, instantiate, read_instances, write_instances,
    RelationInstance, EXHAUSTIVE_LIMIT,
};
pub use score::{score_instances, RelationScore};
