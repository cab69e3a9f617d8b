//! Feedback-guided differential fuzzing of graph algorithm implementations.

pub mod adapter;
pub mod corpus;
pub mod engine;
pub mod feedback;
pub mod graph;
pub mod mutants;
pub mod mutation;
pub mod rng;
pub mod seeds;
pub mod sweep;
pub mod targets;
