//! Time-indexed QUBO formulation for route variants.
//!
//! Variable `e_{i,(u,v)}` says that step `i` walks arc `u -> v`. Hard
//! penalty families enforce one arc per step, contiguity, required-edge
//! coverage and the variant-specific rules; the objective charges each
//! step's weight. See [`ProblemSpec`] for the supported variants.

mod build;
mod decode;
mod layout;
mod oracle;
mod shortcut;
mod spec;

pub use build::{build_from_layout, build_general_qubo};
pub use decode::{decode_walk, encode_walk, route_from_walks, validate_route};
pub use layout::{enumerate_variables, enumerate_variables_with, Encoding, Move, StepVar, VariableLayout};
pub use oracle::{exact_walk_oracle, DEFAULT_NODE_BUDGET};
pub use shortcut::euler_shortcut;
pub use spec::{slack_bits, PostmanWeight, ProblemSpec, ServiceWeight, TurnPenalty};
