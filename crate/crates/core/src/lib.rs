//! Chinese Postman Problem variants compiled to QUBO form.
//!
//! Two pipelines are provided. The pairing pipeline handles the classic
//! undirected problem: a small QUBO chooses how odd-degree vertices are
//! paired, and an Euler circuit of the augmented graph gives the route. The
//! general pipeline indexes every step of the route and covers endpoints,
//! turn bonuses, service modes, hierarchies and several postmen.
//!
//! Everything numeric is generic over [`Scalar`]; the aliases below fix the
//! common `f64` choice, with `f32` and exact rational variants alongside.

pub mod error;
pub mod format;
pub mod general;
pub mod graph;
pub mod instances;
pub mod pairing;
pub mod qubo;
pub mod route;
pub mod scalar;
pub mod solvers;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use num_rational::Rational64;

pub type Graph = graph::Graph<f64>;
pub type Qubo = qubo::Qubo<f64>;
pub type CompiledQubo = qubo::CompiledQubo<f64>;
pub type PenaltyConfig = qubo::PenaltyConfig<f64>;
pub type ProblemSpec = general::ProblemSpec<f64>;
pub type RouteSolution = route::RouteSolution<f64>;

pub type GraphF32 = graph::Graph<f32>;
pub type QuboF32 = qubo::Qubo<f32>;

pub type ExactGraph = graph::Graph<Rational64>;
pub type ExactQubo = qubo::Qubo<Rational64>;
pub type ExactCompiledQubo = qubo::CompiledQubo<Rational64>;
pub type ExactProblemSpec = general::ProblemSpec<Rational64>;
