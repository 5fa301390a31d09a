//! Random Local Search (RLS) for Minimum Dominating Set on cycle graphs.
//!
//! The crate holds the search heuristic itself together with every model used
//! to reason about its runtime:
//!
//! - [`graph`]: cycles, domination, private neighbourhoods, redundancy, arcs
//!   and vertex movability.
//! - [`oracle`]: brute-force ground truth for small cycles.
//! - [`rls`]: the search loop with flip and swap operators.
//! - [`adjacency`]: the gap (adjacency weight) representation of a dominating
//!   set.
//! - [`particles`]: adjacency particle systems, the fixed arc process and the
//!   lazy walk on the triangle grid it is coupled to.
//! - [`markov`]: reversible chains as electrical networks (effective
//!   resistance, commute times, grids, absorbing chains).
//! - [`experiments`]: seeded scaling studies, bound formulas and sweeps.

pub mod adjacency;
pub mod experiments;
pub mod graph;
pub mod markov;
pub mod oracle;
pub mod particles;
pub mod rls;
pub mod rng;

mod error;

pub use error::{Error, Result};

pub use adjacency::AdjacencyWeights;
pub use graph::{Arc, CycleGraph, Direction, Movability, Solution, VertexSet};
pub use markov::{ChainSpec, Flow, Network};
pub use particles::{FixedArcState, ParticleState, TriangleWalkConfig};
pub use rls::{Fitness, StepEvent, Trajectory};
