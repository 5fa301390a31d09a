//! Reversible Markov chains as electrical networks.

pub mod absorbing;
pub mod flow;
pub mod grids;
pub mod network;
pub mod resistance;

pub use absorbing::{
    absorption_analysis, absorption_analysis_exact, trial_chain, trial_chain_with, Absorption,
};
pub use flow::{flow_energy, thomson_minimum, Flow};
pub use grids::{chi, square_grid, triangle_grid};
pub use network::{network_from_chain, walk_from_network, ChainSpec, Edge, Network};
pub use resistance::{
    commute_time, commute_time_mc, effective_resistance, rayleigh_check, resistances_from,
    triangle_resistance_check, Estimate,
};
