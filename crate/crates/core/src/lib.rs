//! Sum degrees of freedom of the uplink-downlink two-cell MIMO network:
//! closed forms, bounds, the stream-allocation LPs, grid scans, and
//! finite-extension simulations of the achievable schemes.

pub mod delayed;
pub mod dof;
pub mod error;
pub mod gain;
pub mod lp;
pub mod par;
pub mod rational;
pub mod sim;

pub use dof::{conventional_upper, hotspot_bounds, mimo_ic_upper, single_cell_lower, sum_dof, CellConfig, HotspotBounds};
pub use error::{Error, Result};
pub use lp::{solve_hotspot, solve_scheme1, solve_scheme2, LpSolution, StreamAllocation};
pub use rational::Rational;
