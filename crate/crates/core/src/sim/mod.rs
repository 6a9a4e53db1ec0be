//! Finite-`T` simulation of the uplink-downlink schemes over real Gaussian
//! channels with time-varying cross gains.

pub mod beams;
pub mod channels;
pub mod linalg;
pub mod plan;
mod simple;
mod verify;

pub use beams::{downlink_in_beams, uplink_ia_beams, DownlinkBeams, UplinkBeams};
pub use channels::{beam_rng, channel_rng, draw_channels, extend_channels, ChannelSet, ExtendedChannels};
pub use plan::{achieved_dof, asymptotic_dof, make_plan, nominal_dof, Scheme, SimPlan, MAX_EXTENDED_EXPONENTS};
pub use simple::run_simple_scheme;
pub use verify::{verify_decoding, BetaUserCheck, SimReport};

use crate::dof::CellConfig;
use crate::error::Result;
use crate::lp::{solve_scheme1, solve_scheme2, StreamAllocation};
use crate::par;

/// LP-optimal allocation for the scheme.
pub fn default_allocation(cfg: &CellConfig, scheme: Scheme) -> StreamAllocation {
    match scheme {
        Scheme::InterIntraNulling => solve_scheme1(cfg).argmax,
        Scheme::IntraNulling => solve_scheme2(cfg).argmax,
    }
}

/// Draws channels for `seed`, builds both beam families and checks
/// decodability.
pub fn simulate(cfg: &CellConfig, t: u32, alloc: StreamAllocation, scheme: Scheme, seed: u64) -> Result<SimReport> {
    let plan = make_plan(cfg, t, alloc, scheme)?;
    let ext = extend_channels(&draw_channels(cfg, plan.slots as usize, seed));
    let uplink = uplink_ia_beams(&ext, &plan);
    let mut rng = beam_rng(seed);
    let downlink = downlink_in_beams(&ext, &uplink, &plan, &mut rng)?;
    Ok(verify_decoding(&ext, &uplink, &downlink, &plan, seed))
}

/// Runs seeds `first..first + count`; results are in seed order.
pub fn sweep_seeds(
    cfg: &CellConfig,
    t: u32,
    alloc: StreamAllocation,
    scheme: Scheme,
    first: u64,
    count: u64,
) -> Result<Vec<SimReport>> {
    make_plan(cfg, t, alloc, scheme)?;
    par::map_range(first..first + count, |seed| simulate(cfg, t, alloc, scheme, seed))
        .into_iter()
        .collect()
}
