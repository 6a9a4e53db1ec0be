use std::ops::Range;

use num_integer::Integer;
use serde::Serialize;

use crate::dof::CellConfig;
use crate::error::{Error, Result};
use crate::lp::{scheme1_constraints, scheme2_constraints, StreamAllocation};
use crate::rational::Rational;

/// Largest supported `(T+1)^(N1·N2)`.
pub const MAX_EXTENDED_EXPONENTS: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Scheme {
    /// Uplink alignment, downlink inter-cell and intra-cell nulling.
    #[serde(rename = "1")]
    InterIntraNulling,
    /// Uplink alignment, downlink intra-cell nulling only.
    #[serde(rename = "2")]
    IntraNulling,
}

impl Scheme {
    pub fn from_index(k: u8) -> Option<Scheme> {
        match k {
            1 => Some(Scheme::InterIntraNulling),
            2 => Some(Scheme::IntraNulling),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Scheme::InterIntraNulling => 1,
            Scheme::IntraNulling => 2,
        }
    }
}

/// Integer stream and slot counts for one simulated transmission block.
///
/// The nominal block has `(1/λ1)(T+1)^k` slots and `(λ2/λ1)T^k` streams per
/// cell-β user (`k = N1·N2`); neither need be an integer, so the block is
/// repeated `replication` times. Each repetition is a sub-block carrying its
/// own `T^k` alignment beams.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimPlan {
    pub config: CellConfig,
    pub scheme: Scheme,
    pub t: u32,
    pub alloc: StreamAllocation,
    /// `T^(N1·N2)`.
    pub exponent_count: u64,
    /// `(T+1)^(N1·N2)`.
    pub ext_exponent_count: u64,
    pub replication: u64,
    pub slots: u64,
    /// Streams per cell-α user: `replication · T^(N1·N2)`.
    pub alpha_streams: u64,
    /// Streams per cell-β user.
    pub beta_streams: u64,
}

impl SimPlan {
    pub fn exponent_len(&self) -> usize {
        (self.config.n1() * self.config.n2()) as usize
    }

    /// Slot ranges of the replication sub-blocks. Sizes differ by at most one
    /// and each holds at least `(T+1)^k` slots.
    pub fn sub_blocks(&self) -> Vec<Range<usize>> {
        let r = self.replication as usize;
        let d = self.slots as usize;
        (0..r).map(|b| (b * d / r)..((b + 1) * d / r)).collect()
    }

    pub fn total_streams(&self) -> u64 {
        self.config.n1() as u64 * self.alpha_streams + self.config.n2() as u64 * self.beta_streams
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

pub fn make_plan(cfg: &CellConfig, t: u32, alloc: StreamAllocation, scheme: Scheme) -> Result<SimPlan> {
    if t == 0 {
        return Err(Error::NonPositive { field: "t", value: 0 });
    }
    let k = cfg.n1() * cfg.n2();
    let ext = checked_pow(t as u64 + 1, k).filter(|&e| e <= MAX_EXTENDED_EXPONENTS);
    let Some(ext_exponent_count) = ext else {
        let requested = (t as u128 + 1).checked_pow(k).unwrap_or(u128::MAX);
        return Err(Error::SizeCap {
            requested,
            cap: MAX_EXTENDED_EXPONENTS,
        });
    };
    let exponent_count = (t as u64).pow(k);

    let constraints = match scheme {
        Scheme::InterIntraNulling => scheme1_constraints(cfg),
        Scheme::IntraNulling => scheme2_constraints(cfg),
    };
    if let Some(label) = constraints.violated(&alloc) {
        return Err(Error::InfeasibleAllocation {
            constraint: label.to_owned(),
        });
    }
    if alloc.lambda1.is_zero() {
        return Err(Error::ZeroLambda1);
    }

    let base_slots = alloc.lambda1.recip() * ext_exponent_count as i64;
    let base_beta = alloc.lambda2 / alloc.lambda1 * exponent_count as i64;
    let replication = (base_slots.denom() as u64).lcm(&(base_beta.denom() as u64));
    let slots = (base_slots * replication as i64).numer() as u64;
    let beta_streams = (base_beta * replication as i64).numer() as u64;

    Ok(SimPlan {
        config: *cfg,
        scheme,
        t,
        alloc,
        exponent_count,
        ext_exponent_count,
        replication,
        slots,
        alpha_streams: replication * exponent_count,
        beta_streams,
    })
}

/// Streams per slot, exact.
pub fn achieved_dof(plan: &SimPlan) -> Rational {
    Rational::new(plan.total_streams() as i64, plan.slots as i64)
}

/// `(N1 + (λ2/λ1) N2) T^k / ((1/λ1)(T+1)^k)` evaluated directly, without
/// any replication.
pub fn nominal_dof(cfg: &CellConfig, alloc: &StreamAllocation, t: u32) -> Rational {
    let k = cfg.n1() * cfg.n2();
    let streams = (Rational::from(cfg.n1()) + alloc.lambda2 / alloc.lambda1 * i64::from(cfg.n2()))
        * (t as i64).pow(k);
    let slots = alloc.lambda1.recip() * (t as i64 + 1).pow(k);
    streams / slots
}

/// Limit of the achieved DoF as `T → ∞`: `N1 λ1 + N2 λ2`.
pub fn asymptotic_dof(cfg: &CellConfig, alloc: &StreamAllocation) -> Rational {
    alloc.lambda1 * i64::from(cfg.n1()) + alloc.lambda2 * i64::from(cfg.n2())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m1: u32, m2: u32, n1: u32, n2: u32) -> CellConfig {
        CellConfig::new(m1, m2, n1, n2).unwrap()
    }

    fn alloc(l1: Rational, l2: Rational) -> StreamAllocation {
        StreamAllocation::new(l1, l2).unwrap()
    }

    fn half() -> Rational {
        Rational::new(1, 2)
    }

    #[test]
    fn small_plan_needs_no_replication() {
        let p = make_plan(&cfg(1, 2, 2, 1), 1, alloc(half(), half()), Scheme::InterIntraNulling).unwrap();
        assert_eq!((p.replication, p.slots, p.alpha_streams, p.beta_streams), (1, 8, 1, 1));
        assert_eq!((p.exponent_count, p.ext_exponent_count), (1, 4));
        assert_eq!(achieved_dof(&p), Rational::new(3, 8));

        let p = make_plan(&cfg(1, 2, 2, 1), 2, alloc(half(), half()), Scheme::InterIntraNulling).unwrap();
        assert_eq!((p.slots, p.alpha_streams, p.beta_streams), (18, 4, 4));
    }

    #[test]
    fn fractional_counts_are_replicated() {
        let p = make_plan(
            &cfg(2, 3, 3, 2),
            1,
            alloc(Rational::new(2, 3), Rational::new(1, 3)),
            Scheme::InterIntraNulling,
        )
        .unwrap();
        assert_eq!((p.replication, p.slots, p.alpha_streams, p.beta_streams), (2, 192, 2, 1));
        let blocks = p.sub_blocks();
        assert_eq!(blocks, vec![0..96, 96..192]);
    }

    #[test]
    fn sub_blocks_hold_enough_slots() {
        // 1/λ1 = 7/3 leaves a non-integer nominal block.
        let a = alloc(Rational::new(3, 7), Rational::ZERO);
        let p = make_plan(&cfg(3, 3, 1, 1), 1, a, Scheme::InterIntraNulling).unwrap();
        assert_eq!((p.replication, p.slots), (3, 14));
        for b in p.sub_blocks() {
            assert!(b.len() as u64 >= p.ext_exponent_count);
        }
    }

    #[test]
    fn infeasible_allocation_names_constraint() {
        let err = make_plan(&cfg(1, 2, 2, 1), 1, alloc(Rational::ONE, Rational::ZERO), Scheme::InterIntraNulling)
            .unwrap_err();
        assert_eq!(
            err,
            Error::InfeasibleAllocation {
                constraint: "N1 lambda1 <= M1".into()
            }
        );
        let err = make_plan(&cfg(1, 2, 2, 1), 1, alloc(Rational::ZERO, half()), Scheme::InterIntraNulling).unwrap_err();
        assert_eq!(err, Error::ZeroLambda1);
    }

    #[test]
    fn size_cap_enforced() {
        // (T+1)^(N1 N2) = 2^12 is the largest allowed.
        let a = alloc(Rational::new(1, 4), Rational::ZERO);
        assert!(make_plan(&cfg(1, 1, 4, 3), 1, a, Scheme::InterIntraNulling).is_ok());
        let a = alloc(Rational::new(1, 13), Rational::ZERO);
        let err = make_plan(&cfg(1, 1, 13, 1), 1, a, Scheme::InterIntraNulling).unwrap_err();
        assert_eq!(err, Error::SizeCap { requested: 8192, cap: 4096 });
    }

    #[test]
    fn dof_examples() {
        let c = cfg(1, 2, 2, 1);
        let a = alloc(half(), half());
        let dofs: Vec<Rational> = (1..=3)
            .map(|t| achieved_dof(&make_plan(&c, t, a, Scheme::InterIntraNulling).unwrap()))
            .collect();
        assert_eq!(dofs, vec![Rational::new(3, 8), Rational::new(2, 3), Rational::new(27, 32)]);
    }

    #[test]
    fn zero_beta_streams() {
        // λ2 = 0, λ1 = M1/N1: DoF is M1 (T/(T+1))^(N1 N2).
        let c = cfg(2, 3, 3, 1);
        let a = alloc(Rational::new(2, 3), Rational::ZERO);
        let p = make_plan(&c, 2, a, Scheme::InterIntraNulling).unwrap();
        assert_eq!(p.beta_streams, 0);
        assert_eq!(achieved_dof(&p), Rational::new(2 * 8, 27));
    }
}
