//! Closed-form sum-DoF expressions and bounds for the two-cell network where
//! cell α runs uplink (BS α with `m1` antennas, `n1` users) and cell β runs
//! downlink (BS β with `m2` antennas, `n2` users).

mod regime;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{self, StreamAllocation};
use crate::rational::Rational;

pub use regime::{classify_regime, regime_closed_forms, ClosedForm, Param, RegimeRow, REGIMES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellConfig {
    m1: u32,
    m2: u32,
    n1: u32,
    n2: u32,
}

impl CellConfig {
    pub fn new(m1: u32, m2: u32, n1: u32, n2: u32) -> Result<Self> {
        for (field, value) in [("m1", m1), ("m2", m2), ("n1", n1), ("n2", n2)] {
            if value == 0 {
                return Err(Error::NonPositive { field, value: 0 });
            }
        }
        Ok(CellConfig { m1, m2, n1, n2 })
    }

    pub fn m1(&self) -> u32 {
        self.m1
    }

    pub fn m2(&self) -> u32 {
        self.m2
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    pub fn as_tuple(&self) -> (u32, u32, u32, u32) {
        (self.m1, self.m2, self.n1, self.n2)
    }

    /// Exchanges the roles of the two cells: `(m1, n1) <-> (m2, n2)`.
    pub fn swapped(&self) -> Self {
        CellConfig {
            m1: self.m2,
            m2: self.m1,
            n1: self.n2,
            n2: self.n1,
        }
    }

    /// Same config with `n1` scaled by `l`; a hotspot network with `l`
    /// micro cells looks like one uplink cell with `l * n1` users.
    pub fn with_scaled_n1(&self, l: u32) -> Result<Self> {
        if l == 0 {
            return Err(Error::NonPositive {
                field: "l",
                value: 0,
            });
        }
        Ok(CellConfig {
            n1: self.n1 * l,
            ..*self
        })
    }

    /// Every config in `[1, cap]^4`, in lexicographic `(m1, m2, n1, n2)` order.
    pub fn grid(cap: u32) -> impl Iterator<Item = CellConfig> {
        (1..=cap).flat_map(move |m1| {
            (1..=cap).flat_map(move |m2| {
                (1..=cap).flat_map(move |n1| (1..=cap).map(move |n2| CellConfig { m1, m2, n1, n2 }))
            })
        })
    }

    /// Config at lexicographic position `index` of `[1, cap]^4`.
    pub fn grid_at(cap: u32, index: u64) -> CellConfig {
        let c = cap as u64;
        CellConfig {
            m1: (index / (c * c * c)) as u32 + 1,
            m2: (index / (c * c) % c) as u32 + 1,
            n1: (index / c % c) as u32 + 1,
            n2: (index % c) as u32 + 1,
        }
    }
}

impl fmt::Display for CellConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.m1, self.m2, self.n1, self.n2)
    }
}

fn int(v: u32) -> Rational {
    Rational::from(v)
}

/// The sum DoF of the uplink-downlink network:
///
/// ```text
/// min{ (N1 N2 + min(M1,N1)(N1-N2)^+ + min(M2,N2)(N2-N1)^+) / max(N1,N2),
///      M1+N2, M2+N1, max(M1,M2), max(N1,N2) }
/// ```
pub fn sum_dof(cfg: &CellConfig) -> Rational {
    let (m1, m2, n1, n2) = cfg.as_tuple();
    let excess1 = (int(n1) - int(n2)).positive_part();
    let excess2 = (int(n2) - int(n1)).positive_part();
    let user_term = (int(n1 * n2) + excess1 * i64::from(m1.min(n1)) + excess2 * i64::from(m2.min(n2)))
        / i64::from(n1.max(n2));
    user_term.min(mimo_ic_upper(cfg))
}

/// Two-user MIMO interference channel bound, obtained by letting the users
/// of each cell cooperate.
pub fn mimo_ic_upper(cfg: &CellConfig) -> Rational {
    let (m1, m2, n1, n2) = cfg.as_tuple();
    int((m1 + n2).min(m2 + n1).min(m1.max(m2)).min(n1.max(n2)))
}

/// Best DoF reachable by activating a single cell:
/// `max(min(M1, N1), min(M2, N2))`.
pub fn single_cell_lower(cfg: &CellConfig) -> Rational {
    let (m1, m2, n1, n2) = cfg.as_tuple();
    int(m1.min(n1).max(m2.min(n2)))
}

/// Upper bound on the sum DoF when both cells run uplink (or both downlink):
/// `min{i+j, k+l, max(i,l), max(j,k)}` with `(i,j,k,l) = (m1,m2,n1,n2)`.
pub fn conventional_upper(cfg: &CellConfig) -> Rational {
    let (i, j, k, l) = cfg.as_tuple();
    int((i + j).min(k + l).min(i.max(l)).min(j.max(k)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HotspotBounds {
    /// Bound for conventional (all-uplink or all-downlink) operation.
    pub conventional_upper: Rational,
    /// DoF achieved with micro cells uplink and the macro cell downlink.
    pub uplink_downlink_lower: Rational,
    pub allocation: StreamAllocation,
}

/// Bounds for a macro cell with `l` embedded hotspots. `m1`/`n1` are per
/// hotspot (micro BS antennas, users per hotspot); `m2`/`n2` belong to the
/// macro cell.
pub fn hotspot_bounds(l: u32, cfg: &CellConfig) -> Result<HotspotBounds> {
    let scaled = cfg.with_scaled_n1(l)?;
    let (m1, m2, n1, n2) = cfg.as_tuple();
    let (lm1, ln1) = (l * m1, l * n1);
    let upper = (lm1 + m2).min(ln1 + n2).min(lm1.max(n2)).min(ln1.max(m2));
    let lower = lp::solve_scheme1(&scaled);
    Ok(HotspotBounds {
        conventional_upper: int(upper),
        uplink_downlink_lower: lower.value,
        allocation: lower.argmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m1: u32, m2: u32, n1: u32, n2: u32) -> CellConfig {
        CellConfig::new(m1, m2, n1, n2).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rejects_zero_fields() {
        assert_eq!(
            CellConfig::new(1, 0, 1, 1),
            Err(Error::NonPositive {
                field: "m2",
                value: 0
            })
        );
        assert!(cfg(1, 1, 1, 1).with_scaled_n1(0).is_err());
    }

    #[test]
    fn sum_dof_examples() {
        assert_eq!(sum_dof(&cfg(2, 3, 3, 2)), r(8, 3));
        assert_eq!(sum_dof(&cfg(1, 1, 1, 1)), r(1, 1));
        assert_eq!(sum_dof(&cfg(1, 2, 2, 1)), r(3, 2));
        assert_eq!(sum_dof(&cfg(2, 5, 5, 2)), r(16, 5));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(mimo_ic_upper(&cfg(2, 3, 3, 2)), r(3, 1));
        assert_eq!(mimo_ic_upper(&cfg(1, 1, 1, 1)), r(1, 1));
        assert_eq!(mimo_ic_upper(&cfg(2, 5, 5, 2)), r(4, 1));

        assert_eq!(single_cell_lower(&cfg(2, 3, 3, 2)), r(2, 1));
        assert_eq!(single_cell_lower(&cfg(1, 1, 1, 1)), r(1, 1));
        assert_eq!(single_cell_lower(&cfg(2, 5, 5, 2)), r(2, 1));

        assert_eq!(conventional_upper(&cfg(2, 3, 3, 2)), r(2, 1));
        assert_eq!(conventional_upper(&cfg(1, 1, 1, 1)), r(1, 1));
        // min{8, 14, max(2,8), max(6,6)}
        assert_eq!(conventional_upper(&cfg(2, 6, 6, 8)), r(6, 1));
    }

    #[test]
    fn single_cell_uses_beta_cell_alone() {
        // Only cell β serves more than one stream; min(M1, N2) would give 1.
        assert_eq!(single_cell_lower(&cfg(1, 4, 1, 4)), r(4, 1));
    }

    #[test]
    fn hotspot_examples() {
        let b = hotspot_bounds(2, &cfg(2, 6, 3, 4)).unwrap();
        assert_eq!((b.conventional_upper, b.uplink_downlink_lower), (r(4, 1), r(14, 3)));
        let b = hotspot_bounds(1, &cfg(1, 1, 1, 1)).unwrap();
        assert_eq!((b.conventional_upper, b.uplink_downlink_lower), (r(1, 1), r(1, 1)));
        let b = hotspot_bounds(1, &cfg(2, 3, 3, 2)).unwrap();
        assert_eq!((b.conventional_upper, b.uplink_downlink_lower), (r(2, 1), r(8, 3)));
        assert!(hotspot_bounds(0, &cfg(1, 1, 1, 1)).is_err());
    }

    #[test]
    fn grid_order_matches_index() {
        for (idx, c) in CellConfig::grid(3).enumerate() {
            assert_eq!(CellConfig::grid_at(3, idx as u64), c);
        }
        assert_eq!(CellConfig::grid(4).count(), 256);
    }
}
