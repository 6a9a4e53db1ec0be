//! How often uplink-downlink operation strictly beats the best that
//! conventional operation could possibly do, over the grid `[1, Λ]^4`.

use serde::Serialize;

use crate::dof::{conventional_upper, sum_dof, CellConfig};
use crate::error::{Error, Result};
use crate::par;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GainScanResult {
    pub lambda_cap: u32,
    pub gain_count: u64,
    pub total: u64,
    pub fraction: Rational,
}

impl GainScanResult {
    fn new(lambda_cap: u32, gain_count: u64) -> Self {
        let total = grid_size(lambda_cap);
        GainScanResult {
            lambda_cap,
            gain_count,
            total,
            fraction: Rational::new(gain_count as i64, total as i64),
        }
    }

    /// Four decimal places, rounded half-up.
    pub fn rendered(&self) -> String {
        self.fraction.to_decimal(4)
    }
}

fn grid_size(lambda_cap: u32) -> u64 {
    (lambda_cap as u64).pow(4)
}

fn check_cap(lambda_cap: u32) -> Result<()> {
    if lambda_cap == 0 {
        return Err(Error::NonPositive {
            field: "lambda_cap",
            value: 0,
        });
    }
    Ok(())
}

pub fn has_gain(cfg: &CellConfig) -> bool {
    sum_dof(cfg) > conventional_upper(cfg)
}

pub fn delta_gain(lambda_cap: u32) -> Result<GainScanResult> {
    check_cap(lambda_cap)?;
    let count = par::count_range(0..grid_size(lambda_cap), |i| {
        has_gain(&CellConfig::grid_at(lambda_cap, i))
    });
    Ok(GainScanResult::new(lambda_cap, count))
}

/// Single-threaded scan regardless of features.
pub fn delta_gain_sequential(lambda_cap: u32) -> Result<GainScanResult> {
    check_cap(lambda_cap)?;
    let count = par::count_range_sequential(0..grid_size(lambda_cap), |i| {
        has_gain(&CellConfig::grid_at(lambda_cap, i))
    });
    Ok(GainScanResult::new(lambda_cap, count))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GainWitness {
    pub config: CellConfig,
    pub d_sigma: Rational,
    pub d_upper: Rational,
}

/// The first `limit` strict-gain configs in lexicographic order.
pub fn gain_region(lambda_cap: u32, limit: usize) -> Result<Vec<GainWitness>> {
    check_cap(lambda_cap)?;
    Ok(CellConfig::grid(lambda_cap)
        .filter_map(|config| {
            let d_sigma = sum_dof(&config);
            let d_upper = conventional_upper(&config);
            (d_sigma > d_upper).then_some(GainWitness {
                config,
                d_sigma,
                d_upper,
            })
        })
        .take(limit)
        .collect())
}
