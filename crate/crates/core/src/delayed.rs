//! Four-slot delayed-CSIT scheme for `(M1, M2, N1, N2) = (1, 2, 2, 1)`:
//! five scalar symbols in four slots.
//!
//! Schedule:
//! 1. user (α,1) sends `a1`, user (α,2) sends `b1`
//! 2. user (α,1) sends `a2`, user (α,2) sends `b1`
//! 3. BS β sends `[c1, c2]`
//! 4. user (α,1) sends `L7 = g1[1]a1 − (g2[1]g1[2]/g2[2])a2`, BS β resends
//!    its slot-3 observation at BS α as `[L3, L3]`
//!
//! BS α decodes `(a1, a2, b1)` and the β user decodes `(c1, c2)`.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, Matrix2, Matrix3, RowVector2, Vector2, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::rational::Rational;
use crate::sim::channels::channel_rng;

pub const SLOTS: usize = 4;
pub const DECODE_TOL: f64 = 1e-6;
pub const CANCEL_TOL: f64 = 1e-9;
pub const MAX_CONDITION: f64 = 1e10;
const MIN_G2_2: f64 = 1e-6;

/// Channels for slots 1..=4, stored at index `t - 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelayedChannelTrace {
    /// User (α,1) → BS α.
    pub h1: [f64; SLOTS],
    /// User (α,2) → BS α.
    pub h2: [f64; SLOTS],
    /// User (α,1) → β user.
    pub g1: [f64; SLOTS],
    /// User (α,2) → β user.
    pub g2: [f64; SLOTS],
    /// BS β → BS α.
    pub g_vec: [[f64; 2]; SLOTS],
    /// BS β → β user.
    pub h_vec: [[f64; 2]; SLOTS],
}

impl DelayedChannelTrace {
    pub fn draw<R: Rng>(rng: &mut R) -> Self {
        let mut scalar = || -> [f64; SLOTS] { std::array::from_fn(|_| rng.sample(StandardNormal)) };
        let h1 = scalar();
        let h2 = scalar();
        let g1 = scalar();
        let mut g2 = scalar();
        let mut row = || -> [[f64; 2]; SLOTS] { std::array::from_fn(|_| [rng.sample(StandardNormal), rng.sample(StandardNormal)]) };
        let g_vec = row();
        let h_vec = row();
        while g2[1].abs() < MIN_G2_2 {
            g2[1] = rng.sample(StandardNormal);
        }
        DelayedChannelTrace { h1, h2, g1, g2, g_vec, h_vec }
    }
}

/// A coefficient together with the slots of every channel it was built from.
#[derive(Debug, Clone, PartialEq)]
struct Tagged {
    value: f64,
    deps: BTreeSet<usize>,
}

impl Tagged {
    fn constant(value: f64) -> Self {
        Tagged { value, deps: BTreeSet::new() }
    }

    fn channel(value: f64, slot: usize) -> Self {
        Tagged {
            value,
            deps: BTreeSet::from([slot]),
        }
    }

    fn combine(&self, other: &Tagged, value: f64) -> Tagged {
        Tagged {
            value,
            deps: self.deps.union(&other.deps).copied().collect(),
        }
    }

    fn mul(&self, other: &Tagged) -> Tagged {
        self.combine(other, self.value * other.value)
    }

    fn div(&self, other: &Tagged) -> Tagged {
        self.combine(other, self.value / other.value)
    }

    fn neg(&self) -> Tagged {
        Tagged {
            value: -self.value,
            deps: self.deps.clone(),
        }
    }
}

/// One transmit coefficient and the channel slots it depends on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmitCoefficient {
    pub slot: usize,
    pub transmitter: &'static str,
    pub value: f64,
    pub depends_on: Vec<usize>,
}

impl TransmitCoefficient {
    fn new(slot: usize, transmitter: &'static str, t: &Tagged) -> Self {
        TransmitCoefficient {
            slot,
            transmitter,
            value: t.value,
            depends_on: t.deps.iter().copied().collect(),
        }
    }

    pub fn is_causal(&self) -> bool {
        self.depends_on.iter().all(|&s| s < self.slot)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelayedReport {
    /// `(a1, a2, b1, c1, c2)`.
    pub symbols_sent: [f64; 5],
    /// `(a1, a2, b1)` at BS α.
    pub decoded_alpha: [f64; 3],
    /// `(c1, c2)` at the β user.
    pub decoded_beta: [f64; 2],
    pub max_abs_error: f64,
    /// `b1` coefficient left in the β user's reconstruction of `L7`.
    pub b1_residual: f64,
    pub condition_alpha: f64,
    pub condition_beta: f64,
    pub transmit_coefficients: Vec<TransmitCoefficient>,
    pub causality_ok: bool,
    /// Ill-conditioned decode or failed cancellation.
    pub flagged: bool,
    pub dof: Rational,
    pub seed: u64,
    pub passed: bool,
}

fn condition(m: DMatrix<f64>) -> f64 {
    let sv = m.singular_values();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        sv.max() / min
    }
}

pub fn delayed_dof() -> Rational {
    Rational::new(5, 4)
}

/// Runs the scheme on channels drawn from `seed`. Symbols are drawn
/// standard normal after the channels unless given.
pub fn run_delayed_scheme(seed: u64, symbols: Option<[f64; 5]>) -> DelayedReport {
    let mut rng = channel_rng(seed);
    let ch = DelayedChannelTrace::draw(&mut rng);
    let symbols = symbols.unwrap_or_else(|| std::array::from_fn(|_| rng.sample(StandardNormal)));
    run_on_trace(&ch, symbols, seed)
}

pub fn run_on_trace(ch: &DelayedChannelTrace, symbols: [f64; 5], seed: u64) -> DelayedReport {
    let [a1, a2, b1, c1, c2] = symbols;
    let c = Vector2::new(c1, c2);
    let row = |r: [f64; 2]| RowVector2::new(r[0], r[1]);
    // Slot index s is 1-based in tags.
    let at = |s: usize| s - 1;

    // Slots 1-3: fixed transmissions, no CSI needed.
    let l1 = ch.h1[at(1)] * a1 + ch.h2[at(1)] * b1;
    let l2 = ch.h1[at(2)] * a2 + ch.h2[at(2)] * b1;
    let l3 = (row(ch.g_vec[at(3)]) * c)[0];
    let l4 = ch.g1[at(1)] * a1 + ch.g2[at(1)] * b1;
    let l5 = ch.g1[at(2)] * a2 + ch.g2[at(2)] * b1;
    let l6 = (row(ch.h_vec[at(3)]) * c)[0];

    // Slot 4 coefficients, built only from tagged past channels.
    let g1_1 = Tagged::channel(ch.g1[at(1)], 1);
    let g1_2 = Tagged::channel(ch.g1[at(2)], 2);
    let g2_1 = Tagged::channel(ch.g2[at(1)], 1);
    let g2_2 = Tagged::channel(ch.g2[at(2)], 2);
    let l7_a1 = g1_1.clone();
    let l7_a2 = g2_1.mul(&g1_2).div(&g2_2).neg();
    // BS β forwards its slot-3 transmission as seen at BS α: L3 = g_vec[3]·c.
    let fwd: Vec<Tagged> = (0..2).map(|k| Tagged::channel(ch.g_vec[at(3)][k], 3)).collect();
    let mut transmit_coefficients = vec![
        TransmitCoefficient::new(1, "user_alpha1", &Tagged::constant(1.0)),
        TransmitCoefficient::new(1, "user_alpha2", &Tagged::constant(1.0)),
        TransmitCoefficient::new(2, "user_alpha1", &Tagged::constant(1.0)),
        TransmitCoefficient::new(2, "user_alpha2", &Tagged::constant(1.0)),
        TransmitCoefficient::new(3, "bs_beta", &Tagged::constant(1.0)),
        TransmitCoefficient::new(3, "bs_beta", &Tagged::constant(1.0)),
        TransmitCoefficient::new(4, "user_alpha1", &l7_a1),
        TransmitCoefficient::new(4, "user_alpha1", &l7_a2),
    ];
    transmit_coefficients.extend(fwd.iter().map(|f| TransmitCoefficient::new(4, "bs_beta", f)));
    let causality_ok = transmit_coefficients.iter().all(TransmitCoefficient::is_causal);

    let l7 = l7_a1.value * a1 + l7_a2.value * a2;
    let l3_fwd = fwd[0].value * c1 + fwd[1].value * c2;
    let ones = Vector2::new(1.0, 1.0);
    let y_alpha = ch.h1[at(4)] * l7 + (row(ch.g_vec[at(4)]) * ones)[0] * l3_fwd;
    let y_beta = (row(ch.h_vec[at(4)]) * ones)[0] * l3_fwd + ch.g1[at(4)] * l7;

    // BS α: strip the known L3, recover L7, solve for (a1, a2, b1).
    let l7_hat = (y_alpha - (row(ch.g_vec[at(4)]) * ones)[0] * l3) / ch.h1[at(4)];
    let m_alpha = Matrix3::new(
        ch.h1[at(1)], 0.0, ch.h2[at(1)],
        0.0, ch.h1[at(2)], ch.h2[at(2)],
        l7_a1.value, l7_a2.value, 0.0,
    );
    let alpha = m_alpha.lu().solve(&Vector3::new(l1, l2, l7_hat)).unwrap_or(Vector3::from_element(f64::NAN));

    // β user: rebuild L7 from L4, L5, strip it, recover L3, solve for c.
    let ratio = ch.g2[at(1)] / ch.g2[at(2)];
    let l7_rebuilt = l4 - ratio * l5;
    let b1_residual = (ch.g2[at(1)] - ratio * ch.g2[at(2)]).abs();
    let l3_hat = (y_beta - ch.g1[at(4)] * l7_rebuilt) / (row(ch.h_vec[at(4)]) * ones)[0];
    let g3 = ch.g_vec[at(3)];
    let h3 = ch.h_vec[at(3)];
    let m_beta = Matrix2::new(g3[0], g3[1], h3[0], h3[1]);
    let beta = m_beta.lu().solve(&Vector2::new(l3_hat, l6)).unwrap_or(Vector2::from_element(f64::NAN));

    let decoded_alpha = [alpha[0], alpha[1], alpha[2]];
    let decoded_beta = [beta[0], beta[1]];
    let max_abs_error = decoded_alpha
        .iter()
        .chain(&decoded_beta)
        .zip(&symbols)
        .map(|(d, s)| (d - s).abs())
        .fold(0.0, |acc: f64, e| if e.is_nan() { f64::INFINITY } else { acc.max(e) });

    let condition_alpha = condition(DMatrix::from_iterator(3, 3, m_alpha.iter().copied()));
    let condition_beta = condition(DMatrix::from_iterator(2, 2, m_beta.iter().copied()));
    let scale_alpha = ch.h1[at(4)].abs();
    let scale_beta = (row(ch.h_vec[at(4)]) * ones)[0].abs();
    let flagged = condition_alpha > MAX_CONDITION
        || condition_beta > MAX_CONDITION
        || scale_alpha * MAX_CONDITION < 1.0
        || scale_beta * MAX_CONDITION < 1.0
        || b1_residual > CANCEL_TOL;

    DelayedReport {
        symbols_sent: symbols,
        decoded_alpha,
        decoded_beta,
        max_abs_error,
        b1_residual,
        condition_alpha,
        condition_beta,
        transmit_coefficients,
        causality_ok,
        flagged,
        dof: delayed_dof(),
        seed,
        passed: causality_ok && !flagged && max_abs_error < DECODE_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_random_symbols() {
        let r = run_delayed_scheme(7, None);
        assert!(r.causality_ok);
        assert!(r.max_abs_error < DECODE_TOL, "{r:?}");
        assert!(r.passed);
        assert_eq!(r.dof, Rational::new(5, 4));
    }

    #[test]
    fn zero_symbols_decode_to_zero() {
        let r = run_delayed_scheme(3, Some([0.0; 5]));
        assert!(r.decoded_alpha.iter().chain(&r.decoded_beta).all(|&x| x.abs() < 1e-12));
    }

    #[test]
    fn slot_four_uses_only_past_channels() {
        let r = run_delayed_scheme(11, None);
        let slot4: Vec<_> = r.transmit_coefficients.iter().filter(|c| c.slot == 4).collect();
        assert_eq!(slot4.len(), 4);
        assert!(slot4.iter().any(|c| c.depends_on == vec![1, 2]));
        assert!(slot4.iter().any(|c| c.depends_on == vec![3]));
    }

    #[test]
    fn future_dependency_fails_audit() {
        let c = TransmitCoefficient::new(4, "bs_beta", &Tagged::channel(1.0, 4));
        assert!(!c.is_causal());
    }
}
