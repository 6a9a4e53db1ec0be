//! The 24 orderings of `(M1, M2, N1, N2)` and the closed-form optima of the
//! two stream-allocation LPs within each ordering.

use serde::Serialize;

use super::CellConfig;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Param {
    M1,
    M2,
    N1,
    N2,
}

impl Param {
    fn of(self, cfg: &CellConfig) -> u32 {
        match self {
            Param::M1 => cfg.m1(),
            Param::M2 => cfg.m2(),
            Param::N1 => cfg.n1(),
            Param::N2 => cfg.n2(),
        }
    }
}

/// Symbolic closed form appearing in a regime row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClosedForm {
    M1,
    M2,
    N1,
    N2,
    /// `(N1 N2 + M1 (N1 - N2)) / N1`
    AlphaHeavy,
    /// `min(M2, AlphaHeavy)`
    MinM2AlphaHeavy,
    /// `(N1 N2 + M2 (N2 - N1)) / N2`
    BetaHeavy,
    /// `min(M1, BetaHeavy)`
    MinM1BetaHeavy,
}

impl ClosedForm {
    pub fn eval(self, cfg: &CellConfig) -> Rational {
        let (m1, m2, n1, n2) = cfg.as_tuple();
        let [m1, m2, n1, n2] = [m1, m2, n1, n2].map(i64::from);
        let alpha = || Rational::new(n1 * n2 + m1 * (n1 - n2), n1);
        let beta = || Rational::new(n1 * n2 + m2 * (n2 - n1), n2);
        match self {
            ClosedForm::M1 => m1.into(),
            ClosedForm::M2 => m2.into(),
            ClosedForm::N1 => n1.into(),
            ClosedForm::N2 => n2.into(),
            ClosedForm::AlphaHeavy => alpha(),
            ClosedForm::MinM2AlphaHeavy => Rational::from(m2).min(alpha()),
            ClosedForm::BetaHeavy => beta(),
            ClosedForm::MinM1BetaHeavy => Rational::from(m1).min(beta()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegimeRow {
    pub index: u8,
    /// The row applies when `ordering[0] <= ordering[1] <= ordering[2] <= ordering[3]`.
    pub ordering: [Param; 4],
    /// Optimum of the scheme-1 LP.
    pub d1: ClosedForm,
    /// Optimum of the scheme-2 LP.
    pub d2: ClosedForm,
    pub dmax: ClosedForm,
}

impl RegimeRow {
    pub fn applies(&self, cfg: &CellConfig) -> bool {
        self.ordering.windows(2).all(|w| w[0].of(cfg) <= w[1].of(cfg))
    }
}

const fn row(
    index: u8,
    ordering: [Param; 4],
    d1: ClosedForm,
    d2: ClosedForm,
    dmax: ClosedForm,
) -> RegimeRow {
    RegimeRow {
        index,
        ordering,
        d1,
        d2,
        dmax,
    }
}

use ClosedForm as F;
use Param::{M1, M2, N1, N2};

pub static REGIMES: [RegimeRow; 24] = [
    row(1, [M1, M2, N1, N2], F::M2, F::M1, F::M2),
    row(2, [M1, M2, N2, N1], F::M2, F::M1, F::M2),
    row(3, [M1, N1, M2, N2], F::M2, F::M1, F::M2),
    row(4, [M1, N1, N2, M2], F::N2, F::M1, F::N2),
    row(5, [M1, N2, M2, N1], F::MinM2AlphaHeavy, F::M1, F::MinM2AlphaHeavy),
    row(6, [M1, N2, N1, M2], F::AlphaHeavy, F::M1, F::AlphaHeavy),
    row(7, [M2, M1, N1, N2], F::M2, F::M1, F::M1),
    row(8, [M2, M1, N2, N1], F::M2, F::M1, F::M1),
    row(9, [M2, N1, M1, N2], F::M2, F::MinM1BetaHeavy, F::MinM1BetaHeavy),
    row(10, [M2, N1, N2, M1], F::M2, F::BetaHeavy, F::BetaHeavy),
    row(11, [M2, N2, M1, N1], F::M2, F::M1, F::M1),
    row(12, [M2, N2, N1, M1], F::M2, F::N1, F::N1),
    row(13, [N1, M1, M2, N2], F::M2, F::M1, F::M2),
    // d2 is M1, not N2: the scheme-2 LP is capped by N1 λ1 + N2 λ2 <= M1
    // and M1 <= N2 in this ordering.
    row(14, [N1, M1, N2, M2], F::N2, F::M1, F::N2),
    row(15, [N1, M2, M1, N2], F::M2, F::MinM1BetaHeavy, F::MinM1BetaHeavy),
    row(16, [N1, M2, N2, M1], F::M2, F::BetaHeavy, F::BetaHeavy),
    row(17, [N1, N2, M1, M2], F::N2, F::N2, F::N2),
    row(18, [N1, N2, M2, M1], F::N2, F::N2, F::N2),
    row(19, [N2, M1, M2, N1], F::MinM2AlphaHeavy, F::M1, F::MinM2AlphaHeavy),
    row(20, [N2, M1, N1, M2], F::AlphaHeavy, F::M1, F::AlphaHeavy),
    row(21, [N2, M2, M1, N1], F::M2, F::M1, F::M1),
    row(22, [N2, M2, N1, M1], F::M2, F::N1, F::N1),
    row(23, [N2, N1, M1, M2], F::N1, F::N1, F::N1),
    row(24, [N2, N1, M2, M1], F::N1, F::N1, F::N1),
];

/// All regime rows whose ordering `cfg` satisfies, lowest index first.
/// Never empty: the rows cover every ordering of four values.
pub fn classify_regime(cfg: &CellConfig) -> Vec<&'static RegimeRow> {
    REGIMES.iter().filter(|r| r.applies(cfg)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegimeValues {
    pub d1: Rational,
    pub d2: Rational,
    pub dmax: Rational,
}

/// Evaluates the closed forms of every applicable row and checks that they
/// agree.
pub fn regime_closed_forms(cfg: &CellConfig) -> Result<RegimeValues> {
    let rows = classify_regime(cfg);
    let eval = |r: &RegimeRow| RegimeValues {
        d1: r.d1.eval(cfg),
        d2: r.d2.eval(cfg),
        dmax: r.dmax.eval(cfg),
    };
    let first = eval(rows[0]);
    let disagreeing: Vec<u8> = rows.iter().filter(|r| eval(r) != first).map(|r| r.index).collect();
    if !disagreeing.is_empty() {
        let mut ids = vec![rows[0].index];
        ids.extend(disagreeing);
        return Err(Error::InconsistentRegimes {
            config: *cfg,
            rows: ids,
        });
    }
    Ok(first)
}
