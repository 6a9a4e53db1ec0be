//! Exact two-variable LPs over stream fractions `(λ1, λ2) ∈ [0,1]^2`, solved
//! by enumerating the corners of the feasible polygon.

use std::fmt;

use serde::Serialize;

use crate::dof::CellConfig;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Per-user stream fractions for cell α (`lambda1`) and cell β (`lambda2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StreamAllocation {
    pub lambda1: Rational,
    pub lambda2: Rational,
}

impl StreamAllocation {
    pub fn new(lambda1: Rational, lambda2: Rational) -> Result<Self> {
        for (name, value) in [("lambda1", lambda1), ("lambda2", lambda2)] {
            if value < Rational::ZERO || value > Rational::ONE {
                return Err(Error::LambdaOutOfRange {
                    name,
                    value: value.to_string(),
                });
            }
        }
        Ok(StreamAllocation { lambda1, lambda2 })
    }
}

impl fmt::Display for StreamAllocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lambda1, self.lambda2)
    }
}

/// `a·λ1 + b·λ2 ≤ c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HalfPlane {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub label: &'static str,
}

impl HalfPlane {
    pub fn new(a: impl Into<Rational>, b: impl Into<Rational>, c: impl Into<Rational>, label: &'static str) -> Self {
        HalfPlane {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            label,
        }
    }

    pub fn contains(&self, p: &StreamAllocation) -> bool {
        self.a * p.lambda1 + self.b * p.lambda2 <= self.c
    }

    fn boundary_intersection(&self, other: &HalfPlane) -> Option<(Rational, Rational)> {
        let det = self.a * other.b - other.a * self.b;
        if det.is_zero() {
            return None;
        }
        let x = (self.c * other.b - other.c * self.b) / det;
        let y = (self.a * other.c - other.a * self.c) / det;
        Some((x, y))
    }
}

/// Constraint rows; the box `0 ≤ λ1, λ2 ≤ 1` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct HalfPlaneSet {
    pub constraints: Vec<HalfPlane>,
}

impl HalfPlaneSet {
    pub fn new(constraints: Vec<HalfPlane>) -> Self {
        HalfPlaneSet { constraints }
    }

    /// The first constraint (box bounds included) that `p` violates.
    pub fn violated(&self, p: &StreamAllocation) -> Option<&'static str> {
        if p.lambda1 < Rational::ZERO || p.lambda2 < Rational::ZERO {
            return Some("lambda >= 0");
        }
        if p.lambda1 > Rational::ONE || p.lambda2 > Rational::ONE {
            return Some("lambda <= 1");
        }
        self.constraints.iter().find(|h| !h.contains(p)).map(|h| h.label)
    }

    pub fn contains(&self, p: &StreamAllocation) -> bool {
        self.violated(p).is_none()
    }

    fn with_box(&self) -> Vec<HalfPlane> {
        let mut all = self.constraints.clone();
        all.extend([
            HalfPlane::new(-1, 0, 0, "lambda1 >= 0"),
            HalfPlane::new(0, -1, 0, "lambda2 >= 0"),
            HalfPlane::new(1, 0, 1, "lambda1 <= 1"),
            HalfPlane::new(0, 1, 1, "lambda2 <= 1"),
        ]);
        all
    }
}

/// Every feasible intersection of two boundary lines, sorted and deduplicated.
/// Parallel pairs have no intersection and are skipped.
pub fn enumerate_corners(hs: &HalfPlaneSet) -> Result<Vec<StreamAllocation>> {
    let lines = hs.with_box();
    let mut corners = Vec::new();
    for (i, p) in lines.iter().enumerate() {
        for q in &lines[i + 1..] {
            let Some((x, y)) = p.boundary_intersection(q) else {
                continue;
            };
            let candidate = StreamAllocation {
                lambda1: x,
                lambda2: y,
            };
            if hs.contains(&candidate) {
                corners.push(candidate);
            }
        }
    }
    corners.sort();
    corners.dedup();
    if corners.is_empty() {
        return Err(Error::EmptyFeasibleRegion);
    }
    Ok(corners)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LpSolution {
    pub value: Rational,
    pub argmax: StreamAllocation,
}

/// Maximizes `w1·λ1 + w2·λ2`; ties go to the lexicographically largest corner.
pub fn maximize(hs: &HalfPlaneSet, w1: Rational, w2: Rational) -> Result<LpSolution> {
    let corners = enumerate_corners(hs)?;
    let best = corners
        .into_iter()
        .map(|p| (w1 * p.lambda1 + w2 * p.lambda2, p))
        .max()
        .expect("enumerate_corners never returns an empty list");
    Ok(LpSolution {
        value: best.0,
        argmax: best.1,
    })
}

/// Constraints of the scheme with inter-cell and intra-cell nulling at BS β.
pub fn scheme1_constraints(cfg: &CellConfig) -> HalfPlaneSet {
    let (m1, m2, n1, n2) = cfg.as_tuple();
    HalfPlaneSet::new(vec![
        HalfPlane::new(1, 1, 1, "lambda1 + lambda2 <= 1"),
        HalfPlane::new(n1, 0, m1, "N1 lambda1 <= M1"),
        HalfPlane::new(n1, n2, m2, "N1 lambda1 + N2 lambda2 <= M2"),
    ])
}

/// Constraints of the scheme with intra-cell nulling only.
pub fn scheme2_constraints(cfg: &CellConfig) -> HalfPlaneSet {
    let (m1, m2, n1, n2) = cfg.as_tuple();
    HalfPlaneSet::new(vec![
        HalfPlane::new(1, 1, 1, "lambda1 + lambda2 <= 1"),
        HalfPlane::new(n1, n2, m1, "N1 lambda1 + N2 lambda2 <= M1"),
        HalfPlane::new(0, n2, m2, "N2 lambda2 <= M2"),
    ])
}

fn solve(cfg: &CellConfig, hs: &HalfPlaneSet) -> LpSolution {
    // The origin satisfies both constraint sets, so the region is never empty.
    maximize(hs, cfg.n1().into(), cfg.n2().into()).expect("origin is always feasible")
}

pub fn solve_scheme1(cfg: &CellConfig) -> LpSolution {
    solve(cfg, &scheme1_constraints(cfg))
}

pub fn solve_scheme2(cfg: &CellConfig) -> LpSolution {
    solve(cfg, &scheme2_constraints(cfg))
}

/// Hotspot LP: scheme 1 with `N1` replaced by `l·N1`.
pub fn solve_hotspot(l: u32, cfg: &CellConfig) -> Result<LpSolution> {
    Ok(solve_scheme1(&cfg.with_scaled_n1(l)?))
}
