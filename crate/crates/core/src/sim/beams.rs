use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use super::channels::ExtendedChannels;
use super::linalg::{column_space, complement_vectors, hstack, max_abs_cosine, numerical_rank};
use super::plan::{Scheme, SimPlan};
use crate::error::Result;

/// One alignment beam: monomial in the cross gains over one sub-block.
#[derive(Debug, Clone, PartialEq)]
pub struct UplinkBeam {
    /// `s[j * n1 + i]` is the power of `g_βji`.
    pub exponents: Vec<u32>,
    pub block: usize,
    /// Unit-norm length-`d` vector; shared by every cell-α user.
    pub vector: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UplinkBeams {
    pub beams: Vec<UplinkBeam>,
}

impl UplinkBeams {
    pub fn matrix(&self, slots: usize) -> DMatrix<f64> {
        let cols: Vec<_> = self.beams.iter().map(|b| b.vector.clone()).collect();
        hstack(slots, &cols)
    }
}

/// Every exponent vector in `[0, t-1]^len`, lexicographic.
pub fn exponent_vectors(t: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..t).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

/// Monomial alignment beams: entry `t` of beam `s` is
/// `∏_{j,i} g_βji[t]^{s_ji}` on its sub-block and zero elsewhere.
pub fn uplink_ia_beams(ext: &ExtendedChannels, plan: &SimPlan) -> UplinkBeams {
    let (n1, n2) = (plan.config.n1() as usize, plan.config.n2() as usize);
    let exps = exponent_vectors(plan.t, plan.exponent_len());
    let mut beams = Vec::with_capacity(plan.alpha_streams as usize);
    for (block, range) in plan.sub_blocks().into_iter().enumerate() {
        for s in &exps {
            let mut v = DVector::zeros(ext.slots);
            for slot in range.clone() {
                let mut x = 1.0;
                for j in 0..n2 {
                    for i in 0..n1 {
                        x *= ext.g_beta[j][i][slot].powi(s[j * n1 + i] as i32);
                    }
                }
                v[slot] = x;
            }
            v.normalize_mut();
            beams.push(UplinkBeam {
                exponents: s.clone(),
                block,
                vector: v,
            });
        }
    }
    UplinkBeams { beams }
}

/// Interference seen at cell-β user `j`: `Ḡ_βji v^(s)` for every `i` and beam.
pub fn interference_at(ext: &ExtendedChannels, beams: &UplinkBeams, j: usize, block: Option<usize>) -> DMatrix<f64> {
    let n1 = ext.config.n1() as usize;
    let cols: Vec<_> = beams
        .beams
        .iter()
        .filter(|b| block.is_none_or(|k| b.block == k))
        .flat_map(|b| (0..n1).map(move |i| ext.g_beta_mul(j, i, &b.vector)))
        .collect();
    hstack(ext.slots, &cols)
}

/// Aligned interference across every cell-β user.
pub fn aligned_interference(ext: &ExtendedChannels, beams: &UplinkBeams, block: Option<usize>) -> DMatrix<f64> {
    let n2 = ext.config.n2() as usize;
    let parts: Vec<DMatrix<f64>> = (0..n2).map(|j| interference_at(ext, beams, j, block)).collect();
    let cols: Vec<DVector<f64>> = parts.iter().flat_map(|m| m.column_iter().map(|c| c.into_owned())).collect();
    hstack(ext.slots, &cols)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlignmentRank {
    pub per_block: Vec<usize>,
    pub total: usize,
}

/// Dimension of the span of `{Ḡ_βji v^(s)}`, per sub-block and summed.
pub fn alignment_dimension(ext: &ExtendedChannels, beams: &UplinkBeams, plan: &SimPlan) -> AlignmentRank {
    let per_block: Vec<usize> = (0..plan.replication as usize)
        .map(|b| numerical_rank(&aligned_interference(ext, beams, Some(b))))
        .collect();
    let total = per_block.iter().sum();
    AlignmentRank { per_block, total }
}

/// BS α's desired signals `H̄_αi v^(s)`, user-major.
pub fn alpha_signals(ext: &ExtendedChannels, beams: &UplinkBeams) -> DMatrix<f64> {
    let cols: Vec<_> = ext
        .h_alpha
        .iter()
        .flat_map(|h| beams.beams.iter().map(move |b| h.mul_vec(&b.vector)))
        .collect();
    hstack(ext.g_alpha.nrows(), &cols)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DownlinkBeams {
    /// Orthonormal basis of the intended signal subspace at cell-β users,
    /// orthogonal to all aligned interference (`d × beta_streams`).
    pub intra_basis: DMatrix<f64>,
    /// Per cell-β user, `beta_streams` orthonormal columns of length `m2·d`.
    pub per_user: Vec<DMatrix<f64>>,
    /// Per user, the vectors its beams must be orthogonal to.
    pub constraints: Vec<DMatrix<f64>>,
}

impl DownlinkBeams {
    /// Largest normalized inner product between a beam and one of its
    /// constraint vectors.
    pub fn orthogonality_residual(&self) -> f64 {
        self.per_user
            .iter()
            .zip(&self.constraints)
            .map(|(v, c)| max_abs_cosine(v, c))
            .fold(0.0, f64::max)
    }
}

/// Downlink nulling beams for the chosen scheme.
///
/// Scheme 1 beams avoid `Ḡ_αᵀ H̄_αi v^(s)` (no leakage into BS α's signal
/// space) and `H̄_βi'ᵀ w` for `i' ≠ j` (no leakage into other cell-β users'
/// signal space). Scheme 2 keeps only the second family.
pub fn downlink_in_beams<R: Rng>(
    ext: &ExtendedChannels,
    uplink: &UplinkBeams,
    plan: &SimPlan,
    rng: &mut R,
) -> Result<DownlinkBeams> {
    let n2 = ext.config.n2() as usize;
    let bs = plan.beta_streams as usize;
    let tx_dim = ext.g_alpha.ncols();

    let aligned = column_space(&aligned_interference(ext, uplink, None));
    let intra_basis = complement_vectors(&aligned, bs, rng)?;

    let inter: Vec<DVector<f64>> = match plan.scheme {
        Scheme::InterIntraNulling if bs > 0 => {
            let signals = alpha_signals(ext, uplink);
            signals.column_iter().map(|c| ext.g_alpha.tr_mul_vec(&c.into_owned())).collect()
        }
        _ => Vec::new(),
    };

    let mut per_user = Vec::with_capacity(n2);
    let mut constraints = Vec::with_capacity(n2);
    for j in 0..n2 {
        let mut cols = inter.clone();
        for (other, h) in ext.h_beta.iter().enumerate() {
            if other != j {
                cols.extend(intra_basis.column_iter().map(|w| h.tr_mul_vec(&w.into_owned())));
            }
        }
        let c = hstack(tx_dim, &cols);
        let basis = column_space(&c);
        per_user.push(complement_vectors(&basis, bs, rng)?);
        constraints.push(c);
    }
    Ok(DownlinkBeams {
        intra_basis,
        per_user,
        constraints,
    })
}
