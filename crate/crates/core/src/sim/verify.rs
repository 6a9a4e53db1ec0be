use nalgebra::DMatrix;
use serde::Serialize;

use super::beams::{alignment_dimension, alpha_signals, interference_at, DownlinkBeams, UplinkBeams};
use super::channels::ExtendedChannels;
use super::linalg::{column_space, hstack, numerical_rank, ORTHO_TOL};
use super::plan::{achieved_dof, Scheme, SimPlan};
use crate::dof::CellConfig;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaUserCheck {
    /// Rank of the user's desired signals joined with its aligned
    /// interference equals `beta_streams + rank(interference)`.
    pub independent: bool,
    /// Largest normalized leakage of other users' downlink streams into the
    /// intended subspace.
    pub intra_leakage: f64,
    /// Desired signals projected onto the intended subspace stay full rank.
    pub projected_full_rank: bool,
    pub decodable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub kind: &'static str,
    pub config: CellConfig,
    /// `None` for the exact small-network construction.
    pub plan: Option<SimPlan>,
    pub slots: u64,
    pub alpha_streams_per_user: u64,
    pub beta_streams_per_user: u64,
    pub alignment_rank: usize,
    pub alignment_rank_per_block: Vec<usize>,
    pub alignment_bounds_ok: bool,
    pub in_orthogonality_max_abs: f64,
    pub bs_alpha_rank_ok: bool,
    pub bs_alpha_leakage: f64,
    pub bs_alpha_decodable: bool,
    pub beta_users: Vec<BetaUserCheck>,
    pub beta_users_decodable: Vec<bool>,
    pub achieved_dof: Rational,
    pub seed: u64,
    pub passed: bool,
}

impl SimReport {
    pub(crate) fn finish(mut self) -> Self {
        self.beta_users_decodable = self.beta_users.iter().map(|b| b.decodable).collect();
        self.passed = self.alignment_bounds_ok
            && self.in_orthogonality_max_abs < ORTHO_TOL
            && self.bs_alpha_decodable
            && self.beta_users_decodable.iter().all(|&ok| ok);
        self
    }
}

/// Largest `‖Bᵀ x‖ / (scale ‖x‖)` over the columns `x` of `xs`, where `B` is
/// an orthonormal basis.
pub(crate) fn max_projection(basis: &DMatrix<f64>, xs: &DMatrix<f64>, scale: f64) -> f64 {
    if basis.ncols() == 0 {
        return 0.0;
    }
    xs.column_iter()
        .filter(|x| x.norm() > 0.0)
        .map(|x| (basis.tr_mul(&x)).norm() / (scale * x.norm()))
        .fold(0.0, f64::max)
}

pub(crate) fn concat(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    assert_eq!(a.nrows(), b.nrows());
    let mut m = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    m.columns_mut(0, a.ncols()).copy_from(a);
    m.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    m
}

/// Checks every rank and orthogonality condition the decoders rely on.
/// Failures are recorded in the report.
pub fn verify_decoding(
    ext: &ExtendedChannels,
    uplink: &UplinkBeams,
    downlink: &DownlinkBeams,
    plan: &SimPlan,
    seed: u64,
) -> SimReport {
    let (n1, n2) = (plan.config.n1() as usize, plan.config.n2() as usize);
    let bs = plan.beta_streams as usize;

    let alignment = alignment_dimension(ext, uplink, plan);
    let alignment_bounds_ok = alignment
        .per_block
        .iter()
        .all(|&r| plan.exponent_count <= r as u64 && r as u64 <= plan.ext_exponent_count);

    // BS α.
    let signals = alpha_signals(ext, uplink);
    let downlink_at_alpha: Vec<_> = downlink
        .per_user
        .iter()
        .flat_map(|v| v.column_iter().map(|c| ext.g_alpha.mul_vec(&c.into_owned())))
        .collect();
    let downlink_at_alpha = hstack(ext.g_alpha.nrows(), &downlink_at_alpha);
    let expected_signal_rank = n1 * plan.alpha_streams as usize;
    let signal_basis = column_space(&signals);
    let bs_alpha_rank_ok = signal_basis.ncols() == expected_signal_rank;
    let (bs_alpha_leakage, bs_alpha_decodable) = match plan.scheme {
        Scheme::InterIntraNulling => {
            let leak = max_projection(&signal_basis, &downlink_at_alpha, 1.0);
            (leak, bs_alpha_rank_ok && leak < ORTHO_TOL)
        }
        Scheme::IntraNulling => {
            let stacked = concat(&signals, &downlink_at_alpha);
            let full = numerical_rank(&stacked) == stacked.ncols();
            (0.0, bs_alpha_rank_ok && full)
        }
    };

    // Cell-β users.
    let w = &downlink.intra_basis;
    let beta_users = (0..n2)
        .map(|j| {
            let h = &ext.h_beta[j];
            let apply = |v: &DMatrix<f64>| {
                let cols: Vec<_> = v.column_iter().map(|c| h.mul_vec(&c.into_owned())).collect();
                hstack(h.nrows(), &cols)
            };
            let desired = apply(&downlink.per_user[j]);
            let interference = interference_at(ext, uplink, j, None);
            let interference_rank = numerical_rank(&interference);
            let independent = numerical_rank(&concat(&desired, &interference)) == bs + interference_rank;
            let intra_leakage = (0..n2)
                .filter(|&other| other != j)
                .map(|other| max_projection(w, &apply(&downlink.per_user[other]), 1.0))
                .fold(0.0, f64::max);
            let projected_full_rank = numerical_rank(&w.tr_mul(&desired)) == bs;
            BetaUserCheck {
                independent,
                intra_leakage,
                projected_full_rank,
                decodable: independent && intra_leakage < ORTHO_TOL && projected_full_rank,
            }
        })
        .collect();

    SimReport {
        kind: match plan.scheme {
            Scheme::InterIntraNulling => "scheme1",
            Scheme::IntraNulling => "scheme2",
        },
        config: plan.config,
        plan: Some(plan.clone()),
        slots: plan.slots,
        alpha_streams_per_user: plan.alpha_streams,
        beta_streams_per_user: plan.beta_streams,
        alignment_rank: alignment.total,
        alignment_rank_per_block: alignment.per_block,
        alignment_bounds_ok,
        in_orthogonality_max_abs: downlink.orthogonality_residual(),
        bs_alpha_rank_ok,
        bs_alpha_leakage,
        bs_alpha_decodable,
        beta_users,
        beta_users_decodable: Vec::new(),
        achieved_dof: achieved_dof(plan),
        seed,
        passed: false,
    }
    .finish()
}
