//! Exact construction for `M2 = 2`, `M1 = N2 = 1` over `N1` slots:
//! `N1` uplink streams aligned into one dimension at the cell-β user, plus
//! `N1 - 1` downlink streams nulled at BS α.

use nalgebra::DVector;

use super::channels::{beam_rng, draw_channels, extend_channels};
use super::linalg::{column_space, complement_vectors, hstack, max_abs_cosine, numerical_rank, ORTHO_TOL};
use super::verify::{concat, BetaUserCheck, SimReport};
use crate::dof::CellConfig;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub fn run_simple_scheme(n1: u32, seed: u64) -> Result<SimReport> {
    if n1 == 0 {
        return Err(Error::NonPositive { field: "n1", value: 0 });
    }
    let cfg = CellConfig::new(1, 2, n1, 1)?;
    let d = n1 as usize;
    let ext = extend_channels(&draw_channels(&cfg, d, seed));
    let mut rng = beam_rng(seed);

    // v_α1 fixed; v_αi = Ḡ_β1i⁻¹ Ḡ_β11 v_α1 lines every user up on the same
    // direction at the cell-β user.
    let v1 = DVector::from_element(d, 1.0 / (d as f64).sqrt());
    let anchor = ext.g_beta_mul(0, 0, &v1);
    let uplink: Vec<DVector<f64>> = (0..d).map(|i| anchor.component_div(&ext.g_beta[0][i])).collect();

    // Downlink beams in the null space of Ḡ_α, one dimension short of its
    // full size because the aligned interference occupies one dimension.
    let g_rows = ext.g_alpha.to_dense().transpose();
    let row_space = column_space(&g_rows);
    let downlink = complement_vectors(&row_space, d - 1, &mut rng)?;
    let in_orthogonality_max_abs = max_abs_cosine(&downlink, &g_rows);

    let interference: Vec<_> = uplink.iter().enumerate().map(|(i, v)| ext.g_beta_mul(0, i, v)).collect();
    let interference = hstack(d, &interference);
    let alignment_rank = numerical_rank(&interference);

    let signals: Vec<_> = uplink.iter().enumerate().map(|(i, v)| ext.h_alpha[i].mul_vec(v)).collect();
    let signals = hstack(d, &signals);
    let signal_basis = column_space(&signals);
    let bs_alpha_rank_ok = signal_basis.ncols() == d;
    let leak_cols: Vec<_> = downlink.column_iter().map(|c| ext.g_alpha.mul_vec(&c.into_owned())).collect();
    // Ḡ_α v should vanish outright here, so measure it against the channel scale.
    let bs_alpha_leakage = leak_cols.iter().map(|x| x.norm()).fold(0.0, f64::max) / ext.g_alpha.max_block_norm();

    let desired: Vec<_> = downlink.column_iter().map(|c| ext.h_beta[0].mul_vec(&c.into_owned())).collect();
    let desired = hstack(d, &desired);
    let independent = numerical_rank(&concat(&desired, &interference.columns(0, 1).into_owned())) == d;
    let beta = BetaUserCheck {
        independent,
        intra_leakage: 0.0,
        projected_full_rank: true,
        decodable: independent && alignment_rank == 1,
    };

    let streams = 2 * n1 as i64 - 1;
    Ok(SimReport {
        kind: "simple",
        config: cfg,
        plan: None,
        slots: d as u64,
        alpha_streams_per_user: 1,
        beta_streams_per_user: d as u64 - 1,
        alignment_rank,
        alignment_rank_per_block: vec![alignment_rank],
        alignment_bounds_ok: alignment_rank == 1,
        in_orthogonality_max_abs,
        bs_alpha_rank_ok,
        bs_alpha_leakage,
        bs_alpha_decodable: bs_alpha_rank_ok && bs_alpha_leakage < ORTHO_TOL,
        beta_users: vec![beta],
        beta_users_decodable: Vec::new(),
        achieved_dof: Rational::new(streams, n1 as i64),
        seed,
        passed: false,
    }
    .finish())
}
