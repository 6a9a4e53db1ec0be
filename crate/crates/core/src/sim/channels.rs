use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::dof::CellConfig;

/// Per-slot channel realizations for one block of `slots` slots.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub config: CellConfig,
    pub slots: usize,
    /// `h_alpha[i][t]`: user (α,i) → BS α, length `m1`.
    pub h_alpha: Vec<Vec<DVector<f64>>>,
    /// `h_beta[j][t]`: BS β → user (β,j), length `m2` (a row vector in the model).
    pub h_beta: Vec<Vec<DVector<f64>>>,
    /// `g_alpha[t]`: BS β → BS α, `m1 × m2`.
    pub g_alpha: Vec<DMatrix<f64>>,
    /// `g_beta[j][i][t]`: user (α,i) → user (β,j).
    pub g_beta: Vec<Vec<Vec<f64>>>,
}

/// RNG for channel draws; beam randomization uses a separate stream.
pub fn channel_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn beam_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Random sign times a log-uniform magnitude on `[1/2, 2]`. Keeping these
/// scalars bounded keeps the monomial beams well scaled.
fn cross_gain<R: Rng>(rng: &mut R) -> f64 {
    let exponent = Uniform::new_inclusive(-1.0f64, 1.0).expect("valid range").sample(rng);
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    sign * exponent.exp2()
}

/// Draws `slots` i.i.d. slots. Deterministic in `seed`.
pub fn draw_channels(cfg: &CellConfig, slots: usize, seed: u64) -> ChannelSet {
    let (m1, m2, n1, n2) = cfg.as_tuple();
    let (m1, m2, n1, n2) = (m1 as usize, m2 as usize, n1 as usize, n2 as usize);
    let mut rng = channel_rng(seed);

    let mut h_alpha = vec![Vec::with_capacity(slots); n1];
    let mut h_beta = vec![Vec::with_capacity(slots); n2];
    let mut g_alpha = Vec::with_capacity(slots);
    let mut g_beta = vec![vec![Vec::with_capacity(slots); n1]; n2];
    for _ in 0..slots {
        for h in h_alpha.iter_mut() {
            h.push(DVector::from_fn(m1, |_, _| normal(&mut rng)));
        }
        for h in h_beta.iter_mut() {
            h.push(DVector::from_fn(m2, |_, _| normal(&mut rng)));
        }
        g_alpha.push(DMatrix::from_fn(m1, m2, |_, _| normal(&mut rng)));
        for row in g_beta.iter_mut() {
            for g in row.iter_mut() {
                g.push(cross_gain(&mut rng));
            }
        }
    }
    ChannelSet {
        config: *cfg,
        slots,
        h_alpha,
        h_beta,
        g_alpha,
        g_beta,
    }
}

/// Block-diagonal matrix with equally shaped blocks, one per slot.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiag {
    blocks: Vec<DMatrix<f64>>,
    block_rows: usize,
    block_cols: usize,
}

impl BlockDiag {
    pub fn new(blocks: Vec<DMatrix<f64>>) -> Self {
        let (block_rows, block_cols) = blocks.first().map_or((0, 0), |b| b.shape());
        assert!(blocks.iter().all(|b| b.shape() == (block_rows, block_cols)));
        BlockDiag {
            blocks,
            block_rows,
            block_cols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.blocks.len() * self.block_rows
    }

    pub fn ncols(&self) -> usize {
        self.blocks.len() * self.block_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows(), self.ncols())
    }

    pub fn blocks(&self) -> &[DMatrix<f64>] {
        &self.blocks
    }

    pub fn mul_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        assert_eq!(x.len(), self.ncols());
        let mut y = DVector::zeros(self.nrows());
        for (t, b) in self.blocks.iter().enumerate() {
            let xs = x.rows(t * self.block_cols, self.block_cols);
            y.rows_mut(t * self.block_rows, self.block_rows).copy_from(&(b * xs));
        }
        y
    }

    /// `selfᵀ · x`.
    pub fn tr_mul_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        assert_eq!(x.len(), self.nrows());
        let mut y = DVector::zeros(self.ncols());
        for (t, b) in self.blocks.iter().enumerate() {
            let xs = x.rows(t * self.block_rows, self.block_rows);
            y.rows_mut(t * self.block_cols, self.block_cols).copy_from(&(b.transpose() * xs));
        }
        y
    }

    /// Largest per-slot Frobenius norm; a cheap scale for relative residuals.
    pub fn max_block_norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows(), self.ncols());
        for (t, b) in self.blocks.iter().enumerate() {
            m.view_mut((t * self.block_rows, t * self.block_cols), (self.block_rows, self.block_cols))
                .copy_from(b);
        }
        m
    }
}

/// Time-extended channels over one block of `slots` slots.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedChannels {
    pub config: CellConfig,
    pub slots: usize,
    /// `(m1·d) × d` per cell-α user.
    pub h_alpha: Vec<BlockDiag>,
    /// `d × (m2·d)` per cell-β user.
    pub h_beta: Vec<BlockDiag>,
    /// `(m1·d) × (m2·d)`.
    pub g_alpha: BlockDiag,
    /// Diagonal of the `d × d` matrix `Ḡ_βji`, indexed `[j][i]`.
    pub g_beta: Vec<Vec<DVector<f64>>>,
}

impl ExtendedChannels {
    /// `Ḡ_βji · x`.
    pub fn g_beta_mul(&self, j: usize, i: usize, x: &DVector<f64>) -> DVector<f64> {
        self.g_beta[j][i].component_mul(x)
    }

    pub fn g_beta_dense(&self, j: usize, i: usize) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.g_beta[j][i])
    }
}

pub fn extend_channels(ch: &ChannelSet) -> ExtendedChannels {
    let h_alpha = ch
        .h_alpha
        .iter()
        .map(|per_slot| BlockDiag::new(per_slot.iter().map(|h| DMatrix::from_column_slice(h.len(), 1, h.as_slice())).collect()))
        .collect();
    let h_beta = ch
        .h_beta
        .iter()
        .map(|per_slot| BlockDiag::new(per_slot.iter().map(|h| DMatrix::from_row_slice(1, h.len(), h.as_slice())).collect()))
        .collect();
    let g_alpha = BlockDiag::new(ch.g_alpha.clone());
    let g_beta = ch
        .g_beta
        .iter()
        .map(|row| row.iter().map(|g| DVector::from_column_slice(g)).collect())
        .collect();
    ExtendedChannels {
        config: ch.config,
        slots: ch.slots,
        h_alpha,
        h_beta,
        g_alpha,
        g_beta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m1: u32, m2: u32, n1: u32, n2: u32) -> CellConfig {
        CellConfig::new(m1, m2, n1, n2).unwrap()
    }

    #[test]
    fn deterministic_in_seed() {
        let c = cfg(2, 3, 3, 2);
        assert_eq!(draw_channels(&c, 5, 42), draw_channels(&c, 5, 42));
        assert_ne!(draw_channels(&c, 5, 42), draw_channels(&c, 5, 43));
    }

    #[test]
    fn shapes() {
        let ch = draw_channels(&cfg(1, 2, 2, 1), 8, 0);
        assert_eq!(ch.h_alpha.len(), 2);
        assert!(ch.h_alpha.iter().all(|h| h.len() == 8 && h.iter().all(|v| v.len() == 1)));
        assert_eq!(ch.h_beta.len(), 1);
        assert!(ch.h_beta[0].iter().all(|v| v.len() == 2));
        assert!(ch.g_alpha.iter().all(|g| g.shape() == (1, 2)));
        assert_eq!((ch.g_beta.len(), ch.g_beta[0].len(), ch.g_beta[0][0].len()), (1, 2, 8));
    }

    #[test]
    fn cross_gains_bounded() {
        let ch = draw_channels(&cfg(1, 1, 4, 3), 500, 7);
        let all: Vec<f64> = ch.g_beta.iter().flatten().flatten().copied().collect();
        assert!(all.iter().all(|g| (0.5..=2.0).contains(&g.abs())));
        assert!(all.iter().any(|&g| g < 0.0) && all.iter().any(|&g| g > 0.0));
    }

    #[test]
    fn extended_shapes_and_structure() {
        let ext = extend_channels(&draw_channels(&cfg(1, 2, 2, 1), 8, 3));
        assert_eq!(ext.h_alpha[0].shape(), (8, 8));
        assert_eq!(ext.g_alpha.shape(), (8, 16));
        assert_eq!(ext.h_beta[0].shape(), (8, 16));
        assert_eq!(ext.g_beta_dense(0, 1).shape(), (8, 8));

        let g = ext.g_alpha.to_dense();
        for r in 0..8 {
            for c in 0..16 {
                if c / 2 != r {
                    assert_eq!(g[(r, c)], 0.0);
                }
            }
        }
        let gb = ext.g_beta_dense(0, 0);
        assert!(gb.iter().enumerate().all(|(k, &v)| k % 9 == 0 || v == 0.0));
    }

    #[test]
    fn single_slot_extension_is_identity() {
        let ch = draw_channels(&cfg(2, 3, 2, 2), 1, 9);
        let ext = extend_channels(&ch);
        assert_eq!(ext.g_alpha.to_dense(), ch.g_alpha[0]);
        assert_eq!(ext.h_alpha[1].to_dense(), DMatrix::from_column_slice(2, 1, ch.h_alpha[1][0].as_slice()));
        assert_eq!(ext.h_beta[0].to_dense(), ch.h_beta[0][0].transpose());
    }

    #[test]
    fn block_products_match_dense() {
        let ext = extend_channels(&draw_channels(&cfg(2, 3, 1, 1), 4, 11));
        let x = DVector::from_fn(12, |i, _| i as f64 - 5.0);
        let dense = ext.g_alpha.to_dense();
        assert!((ext.g_alpha.mul_vec(&x) - &dense * &x).norm() < 1e-12);
        let y = DVector::from_fn(8, |i, _| (i as f64).sin());
        assert!((ext.g_alpha.tr_mul_vec(&y) - dense.transpose() * &y).norm() < 1e-12);
    }
}
