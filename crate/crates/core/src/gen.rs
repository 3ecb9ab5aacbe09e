//! Seeded random block models for property corpora.
//!
//! Generation is a pure function of the parameters: the same seed always
//! produces the same model, byte for byte, across platforms. To keep that
//! guarantee independent of distribution code we draw raw `u64`s from a
//! ChaCha8 stream and reduce them ourselves.
//!
//! Drawn models always validate. A draw that happens to violate a profile
//! invariant (a duplicate point, say) is discarded and redrawn from the same
//! stream; after a bounded number of attempts the generator falls back to a
//! fixed single-pole model, so it never fails.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::{BlockModel, PrimitiveBlock};
use crate::profile::Rank;
use crate::scalar::GaussianRational;

/// Knobs for one generated model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub seed: u64,
    /// Upper bound on the number of primitive blocks (at least one is drawn).
    pub max_blocks: usize,
    /// Whether diagonal cluster blocks may appear at all.
    pub allow_clusters: bool,
    /// Values eigenvalues and limits are drawn from.
    pub scalar_pool: Vec<GaussianRational>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            max_blocks: 4,
            allow_clusters: true,
            scalar_pool: default_scalar_pool(),
        }
    }
}

/// A small spread of exact values: integers, simple fractions, and a few
/// points off the real line.
pub fn default_scalar_pool() -> Vec<GaussianRational> {
    vec![
        GaussianRational::from_int(0),
        GaussianRational::from_int(1),
        GaussianRational::from_int(-1),
        GaussianRational::from_int(2),
        GaussianRational::from_int(3),
        GaussianRational::from_parts(1, 2, 0, 1),
        GaussianRational::from_parts(-1, 2, 0, 1),
        GaussianRational::from_parts(3, 2, 0, 1),
        GaussianRational::from_parts(0, 1, 1, 1),
        GaussianRational::from_parts(1, 1, 1, 1),
        GaussianRational::from_parts(0, 1, -1, 2),
    ]
}

/// Ratios with |q| strictly between 0 and 1, so clusters converge.
fn ratio_pool() -> Vec<GaussianRational> {
    vec![
        GaussianRational::from_parts(1, 2, 0, 1),
        GaussianRational::from_parts(-1, 2, 0, 1),
        GaussianRational::from_parts(1, 3, 0, 1),
        GaussianRational::from_parts(2, 3, 0, 1),
        GaussianRational::from_parts(0, 1, 1, 2),
    ]
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[(rng.next_u64() % items.len() as u64) as usize]
}

fn pick_rank(rng: &mut ChaCha8Rng) -> Rank {
    if rng.next_u64().is_multiple_of(2) {
        Rank::Finite
    } else {
        Rank::Infinite
    }
}

/// Generates one validated model. Deterministic in `params`.
pub fn gen_model(params: &GenParams, depth: u32) -> BlockModel {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..64 {
        if let Ok(model) = BlockModel::new(draw_blocks(&mut rng, params), depth) {
            return model;
        }
    }
    let fallback = vec![PrimitiveBlock::JordanPole {
        lambda: GaussianRational::from_int(1),
        order: 1,
        rank: Rank::Infinite,
    }];
    BlockModel::new(fallback, depth).expect("a single infinite-rank pole always validates")
}

fn draw_blocks(rng: &mut ChaCha8Rng, params: &GenParams) -> Vec<PrimitiveBlock> {
    let pool = if params.scalar_pool.is_empty() {
        default_scalar_pool()
    } else {
        params.scalar_pool.clone()
    };
    let mut scales: Vec<GaussianRational> = pool.iter().filter(|s| !s.is_zero()).cloned().collect();
    if scales.is_empty() {
        scales.push(GaussianRational::from_int(1));
    }
    let ratios = ratio_pool();
    let max = params.max_blocks.max(1);
    let count = 1 + (rng.next_u64() as usize % max);
    let mut blocks = Vec::with_capacity(count);
    let mut used_cluster = false;
    for _ in 0..count {
        let roll = rng.next_u64() % 8;
        let block = match roll {
            0..=4 => PrimitiveBlock::JordanPole {
                lambda: pick(rng, &pool).clone(),
                order: 1 + (rng.next_u64() % 3) as u32,
                rank: pick_rank(rng),
            },
            5 | 6 => PrimitiveBlock::QuasiNil { lambda: pick(rng, &pool).clone() },
            _ if params.allow_clusters && !used_cluster => {
                used_cluster = true;
                PrimitiveBlock::ClusterDiag {
                    limit: pick(rng, &pool).clone(),
                    scale: pick(rng, &scales).clone(),
                    ratio: pick(rng, &ratios).clone(),
                    rank_each: pick_rank(rng),
                }
            }
            _ => PrimitiveBlock::QuasiNil { lambda: pick(rng, &pool).clone() },
        };
        blocks.push(block);
    }
    ensure_infinite_dimensional(&mut blocks);
    blocks
}

/// A model must contain some infinite-dimensional block. If every draw came
/// out as a finite-rank pole, promote the last one.
fn ensure_infinite_dimensional(blocks: &mut [PrimitiveBlock]) {
    let has_infinite = blocks.iter().any(|b| match b {
        PrimitiveBlock::JordanPole { rank, .. } => *rank == Rank::Infinite,
        PrimitiveBlock::QuasiNil { .. } | PrimitiveBlock::ClusterDiag { .. } => true,
    });
    if has_infinite {
        return;
    }
    if let Some(PrimitiveBlock::JordanPole { rank, .. }) = blocks.last_mut() {
        *rank = Rank::Infinite;
    }
}

/// Generates a pair suitable for product checks. The second model only draws
/// clusters when the first has none, so the pair never feeds two clusters
/// into a product (whose result would not be finitely representable).
pub fn gen_pair(seed: u64, depth: u32) -> (BlockModel, BlockModel) {
    let a = gen_model(&GenParams { seed, ..GenParams::default() }, depth);
    let a_has_cluster = a
        .blocks()
        .iter()
        .any(|b| matches!(b, PrimitiveBlock::ClusterDiag { .. }));
    let b = gen_model(
        &GenParams {
            seed: seed ^ 0x9e37_79b9_7f4a_7c15,
            allow_clusters: !a_has_cluster,
            ..GenParams::default()
        },
        depth,
    );
    (a, b)
}
