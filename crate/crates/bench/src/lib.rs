//! Shared input builders for the criterion benchmarks.

use bweyl_core::{gen_pair, parse_operator, BlockModel, ExactMatrix, GaussianRational};

pub const DEPTH: u32 = 64;

/// A slice of the seeded pair corpus, identical to what the acceptance
/// suite walks.
pub fn pair_corpus(n: u64) -> Vec<(BlockModel, BlockModel)> {
    (0..n).map(|seed| gen_pair(seed, DEPTH)).collect()
}

/// A pair with one cluster, one quasi-nilpotent part, and poles on both
/// sides, exercising every classification rule at once.
pub fn mixed_pair() -> (BlockModel, BlockModel) {
    let a = parse_operator(
        "sum(pole(0, ord=2, rank=inf), quasinil(1), pole(1/2, ord=1, rank=fin))",
        DEPTH,
    )
    .unwrap();
    let b = parse_operator("sum(cluster(2, r=1, q=1/2), pole(3, ord=1, rank=inf))", DEPTH).unwrap();
    (a, b)
}

/// An 8x8 upper-triangular matrix with a nontrivial nilpotent part at zero,
/// the worst case the Drazin construction sees in the matrix lab.
pub fn drazin_input() -> ExactMatrix {
    let mut m = ExactMatrix::zeros(8, 8);
    let vals: [(usize, usize, i64); 12] = [
        (0, 0, 2),
        (0, 1, 1),
        (1, 1, 2),
        (2, 2, 1),
        (2, 3, 1),
        (3, 3, 1),
        (4, 5, 1),
        (5, 6, 1),
        (0, 4, 1),
        (1, 5, 1),
        (2, 6, 1),
        (3, 7, 1),
    ];
    for (i, j, v) in vals {
        m.set(i, j, GaussianRational::from_int(v));
    }
    m
}
