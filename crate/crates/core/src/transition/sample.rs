//! Seeded random dominant and doubling matrices.

use rand::seq::SliceRandom;
use rand::Rng;

use super::matrix::{permutations, Matrix5};

/// `A0` under random row and column permutations, plus random entries in
/// `0..=extra`.
pub fn random_dominant<R: Rng + ?Sized>(rng: &mut R, extra: u64) -> Matrix5 {
    let perms = permutations();
    let p = perms.choose(rng).expect("permutations");
    let q = perms.choose(rng).expect("permutations");
    let base = Matrix5::a0().permuted(p, q);
    let mut rows = [[0u64; 5]; 5];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let b = u64::try_from(base.get(i, j)).expect("small entry");
            *cell = b + rng.gen_range(0..=extra);
        }
    }
    Matrix5::from_u64(rows)
}

/// Sparse random matrix with entries in `0..=max`, topped up until every
/// row and column has at least two nonzero entries.
pub fn random_doubling<R: Rng + ?Sized>(rng: &mut R, max: u64) -> Matrix5 {
    let max = max.max(1);
    let mut rows = [[0u64; 5]; 5];
    for row in rows.iter_mut() {
        for cell in row.iter_mut() {
            if rng.gen_bool(0.3) {
                *cell = rng.gen_range(1..=max);
            }
        }
    }
    for i in 0..5 {
        while rows[i].iter().filter(|&&x| x > 0).count() < 2 {
            let j = rng.gen_range(0..5);
            rows[i][j] = rows[i][j].max(1);
        }
    }
    for j in 0..5 {
        while (0..5).filter(|&i| rows[i][j] > 0).count() < 2 {
            let i = rng.gen_range(0..5);
            rows[i][j] = rows[i][j].max(1);
        }
    }
    Matrix5::from_u64(rows)
}

/// `n` matrices, each dominant or doubling with equal probability.
pub fn random_chain<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Matrix5> {
    (0..n).map(|_| if rng.gen_bool(0.5) { random_dominant(rng, 2) } else { random_doubling(rng, 3) }).collect()
}
