#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use ssc_core::oracle::DensePattern;
use ssc_core::{CcsPattern, PatternTriplets};

pub const SIX_STATE: [(usize, usize); 9] = [
    (3, 1),
    (5, 1),
    (2, 2),
    (1, 4),
    (6, 4),
    (4, 6),
    (2, 7),
    (3, 7),
    (6, 8),
];

pub fn six_state() -> PatternTriplets {
    PatternTriplets::with_entries(6, 2, SIX_STATE.to_vec())
}

/// Bernoulli(`density`) grid, entries listed in shuffled order.
pub fn random_triplets<R: Rng>(rng: &mut R, n: usize, r: usize, density: f64) -> PatternTriplets {
    let mut entries: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (1..=n + r).map(move |j| (i, j)))
        .filter(|_| rng.random_bool(density))
        .collect();
    entries.shuffle(rng);
    PatternTriplets::with_entries(n, r, entries)
}

/// Pattern number `code` among all `2^(n(n+r))` patterns, bit `k` = cell `k` row-major.
pub fn enumerated(n: usize, r: usize, code: u64) -> PatternTriplets {
    let m = n + r;
    let entries = (0..n * m)
        .filter(|k| code & (1 << k) != 0)
        .map(|k| (k / m + 1, k % m + 1))
        .collect();
    PatternTriplets::with_entries(n, r, entries)
}

pub fn ccs(t: &PatternTriplets) -> CcsPattern {
    ssc_core::build_ccs(t).unwrap()
}

pub fn dense(t: &PatternTriplets) -> DensePattern {
    DensePattern::from_ccs(&ccs(t))
}
