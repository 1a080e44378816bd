#![allow(dead_code)]

use ecss::instances::{fix_k4, fix_par, fix_tri, gen_random, gen_random_costs, gen_tight};
use ecss::{Cost, MultiGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixtures() -> Vec<(String, MultiGraph)> {
    vec![
        ("tri".into(), fix_tri()),
        ("par".into(), fix_par()),
        ("k4".into(), fix_k4()),
        ("tight(3,1/4)".into(), gen_tight(3, &Cost::ratio(1, 4)).unwrap()),
    ]
}

pub fn tight_family() -> Vec<(usize, MultiGraph)> {
    (2..=8).map(|k| (k, gen_tight(k, &Cost::ratio(1, 8)).unwrap())).collect()
}

/// Small instances the exact oracle handles quickly: `3 ≤ n ≤ 8`, `n ≤ m ≤ 16`,
/// integer costs in `[0, 10]`.
pub fn small_random(count: usize, base_seed: u64) -> Vec<(u64, MultiGraph)> {
    (0..count as u64)
        .map(|i| {
            let seed = base_seed + i;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..=8);
            let m = rng.gen_range(n..=16);
            (seed, gen_random(n, m, 10, seed).unwrap())
        })
        .collect()
}

/// Unit-cost counterpart of [`small_random`].
pub fn small_unit(count: usize, base_seed: u64) -> Vec<(u64, MultiGraph)> {
    (0..count as u64)
        .map(|i| {
            let seed = base_seed + i;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..=8);
            let m = rng.gen_range(n..=16);
            (seed, gen_random_costs(n, m, 1, 1, seed).unwrap())
        })
        .collect()
}

/// Mid-sized instances with many cost ties and parallel edges.
pub fn medium_random(count: usize, base_seed: u64) -> Vec<(u64, MultiGraph)> {
    (0..count as u64)
        .map(|i| {
            let seed = base_seed + i;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..=40);
            let m = rng.gen_range(n..=4 * n);
            let max_cost = [1, 3, 10, 1000][rng.gen_range(0..4)];
            (seed, gen_random(n, m, max_cost, seed).unwrap())
        })
        .collect()
}
