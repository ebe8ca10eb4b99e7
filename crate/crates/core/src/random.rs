//! Seeded generators for random digraphs.
//!
//! All randomness flows through an explicit `u64` seed expanded by ChaCha8,
//! whose stream is stable across platforms and crate versions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Digraph;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-instance seed for instance `index` of a run seeded with `seed`
/// (splitmix64 finaliser; instances stay independent of scheduling order).
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Each arc present independently with probability `p`.
pub fn random_digraph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                d.insert_arc(u, v);
            }
        }
    }
    d
}

/// Random digraph with minimum out-degree at least `min_out`: arcs are first
/// kept independently with probability `p`, then every deficient vertex is
/// repaired with uniformly chosen extra out-arcs. With `p = 0` this samples a
/// uniform `min_out`-out-regular digraph.
pub fn random_min_out_degree<R: Rng>(n: usize, min_out: usize, p: f64, rng: &mut R) -> Digraph {
    assert!(min_out < n.max(1), "out-degree {min_out} impossible on {n} vertices");
    let mut d = random_digraph(n, p, rng);
    for u in 0..n {
        let mut missing: Vec<usize> = (0..n).filter(|&v| v != u && !d.has_arc(u, v)).collect();
        let deficit = min_out.saturating_sub(d.out_degree(u));
        missing.shuffle(rng);
        for &v in missing.iter().take(deficit) {
            d.insert_arc(u, v);
        }
    }
    d
}

/// Uniform random tournament.
pub fn random_tournament<R: Rng>(n: usize, rng: &mut R) -> Digraph {
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                d.insert_arc(u, v);
            } else {
                d.insert_arc(v, u);
            }
        }
    }
    d
}
