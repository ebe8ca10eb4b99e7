//! Shared instances for the criterion benches.

use rtiling_core::constructions::{random_coloured, ColourMode};
use rtiling_core::fractional::{build_copy_hypergraph, CopyHypergraph};
use rtiling_core::random::{random_digraph, rng_from_seed};
use rtiling_core::{Digraph, EdgeColouredGraph};

pub fn dense_digraph(n: usize, seed: u64) -> Digraph {
    random_digraph(n, 0.7, &mut rng_from_seed(seed))
}

pub fn copy_hypergraph(n: usize, seed: u64) -> CopyHypergraph {
    build_copy_hypergraph(&dense_digraph(n, seed), 3).expect("small instance")
}

/// Dense coloured graph with roughly `n` colours.
pub fn coloured(n: usize, seed: u64) -> EdgeColouredGraph {
    random_coloured(n, 0.8, n as u64, seed, ColourMode::Uniform).expect("valid parameters")
}
