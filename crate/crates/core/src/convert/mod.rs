//! Conversion of an edge-coloured graph into a digraph whose out-neighbourhoods
//! are rainbow, plus the bookkeeping needed to check what the conversion
//! guarantees.
//!
//! The digraph `H` is built from an edge-coloured critical subgraph `G*` of
//! `G`. In `G*` every colour class is a vertex-disjoint union of stars; each
//! star edge is oriented leaf → centre, and a star with `s` leaves where
//! `s^2 <= n` also gets one arc from its centre to its smallest leaf. All
//! comparisons against `sqrt(n)` are done by squaring integers.

mod family;
mod sampler;

pub use family::{classify_family, is_family_member, FamilyMembership};
pub use sampler::{sample_reduced_digraph, PairDensityMatrix, SamplerMode};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{critical_subgraph, is_rainbow_clique, Colour, Digraph, EdgeColouredGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Star {
    pub centre: usize,
    pub leaves: Vec<usize>,
}

/// Measured values for the four properties the conversion guarantees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversionReport {
    pub n: usize,
    pub base_in_graph: bool,
    pub min_colour_degree: usize,
    pub min_out_degree: usize,
    /// `δ⁺(H) >= δ^c(G) - sqrt(n)`, compared exactly.
    pub out_degree_bound: bool,
    /// Every `G[u, N⁺(u)]` is rainbow.
    pub rainbow_out_neighbourhoods: bool,
    /// Largest `|{w ∈ N⁻(u) : c(uw) = c(uv)}|` over arcs `uv`.
    pub max_same_colour_in_neighbours: usize,
    pub same_colour_bound: bool,
    /// Largest number of directed paths `x → v → y` (`x != y`) whose two arcs
    /// share a colour.
    pub max_colour_path_pairs: usize,
    pub colour_path_bound: bool,
}

impl ConversionReport {
    pub fn holds(&self) -> bool {
        self.base_in_graph
            && self.out_degree_bound
            && self.rainbow_out_neighbourhoods
            && self.same_colour_bound
            && self.colour_path_bound
    }
}

#[derive(Clone, Debug)]
pub struct ConversionResult {
    pub digraph: Digraph,
    pub stars: BTreeMap<Colour, Vec<Star>>,
    pub guarantees: ConversionReport,
}

/// `x <= sqrt(n)` for non-negative integers.
#[inline]
pub(crate) fn at_most_sqrt(x: usize, n: usize) -> bool {
    (x as u128) * (x as u128) <= n as u128
}

fn stars_by_colour(critical: &EdgeColouredGraph) -> BTreeMap<Colour, Vec<Star>> {
    let n = critical.n();
    let mut by_colour: BTreeMap<Colour, Vec<(usize, usize)>> = BTreeMap::new();
    for (u, v, c) in critical.edges() {
        by_colour.entry(c).or_default().push((u, v));
    }
    let mut out = BTreeMap::new();
    for (colour, edges) in by_colour {
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut stars: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(u, v) in &edges {
            // u < v; single-edge stars are centred at u
            let (centre, leaf) = if degree[v] > 1 {
                (v, u)
            } else {
                (u, v)
            };
            debug_assert!(degree[leaf] == 1, "colour class of a critical graph is not a star forest");
            stars.entry(centre).or_default().push(leaf);
        }
        let mut list: Vec<Star> = stars
            .into_iter()
            .map(|(centre, mut leaves)| {
                leaves.sort_unstable();
                Star { centre, leaves }
            })
            .collect();
        list.sort_by_key(|s| s.centre);
        out.insert(colour, list);
    }
    out
}

pub fn convert(g: &EdgeColouredGraph) -> ConversionResult {
    let n = g.n();
    let critical = critical_subgraph(g);
    let stars = stars_by_colour(&critical);
    let mut h = Digraph::new(n);
    for list in stars.values() {
        for star in list {
            for &leaf in &star.leaves {
                h.insert_arc(leaf, star.centre);
            }
            if at_most_sqrt(star.leaves.len(), n) {
                h.insert_arc(star.centre, star.leaves[0]);
            }
        }
    }
    let guarantees = measure(g, &h);
    ConversionResult {
        digraph: h,
        stars,
        guarantees,
    }
}

/// Recounts every guaranteed property directly from `G` and `H`.
pub fn measure(g: &EdgeColouredGraph, h: &Digraph) -> ConversionReport {
    let n = g.n();
    let base_in_graph = h.n() == n && h.arcs().all(|(u, v)| g.has_edge(u, v));
    let min_colour_degree = g.min_colour_degree();
    let min_out_degree = h.min_out_degree();
    let gap = min_colour_degree.saturating_sub(min_out_degree);
    let out_degree_bound = at_most_sqrt(gap, n);

    if !base_in_graph {
        return ConversionReport {
            n,
            base_in_graph,
            min_colour_degree,
            min_out_degree,
            out_degree_bound,
            rainbow_out_neighbourhoods: false,
            max_same_colour_in_neighbours: usize::MAX,
            same_colour_bound: false,
            max_colour_path_pairs: usize::MAX,
            colour_path_bound: false,
        };
    }
    let c = |u: usize, v: usize| g.colour(u, v).expect("base graph inside G");

    let rainbow_out_neighbourhoods = (0..n).all(|u| {
        let mut colours: Vec<Colour> = h.out_neighbours(u).map(|w| c(u, w)).collect();
        let before = colours.len();
        colours.sort_unstable();
        colours.dedup();
        colours.len() == before
    });

    let mut max_same = 0;
    for (u, v) in h.arcs() {
        let target = c(u, v);
        let count = h.in_neighbours(u).filter(|&w| c(u, w) == target).count();
        max_same = max_same.max(count);
    }

    let mut max_pairs = 0;
    for v in 0..n {
        let ins: Vec<usize> = h.in_neighbours(v).collect();
        let outs: Vec<usize> = h.out_neighbours(v).collect();
        let count: usize = ins
            .iter()
            .map(|&x| outs.iter().filter(|&&y| y != x && c(x, v) == c(v, y)).count())
            .sum();
        max_pairs = max_pairs.max(count);
    }

    ConversionReport {
        n,
        base_in_graph,
        min_colour_degree,
        min_out_degree,
        out_degree_bound,
        rainbow_out_neighbourhoods,
        max_same_colour_in_neighbours: max_same,
        same_colour_bound: at_most_sqrt(max_same, n),
        max_colour_path_pairs: max_pairs,
        colour_path_bound: max_pairs <= n,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversionVerification {
    pub recount: ConversionReport,
    /// The guarantees stored in the result agree with the recount.
    pub recorded_consistent: bool,
}

impl ConversionVerification {
    pub fn holds(&self) -> bool {
        self.recorded_consistent && self.recount.holds()
    }
}

/// Re-checks a conversion result against `G` from scratch.
pub fn verify_conversion(g: &EdgeColouredGraph, result: &ConversionResult) -> ConversionVerification {
    let recount = measure(g, &result.digraph);
    ConversionVerification {
        recorded_consistent: recount == result.guarantees,
        recount,
    }
}

/// Triples `S` with `H[S]` a complete-base digraph of minimum out-degree at
/// least one while `G[S]` is not a rainbow triangle. With `Some(v)` only
/// triples containing `v` are counted.
pub fn count_bad_triples(g: &EdgeColouredGraph, h: &Digraph, v: Option<usize>) -> usize {
    let n = g.n();
    let mut count = 0;
    let mut check = |t: [usize; 3]| {
        if h.base_complete_on(&t) && h.min_out_degree_within(&t) >= 1 && !is_rainbow_clique(g, &t) {
            count += 1;
        }
    };
    match v {
        Some(v) => {
            for a in 0..n {
                for b in a + 1..n {
                    if a != v && b != v {
                        check([v, a, b]);
                    }
                }
            }
        }
        None => {
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        check([a, b, c]);
                    }
                }
            }
        }
    }
    count
}

/// `count <= 3 n^2`.
pub fn within_global_bad_bound(count: usize, n: usize) -> bool {
    count as u128 <= 3 * (n as u128) * (n as u128)
}

/// `count <= 3 n^{3/2}`, i.e. `count^2 <= 9 n^3`.
pub fn within_vertex_bad_bound(count: usize, n: usize) -> bool {
    let (c, n) = (count as u128, n as u128);
    c * c <= 9 * n * n * n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_triangle_extremal, build_rainbow_complete};

    #[test]
    fn rainbow_k4_becomes_complete_digraph() {
        let g = build_rainbow_complete(4);
        let res = convert(&g);
        assert_eq!(res.digraph, Digraph::complete(4));
        assert_eq!(res.guarantees.min_out_degree, 3);
        assert!(verify_conversion(&g, &res).holds());
    }

    #[test]
    fn big_monochromatic_star_gets_no_back_arc() {
        let g = EdgeColouredGraph::from_edges(6, (1..6).map(|v| (0, v, 9))).unwrap();
        let res = convert(&g);
        let arcs: Vec<_> = res.digraph.arcs().collect();
        assert_eq!(arcs, vec![(1, 0), (2, 0), (3, 0), (4, 0), (5, 0)]);
        assert_eq!(res.stars[&9], vec![Star { centre: 0, leaves: vec![1, 2, 3, 4, 5] }]);
    }

    #[test]
    fn small_star_gets_back_arc_to_smallest_leaf() {
        // colour 1 is a 2-leaf star at 0 (2^2 <= 4); colour 2 a single edge
        let g = EdgeColouredGraph::from_edges(4, [(0, 1, 1), (0, 2, 1), (0, 3, 2)]).unwrap();
        let res = convert(&g);
        assert!(res.digraph.has_arc(0, 1));
        assert!(!res.digraph.has_arc(0, 2));
        assert!(res.digraph.has_arc(0, 3));
        assert_eq!(res.digraph.arc_count(), 5);
    }

    #[test]
    fn triangle_extremal_conversion() {
        let g = build_triangle_extremal(13, 3).unwrap();
        let res = convert(&g);
        assert!(verify_conversion(&g, &res).holds());
        // 6 - sqrt(13) ≈ 2.39
        assert!(res.guarantees.min_out_degree >= 3);
    }

    #[test]
    fn edgeless_and_rainbow_cases() {
        let g = EdgeColouredGraph::new(5);
        let res = convert(&g);
        assert_eq!(res.digraph.arc_count(), 0);
        assert!(verify_conversion(&g, &res).holds());

        let g = build_rainbow_complete(7);
        let res = convert(&g);
        assert_eq!(res.guarantees.max_colour_path_pairs, 0);
        assert_eq!(count_bad_triples(&g, &res.digraph, None), 0);
    }

    #[test]
    fn tampered_result_fails_verification() {
        let g = build_rainbow_complete(4);
        let mut res = convert(&g);
        res.guarantees.min_out_degree = 0;
        assert!(!verify_conversion(&g, &res).holds());
    }

    #[test]
    fn bad_triple_bounds() {
        assert!(within_global_bad_bound(27, 3));
        assert!(!within_global_bad_bound(28, 3));
        // 3 * 4^{3/2} = 24
        assert!(within_vertex_bad_bound(24, 4));
        assert!(!within_vertex_bad_bound(25, 4));
    }
}
