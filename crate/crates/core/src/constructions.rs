//! Extremal edge-coloured graphs and seeded random instances.
//!
//! Every construction allocates disjoint colour ranges per component, so the
//! "fresh colour" requirements hold by construction.

use std::ops::Range;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Colour, EdgeColouredGraph};
use crate::random::rng_from_seed;

struct Palette(Colour);

impl Palette {
    fn fresh(&mut self) -> Colour {
        let c = self.0;
        self.0 += 1;
        c
    }
}

/// Vertex layout of the three-part constructions: `X` (split into classes),
/// then `Y`, then `Z`, in index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub x_classes: Vec<Range<usize>>,
    pub y: Range<usize>,
    pub z: Range<usize>,
}

impl Layout {
    pub fn x(&self) -> Range<usize> {
        self.x_classes.first().map_or(0, |r| r.start)..self.y.start
    }

    pub fn n(&self) -> usize {
        self.z.end
    }

    fn new(class_size: usize, classes: usize, y: usize, z: usize) -> Self {
        let x_classes = (0..classes)
            .map(|i| i * class_size..(i + 1) * class_size)
            .collect();
        let xs = class_size * classes;
        Layout {
            x_classes,
            y: xs..xs + y,
            z: xs + y..xs + y + z,
        }
    }
}

/// Builds the graph shared by both constructions: `X` rainbow complete
/// multipartite, `Y ∪ Z` rainbow complete, and every `x`–`y` edge coloured with
/// a colour owned by `y`.
fn three_part(layout: &Layout) -> EdgeColouredGraph {
    let mut g = EdgeColouredGraph::new(layout.n());
    let mut palette = Palette(0);
    for (i, a) in layout.x_classes.iter().enumerate() {
        for b in &layout.x_classes[i + 1..] {
            for u in a.clone() {
                for v in b.clone() {
                    g.add_edge(u, v, palette.fresh()).expect("fresh pair");
                }
            }
        }
    }
    let yz: Vec<usize> = layout.y.clone().chain(layout.z.clone()).collect();
    for (i, &u) in yz.iter().enumerate() {
        for &v in &yz[i + 1..] {
            g.add_edge(u, v, palette.fresh()).expect("fresh pair");
        }
    }
    for y in layout.y.clone() {
        let own = palette.fresh();
        for x in layout.x() {
            g.add_edge(x, y, own).expect("fresh pair");
        }
    }
    g
}

/// Part sizes for the rainbow-triangle tiling construction on `n` vertices
/// with no rainbow-`K_3`-tiling of size `k`.
pub fn triangle_extremal_layout(n: usize, k: usize) -> Result<Layout> {
    let bad = |why: &str| Err(Error::InvalidParameters(format!("(n,k)=({n},{k}): {why}")));
    if n == 0 {
        return bad("n must be positive");
    }
    if 9 * k < n {
        return bad("requires n/9 <= k");
    }
    if 3 * k > n {
        return bad("requires k <= n/3");
    }
    if (n as i64 - 2 * k as i64).rem_euclid(7) != 0 {
        return bad("requires n ≡ 2k (mod 7)");
    }
    let unit = (n - 2 * k) / 7;
    let x = 6 * unit;
    if !x.is_multiple_of(2) || x == 0 {
        return bad("|X| = 6(n-2k)/7 must be positive and even");
    }
    let y_plus_one = (18 * k - 2 * n) as i64 / 7; // exact: 18k - 2n ≡ 0 (mod 7)
    if 18 * k < 2 * n || y_plus_one < 2 {
        return bad("|Y| = (18k-2n)/7 - 1 must be positive");
    }
    let y = (y_plus_one - 1) as usize;
    let z = 3 * unit + 1;
    debug_assert_eq!(x + y + z, n);
    Ok(Layout::new(x / 2, 2, y, z))
}

/// Edge-coloured graph on `n` vertices with minimum colour degree
/// `(n + 12k)/7 - 1` and no rainbow-`K_3`-tiling of size `k`.
pub fn build_triangle_extremal(n: usize, k: usize) -> Result<EdgeColouredGraph> {
    Ok(three_part(&triangle_extremal_layout(n, k)?))
}

pub fn clique_extremal_layout(r: usize, m: usize) -> Result<Layout> {
    if r < 3 {
        return Err(Error::InvalidParameters(format!("r={r}: requires r >= 3")));
    }
    if m == 0 || !m.is_multiple_of(r) {
        return Err(Error::InvalidParameters(format!(
            "(r,m)=({r},{m}): requires m positive and m ≡ 0 (mod r)"
        )));
    }
    Ok(Layout::new(
        m,
        r - 1,
        (r - 1) * (r - 1) * m - 1,
        (r - 2) * m + 1,
    ))
}

/// Edge-coloured graph on `(r^2 - 2)m` vertices with minimum colour degree
/// `(r^2 - r - 1)m - 1` and no perfect rainbow-`K_r`-tiling.
pub fn build_clique_extremal(r: usize, m: usize) -> Result<EdgeColouredGraph> {
    Ok(three_part(&clique_extremal_layout(r, m)?))
}

/// Properly coloured `K_{n/2,n/2}`: vertex `i` on the left and `h + j` on
/// the right are joined in colour `(i + j) mod h`.
pub fn build_proper_bipartite(n: usize) -> Result<EdgeColouredGraph> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!("n={n}: requires even n >= 2")));
    }
    let h = n / 2;
    let mut g = EdgeColouredGraph::new(n);
    for i in 0..h {
        for j in 0..h {
            g.add_edge(i, h + j, ((i + j) % h) as Colour)?;
        }
    }
    Ok(g)
}

pub fn build_rainbow_complete(n: usize) -> EdgeColouredGraph {
    let mut g = EdgeColouredGraph::new(n);
    let mut palette = Palette(0);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v, palette.fresh()).expect("fresh pair");
        }
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ColourMode {
    /// Each kept edge gets an independent uniform colour from `0..q`.
    #[default]
    Uniform,
    /// Kept edges receive distinct colours drawn from `0..q`.
    Injective,
}

/// Random edge-coloured graph: each pair kept with probability `p`.
pub fn random_coloured(
    n: usize,
    p: f64,
    q: u64,
    seed: u64,
    mode: ColourMode,
) -> Result<EdgeColouredGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameters(format!("p={p}: requires 0 <= p <= 1")));
    }
    if q == 0 {
        return Err(Error::InvalidParameters("palette size must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut kept = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                kept.push((u, v));
            }
        }
    }
    let colours: Vec<Colour> = match mode {
        ColourMode::Uniform => kept.iter().map(|_| rng.gen_range(0..q)).collect(),
        ColourMode::Injective => {
            let q = usize::try_from(q).unwrap_or(usize::MAX);
            if q < kept.len() {
                return Err(Error::InvalidParameters(format!(
                    "injective colouring needs q >= {} kept edges, got {q}",
                    kept.len()
                )));
            }
            sample(&mut rng, q, kept.len())
                .into_iter()
                .map(|c| c as Colour)
                .collect()
        }
    };
    EdgeColouredGraph::from_edges(
        n,
        kept.into_iter().zip(colours).map(|((u, v), c)| (u, v, c)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{degree_profile, induced_check};

    #[test]
    fn triangle_extremal_sizes() {
        let l = triangle_extremal_layout(13, 3).unwrap();
        assert_eq!((l.x().len(), l.y.len(), l.z.len()), (6, 3, 4));
        let l = triangle_extremal_layout(15, 4).unwrap();
        assert_eq!((l.x().len(), l.y.len(), l.z.len()), (6, 5, 4));
    }

    #[test]
    fn triangle_extremal_colour_degree() {
        assert_eq!(degree_profile(&build_triangle_extremal(13, 3).unwrap()).min_colour_degree, 6);
        assert_eq!(degree_profile(&build_triangle_extremal(15, 4).unwrap()).min_colour_degree, 8);
    }

    #[test]
    fn triangle_extremal_rejects_bad_parameters() {
        // 14 - 6 = 8 not divisible by 7
        assert!(build_triangle_extremal(14, 3).is_err());
        // k > n/3
        assert!(build_triangle_extremal(13, 5).is_err());
        // k < n/9
        assert!(build_triangle_extremal(30, 1).is_err());
        // n ≡ 2k but |Y| = 0: n=9, k=1 gives 18-18 = 0
        assert!(build_triangle_extremal(9, 1).is_err());
    }

    #[test]
    fn clique_extremal_values() {
        let g = build_clique_extremal(3, 3).unwrap();
        assert_eq!(g.n(), 21);
        assert_eq!(degree_profile(&g).min_colour_degree, 14);
        let g = build_clique_extremal(4, 4).unwrap();
        assert_eq!(g.n(), 56);
        assert_eq!(degree_profile(&g).min_colour_degree, 43);
        assert!(build_clique_extremal(3, 4).is_err());
        assert!(build_clique_extremal(2, 2).is_err());
    }

    #[test]
    fn proper_bipartite() {
        let g = build_proper_bipartite(6).unwrap();
        assert_eq!(degree_profile(&g).min_colour_degree, 3);
        let g2 = build_proper_bipartite(2).unwrap();
        assert_eq!(g2.edge_count(), 1);
        assert_eq!(degree_profile(&g2).min_colour_degree, 1);
        let g8 = build_proper_bipartite(8).unwrap();
        assert!(degree_profile(&g8).colour_degree.iter().all(|&d| d == 4));
        let all: Vec<usize> = (0..8).collect();
        assert!(induced_check(&g8, &all).unwrap().proper);
        assert!(build_proper_bipartite(7).is_err());
    }

    #[test]
    fn rainbow_complete() {
        let g = build_rainbow_complete(3);
        assert!(induced_check(&g, &[0, 1, 2]).unwrap().rainbow);
        assert_eq!(build_rainbow_complete(1).edge_count(), 0);
    }

    #[test]
    fn random_models() {
        let g = random_coloured(7, 1.0, 21, 3, ColourMode::Injective).unwrap();
        let all: Vec<usize> = (0..7).collect();
        let c = induced_check(&g, &all).unwrap();
        assert!(c.complete && c.rainbow);

        assert_eq!(random_coloured(7, 0.0, 3, 3, ColourMode::Uniform).unwrap().edge_count(), 0);

        let a = random_coloured(10, 0.7, 5, 42, ColourMode::Uniform).unwrap();
        let b = random_coloured(10, 0.7, 5, 42, ColourMode::Uniform).unwrap();
        assert_eq!(a, b);

        assert!(random_coloured(7, 1.0, 5, 3, ColourMode::Injective).is_err());
        assert!(random_coloured(7, 1.5, 5, 3, ColourMode::Uniform).is_err());
    }
}
