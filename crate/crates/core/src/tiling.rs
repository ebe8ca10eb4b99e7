//! Exact tiling solvers: rainbow cliques in edge-coloured graphs, family
//! copies in digraphs and plain cliques in graphs, plus closed-form bounds.
//!
//! Each solver enumerates the copies explicitly (capped, see
//! [`copy_cap`]) and hands them to the set-packing search.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::convert::is_family_member;
use crate::error::{Error, Result};
use crate::fractional::{copy_cap, for_each_subset};
use crate::graph::{is_rainbow_clique, Digraph, EdgeColouredGraph, Graph};
use crate::packing::{max_set_packing, PackingOptions};
use crate::rainbow::rainbow_cliques;
use crate::rational::{self, int, ratio, Rational};

pub use crate::matching::{eg_bound, max_matching};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TilingKind {
    RainbowClique,
    /// `star = true` drops the complete-base requirement.
    Family { r: usize, s: usize, star: bool },
    Clique,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TilingWitness {
    pub parts: Vec<Vec<usize>>,
    pub kind: TilingKind,
    pub cover: usize,
}

impl TilingWitness {
    fn new(parts: Vec<Vec<usize>>, kind: TilingKind) -> Self {
        let cover = parts.iter().map(Vec::len).sum();
        TilingWitness { parts, kind, cover }
    }
}

/// A host the witness can be checked against.
#[derive(Clone, Copy, Debug)]
pub enum Host<'a> {
    Coloured(&'a EdgeColouredGraph),
    Digraph(&'a Digraph),
    Graph(&'a Graph),
}

impl Host<'_> {
    fn n(&self) -> usize {
        match self {
            Host::Coloured(g) => g.n(),
            Host::Digraph(d) => d.n(),
            Host::Graph(g) => g.n(),
        }
    }
}

/// Independent check: parts pairwise disjoint, in range, of equal size,
/// `cover` consistent, and each part certified for the witness kind.
pub fn certify_witness(w: &TilingWitness, host: Host<'_>) -> bool {
    let n = host.n();
    let mut seen = vec![false; n];
    let size = w.parts.first().map_or(0, Vec::len);
    for part in &w.parts {
        if part.len() != size {
            return false;
        }
        for &v in part {
            if v >= n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        let ok = match (w.kind, host) {
            (TilingKind::RainbowClique, Host::Coloured(g)) => is_rainbow_clique(g, part),
            (TilingKind::Family { r, s, star }, Host::Digraph(d)) => {
                part.len() == r && is_family_member(d, part, s, !star)
            }
            (TilingKind::Clique, Host::Graph(g)) => part
                .iter()
                .enumerate()
                .all(|(i, &u)| part[i + 1..].iter().all(|&v| g.has_edge(u, v))),
            _ => false,
        };
        if !ok {
            return false;
        }
    }
    w.cover == size * w.parts.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TilingResult {
    pub size: usize,
    pub witness: TilingWitness,
    /// `false` when the node budget ran out before optimality was proven.
    pub optimal: bool,
    pub upper_bound: usize,
    pub copies: usize,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum PerfectOutcome {
    Yes { witness: TilingWitness },
    /// The search space was exhausted without a spanning tiling.
    No { copies: usize, nodes: u64 },
    Unknown { reason: String },
}

impl PerfectOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            PerfectOutcome::Yes { .. } => "yes",
            PerfectOutcome::No { .. } => "no",
            PerfectOutcome::Unknown { .. } => "unknown",
        }
    }
}

fn options(budget: u64, perfect: bool) -> PackingOptions {
    PackingOptions {
        budget,
        perfect,
        ..PackingOptions::default()
    }
}

fn solve_max(n: usize, r: usize, copies: Vec<Vec<usize>>, kind: TilingKind, budget: u64) -> Result<TilingResult> {
    let p = max_set_packing(n, r, &copies, options(budget, false))?;
    let parts: Vec<Vec<usize>> = p.chosen.iter().map(|&i| copies[i].clone()).collect();
    Ok(TilingResult {
        size: parts.len(),
        witness: TilingWitness::new(parts, kind),
        optimal: p.optimal,
        upper_bound: p.upper_bound,
        copies: copies.len(),
        nodes: p.nodes,
    })
}

fn solve_perfect(
    n: usize,
    r: usize,
    copies: Result<Vec<Vec<usize>>>,
    kind: TilingKind,
    budget: u64,
) -> Result<PerfectOutcome> {
    let copies = match copies {
        Ok(c) => c,
        Err(e @ Error::CopyLimitExceeded { .. }) => {
            return Ok(PerfectOutcome::Unknown { reason: e.to_string() })
        }
        Err(e) => return Err(e),
    };
    let p = max_set_packing(n, r, &copies, options(budget, true))?;
    Ok(if !p.chosen.is_empty() || n == 0 {
        let parts = p.chosen.iter().map(|&i| copies[i].clone()).collect();
        PerfectOutcome::Yes {
            witness: TilingWitness::new(parts, kind),
        }
    } else if p.optimal {
        PerfectOutcome::No {
            copies: copies.len(),
            nodes: p.nodes,
        }
    } else {
        PerfectOutcome::Unknown {
            reason: format!("node budget of {budget} exhausted"),
        }
    })
}

fn require_divides(n: usize, r: usize) -> Result<()> {
    if r == 0 || !n.is_multiple_of(r) {
        return Err(Error::Precondition(format!("{r} does not divide n = {n}")));
    }
    Ok(())
}

fn require_order(r: usize, min: usize) -> Result<()> {
    if r < min {
        return Err(Error::InvalidParameters(format!("clique order {r} must be at least {min}")));
    }
    Ok(())
}

pub fn max_rainbow_tiling(g: &EdgeColouredGraph, r: usize, budget: u64) -> Result<TilingResult> {
    require_order(r, 2)?;
    let copies = rainbow_cliques(g, r, copy_cap())?;
    solve_max(g.n(), r, copies, TilingKind::RainbowClique, budget)
}

pub fn has_perfect_rainbow_tiling(g: &EdgeColouredGraph, r: usize, budget: u64) -> Result<PerfectOutcome> {
    require_order(r, 2)?;
    require_divides(g.n(), r)?;
    solve_perfect(g.n(), r, rainbow_cliques(g, r, copy_cap()), TilingKind::RainbowClique, budget)
}

/// `r`-sets inducing members of `K_{r,s}` (or `K*_{r,s}` when `star`).
pub fn family_copies(d: &Digraph, r: usize, s: usize, star: bool, cap: usize) -> Result<Vec<Vec<usize>>> {
    if s >= r {
        return Err(Error::Precondition(format!("requires s < r, got s={s}, r={r}")));
    }
    let mut out = Vec::new();
    let mut over = false;
    for_each_subset(d.n(), r, |set| {
        if is_family_member(d, set, s, !star) {
            if out.len() == cap {
                over = true;
                return false;
            }
            out.push(set.to_vec());
        }
        true
    });
    if over {
        return Err(Error::CopyLimitExceeded { limit: cap });
    }
    Ok(out)
}

pub fn perfect_family_tiling(d: &Digraph, r: usize, s: usize, star: bool, budget: u64) -> Result<PerfectOutcome> {
    require_order(r, 2)?;
    require_divides(d.n(), r)?;
    let kind = TilingKind::Family { r, s, star };
    solve_perfect(d.n(), r, family_copies(d, r, s, star, copy_cap()), kind, budget)
}

pub fn max_family_tiling(d: &Digraph, r: usize, s: usize, star: bool, budget: u64) -> Result<TilingResult> {
    require_order(r, 2)?;
    let copies = family_copies(d, r, s, star, copy_cap())?;
    solve_max(d.n(), r, copies, TilingKind::Family { r, s, star }, budget)
}

/// All `K_q` vertex sets of `g`, lexicographically ordered.
pub fn cliques(g: &Graph, q: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    fn extend(g: &Graph, q: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, cap: usize) -> bool {
        if chosen.len() == q {
            if out.len() == cap {
                return false;
            }
            out.push(chosen.clone());
            return true;
        }
        let start = chosen.last().map_or(0, |&v| v + 1);
        for v in start..g.n() {
            if chosen.iter().all(|&u| g.has_edge(u, v)) {
                chosen.push(v);
                let go_on = extend(g, q, chosen, out, cap);
                chosen.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
    let mut out = Vec::new();
    if q > 0 && !extend(g, q, &mut Vec::with_capacity(q), &mut out, cap) {
        return Err(Error::CopyLimitExceeded { limit: cap });
    }
    Ok(out)
}

pub fn max_clique_tiling(g: &Graph, q: usize, budget: u64) -> Result<TilingResult> {
    require_order(q, 2)?;
    let copies = cliques(g, q, copy_cap())?;
    solve_max(g.n(), q, copies, TilingKind::Clique, budget)
}

/// The four competing coefficients of [`abhp_bound`], unvalidated.
pub fn abhp_terms(a: &Rational) -> [Rational; 4] {
    [
        (int(1) + int(2) * a - a * a) / int(4),
        ratio(1, 4) + int(2) * a * a,
        int(2) * a * (int(1) - a),
        ratio(1, 2) - int(3) * a + int(9) * a * a,
    ]
}

/// Edge count `max{(1+2α-α²)/4, 1/4+2α², 2α(1-α), 1/2-3α+9α²}·n² + γn²`
/// above which `αn` vertex-disjoint triangles are guaranteed.
pub fn abhp_bound(n: usize, alpha: &Rational, gamma: &Rational) -> Result<Rational> {
    if !alpha.is_positive() || *alpha > ratio(1, 3) {
        return Err(Error::InvalidParameters(format!(
            "alpha = {} must lie in (0, 1/3]",
            rational::format(alpha)
        )));
    }
    if gamma.is_negative() {
        return Err(Error::InvalidParameters("gamma must be non-negative".into()));
    }
    let coefficient = abhp_terms(alpha).into_iter().max().unwrap_or_else(Rational::zero) + gamma;
    let n2 = int(n as i64) * int(n as i64);
    Ok(coefficient * n2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_triangle_extremal, build_clique_extremal, build_rainbow_complete};

    const BUDGET: u64 = 10_000_000;

    fn mono(n: usize) -> EdgeColouredGraph {
        let mut g = EdgeColouredGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v, 0).unwrap();
            }
        }
        g
    }

    #[test]
    fn rainbow_tilings() {
        let g = build_rainbow_complete(6);
        let t = max_rainbow_tiling(&g, 3, BUDGET).unwrap();
        assert_eq!((t.size, t.optimal), (2, true));
        assert!(certify_witness(&t.witness, Host::Coloured(&g)));
        assert_eq!(max_rainbow_tiling(&mono(6), 3, BUDGET).unwrap().size, 0);
        assert!(matches!(
            has_perfect_rainbow_tiling(&build_rainbow_complete(9), 3, BUDGET).unwrap(),
            PerfectOutcome::Yes { .. }
        ));
        assert!(has_perfect_rainbow_tiling(&build_rainbow_complete(8), 3, BUDGET).is_err());
    }

    #[test]
    fn constructions_resist_tiling() {
        let g = build_triangle_extremal(13, 3).unwrap();
        let t = max_rainbow_tiling(&g, 3, BUDGET).unwrap();
        assert_eq!((t.size, t.optimal), (2, true));
        assert!(certify_witness(&t.witness, Host::Coloured(&g)));
        let g = build_clique_extremal(3, 3).unwrap();
        assert!(matches!(has_perfect_rainbow_tiling(&g, 3, BUDGET).unwrap(), PerfectOutcome::No { .. }));
    }

    #[test]
    fn family_tilings() {
        let yes = perfect_family_tiling(&Digraph::complete(6), 3, 1, false, BUDGET).unwrap();
        assert_eq!(yes.label(), "yes");
        let cycle = Digraph::from_arcs(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert_eq!(perfect_family_tiling(&cycle, 3, 1, false, BUDGET).unwrap().label(), "no");
        // the star variant only needs out-degree 1 inside each triple; a
        // directed 6-cycle has none either
        assert_eq!(perfect_family_tiling(&cycle, 3, 1, true, BUDGET).unwrap().label(), "no");
        let two = Digraph::from_arcs(6, [(0, 1), (1, 0), (2, 0), (3, 4), (4, 3), (5, 3)]).unwrap();
        assert_eq!(perfect_family_tiling(&two, 3, 1, true, BUDGET).unwrap().label(), "yes");
        assert_eq!(perfect_family_tiling(&two, 3, 1, false, BUDGET).unwrap().label(), "no");
    }

    #[test]
    fn clique_tilings() {
        let k6 = Graph::complete(6);
        assert_eq!(max_clique_tiling(&k6, 3, BUDGET).unwrap().size, 2);
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(max_clique_tiling(&c5, 3, BUDGET).unwrap().size, 0);
        assert_eq!(cliques(&k6, 4, 100).unwrap().len(), 15);
        assert!(cliques(&k6, 3, 5).is_err());
    }

    #[test]
    fn certification_rejects_bad_witnesses() {
        let g = build_rainbow_complete(6);
        let overlap = TilingWitness::new(vec![vec![0, 1, 2], vec![2, 3, 4]], TilingKind::RainbowClique);
        assert!(!certify_witness(&overlap, Host::Coloured(&g)));
        let wrong_host = TilingWitness::new(vec![vec![0, 1, 2]], TilingKind::Clique);
        assert!(!certify_witness(&wrong_host, Host::Coloured(&g)));
        let mut bad_cover = TilingWitness::new(vec![vec![0, 1, 2]], TilingKind::RainbowClique);
        bad_cover.cover = 4;
        assert!(!certify_witness(&bad_cover, Host::Coloured(&g)));
        let not_rainbow = TilingWitness::new(vec![vec![0, 1, 2]], TilingKind::RainbowClique);
        assert!(!certify_witness(&not_rainbow, Host::Coloured(&mono(3))));
    }

    #[test]
    fn abhp_values() {
        assert_eq!(abhp_bound(1, &ratio(1, 4), &int(0)).unwrap(), ratio(3, 8));
        assert_eq!(abhp_bound(1, &ratio(1, 3), &int(0)).unwrap(), ratio(1, 2));
        assert_eq!(abhp_bound(12, &ratio(1, 3), &ratio(1, 100)).unwrap(), ratio(1, 2) * int(144) + ratio(144, 100));
        assert_eq!(
            abhp_terms(&ratio(1, 4)),
            [ratio(23, 64), ratio(3, 8), ratio(3, 8), ratio(5, 16)]
        );
        assert_eq!(abhp_terms(&int(0))[3], ratio(1, 2));
        assert!(abhp_bound(1, &int(0), &int(0)).is_err());
        assert!(abhp_bound(1, &ratio(1, 2), &int(0)).is_err());
        assert!(abhp_bound(1, &ratio(1, 4), &int(-1)).is_err());
    }
}
