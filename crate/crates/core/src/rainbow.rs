//! Rainbow clique search, the rainbow-triangle verdict for graphs of minimum
//! colour degree at least `n/2`, rainbow transversals of properly coloured
//! complete multipartite graphs, and directed-triangle search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Colour, Digraph, EdgeColouredGraph};

/// Depth-first enumeration of rainbow `K_r` vertex sets in lexicographic
/// order. `visit` returns `false` to stop early.
fn for_each_rainbow_clique<F>(g: &EdgeColouredGraph, r: usize, mut visit: F)
where
    F: FnMut(&[usize]) -> bool,
{
    fn extend<F: FnMut(&[usize]) -> bool>(
        g: &EdgeColouredGraph,
        r: usize,
        chosen: &mut Vec<usize>,
        used: &mut Vec<Colour>,
        visit: &mut F,
    ) -> bool {
        if chosen.len() == r {
            return visit(chosen);
        }
        let start = chosen.last().map_or(0, |&v| v + 1);
        // not enough vertices left to finish
        let need = r - chosen.len();
        if g.n() < start + need {
            return true;
        }
        'candidates: for v in start..=g.n() - need {
            let mark = used.len();
            for &u in chosen.iter() {
                match g.colour(u, v) {
                    Some(c) if !used.contains(&c) => used.push(c),
                    _ => {
                        used.truncate(mark);
                        continue 'candidates;
                    }
                }
            }
            chosen.push(v);
            let go_on = extend(g, r, chosen, used, visit);
            chosen.pop();
            used.truncate(mark);
            if !go_on {
                return false;
            }
        }
        true
    }
    if r == 0 {
        return;
    }
    let mut chosen = Vec::with_capacity(r);
    let mut used = Vec::with_capacity(r * r / 2);
    extend(g, r, &mut chosen, &mut used, &mut visit);
}

/// Lexicographically least vertex set inducing a rainbow `K_r`.
pub fn find_rainbow_clique(g: &EdgeColouredGraph, r: usize) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_rainbow_clique(g, r, |s| {
        found = Some(s.to_vec());
        false
    });
    found
}

/// All rainbow `K_r` vertex sets, lexicographically ordered. Fails once more
/// than `cap` copies have been seen.
pub fn rainbow_cliques(g: &EdgeColouredGraph, r: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_rainbow_clique(g, r, |s| {
        if out.len() == cap {
            overflow = true;
            return false;
        }
        out.push(s.to_vec());
        true
    });
    if overflow {
        Err(Error::CopyLimitExceeded { limit: cap })
    } else {
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalKind {
    /// Properly coloured `K_{n/2,n/2}`.
    BalancedBipartite,
    K4,
    K4MinusEdge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TriangleVerdict {
    HypothesisNotMet { min_colour_degree: usize },
    Exceptional { kind: ExceptionalKind },
    RainbowTriangle { vertices: [usize; 3] },
    /// No rainbow triangle although the hypothesis holds and the graph is not
    /// exceptional. Never expected; kept as an explicit outcome for test
    /// oracles.
    Counterexample,
}

fn is_balanced_complete_bipartite(g: &EdgeColouredGraph) -> bool {
    let n = g.n();
    if n < 2 || !n.is_multiple_of(2) {
        return false;
    }
    let right: Vec<bool> = (0..n).map(|v| g.has_edge(0, v)).collect();
    if right.iter().filter(|&&b| b).count() != n / 2 {
        return false;
    }
    (0..n).all(|u| (u + 1..n).all(|v| g.has_edge(u, v) == (right[u] != right[v])))
}

fn is_properly_coloured(g: &EdgeColouredGraph) -> bool {
    (0..g.n()).all(|v| g.colour_degree(v) == g.degree(v))
}

pub fn exceptional_kind(g: &EdgeColouredGraph) -> Option<ExceptionalKind> {
    if is_balanced_complete_bipartite(g) && is_properly_coloured(g) {
        return Some(ExceptionalKind::BalancedBipartite);
    }
    if g.n() == 4 {
        // colourings of K4 / K4 - e are not analysed further
        match g.edge_count() {
            6 => return Some(ExceptionalKind::K4),
            5 => return Some(ExceptionalKind::K4MinusEdge),
            _ => {}
        }
    }
    None
}

/// Verdict for an edge-coloured graph on `n >= 3` vertices: either the
/// minimum colour degree is below `n/2`, the graph is one of the excluded
/// graphs, or a rainbow triangle is returned.
pub fn half_degree_triangle_verdict(g: &EdgeColouredGraph) -> Result<TriangleVerdict> {
    if g.n() < 3 {
        return Err(Error::Precondition(format!("need n >= 3, got {}", g.n())));
    }
    let delta = g.min_colour_degree();
    if 2 * delta < g.n() {
        return Ok(TriangleVerdict::HypothesisNotMet {
            min_colour_degree: delta,
        });
    }
    if let Some(kind) = exceptional_kind(g) {
        return Ok(TriangleVerdict::Exceptional { kind });
    }
    Ok(match find_rainbow_clique(g, 3) {
        Some(s) => TriangleVerdict::RainbowTriangle {
            vertices: [s[0], s[1], s[2]],
        },
        None => TriangleVerdict::Counterexample,
    })
}

/// Rainbow `K_r` with one vertex in each part of a properly coloured complete
/// `r`-partite graph whose parts have at least `r^3` vertices.
pub fn rainbow_transversal(g: &EdgeColouredGraph, parts: &[Vec<usize>]) -> Result<Vec<usize>> {
    let r = parts.len();
    if r < 2 {
        return Err(Error::Precondition("need at least two parts".into()));
    }
    let mut part_of = vec![usize::MAX; g.n()];
    for (i, part) in parts.iter().enumerate() {
        if part.len() < r * r * r {
            return Err(Error::Precondition(format!(
                "part {i} has {} vertices, need at least {}",
                part.len(),
                r * r * r
            )));
        }
        for &v in part {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
            }
            if part_of[v] != usize::MAX {
                return Err(Error::Precondition(format!("vertex {v} is in two parts")));
            }
            part_of[v] = i;
        }
    }
    if part_of.contains(&usize::MAX) {
        return Err(Error::Precondition("parts do not cover the vertex set".into()));
    }
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.has_edge(u, v) != (part_of[u] != part_of[v]) {
                return Err(Error::Precondition(format!(
                    "not complete multipartite at pair {u}-{v}"
                )));
            }
        }
    }
    if !is_properly_coloured(g) {
        return Err(Error::Precondition("colouring is not proper".into()));
    }

    fn extend(
        g: &EdgeColouredGraph,
        parts: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        used: &mut Vec<Colour>,
    ) -> bool {
        let Some(part) = parts.get(chosen.len()) else {
            return true;
        };
        'candidates: for &v in part {
            let mark = used.len();
            for &u in chosen.iter() {
                let c = g.colour(u, v).expect("complete multipartite");
                if used.contains(&c) {
                    used.truncate(mark);
                    continue 'candidates;
                }
                used.push(c);
            }
            chosen.push(v);
            if extend(g, parts, chosen, used) {
                return true;
            }
            chosen.pop();
            used.truncate(mark);
        }
        false
    }

    let mut chosen = Vec::with_capacity(r);
    let mut used = Vec::new();
    if extend(g, parts, &mut chosen, &mut used) {
        Ok(chosen)
    } else {
        Err(Error::TransversalNotFound)
    }
}

/// Lexicographically least triple spanning a complete base graph with every
/// vertex having an out-neighbour inside the triple.
pub fn find_directed_triangle(d: &Digraph) -> Option<[usize; 3]> {
    let n = d.n();
    for a in 0..n {
        for b in a + 1..n {
            if !d.base_has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                let t = [a, b, c];
                if d.base_complete_on(&t) && d.min_out_degree_within(&t) >= 1 {
                    return Some(t);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_proper_bipartite, build_rainbow_complete};

    fn mono_k(n: usize) -> EdgeColouredGraph {
        let mut g = EdgeColouredGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v, 0).unwrap();
            }
        }
        g
    }

    #[test]
    fn rainbow_clique_examples() {
        assert_eq!(find_rainbow_clique(&build_rainbow_complete(5), 4), Some(vec![0, 1, 2, 3]));
        assert_eq!(find_rainbow_clique(&build_proper_bipartite(8).unwrap(), 3), None);
        assert_eq!(find_rainbow_clique(&mono_k(5), 3), None);
        assert_eq!(rainbow_cliques(&build_rainbow_complete(6), 3, 100).unwrap().len(), 20);
        assert!(matches!(
            rainbow_cliques(&build_rainbow_complete(6), 3, 10),
            Err(Error::CopyLimitExceeded { limit: 10 })
        ));
    }

    #[test]
    fn verdicts() {
        assert_eq!(
            half_degree_triangle_verdict(&build_proper_bipartite(6).unwrap()).unwrap(),
            TriangleVerdict::Exceptional {
                kind: ExceptionalKind::BalancedBipartite
            }
        );
        assert_eq!(
            half_degree_triangle_verdict(&build_rainbow_complete(5)).unwrap(),
            TriangleVerdict::RainbowTriangle { vertices: [0, 1, 2] }
        );
        assert!(matches!(
            half_degree_triangle_verdict(&mono_k(5)).unwrap(),
            TriangleVerdict::HypothesisNotMet { min_colour_degree: 1 }
        ));
        assert_eq!(
            half_degree_triangle_verdict(&build_rainbow_complete(4)).unwrap(),
            TriangleVerdict::Exceptional {
                kind: ExceptionalKind::K4
            }
        );
        assert!(half_degree_triangle_verdict(&build_rainbow_complete(2)).is_err());
    }

    #[test]
    fn directed_triangles() {
        assert_eq!(find_directed_triangle(&Digraph::complete(3)), Some([0, 1, 2]));
        let transitive = Digraph::from_arcs(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(find_directed_triangle(&transitive), None);
    }

    fn multipartite(r: usize, size: usize, colour: impl Fn(usize, usize, usize, usize) -> Colour) -> (EdgeColouredGraph, Vec<Vec<usize>>) {
        let mut g = EdgeColouredGraph::new(r * size);
        for a in 0..r {
            for b in a + 1..r {
                for i in 0..size {
                    for j in 0..size {
                        g.add_edge(a * size + i, b * size + j, colour(a, b, i, j)).unwrap();
                    }
                }
            }
        }
        let parts = (0..r).map(|a| (a * size..(a + 1) * size).collect()).collect();
        (g, parts)
    }

    #[test]
    fn transversal_two_parts() {
        let (g, parts) = multipartite(2, 8, |_, _, i, j| ((i + j) % 8) as Colour);
        let t = rainbow_transversal(&g, &parts).unwrap();
        assert_eq!(t, vec![0, 8]);
    }

    #[test]
    fn transversal_rainbow_host() {
        let (g, parts) = multipartite(3, 27, |a, b, i, j| ((a * 3 + b) * 1000 + i * 27 + j) as Colour);
        assert_eq!(rainbow_transversal(&g, &parts).unwrap(), vec![0, 27, 54]);
    }

    #[test]
    fn transversal_preconditions() {
        let (g, parts) = multipartite(3, 5, |a, b, i, j| ((a * 3 + b) * 100 + i * 5 + j) as Colour);
        assert!(matches!(rainbow_transversal(&g, &parts), Err(Error::Precondition(_))));
        // improper: all edges one colour
        let (g, parts) = multipartite(2, 8, |_, _, _, _| 0);
        assert!(matches!(rainbow_transversal(&g, &parts), Err(Error::Precondition(_))));
    }
}
