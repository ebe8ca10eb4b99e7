//! Edge-coloured graphs, digraphs and plain undirected graphs on dense
//! vertex indices `0..n`.
//!
//! All three types store a dense adjacency matrix. Instances used here are
//! small (desk-scale extremal experiments), so the `n^2` footprint buys
//! constant-time adjacency and colour lookups everywhere.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Colour identifiers are arbitrary non-negative integers.
pub type Colour = u64;

/// Vertex-count limit applied by [`EdgeColouredGraph::blowup`] and
/// [`Digraph::blowup`].
pub const DEFAULT_BLOWUP_LIMIT: usize = 1 << 14;

fn check_vertex(v: usize, n: usize) -> Result<()> {
    if v >= n {
        Err(Error::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}

/// A simple undirected graph with exactly one colour on every edge.
#[derive(Clone, PartialEq, Eq)]
pub struct EdgeColouredGraph {
    n: usize,
    colours: Vec<Option<Colour>>,
    edge_count: usize,
}

impl std::fmt::Debug for EdgeColouredGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EdgeColouredGraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl EdgeColouredGraph {
    pub fn new(n: usize) -> Self {
        EdgeColouredGraph {
            n,
            colours: vec![None; n * n],
            edge_count: 0,
        }
    }

    /// Builds a graph from `(u, v, colour)` triples, rejecting loops,
    /// duplicates and out-of-range ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Colour)>,
    {
        let mut g = Self::new(n);
        for (u, v, c) in edges {
            g.add_edge(u, v, c)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, colour: Colour) -> Result<()> {
        check_vertex(u, self.n)?;
        check_vertex(v, self.n)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.colours[u * self.n + v].is_some() {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.colours[u * self.n + v] = Some(colour);
        self.colours[v * self.n + u] = Some(colour);
        self.edge_count += 1;
        Ok(())
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        if self.colours[u * self.n + v].take().is_some() {
            self.colours[v * self.n + u] = None;
            self.edge_count -= 1;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn colour(&self, u: usize, v: usize) -> Option<Colour> {
        self.colours[u * self.n + v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.colour(u, v).is_some()
    }

    /// Edges as `(u, v, colour)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Colour)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n).filter_map(move |v| self.colour(u, v).map(|c| (u, v, c)))
        })
    }

    pub fn neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_edge(u, v))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.neighbours(u).count()
    }

    /// Number of distinct colours on edges at `u`.
    pub fn colour_degree(&self, u: usize) -> usize {
        let mut seen: Vec<Colour> = self
            .neighbours(u)
            .map(|v| self.colour(u, v).unwrap())
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn min_colour_degree(&self) -> usize {
        (0..self.n).map(|v| self.colour_degree(v)).min().unwrap_or(0)
    }

    /// The uncoloured base graph.
    pub fn underlying(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for (u, v, _) in self.edges() {
            g.add_edge_unchecked(u, v);
        }
        g
    }

    /// `t`-blowup: vertex `v` becomes the class `v*t .. v*t + t`. Copies of an
    /// edge inherit its colour, so the blowup of a rainbow graph is not rainbow.
    pub fn blowup(&self, t: usize) -> Result<Self> {
        self.blowup_with_limit(t, DEFAULT_BLOWUP_LIMIT)
    }

    pub fn blowup_with_limit(&self, t: usize, limit: usize) -> Result<Self> {
        let size = blowup_size(self.n, t, limit)?;
        let mut g = Self::new(size);
        for (u, v, c) in self.edges() {
            for i in 0..t {
                for j in 0..t {
                    g.add_edge(u * t + i, v * t + j, c)?;
                }
            }
        }
        Ok(g)
    }

    /// Induced subgraph on `vertices`, relabelled to `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        for &v in vertices {
            check_vertex(v, self.n)?;
        }
        let mut g = Self::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if let Some(c) = self.colour(u, v) {
                    g.add_edge(i, j, c)?;
                }
            }
        }
        Ok(g)
    }
}

fn blowup_size(n: usize, t: usize, limit: usize) -> Result<usize> {
    if t == 0 {
        return Err(Error::InvalidParameters("blowup factor must be at least 1".into()));
    }
    match n.checked_mul(t) {
        Some(size) if size <= limit => Ok(size),
        _ => Err(Error::BlowupTooLarge { n, t, limit }),
    }
}

/// Loop-free digraph; antiparallel arc pairs ("double edges") are allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<bool>,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            n,
            arcs: vec![false; n * n],
        }
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = Self::new(n);
        for (u, v) in arcs {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }

    /// Complete digraph: every ordered pair is an arc.
    pub fn complete(n: usize) -> Self {
        let mut d = Self::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    d.arcs[u * n + v] = true;
                }
            }
        }
        d
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        check_vertex(u, self.n)?;
        check_vertex(v, self.n)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.arcs[u * self.n + v] {
            return Err(Error::DuplicateEdge(u, v));
        }
        self.arcs[u * self.n + v] = true;
        Ok(())
    }

    /// Adds `u -> v` unless it is already present. Returns whether it was new.
    pub(crate) fn insert_arc(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v && u < self.n && v < self.n);
        let slot = &mut self.arcs[u * self.n + v];
        let fresh = !*slot;
        *slot = true;
        fresh
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs[u * self.n + v]
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.iter().filter(|&&a| a).count()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (0..self.n).filter(move |&v| self.has_arc(u, v)).map(move |v| (u, v)))
    }

    pub fn out_neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_arc(u, v))
    }

    pub fn in_neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_arc(v, u))
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_neighbours(u).count()
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.in_neighbours(u).count()
    }

    pub fn min_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).min().unwrap_or(0)
    }

    /// Whether `u` and `v` are joined in the base graph.
    #[inline]
    pub fn base_has_edge(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    pub fn base_graph(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.base_has_edge(u, v) {
                    g.add_edge_unchecked(u, v);
                }
            }
        }
        g
    }

    /// Minimum out-degree of the subdigraph induced by `set`.
    pub fn min_out_degree_within(&self, set: &[usize]) -> usize {
        set.iter()
            .map(|&u| set.iter().filter(|&&v| self.has_arc(u, v)).count())
            .min()
            .unwrap_or(0)
    }

    pub fn base_complete_on(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| {
            set[i + 1..].iter().all(|&v| self.base_has_edge(u, v))
        })
    }

    pub fn blowup(&self, t: usize) -> Result<Self> {
        self.blowup_with_limit(t, DEFAULT_BLOWUP_LIMIT)
    }

    pub fn blowup_with_limit(&self, t: usize, limit: usize) -> Result<Self> {
        let size = blowup_size(self.n, t, limit)?;
        let mut d = Self::new(size);
        for (u, v) in self.arcs() {
            for i in 0..t {
                for j in 0..t {
                    d.insert_arc(u * t + i, v * t + j);
                }
            }
        }
        Ok(d)
    }

    /// `G^±`: the undirected graph of pairs joined in both directions.
    pub fn double_edge_graph(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_arc(u, v) && self.has_arc(v, u) {
                    g.add_edge_unchecked(u, v);
                }
            }
        }
        g
    }
}

/// Plain simple undirected graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge_unchecked(u, v);
            }
        }
        g
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        check_vertex(u, self.n)?;
        check_vertex(v, self.n)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.add_edge_unchecked(u, v);
        Ok(())
    }

    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        self.adj[u * self.n + v] = true;
        self.adj[v * self.n + u] = true;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).filter(move |&v| self.has_edge(u, v)).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_edge(u, v))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.neighbours(u).count()
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges().all(|(u, v)| other.has_edge(u, v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub colour_degree: Vec<usize>,
    pub degree: Vec<usize>,
    pub min_colour_degree: usize,
    pub max_degree: usize,
}

pub fn degree_profile(g: &EdgeColouredGraph) -> DegreeProfile {
    let colour_degree: Vec<usize> = (0..g.n()).map(|v| g.colour_degree(v)).collect();
    let degree: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    DegreeProfile {
        min_colour_degree: colour_degree.iter().copied().min().unwrap_or(0),
        max_degree: degree.iter().copied().max().unwrap_or(0),
        colour_degree,
        degree,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColouringKind {
    Rainbow,
    Proper,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedCheck {
    pub complete: bool,
    /// Edge colours of `G[S]` pairwise distinct.
    pub rainbow: bool,
    /// No two adjacent edges of `G[S]` share a colour.
    pub proper: bool,
}

impl InducedCheck {
    /// Rainbow implies proper, so rainbow wins when both hold.
    pub fn kind(&self) -> ColouringKind {
        if self.rainbow {
            ColouringKind::Rainbow
        } else if self.proper {
            ColouringKind::Proper
        } else {
            ColouringKind::Neither
        }
    }
}

pub fn induced_check(g: &EdgeColouredGraph, set: &[usize]) -> Result<InducedCheck> {
    for &v in set {
        check_vertex(v, g.n())?;
    }
    let mut vs = set.to_vec();
    vs.sort_unstable();
    vs.dedup();

    let mut complete = true;
    let mut all: Vec<Colour> = Vec::new();
    let mut proper = true;
    for (i, &u) in vs.iter().enumerate() {
        let mut at_u: Vec<Colour> = Vec::new();
        for (j, &v) in vs.iter().enumerate() {
            if i == j {
                continue;
            }
            match g.colour(u, v) {
                Some(c) => {
                    at_u.push(c);
                    if j > i {
                        all.push(c);
                    }
                }
                None => {
                    if j > i {
                        complete = false;
                    }
                }
            }
        }
        let before = at_u.len();
        at_u.sort_unstable();
        at_u.dedup();
        if at_u.len() != before {
            proper = false;
        }
    }
    let before = all.len();
    all.sort_unstable();
    all.dedup();
    Ok(InducedCheck {
        complete,
        rainbow: all.len() == before,
        proper,
    })
}

/// Whether `G[set]` is a complete rainbow graph. Assumes in-range ids.
pub fn is_rainbow_clique(g: &EdgeColouredGraph, set: &[usize]) -> bool {
    let mut colours = Vec::with_capacity(set.len() * set.len() / 2);
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            match g.colour(u, v) {
                Some(c) => colours.push(c),
                None => return false,
            }
        }
    }
    let before = colours.len();
    colours.sort_unstable();
    colours.dedup();
    colours.len() == before
}

/// An edge-coloured critical spanning subgraph with the same minimum colour
/// degree: edges are scanned in lexicographic order and deleted whenever
/// neither endpoint drops below the current minimum colour degree, repeating
/// until a full scan deletes nothing.
pub fn critical_subgraph(g: &EdgeColouredGraph) -> EdgeColouredGraph {
    let n = g.n();
    let target = g.min_colour_degree();
    // multiplicity[v][colour] = number of edges of that colour at v
    let mut multiplicity: Vec<HashMap<Colour, usize>> = vec![HashMap::new(); n];
    let mut cdeg = vec![0usize; n];
    for (u, v, c) in g.edges() {
        for w in [u, v] {
            let m = multiplicity[w].entry(c).or_insert(0);
            if *m == 0 {
                cdeg[w] += 1;
            }
            *m += 1;
        }
    }

    let mut out = g.clone();
    loop {
        let mut changed = false;
        let snapshot: Vec<_> = out.edges().collect();
        for (u, v, c) in snapshot {
            let after = |w: usize| cdeg[w] - usize::from(multiplicity[w][&c] == 1);
            if after(u) >= target && after(v) >= target {
                out.remove_edge(u, v);
                for w in [u, v] {
                    let m = multiplicity[w].get_mut(&c).unwrap();
                    *m -= 1;
                    if *m == 0 {
                        cdeg[w] -= 1;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    out
}
