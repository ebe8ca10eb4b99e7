//! Maximum matchings in general graphs (Edmonds' blossom algorithm) and the
//! Erdős–Gallai guarantee.

use std::collections::VecDeque;

use crate::graph::Graph;

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n();
        Blossom {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.n()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Returns the free vertex reached by an augmenting path from `root`.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.n();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            let neighbours: Vec<usize> = self.g.neighbours(v).collect();
            for to in neighbours {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

/// Maximum matching as a list of edges `(u, v)` with `u < v`, sorted.
pub fn max_matching(g: &Graph) -> Vec<(usize, usize)> {
    let mut b = Blossom::new(g);
    // greedy warm start
    for u in 0..g.n() {
        if b.mate[u] == NONE {
            if let Some(v) = g.neighbours(u).find(|&v| b.mate[v] == NONE) {
                b.mate[u] = v;
                b.mate[v] = u;
            }
        }
    }
    for root in 0..g.n() {
        if b.mate[root] == NONE {
            if let Some(end) = b.find_path(root) {
                b.augment(end);
            }
        }
    }
    let mut out: Vec<(usize, usize)> = (0..g.n())
        .filter(|&u| b.mate[u] != NONE && u < b.mate[u])
        .map(|u| (u, b.mate[u]))
        .collect();
    out.sort_unstable();
    out
}

fn choose2(x: usize) -> u128 {
    let x = x as u128;
    x * x.saturating_sub(1) / 2
}

/// Largest `t` such that every graph with `n` vertices and `e` edges is
/// guaranteed a matching of size `t`, i.e. the largest `t` with
/// `e > max{C(2t-1, 2), C(n,2) - C(n-t+1, 2)}`; `0` if there is none.
pub fn eg_bound(n: usize, e: usize) -> usize {
    let e = e as u128;
    let mut best = 0;
    for t in 1..=n / 2 {
        let threshold = choose2(2 * t - 1).max(choose2(n) - choose2(n - t + 1));
        if e > threshold {
            best = t;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng_from_seed;
    use rand::Rng;

    fn brute_force(g: &Graph) -> usize {
        fn go(edges: &[(usize, usize)], used: u64, from: usize) -> usize {
            let mut best = 0;
            for (i, &(u, v)) in edges.iter().enumerate().skip(from) {
                if used >> u & 1 == 0 && used >> v & 1 == 0 {
                    best = best.max(1 + go(edges, used | 1 << u | 1 << v, i + 1));
                }
            }
            best
        }
        let edges: Vec<_> = g.edges().collect();
        go(&edges, 0, 0)
    }

    fn is_matching(g: &Graph, m: &[(usize, usize)]) -> bool {
        let mut seen = vec![false; g.n()];
        m.iter().all(|&(u, v)| {
            let ok = g.has_edge(u, v) && !seen[u] && !seen[v];
            seen[u] = true;
            seen[v] = true;
            ok
        })
    }

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, edges).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(max_matching(&Graph::complete(4)).len(), 2);
        let star = Graph::from_edges(6, (1..6).map(|v| (0, v))).unwrap();
        assert_eq!(max_matching(&star).len(), 1);
        let p = petersen();
        assert_eq!(brute_force(&p), 5);
        let m = max_matching(&p);
        assert_eq!(m.len(), 5);
        assert!(is_matching(&p, &m));
        assert!(max_matching(&Graph::new(0)).is_empty());
    }

    #[test]
    fn odd_cycles_need_blossoms() {
        // two triangles joined by a path: 0-1-2-0, 2-3, 3-4, 4-5-6-4
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 4)]).unwrap();
        assert_eq!(max_matching(&g).len(), 3);
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = rng_from_seed(11);
        for _ in 0..300 {
            let n = rng.gen_range(1..=11);
            let p = rng.gen_range(0.1..0.9);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let m = max_matching(&g);
            assert!(is_matching(&g, &m));
            assert_eq!(m.len(), brute_force(&g));
            assert!(m.len() >= eg_bound(n, g.edge_count()));
        }
    }

    #[test]
    fn eg_values() {
        assert_eq!(eg_bound(10, 21), 3);
        assert_eq!(eg_bound(10, 0), 0);
        assert_eq!(eg_bound(4, 6), 2);
        assert_eq!(eg_bound(4, 3), 1);
        assert_eq!(eg_bound(1, 0), 0);
    }
}
