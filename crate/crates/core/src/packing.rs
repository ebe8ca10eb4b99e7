//! Exact maximum set packing of `r`-sets by branch and bound.
//!
//! The search branches on the lowest-index free vertex: either one of the
//! still-available copies through it (in lexicographic order) is taken, or
//! the vertex is left uncovered (not allowed when looking for a perfect
//! packing). Nodes are pruned with `⌊|coverable| / r⌋` and, near the root,
//! with the exact fractional relaxation. A lexicographic greedy packing seeds
//! the incumbent.

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::fractional::packing_lp;

pub const MAX_VERTICES: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PackingOptions {
    /// Node limit for the search.
    pub budget: u64,
    /// Solve the fractional relaxation at nodes of depth below this.
    pub lp_depth: usize,
    /// Only spanning packings count; the search stops at the first one.
    pub perfect: bool,
}

impl Default for PackingOptions {
    fn default() -> Self {
        PackingOptions {
            budget: 10_000_000,
            lp_depth: 2,
            perfect: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    /// Indices into the copy list, ascending.
    pub chosen: Vec<usize>,
    /// `true` when the search finished within budget, so `chosen` is optimal
    /// (in perfect mode: a perfect packing exists iff it is spanning).
    pub optimal: bool,
    pub nodes: u64,
    /// Best proven upper bound on the packing size.
    pub upper_bound: usize,
}

struct Search<'a> {
    masks: &'a [u128],
    r: usize,
    opts: PackingOptions,
    nodes: u64,
    exhausted: bool,
    best: Vec<usize>,
    current: Vec<usize>,
    /// Proven upper bound; the search stops once the incumbent reaches it.
    /// In perfect mode it drops to 0 once a spanning packing is refuted.
    ceiling: usize,
    /// `n / r`.
    goal: usize,
}

fn lp_bound(masks: &[u128], available: &[usize], free: u128) -> usize {
    // compress the free vertices to 0..k
    let mut index = [usize::MAX; MAX_VERTICES];
    let mut k = 0;
    for (v, slot) in index.iter_mut().enumerate() {
        if free >> v & 1 == 1 {
            *slot = k;
            k += 1;
        }
    }
    let edges: Vec<Vec<usize>> = available
        .iter()
        .map(|&i| (0..MAX_VERTICES).filter(|&v| masks[i] >> v & 1 == 1).map(|v| index[v]).collect())
        .collect();
    let value = packing_lp(k, &edges).value;
    value.numer().div_floor(value.denom()).to_usize().unwrap_or(usize::MAX)
}

impl Search<'_> {
    /// Largest size that is not worth reaching: the incumbent, or in perfect
    /// mode anything short of spanning.
    fn incumbent(&self) -> usize {
        if self.opts.perfect {
            self.goal - 1
        } else {
            self.best.len()
        }
    }

    fn dfs(&mut self, free: u128, available: Vec<usize>, depth: usize) {
        if self.exhausted || self.best.len() >= self.ceiling {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.opts.budget {
            self.exhausted = true;
            return;
        }
        let have = self.current.len();
        if have + (free.count_ones() as usize) / self.r <= self.incumbent() {
            return;
        }
        let available: Vec<usize> = available
            .into_iter()
            .filter(|&i| self.masks[i] & !free == 0)
            .collect();
        let coverable = available.iter().fold(0u128, |acc, &i| acc | self.masks[i]);
        if self.opts.perfect && coverable != free {
            return;
        }
        let free = coverable;
        if free == 0 {
            return;
        }
        if have + (free.count_ones() as usize) / self.r <= self.incumbent() {
            return;
        }
        if depth < self.opts.lp_depth {
            let bound = lp_bound(self.masks, &available, free);
            if depth == 0 {
                if self.opts.perfect && have + bound < self.goal {
                    self.ceiling = 0;
                    return;
                }
                self.ceiling = self.ceiling.min(have + bound);
            }
            if have + bound <= self.incumbent() {
                return;
            }
        }

        let v = free.trailing_zeros();
        let through_v: Vec<usize> = available
            .iter()
            .copied()
            .filter(|&i| self.masks[i] >> v & 1 == 1)
            .collect();
        for i in through_v {
            self.current.push(i);
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            self.dfs(free & !self.masks[i], available.clone(), depth + 1);
            self.current.pop();
            if self.exhausted || self.best.len() >= self.ceiling {
                return;
            }
        }
        if !self.opts.perfect {
            self.dfs(free & !(1u128 << v), available, depth + 1);
        }
    }
}

fn to_mask(n: usize, copy: &[usize]) -> Result<u128> {
    let mut mask = 0u128;
    for &v in copy {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if mask >> v & 1 == 1 {
            return Err(Error::Precondition(format!("copy {copy:?} repeats vertex {v}")));
        }
        mask |= 1u128 << v;
    }
    Ok(mask)
}

/// Maximum number of pairwise disjoint copies among `copies` (each an
/// `r`-set over `0..n`).
pub fn max_set_packing(n: usize, r: usize, copies: &[Vec<usize>], opts: PackingOptions) -> Result<Packing> {
    if n > MAX_VERTICES {
        return Err(Error::Precondition(format!(
            "set packing supports at most {MAX_VERTICES} vertices, got {n}"
        )));
    }
    if r == 0 {
        return Err(Error::InvalidParameters("copies must be non-empty".into()));
    }
    let masks = copies
        .iter()
        .map(|c| {
            if c.len() != r {
                return Err(Error::SizeMismatch {
                    expected: r,
                    got: c.len(),
                });
            }
            to_mask(n, c)
        })
        .collect::<Result<Vec<u128>>>()?;

    let mut greedy = Vec::new();
    let mut used = 0u128;
    for (i, &m) in masks.iter().enumerate() {
        if m & used == 0 {
            used |= m;
            greedy.push(i);
        }
    }
    if opts.perfect && greedy.len() * r != n {
        greedy.clear();
    }
    let all = if n == MAX_VERTICES { u128::MAX } else { (1u128 << n) - 1 };
    let mut search = Search {
        masks: &masks,
        r,
        opts,
        nodes: 0,
        exhausted: false,
        best: greedy,
        current: Vec::new(),
        ceiling: n / r,
        goal: n / r,
    };
    if opts.perfect && !n.is_multiple_of(r) {
        search.ceiling = 0;
    } else {
        search.dfs(all, (0..masks.len()).collect(), 0);
    }
    let optimal = !search.exhausted || search.best.len() >= search.ceiling;
    let mut chosen = search.best;
    if opts.perfect && chosen.len() * r != n {
        chosen.clear();
    }
    chosen.sort_unstable();
    let upper_bound = if optimal { chosen.len() } else { search.ceiling };
    Ok(Packing {
        chosen,
        optimal,
        nodes: search.nodes,
        upper_bound,
    })
}
