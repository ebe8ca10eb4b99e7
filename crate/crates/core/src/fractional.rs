//! Fractional tilings by `K_{r,r-2}` copies of a digraph, solved exactly, and
//! dual certificates for when no perfect one exists.
//!
//! The copy hypergraph `F` has one edge per `r`-set inducing a digraph with
//! complete base graph and minimum out-degree at least `r - 2`. A perfect
//! fractional tiling is a weighting of the edges with every vertex load equal
//! to one; it exists iff the maximum total weight under loads `<= 1` is
//! `n / r`. Otherwise the dual optimum `y` (edge sums `>= 1`, total `< n/r`)
//! is turned into a certificate `ω` with values in `[0, 1]`, minimum `0`,
//! every edge sum `>= 1` and total `< n / r`.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::convert::is_family_member;
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};
use crate::matching::max_matching;
use crate::random::{random_min_out_degree, rng_from_seed, instance_seed};
use crate::rational::{self, int, Rational};
use crate::simplex::{maximize, LpSolution};
use crate::thresholds::threshold_formula;

pub const DEFAULT_COPY_CAP: usize = 1_000_000;

/// Copy cap from `RT_MAX_COPIES`, falling back to [`DEFAULT_COPY_CAP`].
pub fn copy_cap() -> usize {
    std::env::var("RT_MAX_COPIES")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_COPY_CAP)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CopyHypergraph {
    pub n: usize,
    pub r: usize,
    /// Sorted `r`-sets in lexicographic order.
    pub edges: Vec<Vec<usize>>,
}

/// Calls `f` on every `r`-subset of `0..n` in lexicographic order until it
/// returns `false`.
pub(crate) fn for_each_subset(n: usize, r: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - r + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn build_copy_hypergraph(d: &Digraph, r: usize) -> Result<CopyHypergraph> {
    build_copy_hypergraph_capped(d, r, copy_cap())
}

pub fn build_copy_hypergraph_capped(d: &Digraph, r: usize, cap: usize) -> Result<CopyHypergraph> {
    if r < 3 {
        return Err(Error::InvalidParameters(format!("r={r}: requires r >= 3")));
    }
    let mut edges = Vec::new();
    let mut over = false;
    for_each_subset(d.n(), r, |set| {
        if is_family_member(d, set, r - 2, true) {
            if edges.len() == cap {
                over = true;
                return false;
            }
            edges.push(set.to_vec());
        }
        true
    });
    if over {
        return Err(Error::CopyLimitExceeded { limit: cap });
    }
    Ok(CopyHypergraph { n: d.n(), r, edges })
}

/// `max Σ x_e` subject to every vertex load `<= 1`, `x >= 0`.
pub fn packing_lp(n: usize, edges: &[Vec<usize>]) -> LpSolution {
    let mut a = vec![vec![Rational::zero(); edges.len()]; n];
    for (j, e) in edges.iter().enumerate() {
        for &v in e {
            a[v][j] = Rational::one();
        }
    }
    maximize(&a, &vec![Rational::one(); n], &vec![Rational::one(); edges.len()])
        .expect("packing LP is feasible and bounded")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FractionalWeighting {
    #[serde(with = "rational::vec_as_str")]
    pub weight: Vec<Rational>,
    #[serde(with = "rational::as_str")]
    pub value: Rational,
    pub perfect: bool,
}

impl FractionalWeighting {
    pub fn loads(&self, f: &CopyHypergraph) -> Vec<Rational> {
        let mut load = vec![Rational::zero(); f.n];
        for (e, w) in f.edges.iter().zip(&self.weight) {
            for &v in e {
                load[v] += w;
            }
        }
        load
    }

    /// Re-checks non-negativity, loads `<= 1`, the stated value and, when
    /// claimed, that every load is exactly one.
    pub fn is_valid_for(&self, f: &CopyHypergraph) -> bool {
        if self.weight.len() != f.edges.len() || self.weight.iter().any(|w| w.is_negative()) {
            return false;
        }
        let loads = self.loads(f);
        let value: Rational = self.weight.iter().sum();
        value == self.value
            && loads.iter().all(|l| *l <= Rational::one())
            && (!self.perfect || loads.iter().all(|l| l.is_one()))
    }
}

fn perfect_value(f: &CopyHypergraph) -> Rational {
    Rational::new((f.n as i64).into(), (f.r as i64).into())
}

pub fn solve_fractional_matching(f: &CopyHypergraph) -> FractionalWeighting {
    let lp = packing_lp(f.n, &f.edges);
    FractionalWeighting {
        perfect: lp.value == perfect_value(f),
        weight: lp.primal,
        value: lp.value,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualCertificate {
    #[serde(with = "rational::vec_as_str")]
    pub omega: Vec<Rational>,
}

impl DualCertificate {
    pub fn total(&self) -> Rational {
        self.omega.iter().sum()
    }
}

/// Normalises a raw weighting (edge sums `>= 0`, total `< 0`): scale so the
/// minimum is `-1`, cap at `r - 1`, then map `w ↦ (w + 1) / r`.
pub fn normalise_raw_weighting(raw: &[Rational], r: usize) -> Result<DualCertificate> {
    let min = raw
        .iter()
        .min()
        .cloned()
        .ok_or_else(|| Error::Precondition("empty weighting".into()))?;
    if !min.is_negative() {
        return Err(Error::Precondition("raw weighting has no negative entry".into()));
    }
    let scale = -min.recip();
    let cap = int(r as i64 - 1);
    let r = int(r as i64);
    let omega = raw
        .iter()
        .map(|w| {
            let scaled = (w * &scale).min(cap.clone());
            (scaled + Rational::one()) / &r
        })
        .collect();
    Ok(DualCertificate { omega })
}

/// Raw weighting `r·y - 1` from an optimal dual `y` of the packing LP.
pub fn raw_weighting(f: &CopyHypergraph) -> Result<Vec<Rational>> {
    let lp = packing_lp(f.n, &f.edges);
    if lp.value == perfect_value(f) {
        return Err(Error::PerfectInstance);
    }
    let r = int(f.r as i64);
    Ok(lp.dual.iter().map(|y| &r * y - Rational::one()).collect())
}

pub fn farkas_certificate(f: &CopyHypergraph) -> Result<DualCertificate> {
    normalise_raw_weighting(&raw_weighting(f)?, f.r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub in_unit_interval: bool,
    /// First hypergraph edge whose weight sum is below one, if any.
    pub violated_edge: Option<usize>,
    pub min_is_zero: bool,
    #[serde(with = "rational::as_str")]
    pub total: Rational,
    pub total_below_n_over_r: bool,
    /// Link inequalities for every vertex; only checked when `r = 3`.
    pub link_inequalities: Option<bool>,
}

impl CertificateReport {
    pub fn holds(&self) -> bool {
        self.in_unit_interval
            && self.violated_edge.is_none()
            && self.min_is_zero
            && self.total_below_n_over_r
            && self.link_inequalities != Some(false)
    }
}

pub fn verify_certificate(f: &CopyHypergraph, omega: &[Rational]) -> CertificateReport {
    if omega.len() != f.n {
        return CertificateReport {
            in_unit_interval: false,
            violated_edge: None,
            min_is_zero: false,
            total: Rational::zero(),
            total_below_n_over_r: false,
            link_inequalities: None,
        };
    }
    let total: Rational = omega.iter().sum();
    let violated_edge = f
        .edges
        .iter()
        .position(|e| e.iter().map(|&v| &omega[v]).sum::<Rational>() < Rational::one());
    let link_inequalities = (f.r == 3).then(|| {
        (0..f.n).all(|v| {
            certificate_link_inequality(f, omega, v)
                .map(|rep| rep.holds)
                .unwrap_or(false)
        })
    });
    CertificateReport {
        in_unit_interval: omega.iter().all(rational::in_unit_interval),
        violated_edge,
        min_is_zero: omega.iter().min().is_none_or(|m| m.is_zero()),
        total_below_n_over_r: total < perfect_value(f),
        total,
        link_inequalities,
    }
}

/// Graph on `V(F)` joining `x, y` whenever `{v, x, y}` is an edge of `F`.
pub fn link_graph(f: &CopyHypergraph, v: usize) -> Result<Graph> {
    if f.r != 3 {
        return Err(Error::Precondition(format!("link graphs need r = 3, got r = {}", f.r)));
    }
    if v >= f.n {
        return Err(Error::VertexOutOfRange { vertex: v, n: f.n });
    }
    let mut g = Graph::new(f.n);
    for e in &f.edges {
        if e.contains(&v) {
            let rest: Vec<usize> = e.iter().copied().filter(|&u| u != v).collect();
            g.add_edge_unchecked(rest[0], rest[1]);
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkReport {
    pub vertex: usize,
    /// Size of a maximum matching in the link graph.
    pub matching: usize,
    #[serde(with = "rational::as_str")]
    pub lhs: Rational,
    #[serde(with = "rational::as_str")]
    pub rhs: Rational,
    pub holds: bool,
}

/// Checks `Σ_u ω(u) >= ν · (1 - ω(v))` with `ν` the link matching number of
/// `v`: summing the edge constraints over a maximum link matching.
pub fn certificate_link_inequality(f: &CopyHypergraph, omega: &[Rational], v: usize) -> Result<LinkReport> {
    if omega.len() != f.n {
        return Err(Error::SizeMismatch {
            expected: f.n,
            got: omega.len(),
        });
    }
    let link = link_graph(f, v)?;
    let nu = max_matching(&link).len();
    let lhs: Rational = omega.iter().sum();
    let rhs = int(nu as i64) * (Rational::one() - &omega[v]);
    Ok(LinkReport {
        vertex: v,
        matching: nu,
        holds: lhs >= rhs,
        lhs,
        rhs,
    })
}

/// Exactly one of the two alternatives, each independently re-verified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FractionalOutcome {
    Perfect { weighting: FractionalWeighting },
    Certificate {
        #[serde(with = "rational::as_str")]
        value: Rational,
        certificate: DualCertificate,
    },
}

pub fn decide_fractional(f: &CopyHypergraph) -> Result<FractionalOutcome> {
    let w = solve_fractional_matching(f);
    if w.perfect {
        Ok(FractionalOutcome::Perfect { weighting: w })
    } else {
        Ok(FractionalOutcome::Certificate {
            value: w.value,
            certificate: farkas_certificate(f)?,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FailedInstance {
    pub seed: u64,
    pub arcs: Vec<(usize, usize)>,
    pub certificate: DualCertificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeskCheck {
    pub r: usize,
    pub n: usize,
    pub min_out_degree: usize,
    pub trials: usize,
    pub perfect: usize,
    #[serde(with = "rational::as_str")]
    pub rate: Rational,
    pub failures: Vec<FailedInstance>,
}

/// Random digraph with `δ⁺ >= min_out`: arcs kept independently with a
/// density drawn from `[0.3, 0.9)`, then each deficient vertex gains the
/// first missing out-arcs of its own random order.
///
/// Neither the density nor the orders depend on `min_out`, so for a fixed
/// seed the samples are nested as `min_out` grows.
pub fn sample_min_out_digraph(n: usize, min_out: usize, seed: u64) -> Digraph {
    let mut rng = rng_from_seed(seed);
    let p = rng.gen_range(0.3..0.9);
    random_min_out_degree(n, min_out, p, &mut rng)
}

/// Samples `trials` digraphs with `δ⁺ >= min_out` and counts those with a
/// perfect fractional `(r, r-2)`-tiling; the rest are kept with certificates.
pub fn desk_check_at(r: usize, n: usize, min_out: usize, trials: usize, seed: u64) -> Result<DeskCheck> {
    if r < 3 || !n.is_multiple_of(r) {
        return Err(Error::Precondition(format!("requires r >= 3 and r | n, got r={r}, n={n}")));
    }
    if min_out >= n {
        return Err(Error::InvalidParameters(format!("out-degree {min_out} impossible on {n} vertices")));
    }
    use rayon::prelude::*;
    let results: Vec<(u64, Digraph, Result<FractionalOutcome>)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = instance_seed(seed, i);
            let d = sample_min_out_digraph(n, min_out, s);
            let outcome = build_copy_hypergraph(&d, r).and_then(|f| decide_fractional(&f));
            (s, d, outcome)
        })
        .collect();
    let mut perfect = 0;
    let mut failures = Vec::new();
    for (s, d, outcome) in results {
        match outcome? {
            FractionalOutcome::Perfect { .. } => perfect += 1,
            FractionalOutcome::Certificate { certificate, .. } => failures.push(FailedInstance {
                seed: s,
                arcs: d.arcs().collect(),
                certificate,
            }),
        }
    }
    Ok(DeskCheck {
        r,
        n,
        min_out_degree: min_out,
        trials,
        perfect,
        rate: if trials == 0 {
            Rational::zero()
        } else {
            Rational::new((perfect as i64).into(), (trials as i64).into())
        },
        failures,
    })
}

/// Desk check at `δ⁺ >= ⌈c_r · n⌉ + margin`, where `c_r` is the proven
/// sufficient coefficient for `r`.
pub fn desk_check_thresholds(r: usize, n: usize, trials: usize, margin: i64, seed: u64) -> Result<DeskCheck> {
    let base = threshold_formula(r)?.proven.ceil_times(n) as i64;
    let min_out = (base + margin).clamp(0, n.saturating_sub(1) as i64) as usize;
    desk_check_at(r, n, min_out, trials, seed)
}
