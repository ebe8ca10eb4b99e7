//! Experiment orchestration: conjecture probes, config-driven sweeps with
//! versioned CSV output, and file round-trips.
//!
//! Every non-timing output is a pure function of the configuration. Instances
//! run in parallel, each owning its state, and results are gathered in
//! instance order before anything is aggregated or written.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{build_triangle_extremal, build_clique_extremal, random_coloured, ColourMode};
use crate::convert::{convert, count_bad_triples, verify_conversion, within_global_bad_bound};
use crate::error::{Error, Result};
use crate::fractional::{build_copy_hypergraph, decide_fractional, sample_min_out_digraph, FractionalOutcome};
use crate::graph::{degree_profile, EdgeColouredGraph};
use crate::io::{parse_document, write_coloured, write_weights, Document};
use crate::random::{instance_seed, rng_from_seed};
use crate::rational::{self, Rational};
use crate::tiling::{has_perfect_rainbow_tiling, PerfectOutcome};

pub use crate::thresholds::{threshold_formula, Surd, ThresholdFormula};

/// Version tag written in the first line of every CSV.
pub const CSV_SCHEMA: &str = "rtiling-experiment/1";

const SAMPLE_ATTEMPTS: u64 = 200;

/// `⌈(1 - (r-1)/(r^2-2)) n⌉`.
pub fn conjectured_degree(r: usize, n: usize) -> Result<usize> {
    let c = threshold_formula(r)?.conjectured * Rational::from_integer((n as i64).into());
    Ok(rational::ceil_to_usize(&c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionCheck {
    pub name: String,
    pub n: usize,
    pub min_colour_degree: usize,
    /// Conjectured degree bound at this `n`.
    pub bound: usize,
    pub below_bound: bool,
    /// `yes`, `no`, `unknown`, or `skipped` when too large to search.
    pub perfect_tiling: String,
}

/// Largest construction order searched for a perfect tiling.
const CONSTRUCTION_SEARCH_LIMIT: usize = 24;

/// Degree and tiling checks on the extremal constructions for `r`.
pub fn construction_checks(r: usize, budget: u64) -> Result<Vec<ConstructionCheck>> {
    let mut graphs = vec![(format!("clique_extremal({r},{r})"), build_clique_extremal(r, r)?)];
    if r == 3 {
        graphs.push(("triangle_extremal(21,7)".to_string(), build_triangle_extremal(21, 7)?));
    }
    graphs
        .into_iter()
        .map(|(name, g)| {
            let n = g.n();
            let bound = conjectured_degree(r, n)?;
            let delta = degree_profile(&g).min_colour_degree;
            let perfect_tiling = if n <= CONSTRUCTION_SEARCH_LIMIT {
                has_perfect_rainbow_tiling(&g, r, budget)?.label().to_string()
            } else {
                "skipped".to_string()
            };
            Ok(ConstructionCheck {
                name,
                n,
                min_colour_degree: delta,
                bound,
                below_bound: delta < bound,
                perfect_tiling,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeInstance {
    pub trial: usize,
    pub seed: u64,
    /// `None` when no sample reached the target band.
    pub min_colour_degree: Option<usize>,
    pub at_bound: bool,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    pub min_colour_degree: usize,
    /// The graph in `ecg` text form.
    pub graph: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub r: usize,
    pub n: usize,
    pub bound: usize,
    pub trials: usize,
    pub at_bound: usize,
    pub below_bound: usize,
    pub tiled: usize,
    pub unknown: usize,
    /// Tiling-free instances at or above the bound that survived a re-check
    /// with ten times the budget.
    pub potential_counterexamples: Vec<Counterexample>,
    pub instances: Vec<ProbeInstance>,
    pub constructions: Vec<ConstructionCheck>,
}

/// Random coloured graph with minimum colour degree at least `bound - 1`,
/// by rejection over dense uniformly coloured graphs.
fn sample_near_bound(n: usize, bound: usize, seed: u64) -> Result<Option<(u64, EdgeColouredGraph)>> {
    for attempt in 0..SAMPLE_ATTEMPTS {
        let s = instance_seed(seed, attempt);
        let mut rng = rng_from_seed(s);
        let p = rng.gen_range(0.75..=1.0);
        let q = rng.gen_range(n as u64..=4 * n as u64).max(1);
        let g = random_coloured(n, p, q, rng.gen(), ColourMode::Uniform)?;
        if degree_profile(&g).min_colour_degree + 1 >= bound {
            return Ok(Some((s, g)));
        }
    }
    Ok(None)
}

fn probe_instance(r: usize, n: usize, bound: usize, seed: u64, budget: u64) -> Result<(ProbeInstance, Option<Counterexample>)> {
    let Some((s, g)) = sample_near_bound(n, bound, seed)? else {
        return Ok((
            ProbeInstance {
                trial: 0,
                seed,
                min_colour_degree: None,
                at_bound: false,
                outcome: "no_sample".into(),
            },
            None,
        ));
    };
    let delta = degree_profile(&g).min_colour_degree;
    let at_bound = delta >= bound;
    let mut outcome = has_perfect_rainbow_tiling(&g, r, budget)?;
    let mut flagged = None;
    if at_bound && matches!(outcome, PerfectOutcome::No { .. }) {
        outcome = has_perfect_rainbow_tiling(&g, r, budget.saturating_mul(10))?;
        if matches!(outcome, PerfectOutcome::No { .. }) {
            flagged = Some(Counterexample {
                seed: s,
                min_colour_degree: delta,
                graph: write_coloured(&g),
            });
        }
    }
    Ok((
        ProbeInstance {
            trial: 0,
            seed: s,
            min_colour_degree: Some(delta),
            at_bound,
            outcome: outcome.label().into(),
        },
        flagged,
    ))
}

/// Samples coloured graphs at and just below the conjectured degree bound and
/// searches each for a perfect rainbow-`K_r`-tiling.
pub fn probe_conjecture(r: usize, n: usize, trials: usize, seed: u64, budget: u64) -> Result<ProbeReport> {
    if r < 3 || !n.is_multiple_of(r) {
        return Err(Error::Precondition(format!("requires r >= 3 and r | n, got r={r}, n={n}")));
    }
    let bound = conjectured_degree(r, n)?;
    let runs: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|t| probe_instance(r, n, bound, instance_seed(seed, t as u64), budget))
        .collect::<Result<_>>()?;
    let mut report = ProbeReport {
        r,
        n,
        bound,
        trials,
        at_bound: 0,
        below_bound: 0,
        tiled: 0,
        unknown: 0,
        potential_counterexamples: Vec::new(),
        instances: Vec::with_capacity(trials),
        constructions: construction_checks(r, budget)?,
    };
    for (t, (mut inst, flagged)) in runs.into_iter().enumerate() {
        inst.trial = t;
        if inst.min_colour_degree.is_some() {
            if inst.at_bound {
                report.at_bound += 1;
            } else {
                report.below_bound += 1;
            }
        }
        match inst.outcome.as_str() {
            "yes" => report.tiled += 1,
            "unknown" => report.unknown += 1,
            _ => {}
        }
        report.potential_counterexamples.extend(flagged);
        report.instances.push(inst);
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Fractional tiling sweep over minimum out-degree.
    Lp,
    /// Perfect rainbow tiling near the conjectured bound.
    Probe,
    /// Coloured-graph to digraph conversion checks.
    Conversion,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(default)]
    pub r: Vec<usize>,
    #[serde(default)]
    pub n: Vec<usize>,
    /// Absolute minimum out-degrees (`lp`).
    #[serde(default)]
    pub min_out: Vec<usize>,
    /// Offsets from the proven out-degree threshold (`lp`); used when
    /// `min_out` is empty.
    #[serde(default)]
    pub margin: Vec<i64>,
    /// Edge densities (`conversion`).
    #[serde(default)]
    pub p: Vec<f64>,
}

fn default_name() -> String {
    "experiment".into()
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}
fn default_trials() -> usize {
    10
}
fn default_budget() -> u64 {
    1_000_000
}
fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub kind: ExperimentKind,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Instances per seed and grid point.
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_budget")]
    pub budget: u64,
    /// Record wall time per instance; off gives fully reproducible files.
    #[serde(default = "default_true")]
    pub timing: bool,
    #[serde(default)]
    pub grid: Grid,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map_or(0, |span| text[..span.start.min(text.len())].matches('\n').count() + 1);
            Error::Config {
                line,
                message: e.message().to_string(),
            }
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// One grid point; `param` names the swept value.
#[derive(Clone, Debug, PartialEq)]
struct Point {
    r: usize,
    n: usize,
    param: Param,
}

#[derive(Clone, Debug, PartialEq)]
enum Param {
    MinOut(usize),
    Density(f64),
    None,
}

impl Param {
    fn label(&self) -> String {
        match self {
            Param::MinOut(d) => format!("min_out={d}"),
            Param::Density(p) => format!("p={p}"),
            Param::None => "-".into(),
        }
    }
}

fn grid_points(cfg: &ExperimentConfig) -> Result<Vec<Point>> {
    let g = &cfg.grid;
    let mut points = Vec::new();
    match cfg.kind {
        ExperimentKind::Lp => {
            for &r in &g.r {
                for &n in &g.n {
                    let degrees: Vec<usize> = if g.min_out.is_empty() {
                        let base = threshold_formula(r)?.proven.ceil_times(n) as i64;
                        let margins = if g.margin.is_empty() { vec![0] } else { g.margin.clone() };
                        margins
                            .iter()
                            .map(|m| (base + m).clamp(0, n.saturating_sub(1) as i64) as usize)
                            .collect()
                    } else {
                        g.min_out.clone()
                    };
                    for d in degrees {
                        points.push(Point { r, n, param: Param::MinOut(d) });
                    }
                }
            }
        }
        ExperimentKind::Probe => {
            for &r in &g.r {
                for &n in &g.n {
                    points.push(Point { r, n, param: Param::None });
                }
            }
        }
        ExperimentKind::Conversion => {
            let ps = if g.p.is_empty() { vec![0.5] } else { g.p.clone() };
            for &n in &g.n {
                for &p in &ps {
                    if !(0.0..=1.0).contains(&p) {
                        return Err(Error::InvalidParameters(format!("p={p}: requires 0 <= p <= 1")));
                    }
                    points.push(Point { r: 0, n, param: Param::Density(p) });
                }
            }
        }
    }
    Ok(points)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceRow {
    pub instance: usize,
    pub kind: ExperimentKind,
    pub r: usize,
    pub n: usize,
    pub param: String,
    pub seed: u64,
    pub outcome: String,
    /// Kind-specific measurement: LP value, minimum colour degree, or number
    /// of bad triples.
    pub value: String,
    /// Certificate or witness file, relative to the output directory.
    pub artifact: String,
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub kind: ExperimentKind,
    pub r: usize,
    pub n: usize,
    pub param: String,
    pub trials: usize,
    pub successes: usize,
    pub unknown: usize,
    /// `successes / trials`, exact.
    pub rate: String,
    pub rate_decimal: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentOutput {
    pub name: String,
    pub rows: Vec<InstanceRow>,
    pub summary: Vec<SummaryRow>,
}

struct Job {
    id: usize,
    point: usize,
    seed: u64,
}

/// Result of one instance plus an optional artifact to store.
struct Done {
    outcome: String,
    value: String,
    success: bool,
    unknown: bool,
    artifact: Option<(String, String)>,
}

fn run_job(kind: ExperimentKind, point: &Point, seed: u64, budget: u64, id: usize) -> Result<Done> {
    match (kind, &point.param) {
        (ExperimentKind::Lp, &Param::MinOut(d)) => {
            if d >= point.n {
                return Err(Error::InvalidParameters(format!("out-degree {d} impossible on {} vertices", point.n)));
            }
            let dg = sample_min_out_digraph(point.n, d, seed);
            let f = build_copy_hypergraph(&dg, point.r)?;
            Ok(match decide_fractional(&f)? {
                FractionalOutcome::Perfect { weighting } => Done {
                    outcome: "perfect".into(),
                    value: rational::format(&weighting.value),
                    success: true,
                    unknown: false,
                    artifact: None,
                },
                FractionalOutcome::Certificate { value, certificate } => Done {
                    outcome: "certificate".into(),
                    value: rational::format(&value),
                    success: false,
                    unknown: false,
                    artifact: Some((format!("instance-{id}.cert"), write_weights(&certificate.omega))),
                },
            })
        }
        (ExperimentKind::Probe, _) => {
            let bound = conjectured_degree(point.r, point.n)?;
            let (inst, flagged) = probe_instance(point.r, point.n, bound, seed, budget)?;
            let band = if inst.at_bound { "at" } else { "below" };
            Ok(Done {
                outcome: if inst.min_colour_degree.is_some() {
                    format!("{}_{band}", inst.outcome)
                } else {
                    inst.outcome.clone()
                },
                value: inst.min_colour_degree.map_or("-".into(), |d| d.to_string()),
                success: inst.outcome == "yes",
                unknown: inst.outcome == "unknown",
                artifact: flagged.map(|c| (format!("instance-{id}.ecg"), c.graph)),
            })
        }
        (ExperimentKind::Conversion, &Param::Density(p)) => {
            let n = point.n;
            let g = random_coloured(n, p, n.max(1) as u64, seed, ColourMode::Uniform)?;
            let result = convert(&g);
            let holds = verify_conversion(&g, &result).holds();
            let bad = count_bad_triples(&g, &result.digraph, None);
            let ok = holds && within_global_bad_bound(bad, n);
            Ok(Done {
                outcome: if ok { "holds" } else { "fails" }.into(),
                value: bad.to_string(),
                success: ok,
                unknown: false,
                artifact: None,
            })
        }
        _ => unreachable!("grid points match their kind"),
    }
}

/// Runs every (grid point, seed, trial) instance. Instance seeds depend only
/// on the configured seed and trial index, so swept parameters see the same
/// random streams.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> Result<ExperimentOutput> {
    let points = grid_points(cfg)?;
    let mut jobs = Vec::new();
    for (pi, _) in points.iter().enumerate() {
        for &seed in &cfg.seeds {
            for t in 0..cfg.trials {
                jobs.push(Job {
                    id: jobs.len(),
                    point: pi,
                    seed: instance_seed(seed, t as u64),
                });
            }
        }
    }
    let done: Vec<(Done, u64)> = jobs
        .par_iter()
        .map(|job| {
            let start = Instant::now();
            let d = run_job(cfg.kind, &points[job.point], job.seed, cfg.budget, job.id)?;
            Ok((d, start.elapsed().as_millis() as u64))
        })
        .collect::<Result<_>>()?;

    let artifact_dir: Option<PathBuf> = out_dir.map(|d| d.join(format!("{}-artifacts", cfg.name)));
    let mut rows = Vec::with_capacity(jobs.len());
    let mut tallies = vec![(0usize, 0usize, 0usize); points.len()];
    for (job, (d, ms)) in jobs.iter().zip(done) {
        let point = &points[job.point];
        let tally = &mut tallies[job.point];
        tally.0 += 1;
        tally.1 += d.success as usize;
        tally.2 += d.unknown as usize;
        let artifact = match (&d.artifact, &artifact_dir) {
            (Some((file, body)), Some(dir)) => {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join(file), body)?;
                format!("{}-artifacts/{file}", cfg.name)
            }
            _ => "-".into(),
        };
        rows.push(InstanceRow {
            instance: job.id,
            kind: cfg.kind,
            r: point.r,
            n: point.n,
            param: point.param.label(),
            seed: job.seed,
            outcome: d.outcome,
            value: d.value,
            artifact,
            wall_ms: cfg.timing.then_some(ms),
        });
    }
    let summary = points
        .iter()
        .zip(tallies)
        .map(|(p, (trials, successes, unknown))| {
            let rate = if trials == 0 {
                Rational::zero()
            } else {
                Rational::new((successes as i64).into(), (trials as i64).into())
            };
            SummaryRow {
                kind: cfg.kind,
                r: p.r,
                n: p.n,
                param: p.param.label(),
                trials,
                successes,
                unknown,
                rate_decimal: format!("{:.4}", rational::to_f64(&rate)),
                rate: rational::format(&rate),
            }
        })
        .collect();
    let out = ExperimentOutput {
        name: cfg.name.clone(),
        rows,
        summary,
    };
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{}.csv", cfg.name)), out.instances_csv()?)?;
        std::fs::write(dir.join(format!("{}-summary.csv", cfg.name)), out.summary_csv()?)?;
    }
    Ok(out)
}

const INSTANCE_COLUMNS: [&str; 10] = [
    "instance", "kind", "r", "n", "param", "seed", "outcome", "value", "artifact", "wall_ms",
];
const SUMMARY_COLUMNS: [&str; 9] = [
    "kind", "r", "n", "param", "trials", "successes", "unknown", "rate", "rate_decimal",
];

fn csv_with_header<T: Serialize>(table: &str, columns: &[&str], rows: &[T]) -> Result<String> {
    let mut buf = format!("# schema {CSV_SCHEMA} {table}\n").into_bytes();
    {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut buf);
        w.write_record(columns)?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

impl ExperimentOutput {
    pub fn instances_csv(&self) -> Result<String> {
        csv_with_header("instances", &INSTANCE_COLUMNS, &self.rows)
    }

    pub fn summary_csv(&self) -> Result<String> {
        csv_with_header("summary", &SUMMARY_COLUMNS, &self.summary)
    }
}

/// Parses a file, writes it back out and parses again; the two parses must
/// agree.
pub fn io_roundtrip(path: impl AsRef<Path>) -> Result<Document> {
    let first = parse_document(&std::fs::read_to_string(path)?)?;
    let second = parse_document(&first.to_text())?;
    if first != second {
        return Err(Error::Precondition("document changed across a write/parse cycle".into()));
    }
    Ok(first)
}
