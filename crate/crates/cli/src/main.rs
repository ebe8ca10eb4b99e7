use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rtiling_core::closedness::{closedness_report, connector_counts, count_connectors, verify_weak_pair, weak_closure};
use rtiling_core::constructions::{
    build_triangle_extremal, build_clique_extremal, build_proper_bipartite, build_rainbow_complete, random_coloured, ColourMode,
};
use rtiling_core::convert::{
    convert, count_bad_triples, sample_reduced_digraph, verify_conversion, within_global_bad_bound, SamplerMode,
};
use rtiling_core::fractional::{
    build_copy_hypergraph, certificate_link_inequality, decide_fractional, desk_check_at, desk_check_thresholds,
    farkas_certificate, solve_fractional_matching, verify_certificate, FractionalOutcome,
};
use rtiling_core::graph::degree_profile;
use rtiling_core::harness::{io_roundtrip, probe_conjecture, run_experiment, threshold_formula, ExperimentConfig};
use rtiling_core::io::{
    coloured_to_json, digraph_to_json, parse_densities, parse_weights, read_coloured, read_digraph, write_coloured,
    write_digraph, write_weights, Document,
};
use rtiling_core::rainbow::{find_rainbow_clique, half_degree_triangle_verdict};
use rtiling_core::rational;
use rtiling_core::tiling::{
    abhp_bound, eg_bound, has_perfect_rainbow_tiling, max_family_tiling, max_matching, max_rainbow_tiling,
    perfect_family_tiling,
};
use rtiling_core::{EdgeColouredGraph, Digraph};

/// Rainbow clique tilings: constructions, exact solvers, fractional
/// relaxations and experiments.
#[derive(Parser)]
#[command(name = "rtiling", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for exact searches.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,
    /// Report format. Graphs and certificates default to their text formats.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write results into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build an edge-coloured graph.
    #[command(subcommand)]
    Construct(Construct),
    /// Rainbow clique search.
    #[command(subcommand)]
    Rainbow(Rainbow),
    /// Reduce an edge-coloured graph to a digraph, or sample one from pair
    /// densities.
    Convert(ConvertArgs),
    /// Exact tiling solvers.
    #[command(subcommand)]
    Tiling(Tiling),
    /// Fractional tilings and their dual certificates.
    #[command(subcommand)]
    Lp(Lp),
    /// Connector counts and weak connectivity.
    #[command(subcommand)]
    Closed(Closed),
    /// Degree bounds and threshold coefficients.
    #[command(subcommand)]
    Bound(Bound),
    /// Random search near the conjectured degree threshold.
    Probe {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Run a TOML-configured experiment.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Parse a file, write it back and parse again.
    Roundtrip {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// No rainbow triangle tiling of size k, high colour degree.
    TriangleExtremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// No perfect rainbow K_r tiling, on (r^2-2)m vertices.
    CliqueExtremal {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
    },
    /// Properly coloured balanced complete bipartite graph.
    Bipartite {
        #[arg(long)]
        n: usize,
    },
    /// Complete graph with all colours distinct.
    RainbowComplete {
        #[arg(long)]
        n: usize,
    },
    /// Random graph with random colours.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Palette size.
        #[arg(long)]
        q: u64,
        /// Give kept edges distinct colours.
        #[arg(long)]
        injective: bool,
    },
}

#[derive(Subcommand)]
enum Rainbow {
    /// Lexicographically first rainbow K_r.
    Find {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Rainbow triangle under the colour-degree condition n/2.
    Triangle {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct ConvertArgs {
    /// Edge-coloured graph to reduce.
    #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
    input: Option<PathBuf>,
    /// Recount the guarantees and bad triples of the reduction.
    #[arg(long, requires = "input")]
    verify: bool,
    /// Pair-density matrix to sample a reduced digraph from.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Refuse pairs that need the one-way orientation branch.
    #[arg(long, requires = "matrix")]
    strict: bool,
}

#[derive(Subcommand)]
enum Tiling {
    /// Maximum rainbow K_r tiling.
    Max {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// Decide whether a perfect rainbow K_r tiling exists.
    Perfect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// Tilings of a digraph by r-vertex digraphs of minimum out-degree s.
    Family {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// Drop the complete-base requirement.
        #[arg(long)]
        star: bool,
        /// Only decide whether a perfect tiling exists.
        #[arg(long)]
        perfect: bool,
    },
}

#[derive(Subcommand)]
enum Lp {
    /// Maximum fractional (r, r-2)-tiling of a digraph.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Perfect fractional tiling or a dual certificate, whichever exists.
    Certificate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Check a certificate file against a digraph.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Sample digraphs with a minimum out-degree and count perfect
    /// fractional tilings.
    Desk {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Absolute minimum out-degree.
        #[arg(long, conflicts_with = "margin")]
        min_out: Option<usize>,
        /// Offset from the proven out-degree threshold.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        margin: i64,
    },
}

#[derive(Subcommand)]
enum Closed {
    /// Connector counts of length s.
    Connectors {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Count a single pair instead of reporting the minimum.
        #[arg(long, requires = "y")]
        x: Option<usize>,
        #[arg(long, requires = "x")]
        y: Option<usize>,
    },
    /// Weak connectivity closure of a digraph.
    Weak {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        smax: usize,
        /// Search directly for a witness for one pair (length 1 or 2).
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        pair: Option<Vec<usize>>,
        #[arg(long, default_value_t = 2)]
        s: usize,
    },
}

#[derive(Subcommand)]
enum Bound {
    /// Matching lower bound from the edge count.
    Eg {
        #[arg(long, required_unless_present = "input")]
        n: Option<usize>,
        #[arg(long, required_unless_present = "input")]
        e: Option<usize>,
        /// Graph whose underlying edges are counted and matched.
        #[arg(long, conflicts_with_all = ["n", "e"])]
        input: Option<PathBuf>,
    },
    /// Edge count that forces a given number of disjoint triangles.
    Abhp {
        #[arg(long)]
        n: usize,
        /// Fraction of vertices to cover, as `p/q`.
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "0")]
        gamma: String,
    },
    /// Colour-degree threshold coefficients for perfect tilings.
    Threshold {
        #[arg(long)]
        r: usize,
        /// Also report the least degree at this order.
        #[arg(long)]
        n: Option<usize>,
    },
}

/// Where results go.
struct Sink {
    format: Option<Format>,
    out: Option<PathBuf>,
}

impl Sink {
    fn write(&self, file: &str, body: &str) -> Result<()> {
        match &self.out {
            Some(dir) => {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                let path = dir.join(file);
                std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
                eprintln!("wrote {}", path.display());
            }
            None => print!("{body}"),
        }
        Ok(())
    }

    fn report(&self, name: &str, value: &Value) -> Result<()> {
        match self.format {
            Some(Format::Csv) => self.write(&format!("{name}.csv"), &to_csv(value)?),
            _ => self.write(&format!("{name}.json"), &(serde_json::to_string_pretty(value)? + "\n")),
        }
    }

    fn coloured(&self, name: &str, g: &EdgeColouredGraph) -> Result<()> {
        match self.format {
            Some(Format::Json) => self.write(&format!("{name}.json"), &(coloured_to_json(g).to_string() + "\n")),
            Some(Format::Csv) => bail!("graphs have no CSV form"),
            None => self.write(&format!("{name}.ecg"), &write_coloured(g)),
        }
    }

    fn digraph(&self, name: &str, d: &Digraph) -> Result<()> {
        match self.format {
            Some(Format::Json) => self.write(&format!("{name}.json"), &(digraph_to_json(d).to_string() + "\n")),
            Some(Format::Csv) => bail!("digraphs have no CSV form"),
            None => self.write(&format!("{name}.dg"), &write_digraph(d)),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Arrays of objects become one row per element; objects become
/// `key,value` rows.
fn to_csv(value: &Value) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match value {
        Value::Array(items) if items.is_empty() => return Ok(String::new()),
        Value::Array(items) if items.iter().all(Value::is_object) => {
            let mut columns: Vec<String> = Vec::new();
            for item in items {
                for k in item.as_object().unwrap().keys() {
                    if !columns.contains(k) {
                        columns.push(k.clone());
                    }
                }
            }
            w.write_record(&columns)?;
            for item in items {
                w.write_record(columns.iter().map(|c| item.get(c).map(cell).unwrap_or_default()))?;
            }
        }
        Value::Object(map) => {
            w.write_record(["key", "value"])?;
            for (k, v) in map {
                w.write_record([k.as_str(), &cell(v)])?;
            }
        }
        other => {
            w.write_record(["value"])?;
            w.write_record([cell(other)])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn parse_rational(s: &str) -> Result<rational::Rational> {
    rational::parse(s.trim()).with_context(|| format!("not a rational: {s:?}"))
}

fn read_weights(path: &Path) -> Result<Vec<rational::Rational>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_weights(&text)?)
}

fn run(cli: Cli) -> Result<()> {
    let Global { seed, budget, format, out } = cli.global;
    let sink = Sink { format, out };
    match cli.command {
        Command::Construct(c) => {
            let (name, g) = match c {
                Construct::TriangleExtremal { n, k } => (format!("triangle-extremal-{n}-{k}"), build_triangle_extremal(n, k)?),
                Construct::CliqueExtremal { r, m } => (format!("clique-extremal-{r}-{m}"), build_clique_extremal(r, m)?),
                Construct::Bipartite { n } => (format!("bipartite-{n}"), build_proper_bipartite(n)?),
                Construct::RainbowComplete { n } => (format!("rainbow-{n}"), build_rainbow_complete(n)),
                Construct::Random { n, p, q, injective } => {
                    let mode = if injective { ColourMode::Injective } else { ColourMode::Uniform };
                    (format!("random-{n}-{seed}"), random_coloured(n, p, q, seed, mode)?)
                }
            };
            sink.coloured(&name, &g)
        }
        Command::Rainbow(Rainbow::Find { input, r }) => {
            let g = read_coloured(&input)?;
            let clique = find_rainbow_clique(&g, r);
            sink.report("rainbow", &json!({ "r": r, "found": clique.is_some(), "vertices": clique }))
        }
        Command::Rainbow(Rainbow::Triangle { input }) => {
            let g = read_coloured(&input)?;
            sink.report("triangle", &serde_json::to_value(half_degree_triangle_verdict(&g)?)?)
        }
        Command::Convert(args) => {
            if let Some(path) = args.matrix {
                let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                let m = parse_densities(&text)?;
                let mode = if args.strict { SamplerMode::Strict } else { SamplerMode::Lenient };
                let d = sample_reduced_digraph(&m, seed, mode)?;
                return sink.digraph(&format!("reduced-{seed}"), &d);
            }
            let g = read_coloured(args.input.as_ref().expect("clap enforces one input"))?;
            let result = convert(&g);
            if args.verify {
                let check = verify_conversion(&g, &result);
                let bad = count_bad_triples(&g, &result.digraph, None);
                let report = json!({
                    "n": g.n(),
                    "arcs": result.digraph.arc_count(),
                    "guarantees": result.guarantees,
                    "verification": check,
                    "holds": check.holds(),
                    "bad_triples": bad,
                    "within_bad_bound": within_global_bad_bound(bad, g.n()),
                });
                sink.report("conversion", &report)?;
                if !check.holds() {
                    bail!("conversion guarantees failed");
                }
                Ok(())
            } else {
                sink.digraph("converted", &result.digraph)
            }
        }
        Command::Tiling(t) => match t {
            Tiling::Max { input, r } => {
                let g = read_coloured(&input)?;
                sink.report("tiling", &serde_json::to_value(max_rainbow_tiling(&g, r, budget)?)?)
            }
            Tiling::Perfect { input, r } => {
                let g = read_coloured(&input)?;
                sink.report("tiling", &serde_json::to_value(has_perfect_rainbow_tiling(&g, r, budget)?)?)
            }
            Tiling::Family { input, r, s, star, perfect } => {
                let d = read_digraph(&input)?;
                let value = if perfect {
                    serde_json::to_value(perfect_family_tiling(&d, r, s, star, budget)?)?
                } else {
                    serde_json::to_value(max_family_tiling(&d, r, s, star, budget)?)?
                };
                sink.report("tiling", &value)
            }
        },
        Command::Lp(l) => match l {
            Lp::Solve { input, r } => {
                let f = build_copy_hypergraph(&read_digraph(&input)?, r)?;
                let w = solve_fractional_matching(&f);
                sink.report("fractional", &json!({ "copies": f.edges, "solution": w }))
            }
            Lp::Certificate { input, r } => {
                let f = build_copy_hypergraph(&read_digraph(&input)?, r)?;
                match decide_fractional(&f)? {
                    FractionalOutcome::Perfect { weighting } => {
                        sink.report("fractional", &json!({ "outcome": "perfect", "solution": weighting }))
                    }
                    FractionalOutcome::Certificate { .. } if sink.format.is_none() => {
                        sink.write("certificate.cert", &write_weights(&farkas_certificate(&f)?.omega))
                    }
                    outcome => sink.report("fractional", &serde_json::to_value(outcome)?),
                }
            }
            Lp::Check { input, cert, r } => {
                let f = build_copy_hypergraph(&read_digraph(&input)?, r)?;
                let omega = read_weights(&cert)?;
                if omega.len() != f.n {
                    bail!("certificate has {} weights for {} vertices", omega.len(), f.n);
                }
                let report = verify_certificate(&f, &omega);
                let links = if r == 3 {
                    (0..f.n)
                        .map(|v| certificate_link_inequality(&f, &omega, v))
                        .collect::<rtiling_core::Result<Vec<_>>>()?
                } else {
                    Vec::new()
                };
                let ok = report.holds() && links.iter().all(|l| l.holds);
                sink.report("check", &json!({ "valid": ok, "report": report, "links": links }))?;
                if !ok {
                    bail!("certificate rejected");
                }
                Ok(())
            }
            Lp::Desk { r, n, trials, min_out, margin } => {
                let check = match min_out {
                    Some(d) => desk_check_at(r, n, d, trials, seed)?,
                    None => desk_check_thresholds(r, n, trials, margin, seed)?,
                };
                sink.report("desk", &serde_json::to_value(check)?)
            }
        },
        Command::Closed(c) => match c {
            Closed::Connectors { input, r, s, x, y } => {
                let g = read_coloured(&input)?;
                if let (Some(x), Some(y)) = (x, y) {
                    let count = count_connectors(&g, x, y, r, s)?;
                    return sink.report("connectors", &json!({ "x": x, "y": y, "r": r, "s": s, "count": count }));
                }
                if sink.format == Some(Format::Csv) {
                    let counts = connector_counts(&g, r, s)?;
                    let rows: Vec<Value> = (0..g.n())
                        .flat_map(|x| (x + 1..g.n()).map(move |y| (x, y)))
                        .map(|(x, y)| json!({ "x": x, "y": y, "count": counts.get(x, y) }))
                        .collect();
                    return sink.report("connectors", &Value::Array(rows));
                }
                sink.report("closedness", &serde_json::to_value(closedness_report(&g, r, s)?)?)
            }
            Closed::Weak { input, smax, pair, s } => {
                let d = read_digraph(&input)?;
                if let Some(p) = pair {
                    let witness = verify_weak_pair(&d, p[0], p[1], s)?;
                    return sink.report(
                        "weak-pair",
                        &json!({ "x": p[0], "y": p[1], "s": s, "connected": witness.is_some(), "witness": witness }),
                    );
                }
                let wc = weak_closure(&d, smax);
                let pairs: Vec<Value> = wc
                    .certified_pairs()
                    .into_iter()
                    .map(|(x, y, s)| json!({ "x": x, "y": y, "s": s }))
                    .collect();
                if sink.format == Some(Format::Csv) {
                    return sink.report("weak", &Value::Array(pairs));
                }
                sink.report(
                    "weak",
                    &json!({
                        "n": wc.n,
                        "s_max": wc.s_max,
                        "all_pairs": wc.all_pairs_certified(),
                        "pairs": pairs,
                        "classes": wc.classes,
                        "rounds": wc.rounds,
                    }),
                )
            }
        },
        Command::Bound(b) => match b {
            Bound::Eg { n, e, input } => {
                let value = match input {
                    Some(path) => {
                        let g = read_coloured(&path)?.underlying();
                        let (n, e) = (g.n(), g.edge_count());
                        let m = max_matching(&g);
                        json!({ "n": n, "e": e, "bound": eg_bound(n, e), "matching": m.len(), "edges": m })
                    }
                    None => {
                        let (n, e) = (n.unwrap(), e.unwrap());
                        json!({ "n": n, "e": e, "bound": eg_bound(n, e) })
                    }
                };
                sink.report("eg", &value)
            }
            Bound::Abhp { n, alpha, gamma } => {
                let bound = abhp_bound(n, &parse_rational(&alpha)?, &parse_rational(&gamma)?)?;
                sink.report(
                    "abhp",
                    &json!({ "n": n, "bound": rational::format(&bound), "approx": rational::to_f64(&bound) }),
                )
            }
            Bound::Threshold { r, n } => {
                let t = threshold_formula(r)?;
                let mut value = json!({
                    "r": r,
                    "proven": t.proven.to_string(),
                    "proven_decimal": t.proven.round_decimal(4),
                    "conjectured": rational::format(&t.conjectured),
                });
                if let Some(n) = n {
                    value["proven_degree"] = json!(t.proven.ceil_times(n));
                    value["conjectured_degree"] = json!(rtiling_core::harness::conjectured_degree(r, n)?);
                }
                sink.report("threshold", &value)
            }
        },
        Command::Probe { r, n, trials } => {
            let report = probe_conjecture(r, n, trials, seed, budget)?;
            if sink.format == Some(Format::Csv) {
                return sink.report("probe", &serde_json::to_value(&report.instances)?);
            }
            sink.report("probe", &serde_json::to_value(&report)?)
        }
        Command::Experiment { config } => {
            let cfg = ExperimentConfig::read(&config)?;
            let result = run_experiment(&cfg, sink.out.as_deref())?;
            match (&sink.out, sink.format) {
                (Some(dir), _) => {
                    eprintln!("wrote {}", dir.join(format!("{}.csv", cfg.name)).display());
                    eprintln!("wrote {}", dir.join(format!("{}-summary.csv", cfg.name)).display());
                    Ok(())
                }
                (None, Some(Format::Json)) => sink.report(&cfg.name, &serde_json::to_value(&result)?),
                (None, _) => {
                    print!("{}", result.instances_csv()?);
                    print!("{}", result.summary_csv()?);
                    Ok(())
                }
            }
        }
        Command::Roundtrip { input } => {
            let doc = io_roundtrip(&input)?;
            let (kind, size) = match &doc {
                Document::Coloured(g) => ("coloured", g.n()),
                Document::Digraph(d) => ("digraph", d.n()),
                Document::Densities(m) => ("densities", m.k()),
                Document::Weights(w) => ("weights", w.len()),
            };
            let summary = match &doc {
                Document::Coloured(g) => json!({ "min_colour_degree": degree_profile(g).min_colour_degree }),
                _ => Value::Null,
            };
            sink.report("roundtrip", &json!({ "kind": kind, "n": size, "ok": true, "details": summary }))
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
