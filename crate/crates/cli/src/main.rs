use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use distvc::ball::{b_ell, distance_vc, DistanceVcOptions};
use distvc::generators::{cograph_with_tree, family, gnl, pairs_hypergraph, random_cotree, GraphFamily};
use distvc::graph::{parse_graph, write_graph, EdgeOrder, Graph};
use distvc::harness::{check_instance, run_experiments, CheckOptions, ExperimentConfig, Status};
use distvc::hypergraph::{
    largest_shattered_set, packing_number, parse_hypergraph, transversality, write_hypergraph, Hypergraph,
    ShatterMode, SolveMode,
};
use distvc::minor::{extract_clique_minor, find_pair_witnesses, verify_minor_model};
use distvc::rank::{parse_tree, width, write_tree};
use distvc::structure::{
    audit_pair_context, build_pair_context, escape_analysis, independence_violation, jump_system,
    pair_localized_check, shatter_certificate, verify_disconnecting, DisconnectingFamily,
};

#[derive(Parser)]
#[command(name = "distvc", version, about = "Distance VC-dimension and ball packing/covering tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a graph (or hypergraph) in the text format.
    Gen(GenArgs),
    /// VC or 2VC dimension of a hypergraph, or distance VC of a graph.
    Vc {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "vc")]
        mode: VcMode,
        /// With `--mode distance`: 2-shattering instead of full shattering.
        #[arg(long)]
        pairs: bool,
        /// With `--mode distance`: force the sampled lower-bound search.
        #[arg(long)]
        budgeted: bool,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Distance-`radius` dominating set (hitting set of the balls).
    Domset {
        graph: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        #[arg(long)]
        greedy: bool,
    },
    /// Largest set of pairwise disjoint radius-`radius` balls.
    Pack {
        graph: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        greedy: bool,
    },
    /// Exact nu and tau for one radius, checked against the bound.
    BoundCheck {
        graph: PathBuf,
        #[arg(long)]
        radius: usize,
        /// Upper bound on the distance 2VC-dimension of the graph's class.
        #[arg(long)]
        dprime: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Clique minor on a 2-shattered set of the B-hypergraph.
    ExtractMinor {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// Width of a ternary-tree decomposition.
    RankVerify {
        graph: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        /// Fail when the width exceeds this.
        #[arg(long)]
        max_width: Option<usize>,
    },
    /// Check a disconnecting family and emit its shattering certificate.
    DisconnectVerify {
        graph: PathBuf,
        #[arg(long)]
        family: PathBuf,
    },
    /// Independence, root sections, escapes and jump paths of a pair.
    EscapeAudit {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<usize>,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        d: u32,
    },
    /// Run a batch described by a JSON config; JSON lines on stdout.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VcMode {
    Vc,
    #[value(name = "2vc")]
    TwoVc,
    Distance,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Path,
    Cycle,
    Clique,
    Grid,
    Bipartite,
    Gnp,
    Gnl,
    Cograph,
    Pairs,
    Ball,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    left: Option<usize>,
    #[arg(long)]
    right: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Path length parameter of `gnl`.
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Source graph for `ball`.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    radius: Option<usize>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `gnl`: label sidecar (clique and long-path map) as JSON.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// `cograph`: the certified decomposition in tree format.
    #[arg(long)]
    tree: Option<PathBuf>,
}

/// A property or verification check came back negative.
#[derive(Debug)]
struct Failed;

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("check failed")
    }
}

impl std::error::Error for Failed {}

/// A solver cap was hit, reported without a library error.
#[derive(Debug)]
struct Capped;

impl std::fmt::Display for Capped {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("solver cap exceeded")
    }
}

impl std::error::Error for Capped {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            if !e.is::<Failed>() {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.is::<Failed>() {
        return 1;
    }
    if e.is::<Capped>() {
        return 3;
    }
    match e.downcast_ref::<distvc::Error>() {
        Some(distvc::Error::CapExceeded { .. }) => 3,
        Some(distvc::Error::Verification(_)) => 1,
        _ => 2,
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    Ok(parse_graph(&read_input(path)?)?)
}

fn load_hypergraph(path: &Path) -> Result<Hypergraph> {
    Ok(parse_hypergraph(&read_input(path)?)?)
}

fn emit(v: &Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn check(ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Failed.into())
    }
}

fn write_to(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| distvc::Error::Precondition(format!("--{flag} is required for this kind")).into())
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gen(args) => gen(&args),
        Command::Vc {
            input,
            mode,
            pairs,
            budgeted,
            budget,
            seed,
        } => {
            let v = match mode {
                VcMode::Vc | VcMode::TwoVc => {
                    let h = load_hypergraph(&input)?;
                    let shatter = if matches!(mode, VcMode::Vc) { ShatterMode::Full } else { ShatterMode::Pairs };
                    let best = largest_shattered_set(&h, shatter)?;
                    let value = match (&best, shatter) {
                        (None, _) => -1,
                        (Some(x), ShatterMode::Pairs) if h.vertex_count() > 0 => (x.len() as i64).max(1),
                        (Some(x), _) => x.len() as i64,
                    };
                    json!({ "mode": shatter, "value": value, "exact": true, "witness": best.unwrap_or_default() })
                }
                VcMode::Distance => {
                    let g = load_graph(&input)?;
                    let opts = DistanceVcOptions {
                        budgeted,
                        budget,
                        seed,
                        hints: Vec::new(),
                    };
                    let shatter = if pairs { ShatterMode::Pairs } else { ShatterMode::Full };
                    serde_json::to_value(distance_vc(&g, shatter, &opts)?)?
                }
            };
            emit(&v)
        }
        Command::Domset { graph, radius, greedy, .. } => {
            let g = load_graph(&graph)?;
            let mode = if greedy { SolveMode::Greedy } else { SolveMode::Exact };
            let set = transversality(b_ell(&g, radius).hypergraph(), mode)?;
            emit(&json!({ "radius": radius, "mode": mode, "size": set.len(), "set": set }))
        }
        Command::Pack { graph, radius, greedy } => {
            let g = load_graph(&graph)?;
            let mode = if greedy { SolveMode::Greedy } else { SolveMode::Exact };
            // Ball hyperedges are indexed by their centers.
            let centers = packing_number(b_ell(&g, radius).hypergraph(), mode)?;
            emit(&json!({ "radius": radius, "mode": mode, "size": centers.len(), "centers": centers }))
        }
        Command::BoundCheck {
            graph,
            radius,
            dprime,
            seed,
        } => {
            let g = load_graph(&graph)?;
            let opts = CheckOptions {
                dprime,
                timings: false,
                seed,
            };
            let report = check_instance(&g, radius, &opts)?;
            emit(&serde_json::to_value(&report)?)?;
            match report.status {
                Status::Ok => Ok(()),
                Status::CapExceeded => Err(Capped.into()),
                Status::Failed => Err(Failed.into()),
            }
        }
        Command::ExtractMinor { graph, set } => {
            let g = load_graph(&graph)?;
            let search = find_pair_witnesses(&g, &set, &EdgeOrder::canonical(&g))?;
            if !search.complete() {
                let missing: Vec<(usize, usize)> = search.failures.iter().map(|&(i, j)| (set[i], set[j])).collect();
                emit(&json!({ "complete": false, "missing_pairs": missing }))?;
                return Err(Failed.into());
            }
            let model = extract_clique_minor(&g, &search)?;
            let violation = verify_minor_model(&g, &model);
            emit(&json!({ "complete": true, "model": model, "violation": violation }))?;
            check(violation.is_none())
        }
        Command::RankVerify { graph, tree, max_width } => {
            let g = load_graph(&graph)?;
            let t = parse_tree(&read_input(&tree)?)?;
            let w = width(&g, &t)?;
            emit(&json!({ "width": w, "tree_edges": t.edges().len(), "max_width": max_width }))?;
            check(max_width.is_none_or(|m| w <= m))
        }
        Command::DisconnectVerify { graph, family } => {
            let g = load_graph(&graph)?;
            let fam = DisconnectingFamily::from_json(&read_input(&family)?)?;
            match verify_disconnecting(&g, &fam)? {
                Some(v) => {
                    emit(&json!({ "disconnecting": false, "violation": v }))?;
                    Err(Failed.into())
                }
                None => {
                    // A certificate needs one b per subset of A.
                    let cert = if fam.a.len() < usize::BITS as usize && fam.b.len() == 1 << fam.a.len() {
                        Some(shatter_certificate(&g, &fam)?)
                    } else {
                        None
                    };
                    emit(&json!({ "disconnecting": true, "certificate": cert }))
                }
            }
        }
        Command::EscapeAudit { graph, a, b, radius, d } => escape_audit(&load_graph(&graph)?, &a, &b, radius, d),
        Command::Experiment { config } => {
            let config: ExperimentConfig = serde_json::from_str(&read_input(&config)?).map_err(distvc::Error::from)?;
            let mut out = io::BufWriter::new(io::stdout().lock());
            let summary = run_experiments(&config, &mut out)?;
            check(summary.failed == 0 && summary.bound_violations == 0)
        }
    }
}

fn gen(args: &GenArgs) -> Result<()> {
    let simple = |kind: GraphFamily| -> Result<()> {
        let g = family(&kind, args.seed)?;
        write_to(args.out.as_deref(), &write_graph(&g))
    };
    match args.kind {
        GenKind::Path => simple(GraphFamily::Path { n: need(args.n, "n")? }),
        GenKind::Cycle => simple(GraphFamily::Cycle { n: need(args.n, "n")? }),
        GenKind::Clique => simple(GraphFamily::Clique { n: need(args.n, "n")? }),
        GenKind::Grid => simple(GraphFamily::Grid {
            rows: need(args.rows, "rows")?,
            cols: need(args.cols, "cols")?,
        }),
        GenKind::Bipartite => simple(GraphFamily::CompleteBipartite {
            left: need(args.left, "left")?,
            right: need(args.right, "right")?,
        }),
        GenKind::Gnp => simple(GraphFamily::Gnp {
            n: need(args.n, "n")?,
            p: need(args.p, "p")?,
        }),
        GenKind::Gnl => {
            let built = gnl(need(args.n, "n")?, need(args.ell, "ell")?)?;
            if let Some(path) = &args.labels {
                write_to(Some(path), &(built.labels_json() + "\n"))?;
            }
            write_to(args.out.as_deref(), &write_graph(&built.graph))
        }
        GenKind::Cograph => {
            let recipe = random_cotree(need(args.n, "n")?, args.seed)?;
            let (g, t) = cograph_with_tree(&recipe)?;
            if let Some(path) = &args.tree {
                write_to(Some(path), &write_tree(&t))?;
            }
            write_to(args.out.as_deref(), &write_graph(&g))
        }
        GenKind::Pairs => write_to(args.out.as_deref(), &write_hypergraph(&pairs_hypergraph(need(args.n, "n")?)?)),
        GenKind::Ball => {
            let g = load_graph(&need(args.graph.clone(), "graph")?)?;
            let h = b_ell(&g, need(args.radius, "radius")?);
            write_to(args.out.as_deref(), &write_hypergraph(h.hypergraph()))
        }
    }
}

fn escape_audit(g: &Graph, a: &[usize], b: &[usize], radius: usize, d: u32) -> Result<()> {
    let loc = pair_localized_check(g, radius, d, a, b)?;
    if let Some((x, y, dist)) = loc.violation {
        return Err(distvc::Error::Precondition(format!(
            "pair is not {d}-localized: d({x}, {y}) = {dist:?} outside [{}, {}]",
            loc.window.0, loc.window.1
        ))
        .into());
    }
    let ord = EdgeOrder::canonical(g);
    let ctx = build_pair_context(g, a, b, radius, d, &ord)?;
    let audit = audit_pair_context(g, &ctx);
    if let Some(v) = independence_violation(g, &ctx) {
        emit(&json!({ "independent": false, "independence_violation": v, "pair_audit": audit }))?;
        return Err(Failed.into());
    }
    let escapes = escape_analysis(g, &ctx)?;
    let jumps = if escapes.escape_property {
        Some(jump_system(&ctx, &escapes)?)
    } else {
        None
    };
    let jumps_ok = jumps.as_ref().is_none_or(|js| {
        js.max_length <= js.length_bound
            && js.free_section_edge.is_none()
            && js.audit.misses_critical.is_none()
            && js.audit.misses_private_part.is_none()
            && js.disconnecting_violation.is_none()
    });
    let ok = audit.holds() && escapes.acyclic && jumps_ok;
    emit(&json!({
        "independent": true,
        "window": loc.window,
        "pair_audit": audit,
        "escapes": escapes,
        "jump_system": jumps,
        "passed": ok,
    }))?;
    check(ok)
}
