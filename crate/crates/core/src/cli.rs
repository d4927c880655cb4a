//! Command-line front end. Exit codes: 0 = success/found, 1 = certified
//! absent or refusal, 2 = budget exhausted, 3 = input error. Randomized
//! subcommands require an explicit `--seed`; given identical arguments and
//! seeds, emitted files are byte-identical.

use crate::certificate::{check_certificate, Certificate, CertificatePayload, Environment, TrimStructure};
use crate::decomposition::{TreeDecomposition, TreeDecompositionJson};
use crate::graph::Graph;
use crate::io::GraphFormat;
use crate::minor::{Budget, SearchOutcome};
use crate::rational::Rational;
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ABSENT_OR_REFUSED: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser)]
#[command(name = "sparsetw", version, about = "Exact oracles and extractors for sparse high-treewidth induced subgraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output path for the main artifact (graph or certificate).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output path for generator metadata / companion certificates.
    #[arg(long, global = true)]
    meta: Option<PathBuf>,
    /// Graph output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::G6)]
    format: FormatArg,
    /// Worker threads for embarrassingly parallel batch work.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    G6,
    Edgelist,
    Json,
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> GraphFormat {
        match f {
            FormatArg::G6 => GraphFormat::Graph6,
            FormatArg::Edgelist => GraphFormat::EdgeList,
            FormatArg::Json => GraphFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph family instance plus JSON metadata.
    Gen {
        /// grid | wall | clique | biclique | path | cycle | subdivision |
        /// quasi-wall | trim
        family: String,
        /// Family parameters; see README.
        params: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-validate a certificate against its host graph.
    Check {
        /// model | subdivision | trim | bramble | quasi-wall | thin | witness | refusal
        kind: String,
        graph: PathBuf,
        cert: PathBuf,
    },
    /// Exact treewidth of a small graph.
    Tw {
        graph: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
        /// Write the witnessing decomposition here (JSON).
        #[arg(long)]
        td: Option<PathBuf>,
    },
    /// Validate a tree-decomposition and report width and adhesion.
    ValidateTd { graph: PathBuf, td: PathBuf },
    /// Exact bramble order with a minimum hitting set.
    BrambleOrder {
        graph: PathBuf,
        bramble: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Exact induced-minor containment search.
    FindIm {
        host: PathBuf,
        pattern: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        max_host: Option<usize>,
        #[arg(long)]
        max_pattern: Option<usize>,
        /// Search for a plain (non-induced) minor instead.
        #[arg(long)]
        plain: bool,
    },
    /// Exact clique-subdivision (topological minor) search.
    FindSubdiv {
        host: PathBuf,
        s: usize,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        max_host: Option<usize>,
    },
    /// Extract an induced wall quasi-subdivision from a wall minor model.
    ExtractWall { host: PathBuf, model: PathBuf },
    /// Thin a wall quasi-subdivision to a sparse 2-connected witness.
    Thin {
        host: PathBuf,
        witness: PathBuf,
        w: usize,
        /// Rational, e.g. 1 or 1/2.
        eps: String,
    },
    /// Balanced-partition dedensification of a biclique trim supergraph.
    Dedensify {
        host: PathBuf,
        trim: PathBuf,
        h: usize,
        #[arg(long, default_value = "sampled")]
        mode: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 512)]
        draws: usize,
    },
    /// End-to-end sparse witness assembly from a clique trim supergraph.
    Witness {
        host: PathBuf,
        trim: PathBuf,
        w: usize,
        /// Rational, e.g. 1 or 1/2.
        eps: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Override the measured density d (rational).
        #[arg(long)]
        density: Option<String>,
    },
    /// Build G_x for a decomposition node; emits the graph and provenance.
    Gx { graph: PathBuf, td: PathBuf, node: usize },
    /// Build the torso of a decomposition node.
    Torso { graph: PathBuf, td: PathBuf, node: usize },
    /// Project a bramble into G_x and certify the projected order.
    ProjectBramble {
        graph: PathBuf,
        td: PathBuf,
        bramble: PathBuf,
        h: usize,
        p: usize,
    },
}

struct Ctx {
    out: Option<PathBuf>,
    meta: Option<PathBuf>,
    format: GraphFormat,
    #[allow(dead_code)]
    jobs: usize,
}

#[derive(Debug)]
struct CliFail {
    code: i32,
    msg: String,
}

impl CliFail {
    fn input(msg: impl Into<String>) -> CliFail {
        CliFail { code: EXIT_INPUT, msg: msg.into() }
    }
    fn refused(msg: impl Into<String>) -> CliFail {
        CliFail { code: EXIT_ABSENT_OR_REFUSED, msg: msg.into() }
    }
    fn budget(msg: impl Into<String>) -> CliFail {
        CliFail { code: EXIT_BUDGET, msg: msg.into() }
    }
}

type CliResult = Result<i32, CliFail>;

/// Runs the CLI on the given argv (including the program name) and returns
/// the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let ctx = Ctx {
        out: cli.out.clone(),
        meta: cli.meta.clone(),
        format: cli.format.into(),
        jobs: cli.jobs,
    };
    match dispatch(cli.command, &ctx) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, CliFail> {
    std::fs::read_to_string(path)
        .map_err(|e| CliFail::input(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, CliFail> {
    let text = read_to_string(path)?;
    let format = GraphFormat::from_path(&path.to_string_lossy());
    crate::io::decode(&text, format)
        .map_err(|e| CliFail::input(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliFail> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CliFail::input(format!("{}: {e}", path.display())))
}

fn write_out(ctx: &Ctx, contents: &str) -> Result<(), CliFail> {
    match &ctx.out {
        Some(path) => std::fs::write(path, contents)
            .map_err(|e| CliFail::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn write_meta(ctx: &Ctx, contents: &str) -> Result<(), CliFail> {
    match &ctx.meta {
        Some(path) => std::fs::write(path, contents)
            .map_err(|e| CliFail::input(format!("cannot write {}: {e}", path.display()))),
        None => Ok(()),
    }
}

fn write_certificate(ctx: &Ctx, cert: &Certificate) -> Result<(), CliFail> {
    let json = serde_json::to_string_pretty(cert).expect("certificates serialize");
    write_out(ctx, &json)
}

fn param<T: std::str::FromStr>(params: &[String], i: usize, name: &str) -> Result<T, CliFail> {
    params
        .get(i)
        .ok_or_else(|| CliFail::input(format!("missing parameter {name}")))?
        .parse::<T>()
        .map_err(|_| CliFail::input(format!("cannot parse parameter {name} from {:?}", params[i])))
}

fn need_seed(seed: Option<u64>) -> Result<u64, CliFail> {
    seed.ok_or_else(|| CliFail::input("this subcommand is randomized and requires --seed"))
}

fn parse_rational(s: &str) -> Result<Rational, CliFail> {
    Rational::parse(s).map_err(|e| CliFail::input(format!("bad rational {s:?}: {e}")))
}

fn dispatch(cmd: Command, ctx: &Ctx) -> CliResult {
    match cmd {
        Command::Gen { family, params, seed } => gen(ctx, &family, &params, seed),
        Command::Check { kind, graph, cert } => check(ctx, &kind, &graph, &cert),
        Command::Tw { graph, cap, td } => tw(ctx, &graph, cap, td.as_deref()),
        Command::ValidateTd { graph, td } => validate_td(&graph, &td),
        Command::BrambleOrder { graph, bramble, cap } => bramble_order(ctx, &graph, &bramble, cap),
        Command::FindIm { host, pattern, budget, max_host, max_pattern, plain } => {
            find_im(ctx, &host, &pattern, budget, max_host, max_pattern, plain)
        }
        Command::FindSubdiv { host, s, budget, max_host } => {
            find_subdiv(ctx, &host, s, budget, max_host)
        }
        Command::ExtractWall { host, model } => extract_wall(ctx, &host, &model),
        Command::Thin { host, witness, w, eps } => thin(ctx, &host, &witness, w, &eps),
        Command::Dedensify { host, trim, h, mode, seed, draws } => {
            dedensify(ctx, &host, &trim, h, &mode, seed, draws)
        }
        Command::Witness { host, trim, w, eps, seed, density } => {
            witness(ctx, &host, &trim, w, &eps, seed, density.as_deref())
        }
        Command::Gx { graph, td, node } => gx(ctx, &graph, &td, node),
        Command::Torso { graph, td, node } => torso(ctx, &graph, &td, node),
        Command::ProjectBramble { graph, td, bramble, h, p } => {
            project_bramble(ctx, &graph, &td, &bramble, h, p)
        }
    }
}

fn gen(ctx: &Ctx, family: &str, params: &[String], seed: Option<u64>) -> CliResult {
    use crate::constructions as cons;
    let (graph, meta): (Graph, serde_json::Value) = match family {
        "grid" => {
            let k: usize = param(params, 0, "k")?;
            let g = cons::grid(k).map_err(|e| CliFail::input(e.to_string()))?;
            (g.graph, serde_json::json!({"family": "grid", "k": k}))
        }
        "wall" => {
            let k: usize = param(params, 0, "k")?;
            let w = cons::wall(k).map_err(|e| CliFail::input(e.to_string()))?;
            let coords = w.coords.clone();
            (w.graph, serde_json::json!({"family": "wall", "k": k, "coords": coords}))
        }
        "clique" => {
            let t: usize = param(params, 0, "t")?;
            (cons::complete(t), serde_json::json!({"family": "clique", "t": t}))
        }
        "biclique" => {
            let s: usize = param(params, 0, "s")?;
            (cons::biclique(s, s), serde_json::json!({"family": "biclique", "s": s}))
        }
        "path" => {
            let n: usize = param(params, 0, "n")?;
            (cons::path(n), serde_json::json!({"family": "path", "n": n}))
        }
        "cycle" => {
            let n: usize = param(params, 0, "n")?;
            if n < 3 {
                return Err(CliFail::input("cycle needs n >= 3"));
            }
            (cons::cycle(n), serde_json::json!({"family": "cycle", "n": n}))
        }
        "subdivision" => {
            // subdivision <clique|biclique|wall|grid> <s|k> <floor> <spread>
            let base: String = param(params, 0, "skeleton family")?;
            let sz: usize = param(params, 1, "skeleton size")?;
            let floor: usize = param(params, 2, "floor")?;
            let spread: usize = param(params, 3, "spread")?;
            let seed = if spread > 0 { need_seed(seed)? } else { seed.unwrap_or(0) };
            let skeleton = skeleton_graph(&base, sz)?;
            let (g, spec) = cons::subdivide(
                &skeleton,
                &cons::SubdivisionLengths::AtLeast { floor, spread, seed },
            )
            .map_err(|e| CliFail::input(e.to_string()))?;
            let paths: Vec<((usize, usize), Vec<usize>)> =
                spec.paths.iter().map(|(&e, p)| (e, p.clone())).collect();
            (
                g,
                serde_json::json!({
                    "family": "subdivision", "skeleton": base, "size": sz,
                    "floor": floor, "spread": spread, "seed": seed, "paths": paths,
                }),
            )
        }
        "quasi-wall" => {
            // quasi-wall <k> <floor> <spread> <all|none>
            let k: usize = param(params, 0, "k")?;
            let floor: usize = param(params, 1, "floor")?;
            let spread: usize = param(params, 2, "spread")?;
            let triangles: String = param(params, 3, "triangles (all|none)")?;
            let seed = if spread > 0 { need_seed(seed)? } else { seed.unwrap_or(0) };
            let w = cons::wall(k).map_err(|e| CliFail::input(e.to_string()))?;
            let selected: Vec<usize> = match triangles.as_str() {
                "all" => w.graph.vertices().filter(|&v| w.graph.degree(v) == 3).collect(),
                "none" => Vec::new(),
                other => return Err(CliFail::input(format!("triangles must be all|none, got {other}"))),
            };
            let (g, spec) = cons::quasi_subdivide(
                &w.graph,
                &selected,
                &cons::SubdivisionLengths::AtLeast { floor, spread, seed },
            )
            .map_err(|e| CliFail::input(e.to_string()))?;
            let witness = crate::wall::WallQuasiSubdivisionWitness::from_planted(k, &spec);
            let cert = Certificate {
                payload: CertificatePayload::QuasiWall { witness },
                environment: Environment::new(Some(seed), None),
            };
            (g, serde_json::to_value(&cert).expect("serializable"))
        }
        "trim" => {
            // trim <clique|biclique> <s> <floor> <spread> <extras>
            let base: String = param(params, 0, "skeleton family")?;
            let s: usize = param(params, 1, "s")?;
            let floor: usize = param(params, 2, "floor")?;
            let spread: usize = param(params, 3, "spread")?;
            let extras: usize = param(params, 4, "extras")?;
            let seed = need_seed(seed)?;
            let skeleton = match base.as_str() {
                "clique" => crate::trim::Skeleton::Clique { s },
                "biclique" => crate::trim::Skeleton::Biclique { s },
                other => return Err(CliFail::input(format!("trim skeleton must be clique|biclique, got {other}"))),
            };
            let t = crate::trim::random_trim_supergraph(skeleton, floor, spread, extras, seed)
                .map_err(|e| CliFail::input(e.to_string()))?;
            let cert = Certificate {
                payload: CertificatePayload::Trim { structure: TrimStructure::of(&t) },
                environment: Environment::new(Some(seed), None),
            };
            (t.host, serde_json::to_value(&cert).expect("serializable"))
        }
        other => return Err(CliFail::input(format!("unknown family {other:?}"))),
    };
    write_out(ctx, &crate::io::encode(&graph, ctx.format))?;
    write_meta(ctx, &serde_json::to_string_pretty(&meta).expect("serializable"))?;
    if ctx.out.is_some() {
        println!(
            "generated {family} instance: {} vertices, {} edges",
            graph.vertex_count(),
            graph.edge_count()
        );
    }
    Ok(EXIT_OK)
}

fn skeleton_graph(base: &str, sz: usize) -> Result<Graph, CliFail> {
    use crate::constructions as cons;
    match base {
        "clique" => Ok(cons::complete(sz)),
        "biclique" => Ok(cons::biclique(sz, sz)),
        "wall" => Ok(cons::wall(sz).map_err(|e| CliFail::input(e.to_string()))?.graph),
        "grid" => Ok(cons::grid(sz).map_err(|e| CliFail::input(e.to_string()))?.graph),
        other => Err(CliFail::input(format!("unknown skeleton family {other:?}"))),
    }
}

fn check(ctx: &Ctx, kind: &str, graph: &Path, cert: &Path) -> CliResult {
    let g = read_graph(graph)?;
    let c: Certificate = read_json(cert)?;
    let want = kind.replace('-', "_");
    if c.payload.kind() != want {
        return Err(CliFail::input(format!(
            "certificate kind is {}, expected {want}",
            c.payload.kind()
        )));
    }
    match check_certificate(&g, &c) {
        Ok(msg) => {
            println!("{msg}");
            let _ = ctx;
            Ok(EXIT_OK)
        }
        Err(e) => Err(CliFail::refused(e.to_string())),
    }
}

fn tw(ctx: &Ctx, graph: &Path, cap: Option<usize>, td_out: Option<&Path>) -> CliResult {
    let g = read_graph(graph)?;
    let cap = cap.unwrap_or(crate::treewidth::DEFAULT_TW_CAP);
    match crate::treewidth::exact_treewidth_with_cap(&g, cap) {
        Ok((width, td)) => {
            println!("{width}");
            if let Some(path) = td_out {
                let json = serde_json::to_string_pretty(&td.to_json()).expect("serializable");
                std::fs::write(path, json)
                    .map_err(|e| CliFail::input(format!("cannot write {}: {e}", path.display())))?;
            }
            let _ = ctx;
            Ok(EXIT_OK)
        }
        Err(crate::treewidth::TwError::CapExceeded(n, c)) => {
            Err(CliFail::budget(format!("{n} vertices exceeds the exact cap {c}")))
        }
        Err(e) => Err(CliFail::input(e.to_string())),
    }
}

fn validate_td(graph: &Path, td: &Path) -> CliResult {
    let g = read_graph(graph)?;
    let json: TreeDecompositionJson = read_json(td)?;
    let td = TreeDecomposition::from_json(&json).map_err(|e| CliFail::input(e.to_string()))?;
    match crate::decomposition::validate_tree_decomposition(&g, &td) {
        Ok(rep) => {
            println!("valid: width {} adhesion {}", rep.width, rep.adhesion_size);
            Ok(EXIT_OK)
        }
        Err(v) => Err(CliFail::refused(format!("invalid decomposition: {v}"))),
    }
}

fn bramble_order(ctx: &Ctx, graph: &Path, bramble: &Path, cap: Option<usize>) -> CliResult {
    let g = read_graph(graph)?;
    let b: crate::bramble::Bramble = read_json(bramble)?;
    let cap = cap.unwrap_or(crate::bramble::DEFAULT_BRAMBLE_CAP);
    match crate::bramble::bramble_order_with_cap(&g, &b, cap) {
        Ok((order, hitting_set)) => {
            println!("order {order} hitting-set {hitting_set:?}");
            let cert = Certificate {
                payload: CertificatePayload::Bramble { bramble: b, order, hitting_set },
                environment: Environment::new(None, Some(cap as u64)),
            };
            if ctx.out.is_some() {
                write_certificate(ctx, &cert)?;
            }
            Ok(EXIT_OK)
        }
        Err(crate::bramble::BrambleViolation::CapExceeded(w, c)) => {
            Err(CliFail::budget(format!("|V| * |sets| = {w} exceeds cap {c}")))
        }
        Err(e) => Err(CliFail::refused(format!("invalid bramble: {e}"))),
    }
}

fn budget_from(budget: Option<u64>, max_host: Option<usize>, max_pattern: Option<usize>) -> Budget {
    let mut b = Budget::default();
    if let Some(n) = budget {
        b.max_nodes = n;
    }
    if let Some(h) = max_host {
        b.max_host = h;
    }
    if let Some(p) = max_pattern {
        b.max_pattern = p;
    }
    b
}

fn find_im(
    ctx: &Ctx,
    host: &Path,
    pattern: &Path,
    budget: Option<u64>,
    max_host: Option<usize>,
    max_pattern: Option<usize>,
    plain: bool,
) -> CliResult {
    let h = read_graph(host)?;
    let p = read_graph(pattern)?;
    let b = budget_from(budget, max_host, max_pattern);
    let outcome = crate::minor::find_model(&h, &p, !plain, &b);
    match outcome {
        SearchOutcome::Found(model) => {
            println!("found");
            let cert = Certificate {
                payload: CertificatePayload::Model { model },
                environment: Environment::new(None, Some(b.max_nodes)),
            };
            if ctx.out.is_some() {
                write_certificate(ctx, &cert)?;
            }
            Ok(EXIT_OK)
        }
        SearchOutcome::Absent => {
            println!("absent");
            Ok(EXIT_ABSENT_OR_REFUSED)
        }
        SearchOutcome::BudgetExhausted => {
            println!("budget-exhausted");
            Ok(EXIT_BUDGET)
        }
    }
}

fn find_subdiv(
    ctx: &Ctx,
    host: &Path,
    s: usize,
    budget: Option<u64>,
    max_host: Option<usize>,
) -> CliResult {
    let h = read_graph(host)?;
    let b = budget_from(budget, max_host, None);
    match crate::minor::find_clique_subdivision(&h, s, &b) {
        SearchOutcome::Found(witness) => {
            println!("found");
            let cert = Certificate {
                payload: CertificatePayload::Subdivision { witness },
                environment: Environment::new(None, Some(b.max_nodes)),
            };
            if ctx.out.is_some() {
                write_certificate(ctx, &cert)?;
            }
            Ok(EXIT_OK)
        }
        SearchOutcome::Absent => {
            println!("absent");
            Ok(EXIT_ABSENT_OR_REFUSED)
        }
        SearchOutcome::BudgetExhausted => {
            println!("budget-exhausted");
            Ok(EXIT_BUDGET)
        }
    }
}

fn extract_wall(ctx: &Ctx, host: &Path, model: &Path) -> CliResult {
    let h = read_graph(host)?;
    let c: Certificate = read_json(model)?;
    let CertificatePayload::Model { model } = &c.payload else {
        return Err(CliFail::input("extract-wall needs a model certificate"));
    };
    match crate::wall::extract_wall_quasi_subdivision(&h, model) {
        Ok((witness, report)) => {
            println!(
                "extracted W_{} quasi-subdivision: {} paths, {} tripods, {} line-tripods, {} surgeries, {} triangles",
                witness.m,
                report.path_sets,
                report.tripod_sets,
                report.line_tripod_sets,
                report.surgeries,
                report.triangles
            );
            let cert = Certificate {
                payload: CertificatePayload::QuasiWall { witness },
                environment: Environment::new(None, None),
            };
            if ctx.out.is_some() {
                write_certificate(ctx, &cert)?;
            }
            Ok(EXIT_OK)
        }
        Err(e @ crate::wall::WallError::UnsupportedShape { .. }) => Err(CliFail::refused(e.to_string())),
        Err(e) => Err(CliFail::input(e.to_string())),
    }
}

fn thin(ctx: &Ctx, host: &Path, witness: &Path, w: usize, eps: &str) -> CliResult {
    let h = read_graph(host)?;
    let c: Certificate = read_json(witness)?;
    let CertificatePayload::QuasiWall { witness } = &c.payload else {
        return Err(CliFail::input("thin needs a quasi-wall certificate"));
    };
    let eps = parse_rational(eps)?;
    match crate::wall::thin_to_sparse_wall(&h, witness, w, eps) {
        Ok(out) => {
            println!(
                "thinned to {} vertices, {} edges (<= (1+{eps})n: {}), 2-connected: {}, tw >= {}",
                out.vertices,
                out.edges,
                out.density_holds(eps),
                out.two_connected,
                out.target_w
            );
            let cert = Certificate {
                payload: CertificatePayload::Thin {
                    vertex_set: out.vertex_set.clone(),
                    target_w: out.target_w,
                    eps,
                    column_step: out.column_step,
                    vertices: out.vertices,
                    edges: out.edges,
                    degree3_positions: out.q,
                    two_connected: out.two_connected,
                    wall_model: out.wall_model.clone(),
                },
                environment: Environment::new(None, None),
            };
            if ctx.out.is_some() {
                write_certificate(ctx, &cert)?;
            }
            Ok(EXIT_OK)
        }
        Err(e @ crate::wall::WallError::DoesNotFit { .. }) => {
            if ctx.out.is_some() {
                let cert = Certificate {
                    payload: CertificatePayload::Refusal { reason: e.to_string() },
                    environment: Environment::new(None, None),
                };
                write_certificate(ctx, &cert)?;
            }
            Err(CliFail::refused(e.to_string()))
        }
        Err(e) => Err(CliFail::input(e.to_string())),
    }
}

fn dedensify(
    ctx: &Ctx,
    host: &Path,
    trim: &Path,
    h: usize,
    mode: &str,
    seed: Option<u64>,
    draws: usize,
) -> CliResult {
    let host = read_graph(host)?;
    let c: Certificate = read_json(trim)?;
    let CertificatePayload::Trim { structure } = &c.payload else {
        return Err(CliFail::input("dedensify needs a trim certificate"));
    };
    let t = structure.attach(host);
    let mode = match mode {
        "exhaustive" => crate::dedensify::DedensifyMode::Exhaustive,
        "sampled" => crate::dedensify::DedensifyMode::Sampled { seed: need_seed(seed)?, draws },
        other => return Err(CliFail::input(format!("mode must be exhaustive|sampled, got {other}"))),
    };
    match crate::dedensify::dedensify_balanced(&t, h, mode) {
        Ok(out) => {
            println!(
                "cell ({}, {}): {} extras on {} vertices (bound holds: {})",
                out.chosen.0,
                out.chosen.1,
                out.extras,
                out.sub_vertices,
                out.bound_holds()
            );
            let cert = Certificate {
                payload: CertificatePayload::Trim {
                    structure: TrimStructure::of(&out.result),
                },
                environment: Environment::new(seed, Some(draws as u64)),
            };
            if ctx.out.is_some() {
                write_certificate(ctx, &cert)?;
            }
            // The result host is an induced subgraph of the input; emit it
            // alongside so the trim certificate is checkable standalone.
            if let Some(meta) = &ctx.meta {
                let text = crate::io::encode(&out.result.host, GraphFormat::from_path(&meta.to_string_lossy()));
                std::fs::write(meta, text)
                    .map_err(|e| CliFail::input(format!("cannot write {}: {e}", meta.display())))?;
            }
            Ok(EXIT_OK)
        }
        Err(e @ crate::dedensify::DedensifyError::SamplingExhausted { .. }) => {
            Err(CliFail::budget(e.to_string()))
        }
        Err(e) => Err(CliFail::input(e.to_string())),
    }
}

fn witness(
    ctx: &Ctx,
    host: &Path,
    trim: &Path,
    w: usize,
    eps: &str,
    seed: Option<u64>,
    density: Option<&str>,
) -> CliResult {
    let host_graph = read_graph(host)?;
    let c: Certificate = read_json(trim)?;
    let CertificatePayload::Trim { structure } = &c.payload else {
        return Err(CliFail::input("witness needs a trim certificate"));
    };
    let t = structure.attach(host_graph);
    let eps = parse_rational(eps)?;
    let seed = need_seed(seed)?;
    let d = density.map(parse_rational).transpose()?;
    match crate::dedensify::assemble_sparse_witness(&t, w, eps, d, seed) {
        Ok(out) => {
            println!(
                "witness: n={} |E|={} extras={} tw>={} (target {w})",
                out.certificate.vertices,
                out.certificate.edges,
                out.certificate.extras,
                out.certificate.treewidth_lower_bound
            );
            let cert = Certificate {
                payload: CertificatePayload::Witness {
                    host_vertices: out.host_vertices.clone(),
                    structure: TrimStructure::of(&out.result),
                    biclique_model: out.biclique_model.clone(),
                    certificate: out.certificate.clone(),
                },
                environment: Environment::new(Some(seed), None),
            };
            if ctx.out.is_some() {
                write_certificate(ctx, &cert)?;
            }
            Ok(EXIT_OK)
        }
        Err(e @ crate::dedensify::DedensifyError::Refusal(_))
        | Err(e @ crate::dedensify::DedensifyError::SameSideUnitPath(..)) => {
            if ctx.out.is_some() {
                let cert = Certificate {
                    payload: CertificatePayload::Refusal { reason: e.to_string() },
                    environment: Environment::new(Some(seed), None),
                };
                write_certificate(ctx, &cert)?;
            }
            Err(CliFail::refused(e.to_string()))
        }
        Err(e @ crate::dedensify::DedensifyError::SamplingExhausted { .. })
        | Err(e @ crate::dedensify::DedensifyError::SplitExhausted { .. }) => {
            Err(CliFail::budget(e.to_string()))
        }
        Err(e) => Err(CliFail::input(e.to_string())),
    }
}

fn gx(ctx: &Ctx, graph: &Path, td: &Path, node: usize) -> CliResult {
    let g = read_graph(graph)?;
    let json: TreeDecompositionJson = read_json(td)?;
    let td = TreeDecomposition::from_json(&json).map_err(|e| CliFail::input(e.to_string()))?;
    let gx = crate::structure::build_gx(&g, &td, node).map_err(|e| CliFail::input(e.to_string()))?;
    println!(
        "G_x: {} vertices ({} bag + {} twin classes)",
        gx.graph.vertex_count(),
        gx.bag_len(),
        gx.classes.len()
    );
    write_out(ctx, &crate::io::encode(&gx.graph, ctx.format))?;
    let meta = serde_json::json!({
        "bag": gx.bag,
        "classes": gx.classes,
        "model": gx.model,
    });
    write_meta(ctx, &serde_json::to_string_pretty(&meta).expect("serializable"))?;
    Ok(EXIT_OK)
}

fn torso(ctx: &Ctx, graph: &Path, td: &Path, node: usize) -> CliResult {
    let g = read_graph(graph)?;
    let json: TreeDecompositionJson = read_json(td)?;
    let td = TreeDecomposition::from_json(&json).map_err(|e| CliFail::input(e.to_string()))?;
    let (torso, map) =
        crate::structure::build_torso(&g, &td, node).map_err(|e| CliFail::input(e.to_string()))?;
    println!("torso: {} vertices, {} edges", torso.vertex_count(), torso.edge_count());
    write_out(ctx, &crate::io::encode(&torso, ctx.format))?;
    let meta = serde_json::json!({"bag": map.new_to_old});
    write_meta(ctx, &serde_json::to_string_pretty(&meta).expect("serializable"))?;
    Ok(EXIT_OK)
}

fn project_bramble(
    ctx: &Ctx,
    graph: &Path,
    td: &Path,
    bramble: &Path,
    h: usize,
    p: usize,
) -> CliResult {
    let g = read_graph(graph)?;
    let json: TreeDecompositionJson = read_json(td)?;
    let td = TreeDecomposition::from_json(&json).map_err(|e| CliFail::input(e.to_string()))?;
    let b: crate::bramble::Bramble = read_json(bramble)?;
    match crate::structure::project_bramble(&g, &td, &b, h, p) {
        Ok(proj) => {
            println!(
                "node {}: projected order {} (input order {})",
                proj.node, proj.projected_order, proj.input_order
            );
            let cert = Certificate {
                payload: CertificatePayload::Bramble {
                    bramble: proj.projected.clone(),
                    order: proj.projected_order,
                    hitting_set: proj.projected_hitting_set.clone(),
                },
                environment: Environment::new(None, None),
            };
            if ctx.out.is_some() {
                write_certificate(ctx, &cert)?;
            }
            // The projected bramble lives in G_x; emit G_x for the check.
            if let Some(meta) = &ctx.meta {
                let text =
                    crate::io::encode(&proj.gx.graph, GraphFormat::from_path(&meta.to_string_lossy()));
                std::fs::write(meta, text)
                    .map_err(|e| CliFail::input(format!("cannot write {}: {e}", meta.display())))?;
            }
            Ok(EXIT_OK)
        }
        Err(e @ crate::structure::StructureError::OrderTooLow { .. }) => Err(CliFail::refused(e.to_string())),
        Err(e) => Err(CliFail::input(e.to_string())),
    }
}
