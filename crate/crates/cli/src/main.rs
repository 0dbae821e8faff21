//! `rainbow`: command-line front end to `rainbow-core`.
//!
//! Exit status: 0 on success or a passing check, 2 when a check finds a
//! counterexample, 1 on usage or input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rainbow_core::bounds::{self, BoundCase, EvalScheme};
use rainbow_core::certificate::parse_vertex;
use rainbow_core::montecarlo::ExhaustReason;
use rainbow_core::*;

#[derive(Parser)]
#[command(name = "rainbow", version, about = "Rainbow index tools for complete multipartite graphs")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Write a deterministic coloring certificate
    Gen(GenArgs),
    /// Write a random coloring, or search for one where every k-set passes
    Color(ColorArgs),
    /// Check a certificate's packing and/or its coloring for (k, l)
    Verify(VerifyArgs),
    /// Exact rainbow index by exhaustive search
    Rx(RxArgs),
    /// Maximum rainbow packing for one terminal set
    Pack(PackArgs),
    /// Evaluate closed-form probability bounds
    Bounds(BoundsArgs),
    /// Least n where the union-bound success probability is positive
    Threshold(ThresholdArgs),
    /// Monte Carlo frequency of an event
    Mc(McArgs),
    /// Find a monochromatic K_{k,k} in a bipartite coloring
    Ramsey(RamseyArgs),
    /// Refute a k-coloring through a monochromatic K_{k,k}
    Refute(RefuteArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Class sizes, e.g. 3,3
    #[arg(long, value_delimiter = ',', required = true)]
    classes: Vec<usize>,
}

impl GraphArgs {
    fn graph(&self) -> Result<MultipartiteGraph> {
        Ok(MultipartiteGraph::new(&self.classes)?)
    }
}

#[derive(Args)]
struct OutArgs {
    /// Certificate destination; standard output when absent
    #[arg(long = "out")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Constant,
    Latin,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    colors: u32,
    #[arg(long, value_enum, default_value = "constant")]
    scheme: Scheme,
    /// Color used by the constant scheme
    #[arg(long, default_value_t = 1)]
    fill: u32,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ColorArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    colors: u32,
    #[arg(long)]
    seed: u64,
    /// With --k and --l: search this many random colorings for a passing one
    #[arg(long, requires_all = ["k", "l"])]
    attempts: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, requires = "l")]
    k: Option<usize>,
    #[arg(long, requires = "k")]
    l: Option<usize>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct RxArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: usize,
    /// Largest number of colors to try
    #[arg(long = "t", default_value_t = 4)]
    t_max: u32,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Where to write the witness certificate, if any
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PackArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Terminal set, e.g. 0:0,0:1,1:0
    #[arg(long, value_delimiter = ',', required = true)]
    set: Vec<String>,
    /// Stop once this many trees are packed
    #[arg(long)]
    l: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct BoundsArgs {
    /// Case tag; every case when absent
    #[arg(long)]
    case: Option<String>,
    /// A single n or an inclusive range a..b
    #[arg(long)]
    n: String,
    #[arg(long, default_value_t = 3)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    l: u32,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    l: u32,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    event: String,
    #[arg(long = "t", visible_alias = "colors")]
    t: u32,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    l: usize,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// Named terminal set: one-class, two-classes or spread
    #[arg(long, conflicts_with = "set")]
    case: Option<String>,
    /// Explicit terminal set, e.g. 0:0,0:1,1:0
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<String>>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct RamseyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Side length of the biclique
    #[arg(long, alias = "t")]
    k: usize,
}

#[derive(Args)]
struct RefuteArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    k: usize,
}

enum Status {
    Pass,
    Counterexample,
}

fn read_certificate(path: &PathBuf) -> Result<Certificate> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Certificate::parse(&text).with_context(|| format!("malformed certificate {}", path.display()))
}

/// Writes `cert` to `out` or standard output. With a file destination the
/// summary goes to standard output; otherwise it goes to standard error so
/// that the output stays a valid certificate.
fn emit(cert: &Certificate, out: &Option<PathBuf>, summary: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, cert.render()).with_context(|| format!("cannot write {}", path.display()))?;
            println!("{summary}");
        }
        None => {
            eprintln!("{summary}");
            print!("{}", cert.render());
        }
    }
    Ok(())
}

fn parse_set(graph: &MultipartiteGraph, tokens: &[String]) -> Result<TerminalSet> {
    let vertices = tokens
        .iter()
        .map(|t| parse_vertex(0, t.trim()).map_err(|_| anyhow::anyhow!("`{t}` is not a vertex (class:offset)")))
        .collect::<Result<Vec<_>>>()?;
    Ok(TerminalSet::new(graph, &vertices)?)
}

fn gen(args: GenArgs) -> Result<Status> {
    let g = args.graph.graph()?;
    let c = match args.scheme {
        Scheme::Constant => Coloring::constant(&g, args.colors, args.fill)?,
        Scheme::Latin => Coloring::latin(&g, args.colors)?,
    };
    let summary = format!("gen {} edges {} colors", g.edge_count(), c.t());
    emit(&Certificate::new(g, c), &args.out.out, &summary)?;
    Ok(Status::Pass)
}

fn color(args: ColorArgs) -> Result<Status> {
    let g = args.graph.graph()?;
    let (Some(attempts), Some(k), Some(l)) = (args.attempts, args.k, args.l) else {
        if args.k.is_some() || args.l.is_some() {
            bail!("--k and --l are only used together with --attempts");
        }
        let c = random_coloring(&g, args.colors, &mut trial_rng(args.seed, 0))?;
        let summary = format!("color random seed {} distinct {}", args.seed, c.distinct_colors());
        emit(&Certificate::new(g, c), &args.out.out, &summary)?;
        return Ok(Status::Pass);
    };
    match search_good_coloring_par(&g, args.colors, k, l, attempts, args.seed, args.jobs)? {
        SearchOutcome::Found { coloring, attempt } => {
            let summary = format!("color found attempt {attempt}");
            emit(&Certificate::new(g, coloring), &args.out.out, &summary)?;
            Ok(Status::Pass)
        }
        SearchOutcome::Exhausted { attempts, reason } => {
            match &reason {
                ExhaustReason::AllFailed { last_failing } => {
                    println!("color exhausted {attempts} failing {last_failing}")
                }
                ExhaustReason::BelowLowerBound { bound, .. } => {
                    println!("color exhausted {attempts} lower-bound {bound}")
                }
            }
            eprintln!("{reason}");
            Ok(Status::Counterexample)
        }
    }
}

fn verify(args: VerifyArgs) -> Result<Status> {
    let cert = read_certificate(&args.input)?;
    if cert.packing.is_none() && args.k.is_none() {
        bail!("nothing to verify: the certificate has no packing and --k/--l are absent");
    }
    let mut status = Status::Pass;
    if let Some(p) = &cert.packing {
        match verify_packing(&cert.graph, &cert.coloring, p)? {
            None => println!("verify packing ok {} {}", p.terminals(), p.len()),
            Some(v) => {
                println!("verify packing fail {v}");
                status = Status::Counterexample;
            }
        }
    }
    if let (Some(k), Some(l)) = (args.k, args.l) {
        match verify_coloring_par(&cert.graph, &cert.coloring, k, l, args.jobs)? {
            None => println!("verify coloring ok k {k} l {l}"),
            Some(s) => {
                println!("verify coloring fail k {k} l {l} S {s}");
                status = Status::Counterexample;
            }
        }
    }
    Ok(status)
}

fn rx(args: RxArgs) -> Result<Status> {
    let g = args.graph.graph()?;
    // more colors than edges never helps
    let t_max = args.t_max.min(g.edge_count() as u32);
    let r = rx_exact_par(&g, args.k, args.l, t_max, args.jobs)?;
    let value = match r.value {
        RxValue::Colors(t) => t.to_string(),
        RxValue::Infeasible => "infeasible".to_string(),
        RxValue::AboveMax(t) => format!(">{t}"),
    };
    println!(
        "rx {} k {} l {} value {value} lower {} checked {}",
        args.graph.classes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
        args.k,
        args.l,
        r.lower_bound,
        r.colorings_checked
    );
    if let Some(s) = &r.failing_set {
        println!("rx failing {s}");
    }
    if let Some(w) = r.witness {
        let cert = Certificate::new(g, w);
        match &args.out {
            Some(path) => {
                fs::write(path, cert.render()).with_context(|| format!("cannot write {}", path.display()))?;
                eprintln!("witness written to {}", path.display());
            }
            None => {
                for line in cert.render().lines() {
                    println!("rx witness {line}");
                }
            }
        }
    }
    Ok(Status::Pass)
}

fn pack(args: PackArgs) -> Result<Status> {
    let cert = read_certificate(&args.input)?;
    let s = parse_set(&cert.graph, &args.set)?;
    let cap = args.l.unwrap_or(usize::MAX);
    let r = max_rainbow_packing(&cert.graph, &cert.coloring, &s, cap);
    let summary = format!("pack {s} {}", r.count);
    let reached = args.l.is_none_or(|l| r.count >= l);
    let out = Certificate::new(cert.graph, cert.coloring).with_packing(r.packing);
    emit(&out, &args.out.out, &summary)?;
    Ok(if reached { Status::Pass } else { Status::Counterexample })
}

fn n_range(spec: &str) -> Result<std::ops::RangeInclusive<u64>> {
    let parse = |s: &str| s.trim().parse::<u64>().with_context(|| format!("`{s}` is not a valid n"));
    match spec.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
            if a > b {
                bail!("empty range {spec}");
            }
            Ok(a..=b)
        }
        None => {
            let n = parse(spec)?;
            Ok(n..=n)
        }
    }
}

fn bounds(args: BoundsArgs) -> Result<Status> {
    let cases: Vec<BoundCase> = match &args.case {
        Some(tag) => vec![tag.parse()?],
        None => BoundCase::ALL.to_vec(),
    };
    let range = n_range(&args.n)?;
    let mut reports = Vec::new();
    for &case in &cases {
        for n in range.clone() {
            match evaluate_bound(case, n, args.k, args.l) {
                Ok(r) => reports.push(r),
                // with every case selected, skip n where a case is undefined
                Err(BoundsError::NTooSmall { .. }) if args.case.is_none() => continue,
                Err(e) => return Err(e.into()),
            }
        }
    }
    println!("{:<18} {:>6} {:>14} {:>13} {:>18}  scheme", "case", "n", "kind", "scope", "value");
    for r in &reports {
        println!(
            "{:<18} {:>6} {:>14} {:>13} {:>18.10e}  {}",
            r.case.tag(),
            r.n,
            format!("{:?}", r.kind()),
            format!("{:?}", r.scope()),
            r.value,
            match r.scheme {
                EvalScheme::ExactRational => "exact",
                EvalScheme::LogSpace => "log",
            }
        );
    }
    for r in &reports {
        println!("{}", r.machine_line());
    }
    Ok(Status::Pass)
}

fn threshold(args: ThresholdArgs) -> Result<Status> {
    let n = find_threshold(args.k, args.l)?;
    println!("threshold {} {} {n}", args.k, args.l);
    for m in [n - 1, n] {
        println!("{}", union_success_bound(m, args.k, args.l)?.machine_line());
    }
    Ok(Status::Pass)
}

fn mc(args: McArgs) -> Result<Status> {
    let g = args.graph.graph()?;
    let event: Event = args.event.parse()?;
    let selector = match (&args.set, &args.case) {
        (Some(tokens), _) => Selector::Explicit(parse_set(&g, tokens)?),
        (None, Some(tag)) => Selector::Case {
            case: tag.parse()?,
            k: args.k.context("--case needs --k")?,
        },
        (None, None) => match (event, args.k) {
            (Event::AnySetFails, Some(k)) => Selector::AllSets { k },
            _ => bail!("give --set, or --case with --k (or --k alone for any-set-fail)"),
        },
    };
    let cfg = McConfig {
        master_seed: args.seed,
        trials: args.trials,
        t: args.t,
        l: args.l,
        selector,
    };
    let est = estimate_event_par(&g, &cfg, event, args.jobs)?;
    println!("{}", est.machine_line());
    if let Some(p) = exact_probability(&g, &cfg, event)? {
        let pf = bounds::to_f64(&p);
        eprintln!("exact probability {p} = {pf:.10}, z = {:+.3}", est.z_score(pf));
    }
    Ok(Status::Pass)
}

fn ramsey(args: RamseyArgs) -> Result<Status> {
    let cert = read_certificate(&args.input)?;
    let join = |vs: &[VertexId]| vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
    match find_mono_biclique(&cert.graph, &cert.coloring, args.k)? {
        Some(b) => println!("ramsey color {} U {} V {}", b.color, join(&b.side_u), join(&b.side_v)),
        None => println!("ramsey none"),
    }
    Ok(Status::Pass)
}

fn refute(args: RefuteArgs) -> Result<Status> {
    let cert = read_certificate(&args.input)?;
    match refute_with_mono_biclique(&cert.graph, &cert.coloring, args.k)? {
        Some(r) => {
            println!(
                "refute S {} color {} trees {} rainbow {} packing {}",
                r.terminals, r.biclique.color, r.trees_checked, r.rainbow_trees, r.max_packing
            );
            Ok(Status::Counterexample)
        }
        None => {
            println!("refute none");
            Ok(Status::Pass)
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    match cli.verb {
        Verb::Gen(a) => gen(a),
        Verb::Color(a) => color(a),
        Verb::Verify(a) => verify(a),
        Verb::Rx(a) => rx(a),
        Verb::Pack(a) => pack(a),
        Verb::Bounds(a) => bounds(a),
        Verb::Threshold(a) => threshold(a),
        Verb::Mc(a) => mc(a),
        Verb::Ramsey(a) => ramsey(a),
        Verb::Refute(a) => refute(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Counterexample) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
