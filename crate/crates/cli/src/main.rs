use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dcoc_core::circulant::{
    lemma_verdict, scan_circulants_resumable, verify_even_impossibility, CirculantSpec, ScanMode,
};
use dcoc_core::enumeration::{census_dcoc_resumable, random_probe, CensusFilter, ScanReport};
use dcoc_core::extension::{extend, find_extending_partition, gen_odd_dcoc, ExtendingPartition};
use dcoc_core::verify::{run_suite, Depth};
use dcoc_core::{chi_o, is_deeply_critical, Error, OrientedGraph};

/// Overrides the default output directory (the current directory).
const OUT_ENV: &str = "DCOC_OUT";

#[derive(Parser)]
#[command(
    name = "dcoc",
    version,
    about = "Oriented colouring and deeply critical oriented cliques"
)]
struct Cli {
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for scans and per-arc checks.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Directory for written graphs and checkpoints.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Oriented chromatic number with a colouring certificate.
    Chi { file: PathBuf },
    /// Clique and deep-criticality report.
    Check { file: PathBuf },
    /// Apply a 2-, 4- or 6-extension.
    Extend(ExtendArgs),
    /// Construct a deeply critical oriented clique of odd order.
    GenOdd {
        #[arg(long)]
        n: usize,
    },
    /// Circulant oriented graphs.
    #[command(subcommand)]
    Circulant(CirculantCommand),
    /// Census or random probe for deeply critical oriented cliques.
    Scan(ScanArgs),
    /// Run the reproducibility suite.
    VerifyPaper {
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        #[arg(long)]
        full: bool,
    },
}

#[derive(Args)]
struct ExtendArgs {
    file: PathBuf,
    #[arg(long, value_parser = ["2", "4", "6"])]
    k: String,
    /// Parts as `a,b,c/d,e/f,g`; searched for when omitted.
    #[arg(long)]
    partition: Option<String>,
}

#[derive(Subcommand)]
enum CirculantCommand {
    Check {
        #[arg(long)]
        n: usize,
        /// Connection set as comma-separated residues.
        #[arg(long, default_value = "")]
        set: String,
    },
    Scan {
        #[arg(long, required_unless_present = "even_sweep")]
        n: Option<usize>,
        /// Check every even order up to this bound instead.
        #[arg(long)]
        even_sweep: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Pruned)]
        mode: ModeArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Pruned,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    CliquesFirst,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = FilterArg::CliquesFirst)]
    filter: FilterArg,
    /// Sample this many random graphs instead of the full census.
    #[arg(long, requires = "seed")]
    probe: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

/// A failed run: exit code plus machine-readable reason.
struct Failure {
    code: u8,
    reason: String,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            reason: "Usage".into(),
            message: message.into(),
        }
    }

    fn verdict(reason: &str, message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            reason: reason.into(),
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoSuchOrder(_)
            | Error::NotAClique
            | Error::NotExtending(_)
            | Error::VerificationFailed(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            reason: e.kind().into(),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 2,
            reason: "Io".into(),
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    json: bool,
    out: PathBuf,
}

impl Ctx {
    fn out_dir(&self) -> Result<&Path, Failure> {
        fs::create_dir_all(&self.out)?;
        Ok(&self.out)
    }

    fn checkpoint(&self, subcommand: &str, n: usize) -> Result<PathBuf, Failure> {
        Ok(self.out_dir()?.join(format!("{subcommand}-{n}.ckpt")))
    }

    fn write_graph(&self, name: &str, g: &OrientedGraph) -> Result<PathBuf, Failure> {
        let path = self.out_dir()?.join(name);
        fs::write(&path, g.to_ograph())?;
        Ok(path)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build_global()
    {
        eprintln!("warning: {e}");
    }
    let out = cli
        .out
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let ctx = Ctx { json, out };
    match dispatch(cli.command, &ctx) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if json {
                println!("{}", json!({"error": f.reason, "message": f.message}));
            } else {
                eprintln!("error: {} ({})", f.message, f.reason);
            }
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(command: Command, ctx: &Ctx) -> Outcome {
    match command {
        Command::Chi { file } => chi(&file, ctx),
        Command::Check { file } => check(&file, ctx),
        Command::Extend(args) => extend_cmd(args, ctx),
        Command::GenOdd { n } => gen_odd(n, ctx),
        Command::Circulant(CirculantCommand::Check { n, set }) => circulant_check(n, &set, ctx),
        Command::Circulant(CirculantCommand::Scan {
            n,
            even_sweep,
            mode,
        }) => {
            let mode = match mode {
                ModeArg::Pruned => ScanMode::Pruned,
                ModeArg::Exhaustive => ScanMode::Exhaustive,
            };
            match even_sweep {
                Some(max) => even_sweep_cmd(max, ctx),
                None => circulant_scan(n.expect("required by clap"), mode, ctx),
            }
        }
        Command::Scan(args) => scan(args, ctx),
        Command::VerifyPaper { full, .. } => {
            verify(if full { Depth::Full } else { Depth::Quick }, ctx)
        }
    }
}

fn read_graph(path: &Path) -> Result<OrientedGraph, Failure> {
    let text = fs::read_to_string(path)?;
    Ok(OrientedGraph::parse_ograph(&text)?)
}

fn chi(file: &Path, ctx: &Ctx) -> Outcome {
    let g = read_graph(file)?;
    let (chi, cert) = chi_o(&g)?;
    if ctx.json {
        println!("{}", json!({"chi": chi, "certificate": cert}));
    } else {
        println!("chi_o: {chi}");
        for (i, class) in cert.classes().iter().enumerate() {
            println!("class {i}: {class:?}");
        }
    }
    Ok(())
}

fn check(file: &Path, ctx: &Ctx) -> Outcome {
    let g = read_graph(file)?;
    let report = is_deeply_critical(&g)?;
    let dcoc = report.clique && report.verdict;
    if ctx.json {
        println!("{}", json!({"report": report, "dcoc": dcoc}));
    } else {
        println!("chi_o: {}", report.chi);
        println!("absolute clique: {}", report.clique);
        println!("deeply critical: {}", report.verdict);
        println!("deeply critical clique: {dcoc}");
    }
    if dcoc {
        Ok(())
    } else {
        Err(Failure::verdict(
            "NotDeeplyCriticalClique",
            "graph is not a deeply critical oriented clique",
        ))
    }
}

fn parse_partition(text: &str) -> Result<ExtendingPartition, Failure> {
    let parts: Vec<&str> = text.split('/').collect();
    if parts.len() != 3 {
        return Err(Failure::usage(
            "partition needs three parts separated by '/'",
        ));
    }
    let mut lists: [Vec<usize>; 3] = Default::default();
    for (list, part) in lists.iter_mut().zip(parts) {
        *list = parse_list(part)?;
    }
    let [x1, x2, x3] = lists;
    Ok(ExtendingPartition::new(x1, x2, x3))
}

fn parse_list(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Failure::usage(format!("bad number {s:?}")))
        })
        .collect()
}

fn extend_cmd(args: ExtendArgs, ctx: &Ctx) -> Outcome {
    let g = read_graph(&args.file)?;
    let k: usize = args.k.parse().expect("validated by clap");
    let p = match args.partition {
        Some(text) => parse_partition(&text)?,
        None => find_extending_partition(&g)
            .ok_or_else(|| Failure::verdict("NotExtendable", "no extending partition exists"))?,
    };
    let h = extend(&g, &p, k)?;
    let path = ctx.write_graph(&format!("extend-{k}-{}.ograph", h.order()), &h)?;
    if ctx.json {
        println!(
            "{}",
            json!({"partition": p, "graph": h.to_compact(), "file": path})
        );
    } else {
        println!("partition: {:?}", p.parts());
        println!(
            "wrote {} ({} vertices, {} arcs)",
            path.display(),
            h.order(),
            h.arc_count()
        );
    }
    Ok(())
}

fn gen_odd(n: usize, ctx: &Ctx) -> Outcome {
    let g = gen_odd_dcoc(n)?;
    let path = ctx.write_graph(&format!("dcoc-{n}.ograph"), &g)?;
    if ctx.json {
        println!(
            "{}",
            json!({"n": n, "arcs": g.arc_count(), "graph": g.to_compact(), "file": path})
        );
    } else {
        println!(
            "wrote {} ({} vertices, {} arcs)",
            path.display(),
            g.order(),
            g.arc_count()
        );
    }
    Ok(())
}

fn circulant_check(n: usize, set: &str, ctx: &Ctx) -> Outcome {
    let spec = CirculantSpec::new(n, parse_list(set)?)?;
    let verdict = lemma_verdict(&spec);
    let holds = verdict.holds() && !spec.set().is_empty();
    if ctx.json {
        println!(
            "{}",
            json!({"n": n, "set": spec.set(), "verdict": verdict, "dcoc": holds})
        );
    } else {
        println!("uncovered residues: {:?}", verdict.uncovered);
        println!("ambiguous elements: {:?}", verdict.ambiguous);
        println!("deeply critical clique: {holds}");
    }
    if holds {
        Ok(())
    } else {
        Err(Failure::verdict(
            "NotDeeplyCriticalClique",
            "circulant is not a deeply critical oriented clique",
        ))
    }
}

fn circulant_scan(n: usize, mode: ScanMode, ctx: &Ctx) -> Outcome {
    let ckpt = ctx.checkpoint("circulant-scan", n)?;
    let report = scan_circulants_resumable(n, mode, Some(&ckpt))?;
    for class in &report.classes {
        println!("{}", serde_json::to_string(class).expect("serializable"));
    }
    let summary = json!({
        "summary": true,
        "n": report.n,
        "mode": report.mode,
        "candidates": report.candidates,
        "raw": report.raw.len(),
        "classes": report.classes.len(),
        "elapsed_secs": report.elapsed_secs,
    });
    println!("{summary}");
    Ok(())
}

fn even_sweep_cmd(max: usize, ctx: &Ctx) -> Outcome {
    let sweep = verify_even_impossibility(max);
    if ctx.json {
        for o in &sweep.orders {
            println!("{}", serde_json::to_string(o).expect("serializable"));
        }
        println!(
            "{}",
            json!({"summary": true, "max": max, "holds": sweep.holds})
        );
    } else {
        for o in &sweep.orders {
            println!(
                "n = {:2}: {} found over {} candidates",
                o.n, o.found, o.candidates
            );
        }
        println!("no even-order example up to {max}: {}", sweep.holds);
    }
    if sweep.holds {
        Ok(())
    } else {
        Err(Failure::verdict(
            "EvenOrderExample",
            "an even-order circulant example was found",
        ))
    }
}

fn scan(args: ScanArgs, ctx: &Ctx) -> Outcome {
    let report: ScanReport = match args.probe {
        Some(trials) => random_probe(args.n, trials, args.seed.expect("required by clap"))?,
        None => {
            let filter = match args.filter {
                FilterArg::All => CensusFilter::All,
                FilterArg::CliquesFirst => CensusFilter::CliquesFirst,
            };
            let ckpt = ctx.checkpoint("scan", args.n)?;
            census_dcoc_resumable(args.n, filter, Some(&ckpt))?
        }
    };
    for (i, w) in report.witnesses.iter().enumerate() {
        let g = OrientedGraph::from_compact(w)?;
        ctx.write_graph(&format!("scan-{}-{i}.ograph", args.n), &g)?;
    }
    if ctx.json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        println!("n: {}", report.n);
        println!("generated: {}", report.generated);
        println!("cliques: {}", report.cliques);
        println!("dcoc: {}", report.dcoc);
        for w in &report.witnesses {
            println!("witness: {w}");
        }
    }
    Ok(())
}

fn verify(depth: Depth, ctx: &Ctx) -> Outcome {
    let results = run_suite(depth);
    if ctx.json {
        println!("{}", serde_json::to_string(&results).expect("serializable"));
    } else {
        for r in &results {
            let mark = if r.passed { "PASS" } else { "FAIL" };
            println!(
                "{mark} {:>2} {:<46} {:>7.2}s  {}",
                r.id, r.name, r.elapsed_secs, r.detail
            );
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::verdict(
            "CheckFailed",
            format!("{failed} checks failed"),
        ))
    }
}
