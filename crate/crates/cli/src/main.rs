use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use compcent::generate::{
    dag_of_sccs, giant_component, isolated_blocks, DagOfSccs, GiantComponent, IsolatedBlocks,
};
use compcent::{
    parse_edge_list, run_auto_blocks, run_baseline, ComponentwiseSolver, GraphError, ParseOptions,
    RunReport, SolveError, SolveOptions, SparseGraph,
};

#[derive(Parser)]
#[command(name = "compcent", version, about = "Componentwise eigenvector centrality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank the vertices of an edge list.
    Compute(ComputeArgs),
    /// Run componentwise and baseline side by side.
    Compare(RunArgs),
    /// Time both algorithms over a list of tolerances.
    Sweep(SweepArgs),
    /// Write a synthetic edge list.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Baseline,
    Componentwise,
    AutoBlocks,
}

#[derive(Args)]
struct RunArgs {
    /// Whitespace-separated `src dst [weight]` edge list.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    #[arg(long)]
    no_rowsum_skip: bool,
    #[arg(long)]
    no_half_discard: bool,
    #[arg(long)]
    no_batch_singles: bool,
    #[arg(long)]
    parallel_levels: bool,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, default_value_t = Algo::Componentwise)]
    algo: Algo,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated tolerances, at least two.
    #[arg(long, value_delimiter = ',', default_value = "1e-3,1e-5,1e-7,1e-9")]
    tols: Vec<f64>,
    /// Each timing is the minimum over this many solves.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    DagOfSccs,
    GiantComponent,
    IsolatedBlocks,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Destination file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// dag-of-sccs: number of components.
    #[arg(long, default_value_t = 10)]
    components: usize,
    /// dag-of-sccs and isolated-blocks: smallest component or block.
    #[arg(long)]
    min_size: Option<usize>,
    #[arg(long)]
    max_size: Option<usize>,
    /// dag-of-sccs: probability of a link between two components.
    #[arg(long, default_value_t = 0.3)]
    link_prob: f64,
    /// giant-component: number of vertices.
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    giant_fraction: f64,
    #[arg(long, default_value_t = 3)]
    extra_degree: usize,
    /// isolated-blocks: number of blocks.
    #[arg(long, default_value_t = 2)]
    blocks: usize,
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

const USAGE: u8 = 1;
const IO: u8 = 2;
const INVARIANT: u8 = 3;

impl Failure {
    fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Self {
            code,
            error: error.into(),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let code = match &e {
            SolveError::InvalidArgument(_) => USAGE,
            SolveError::Graph(_) => IO,
            _ => INVARIANT,
        };
        Failure::new(code, e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(IO, e)
    }
}

type CliResult<T = ()> = Result<T, Failure>;

impl RunArgs {
    fn options(&self) -> CliResult<SolveOptions> {
        let opts = SolveOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            rowsum_skip: !self.no_rowsum_skip,
            half_discard: !self.no_half_discard,
            batch_singles: !self.no_batch_singles,
            parallel_levels: self.parallel_levels,
            ..SolveOptions::default()
        };
        opts.validate()?;
        Ok(opts)
    }

    fn load(&self) -> CliResult<SparseGraph> {
        let file = File::open(&self.input)
            .with_context(|| format!("cannot open {}", self.input.display()))
            .map_err(|e| Failure::new(IO, e))?;
        parse_edge_list(BufReader::new(file), &ParseOptions::default())
            .map_err(|e: GraphError| {
                Failure::new(IO, anyhow!(e).context(format!("reading {}", self.input.display())))
            })
    }

    fn create(&self, name: &str) -> CliResult<BufWriter<File>> {
        fs::create_dir_all(&self.out_dir)?;
        let path = self.out_dir.join(name);
        let file = File::create(&path)
            .with_context(|| format!("cannot create {}", path.display()))
            .map_err(|e| Failure::new(IO, e))?;
        Ok(BufWriter::new(file))
    }
}

fn write_ranks(g: &SparseGraph, scores: &[f64], mut out: impl Write) -> io::Result<()> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .total_cmp(&scores[a])
            .then(g.label(a).cmp(&g.label(b)))
    });
    writeln!(out, "vertex_label,score")?;
    for v in order {
        writeln!(out, "{},{:.11e}", g.label(v), scores[v])?;
    }
    out.flush()
}

fn warn_nonconverged(report: &RunReport) {
    if report.nonconverged > 0 {
        eprintln!(
            "warning: {} component(s) hit max_iter without converging",
            report.nonconverged
        );
    }
}

fn compute(args: &ComputeArgs) -> CliResult {
    let opts = args.run.options()?;
    let g = args.run.load()?;
    let (scores, report) = match args.algo {
        Algo::Baseline => {
            let run = run_baseline(&g, &opts)?;
            if !run.outcome.converged {
                eprintln!("warning: baseline hit max_iter without converging");
            }
            (run.outcome.vector, None)
        }
        Algo::Componentwise => {
            let sol = ComponentwiseSolver::new(&g)?.solve(&opts)?;
            (sol.centrality, Some(sol.report))
        }
        Algo::AutoBlocks => {
            let run = run_auto_blocks(&g, &opts)?;
            (run.centrality, Some(run.report))
        }
    };
    write_ranks(&g, &scores, args.run.create("rank.csv")?)?;
    if let Some(report) = report {
        warn_nonconverged(&report);
        let mut out = args.run.create("report.csv")?;
        report.write_csv(&mut out)?;
        out.flush()?;
    }
    Ok(())
}

fn compare(args: &RunArgs) -> CliResult {
    let opts = args.options()?;
    let g = args.load()?;
    let cw = ComponentwiseSolver::new(&g)?.solve(&opts)?;
    let base = run_baseline(&g, &opts)?;
    warn_nonconverged(&cw.report);
    let diff = cw
        .centrality
        .iter()
        .zip(base.centrality())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let mut out = args.create("compare.csv")?;
    writeln!(
        out,
        "component,level,size,iterations,baseline_iterations,lambda,status,converged"
    )?;
    for r in &cw.report.records {
        writeln!(
            out,
            "{},{},{},{},{},{:.11e},{},{}",
            r.unit,
            r.level,
            r.size,
            r.iterations,
            base.outcome.iterations,
            r.lambda_est,
            r.status,
            r.converged
        )?;
    }
    out.flush()?;

    let mut out = args.create("compare_summary.csv")?;
    writeln!(
        out,
        "components,componentwise_total_iterations,componentwise_max_iterations,baseline_iterations,baseline_converged,lambda_max,max_abs_diff"
    )?;
    writeln!(
        out,
        "{},{},{},{},{},{:.11e},{:.11e}",
        cw.report.records.len(),
        cw.report.total_iterations,
        cw.report.records.iter().map(|r| r.iterations).max().unwrap_or(0),
        base.outcome.iterations,
        base.outcome.converged,
        cw.report.lambda_max,
        diff
    )?;
    out.flush()?;
    println!(
        "baseline {} iterations, componentwise max {} over {} units, max abs diff {:.3e}",
        base.outcome.iterations,
        cw.report.records.iter().map(|r| r.iterations).max().unwrap_or(0),
        cw.report.records.len(),
        diff
    );
    Ok(())
}

fn sweep(args: &SweepArgs) -> CliResult {
    if args.tols.len() < 2 {
        return Err(Failure::new(USAGE, anyhow!("--tols needs at least two values")));
    }
    if args.repeats == 0 {
        return Err(Failure::new(USAGE, anyhow!("--repeats must be positive")));
    }
    let base_opts = args.run.options()?;
    for &tol in &args.tols {
        SolveOptions { tol, ..base_opts.clone() }.validate()?;
    }
    let started = Instant::now();
    let g = args.run.load()?;
    let parse_seconds = started.elapsed().as_secs_f64();
    let started = Instant::now();
    let solver = ComponentwiseSolver::new(&g)?;
    let setup_seconds = started.elapsed().as_secs_f64();

    let mut out = args.run.create("sweep.csv")?;
    writeln!(out, "tol,algorithm,solve_seconds,total_seconds,total_iterations")?;
    for &tol in &args.tols {
        let opts = SolveOptions { tol, ..base_opts.clone() };
        let mut best = f64::INFINITY;
        let mut iterations = 0;
        for _ in 0..args.repeats {
            let run = run_baseline(&g, &opts)?;
            best = best.min(run.wall_seconds);
            iterations = run.outcome.iterations;
        }
        writeln!(out, "{tol:e},baseline,{best:.6e},{:.6e},{iterations}", best + parse_seconds)?;

        let mut best = f64::INFINITY;
        for _ in 0..args.repeats {
            let t = Instant::now();
            let sol = solver.solve(&opts)?;
            best = best.min(t.elapsed().as_secs_f64());
            iterations = sol.report.total_iterations;
        }
        writeln!(
            out,
            "{tol:e},componentwise,{best:.6e},{:.6e},{iterations}",
            best + parse_seconds + setup_seconds
        )?;
    }
    out.flush()?;
    Ok(())
}

fn generate(args: &GenerateArgs) -> CliResult {
    let g = match args.kind {
        Kind::DagOfSccs => {
            let d = DagOfSccs::default();
            dag_of_sccs(&DagOfSccs {
                components: args.components,
                min_size: args.min_size.unwrap_or(d.min_size),
                max_size: args.max_size.unwrap_or(d.max_size),
                link_prob: args.link_prob,
                seed: args.seed,
            })?
        }
        Kind::GiantComponent => giant_component(&GiantComponent {
            n: args.n,
            giant_fraction: args.giant_fraction,
            extra_degree: args.extra_degree,
            seed: args.seed,
        })?,
        Kind::IsolatedBlocks => {
            let d = IsolatedBlocks::default();
            isolated_blocks(&IsolatedBlocks {
                blocks: args.blocks,
                min_size: args.min_size.unwrap_or(d.min_size),
                max_size: args.max_size.unwrap_or(d.max_size),
                seed: args.seed,
            })?
        }
    };
    match &args.output {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            write_graph(&g, path)
        }
        None => {
            let stdout = io::stdout();
            g.write_edge_list(stdout.lock())?;
            Ok(())
        }
    }
}

fn write_graph(g: &SparseGraph, path: &Path) -> CliResult {
    let file = File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))
        .map_err(|e| Failure::new(IO, e))?;
    let mut out = BufWriter::new(file);
    g.write_edge_list(&mut out)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Compare(a) => compare(a),
        Command::Sweep(a) => sweep(a),
        Command::Generate(a) => generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
