use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pwgraph::experiment::{self, DemoSpec, SCHEMA_VERSION};
use pwgraph::frame::{self, FrameSystem};
use pwgraph::generate::{self, GraphKind};
use pwgraph::io::{self, format_sig15};
use pwgraph::partition::{self, ClusterPartition};
use pwgraph::reconstruct::{self, FrameIterationConfig, Method, SamplingMode};
use pwgraph::spectral::{self, SpectralDecomposition};
use pwgraph::splines;
use pwgraph::{Error, GraphSignal, WeightedGraph};

#[derive(Parser)]
#[command(
    name = "pwgraph",
    version,
    about = "Sample and reconstruct band-limited graph signals from cluster averages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Laplacian eigenvalues of a graph.
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Frame bounds of the cluster averages on PW_omega.
    FrameCheck {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[command(flatten)]
        band: BandArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reconstruct a band-limited signal from its cluster averages.
    Reconstruct {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[command(flatten)]
        band: BandArgs,
        #[arg(long, value_enum, default_value = "frame-iter")]
        method: MethodArg,
        /// Relaxation parameter (default 2/(a+b)).
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        /// Sample the raw signal instead of its projection onto PW_omega.
        #[arg(long)]
        aliasing: bool,
        #[command(flatten)]
        signal: SignalArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Spline interpolation error against the 2*gamma^k bound.
    Spline {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[command(flatten)]
        band: BandArgs,
        /// Spline orders (repeatable).
        #[arg(long = "k", default_values_t = [1u32, 2, 4, 8])]
        orders: Vec<u32>,
        #[command(flatten)]
        signal: SignalArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Full pipeline on the path graph with consecutive-pair clusters.
    DemoPath {
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long = "k", default_values_t = [1u32, 2, 4, 8])]
        orders: Vec<u32>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file.
    #[arg(
        long,
        conflicts_with = "generate",
        required_unless_present = "generate"
    )]
    graph: Option<PathBuf>,
    /// Generator kind.
    #[arg(long, value_enum)]
    generate: Option<KindArg>,
    /// Vertex count for generators.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Connection radius for random-geometric graphs.
    #[arg(long, default_value_t = 0.3)]
    radius: f64,
    /// Edge probability for Erdős–Rényi graphs.
    #[arg(long, default_value_t = 0.3)]
    p: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Path,
    Cycle,
    Grid2d,
    RandomGeometric,
    ErdosRenyiWeighted,
}

#[derive(Args)]
struct PartitionArgs {
    /// Partition file (one cluster per line).
    #[arg(long, conflicts_with = "clusters")]
    partition: Option<PathBuf>,
    /// Generated partition: pairs, blocks:<m> or bfs:<r>.
    #[arg(long, default_value = "pairs")]
    clusters: String,
}

#[derive(Args)]
struct BandArgs {
    #[arg(long)]
    omega: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
}

#[derive(Args)]
struct SignalArgs {
    /// Signal file (one value per line).
    #[arg(long, conflicts_with = "random_seed")]
    signal: Option<PathBuf>,
    /// Seed for a random unit-norm signal in PW_omega.
    #[arg(long, default_value_t = 0)]
    random_seed: u64,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    FrameIter,
    Dual,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. }
            | Error::Disconnected { .. }
            | Error::NoNonzeroEigenvalue
            | Error::EmptyBand { .. }
            | Error::NotAFrame
            | Error::RankDeficient { .. }
            | Error::IllConditioned { .. }
            | Error::GammaTooLarge { .. }
            | Error::GeneratorDisconnected { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

impl GraphArgs {
    fn load(&self) -> CliResult<WeightedGraph> {
        if let Some(path) = &self.graph {
            return Ok(io::read_edge_list(path)?);
        }
        let kind = self.kind()?;
        Ok(generate::generate_graph(kind, self.seed)?)
    }

    fn kind(&self) -> CliResult<GraphKind> {
        let need_n = || {
            self.n
                .ok_or_else(|| Failure::Usage("--n is required for this generator".into()))
        };
        Ok(
            match self.generate.expect("clap enforces --graph or --generate") {
                KindArg::Path => GraphKind::Path { n: need_n()? },
                KindArg::Cycle => GraphKind::Cycle { n: need_n()? },
                KindArg::Grid2d => match (self.rows, self.cols) {
                    (Some(rows), Some(cols)) => GraphKind::Grid2d { rows, cols },
                    _ => return Err(Failure::Usage("grid2d needs --rows and --cols".into())),
                },
                KindArg::RandomGeometric => GraphKind::RandomGeometric {
                    n: need_n()?,
                    radius: self.radius,
                },
                KindArg::ErdosRenyiWeighted => GraphKind::ErdosRenyiWeighted {
                    n: need_n()?,
                    p: self.p,
                },
            },
        )
    }
}

impl PartitionArgs {
    fn load(&self, graph: &WeightedGraph) -> CliResult<ClusterPartition> {
        let clusters = match &self.partition {
            Some(path) => io::read_partition(path)?,
            None => parse_cluster_spec(&self.clusters, graph)?,
        };
        Ok(ClusterPartition::new(graph, clusters)?)
    }
}

fn parse_cluster_spec(spec: &str, graph: &WeightedGraph) -> CliResult<Vec<Vec<usize>>> {
    let bad = || Failure::Usage(format!("unknown cluster spec `{spec}`"));
    if spec == "pairs" {
        return Ok(partition::pairs(graph.n()));
    }
    let (kind, arg) = spec.split_once(':').ok_or_else(bad)?;
    let value: usize = arg.parse().map_err(|_| bad())?;
    match kind {
        "blocks" => Ok(partition::blocks(graph.n(), value)?),
        "bfs" => Ok(partition::bfs_balls(graph, value)),
        _ => Err(bad()),
    }
}

impl SignalArgs {
    /// The signal to sample: read from file, or a random unit-norm element
    /// of `PW_ω`.
    fn load(&self, decomp: &SpectralDecomposition, omega: f64) -> CliResult<GraphSignal> {
        match &self.signal {
            Some(path) => Ok(io::read_signal(path, Some(decomp.n()))?),
            None => Ok(generate::generate_pw_signal(
                decomp,
                omega,
                self.random_seed,
            )?),
        }
    }
}

impl OutputArgs {
    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(e.to_string())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    schema: u32,
    eigenvalues: &'a [f64],
}

#[derive(Serialize)]
struct FrameCheckJson {
    #[serde(flatten)]
    check: frame::FrameCheck,
    dimension: usize,
    clusters: usize,
    best_alpha: Option<f64>,
}

#[derive(Serialize)]
struct ReconstructJson {
    method: Method,
    iterations: usize,
    eta: Option<f64>,
    residual: f64,
    rel_error: Option<f64>,
    converged: bool,
    mode: SamplingMode,
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Spectrum { graph, output } => {
            let decomp = spectral::decompose(&graph.load()?)?;
            let text = match output.format(Format::Csv) {
                Format::Csv => {
                    let mut s = String::from("index,eigenvalue\n");
                    for (i, l) in decomp.eigenvalues().iter().enumerate() {
                        let _ = writeln!(s, "{i},{}", format_sig15(*l));
                    }
                    s
                }
                Format::Json => experiment::to_json(&SpectrumJson {
                    schema: SCHEMA_VERSION,
                    eigenvalues: decomp.eigenvalues(),
                }),
            };
            output.emit(&text)
        }
        Command::FrameCheck {
            graph,
            partition,
            band,
            output,
        } => {
            let g = graph.load()?;
            let decomp = spectral::decompose(&g)?;
            let part = partition.load(&g)?;
            let fs = FrameSystem::new(&decomp, &part, band.omega, band.alpha)?;
            let check = fs.summary();
            let text = match output.format(Format::Json) {
                Format::Json => experiment::to_json(&FrameCheckJson {
                    check,
                    dimension: fs.dimension(),
                    clusters: fs.cluster_count(),
                    best_alpha: frame::best_alpha(band.omega, fs.lambda_xi),
                }),
                Format::Csv => format!(
                    "omega,alpha,gamma,lambda_Xi,a,b,guarantee_active\n{},{},{},{},{},{},{}\n",
                    format_sig15(check.omega),
                    format_sig15(check.alpha),
                    format_sig15(check.gamma),
                    format_sig15(check.lambda_xi),
                    format_sig15(check.a),
                    format_sig15(check.b),
                    check.guarantee_active
                ),
            };
            output.emit(&text)
        }
        Command::Reconstruct {
            graph,
            partition,
            band,
            method,
            mu,
            tol,
            max_iter,
            aliasing,
            signal,
            output,
        } => {
            let g = graph.load()?;
            let decomp = spectral::decompose(&g)?;
            let part = partition.load(&g)?;
            let fs = FrameSystem::new(&decomp, &part, band.omega, band.alpha)?;
            let f = signal.load(&decomp, band.omega)?;
            let truth = fs.pw.project(&f)?;
            let mode = if aliasing {
                SamplingMode::Aliasing
            } else {
                SamplingMode::Bandlimited
            };
            let sampled = if aliasing { &f } else { &truth };
            let samples = part.analyze(sampled)?;
            let result = match method {
                MethodArg::FrameIter => {
                    let cfg = FrameIterationConfig { mu, max_iter, tol };
                    reconstruct::frame_algorithm(&fs, &samples, &cfg, None)?
                }
                MethodArg::Dual => reconstruct::dual_frame_reconstruct(&fs, &samples)?,
            };
            let scale = truth.norm();
            let err = result.signal.distance(&truth);
            let report = ReconstructJson {
                method: result.method,
                iterations: result.iterations,
                eta: result.eta,
                residual: result.residual,
                rel_error: Some(if scale > 0.0 { err / scale } else { err }),
                converged: result.converged,
                mode,
            };
            let text = match output.format(Format::Json) {
                Format::Json => experiment::to_json(&report),
                Format::Csv => format!(
                    "method,iterations,eta,residual,rel_error\n{},{},{},{},{}\n",
                    match report.method {
                        Method::FrameIter => "frame-iter",
                        Method::Dual => "dual",
                    },
                    report.iterations,
                    report.eta.map(format_sig15).unwrap_or_default(),
                    format_sig15(report.residual),
                    report.rel_error.map(format_sig15).unwrap_or_default()
                ),
            };
            output.emit(&text)
        }
        Command::Spline {
            graph,
            partition,
            band,
            orders,
            signal,
            output,
        } => {
            let g = graph.load()?;
            let decomp = spectral::decompose(&g)?;
            let part = partition.load(&g)?;
            let f = decomp.pw_project(band.omega, &signal.load(&decomp, band.omega)?)?;
            let rows = splines::spline_convergence_experiment(
                &decomp, &part, band.omega, band.alpha, &f, &orders,
            )?;
            let text = match output.format(Format::Csv) {
                Format::Csv => {
                    let mut s = String::from("k,rel_error,bound_2gamma_k,within_bound\n");
                    for r in &rows {
                        let _ = writeln!(
                            s,
                            "{},{},{},{}",
                            r.k,
                            format_sig15(r.rel_error),
                            r.bound.map(format_sig15).unwrap_or_default(),
                            r.within_bound.map(|b| b.to_string()).unwrap_or_default()
                        );
                    }
                    s
                }
                Format::Json => experiment::to_json(&rows),
            };
            output.emit(&text)
        }
        Command::DemoPath {
            n,
            omega,
            alpha,
            seed,
            trials,
            orders,
            tol,
            max_iter,
            output,
        } => {
            if output.format(Format::Json) == Format::Csv {
                return Err(Failure::Usage("demo-path only emits JSON".into()));
            }
            let spec = DemoSpec {
                trials,
                orders,
                tol,
                max_iter,
                ..DemoSpec::path(n, omega, alpha, seed)
            };
            let report = experiment::demo_path(&spec)?;
            output.emit(&experiment::to_json(&report))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(2)
        }
    }
}
