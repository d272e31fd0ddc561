use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pregelkit::algorithms::msf::{self, MsfState};
use pregelkit::algorithms::sv::SvState;
use pregelkit::algorithms::{
    write_results, AttributeMsg, AttributeReq, HashMin, Msf, PageRank, ShiloachVishkin, Sssp,
};
use pregelkit::generate;
use pregelkit::metrics::{sweep_thresholds, write_sweep_csv};
use pregelkit::{
    load_edge_list, run, Config, Error, Graph, MirrorThreshold, PairId, VertexId, VertexProgram,
};

#[derive(Parser)]
#[command(name = "pregelkit", version, about = "Vertex-centric BSP graph computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm and write per-vertex results.
    Run {
        algorithm: Algorithm,
        #[command(flatten)]
        common: Common,
        /// Results file ("id value" per line); stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// JSON run report.
        #[arg(long)]
        report: Option<PathBuf>,
        /// msf only: write the forest as "lo hi weight" lines.
        #[arg(long)]
        forest: Option<PathBuf>,
    },
    /// Run one algorithm under several mirroring thresholds and write a CSV.
    Sweep {
        algorithm: Algorithm,
        #[command(flatten)]
        common: Common,
        /// Comma-separated thresholds: numbers, `inf`, `off` or `auto`.
        #[arg(long, value_delimiter = ',', required = true)]
        thresholds: Vec<MirrorThreshold>,
        /// CSV output; stdout when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write a synthetic edge list.
    Gen {
        kind: GraphKind,
        /// Vertex count (leaves for `star`, left side for `bipartite`).
        #[arg(long, short = 'n', default_value_t = 1000)]
        n: u64,
        /// Right side size for `bipartite`.
        #[arg(long, default_value_t = 100)]
        m: u64,
        #[arg(long, default_value_t = 4.0)]
        avg_degree: f64,
        /// Degree exponent for `powerlaw`.
        #[arg(long, default_value_t = 2.1)]
        gamma: f64,
        /// Only `random` can be directed.
        #[arg(long)]
        directed: bool,
        /// Only `random` can be weighted.
        #[arg(long)]
        weighted: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Edge list file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Hashmin,
    Sv,
    Sssp,
    Pagerank,
    Msf,
    Attribute,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphKind {
    Random,
    Powerlaw,
    Star,
    Path,
    Bipartite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum IdType {
    Int,
    Pair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

#[derive(Args)]
struct Common {
    /// Edge list: `src dst [weight]` per line, `#` comments.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = IdType::Int)]
    id_type: IdType,
    #[arg(long)]
    directed: bool,
    #[arg(long)]
    weighted: bool,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// A number, `auto` (cost model) or `off`.
    #[arg(long, default_value = "off")]
    mirror_threshold: MirrorThreshold,
    /// Request-respond variant for `sv` and `attribute`.
    #[arg(long, value_enum, default_value_t = Switch::On)]
    reqresp: Switch,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    combiner: Switch,
    /// Shuffles message arrival order; results do not depend on it.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    max_supersteps: u64,
    /// sssp source vertex.
    #[arg(long)]
    source: Option<String>,
    /// pagerank convergence threshold.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
}

impl Common {
    fn config(&self) -> Config {
        Config {
            workers: self.workers as usize,
            mirror: self.mirror_threshold,
            combiner: self.combiner.on(),
            max_supersteps: self.max_supersteps,
            shuffle_seed: self.seed,
            ..Config::default()
        }
    }
}

/// Something to do with a vertex program once the algorithm is chosen.
trait Job<I: VertexId> {
    fn go<P: VertexProgram<Id = I>>(
        self,
        graph: &Graph<I>,
        program: &P,
        render: &dyn Fn(&P::Value) -> String,
        after: &dyn Fn(&BTreeMap<I, P::Value>) -> Result<()>,
    ) -> Result<()>;
}

fn dispatch<I, J>(algorithm: Algorithm, common: &Common, graph: &Graph<I>, forest: Option<&Path>, job: J) -> Result<()>
where
    I: VertexId,
    <I as FromStr>::Err: Display,
    J: Job<I>,
{
    if common.source.is_some() && algorithm != Algorithm::Sssp {
        bail!("--source only applies to sssp");
    }
    match algorithm {
        Algorithm::Hashmin => job.go(graph, &HashMin::new(), &|v: &I| v.to_string(), &none),
        Algorithm::Sv => job.go(
            graph,
            &ShiloachVishkin::new(common.reqresp.on()),
            &|s: &SvState<I>| s.d.to_string(),
            &none,
        ),
        Algorithm::Sssp => {
            let raw = common.source.as_deref().context("sssp needs --source")?;
            let source: I = raw
                .parse()
                .map_err(|e| anyhow::anyhow!("bad --source `{raw}`: {e}"))?;
            if !graph.contains(&source) {
                bail!("source vertex {source} is not in the graph");
            }
            Sssp::validate(graph)?;
            let render = |d: &Option<f64>| d.map_or_else(|| "inf".to_string(), |d| d.to_string());
            job.go(graph, &Sssp::new(source), &render, &none)
        }
        Algorithm::Pagerank => {
            if common.epsilon.is_nan() || common.epsilon < 0.0 {
                bail!("--epsilon must be >= 0");
            }
            job.go(graph, &PageRank::new(common.epsilon), &|v: &f64| v.to_string(), &none)
        }
        Algorithm::Msf => {
            if graph.is_directed() {
                bail!("msf needs an undirected graph");
            }
            msf::validate(graph)?;
            let write_forest = |values: &BTreeMap<I, MsfState<I>>| -> Result<()> {
                let edges = Msf::forest(values.values());
                let weight: f64 = edges.iter().map(|e| e.weight).sum();
                eprintln!("forest: {} edges, weight {weight}", edges.len());
                if let Some(path) = forest {
                    let mut out = create(path)?;
                    for e in &edges {
                        writeln!(out, "{} {} {}", e.lo, e.hi, e.weight)?;
                    }
                    out.flush()?;
                }
                Ok(())
            };
            job.go(graph, &Msf::new(), &|s: &MsfState<I>| s.d.to_string(), &write_forest)
        }
        Algorithm::Attribute => {
            let render = |v: &Vec<(I, u32)>| {
                v.iter()
                    .map(|(u, a)| format!("{u}={a}"))
                    .collect::<Vec<_>>()
                    .join(",")
            };
            if common.reqresp.on() {
                job.go(graph, &AttributeReq::new(), &render, &none)
            } else {
                job.go(graph, &AttributeMsg::new(), &render, &none)
            }
        }
    }
}

fn none<K, V>(_: &BTreeMap<K, V>) -> Result<()> {
    Ok(())
}

struct RunJob<'a> {
    config: Config,
    output: Option<&'a Path>,
    report: Option<&'a Path>,
}

impl<I: VertexId> Job<I> for RunJob<'_> {
    fn go<P: VertexProgram<Id = I>>(
        self,
        graph: &Graph<I>,
        program: &P,
        render: &dyn Fn(&P::Value) -> String,
        after: &dyn Fn(&BTreeMap<I, P::Value>) -> Result<()>,
    ) -> Result<()> {
        let out = match run(graph, program, &self.config) {
            Ok(out) => out,
            Err(Error::SuperstepLimit { limit, report }) => {
                if let Some(path) = self.report {
                    write_report(path, &report.to_json()?)?;
                }
                bail!("superstep limit {limit} exceeded (partial report written if requested)");
            }
            Err(e) => return Err(e.into()),
        };
        let sink: Box<dyn Write> = match self.output {
            Some(p) => Box::new(create(p)?),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        write_results(out.values.iter(), |v| render(v), sink)?;
        if let Some(path) = self.report {
            write_report(path, &out.report.to_json()?)?;
        }
        let tau = out
            .report
            .mirror
            .threshold
            .map_or_else(|| "off".to_string(), |t| format!("{t:.3}"));
        eprintln!(
            "supersteps {} | wire messages {} | tau {tau} | mirrored {}",
            out.report.supersteps,
            out.report.wire_total(),
            out.report.mirror.mirrored_vertices
        );
        after(&out.values)
    }
}

struct SweepJob<'a> {
    config: Config,
    thresholds: &'a [MirrorThreshold],
    csv: Option<&'a Path>,
}

impl<I: VertexId> Job<I> for SweepJob<'_> {
    fn go<P: VertexProgram<Id = I>>(
        self,
        graph: &Graph<I>,
        program: &P,
        _: &dyn Fn(&P::Value) -> String,
        _: &dyn Fn(&BTreeMap<I, P::Value>) -> Result<()>,
    ) -> Result<()> {
        let rows = sweep_thresholds(graph, program, &self.config, self.thresholds)?;
        match self.csv {
            Some(p) => write_sweep_csv(&rows, create(p)?)?,
            None => write_sweep_csv(&rows, io::stdout().lock())?,
        }
        Ok(())
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_report(path: &Path, json: &str) -> Result<()> {
    std::fs::write(path, format!("{json}\n")).with_context(|| format!("cannot write {}", path.display()))
}

fn load<I>(common: &Common) -> Result<Graph<I>>
where
    I: VertexId,
    <I as FromStr>::Err: Display,
{
    let g = load_edge_list(&common.graph, common.directed, common.weighted)
        .with_context(|| format!("loading {}", common.graph.display()))?;
    log::info!("loaded {} vertices from {}", g.num_vertices(), common.graph.display());
    Ok(g)
}

fn execute<I>(command: &Command) -> Result<()>
where
    I: VertexId,
    <I as FromStr>::Err: Display,
{
    match command {
        Command::Run {
            algorithm,
            common,
            output,
            report,
            forest,
        } => {
            if forest.is_some() && *algorithm != Algorithm::Msf {
                bail!("--forest only applies to msf");
            }
            let graph = load::<I>(common)?;
            let job = RunJob {
                config: common.config(),
                output: output.as_deref(),
                report: report.as_deref(),
            };
            dispatch(*algorithm, common, &graph, forest.as_deref(), job)
        }
        Command::Sweep {
            algorithm,
            common,
            thresholds,
            csv,
        } => {
            let graph = load::<I>(common)?;
            let job = SweepJob {
                config: common.config(),
                thresholds,
                csv: csv.as_deref(),
            };
            dispatch(*algorithm, common, &graph, None, job)
        }
        Command::Gen { .. } => unreachable!("handled before id dispatch"),
    }
}

fn gen(command: &Command) -> Result<()> {
    let Command::Gen {
        kind,
        n,
        m,
        avg_degree,
        gamma,
        directed,
        weighted,
        seed,
        output,
    } = command
    else {
        unreachable!()
    };
    if (*directed || *weighted) && !matches!(kind, GraphKind::Random) {
        bail!("--directed and --weighted only apply to `gen random`");
    }
    let g = match kind {
        GraphKind::Random => generate::random_graph(*n, *avg_degree, *directed, *weighted, *seed)?,
        GraphKind::Powerlaw => generate::power_law(*n, *avg_degree, *gamma, *seed)?,
        GraphKind::Star => generate::star(*n),
        GraphKind::Path => generate::path(*n),
        GraphKind::Bipartite => generate::complete_bipartite(*n, *m),
    };
    match output {
        Some(p) => g.write_edge_list(create(p)?)?,
        None => g.write_edge_list(BufWriter::new(io::stdout().lock()))?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let id_type = match &cli.command {
        Command::Run { common, .. } | Command::Sweep { common, .. } => Some(common.id_type),
        Command::Gen { .. } => None,
    };
    let result = match id_type {
        None => gen(&cli.command),
        Some(IdType::Int) => execute::<u64>(&cli.command),
        Some(IdType::Pair) => execute::<PairId>(&cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
