use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tvg::algebra::{adjacency_matrix, block_report, incidence_matrix};
use tvg::analysis::{has_regressive, is_cyclic, is_cyclic_ignoring_spatial_pairs, reachable};
use tvg::convert::{
    add_waiting_edges, detect_class, from_cti, from_snapshots, from_ste, from_tme, CtiMode,
};
use tvg::io::{
    read_cti, read_snapshots, read_ste, read_tme, read_tvg, storage_report, write_matrix, write_tvg,
};
use tvg::{EdgeKind, Orientation, TemporalNode, Tvg};

#[derive(Parser)]
#[command(
    name = "tvg",
    version,
    about = "Inspect and convert time-varying graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputKind {
    /// per-instant contact lists
    Snapshots,
    /// presence intervals
    Cti,
    /// contact and wait records
    Ste,
    /// raw cross-instant edges
    Tme,
}

#[derive(Clone, Copy, ValueEnum)]
enum CtiModeArg {
    /// one edge spanning each interval
    MixedEdges,
    /// contacts at every covered instant
    Snapshots,
    /// contacts plus waiting chains
    SpatialTemporal,
}

impl From<CtiModeArg> for CtiMode {
    fn from(arg: CtiModeArg) -> CtiMode {
        match arg {
            CtiModeArg::MixedEdges => CtiMode::MixedEdges,
            CtiModeArg::Snapshots => CtiMode::Snapshots,
            CtiModeArg::SpatialTemporal => CtiMode::SpatialTemporal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    Adjacency,
    Incidence,
}

#[derive(Subcommand)]
enum Command {
    /// Import a graph from one of the other model formats
    Convert {
        /// input format
        #[arg(long, value_enum)]
        from: InputKind,
        /// how to realize presence intervals (with --from cti)
        #[arg(long, value_enum, default_value = "mixed-edges")]
        cti_mode: CtiModeArg,
        /// add the waiting edge for every node and consecutive instant pair
        #[arg(long)]
        waiting: bool,
        input: PathBuf,
        /// output path (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print size, composition, and class summary
    Stats { input: PathBuf },
    /// Print a matrix form in coordinate text
    Matrix {
        #[arg(long, value_enum)]
        kind: MatrixKind,
        /// print per-instant-block entry counts instead of the entries
        #[arg(long)]
        blocks: bool,
        input: PathBuf,
        /// output path (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List every temporal node reachable from a source
    Reach {
        /// source as `node,instant-label`
        #[arg(long)]
        source: String,
        input: PathBuf,
    },
    /// Print each edge with its kind and direction
    Classify { input: PathBuf },
    /// Validate a graph file and report its analysis flags
    Check { input: PathBuf },
}

enum CliError {
    Usage(String),
    Read(String),
    Model(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Read(_) => 2,
            CliError::Model(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Read(m) | CliError::Model(m) => m,
        }
    }
}

fn read_failure(path: &Path, error: impl std::fmt::Display) -> CliError {
    CliError::Read(format!("{}: {error}", path.display()))
}

fn model_failure(error: impl std::fmt::Display) -> CliError {
    CliError::Model(error.to_string())
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| read_failure(path, e))
}

fn load(path: &Path) -> Result<Tvg, CliError> {
    read_tvg(open(path)?).map_err(|e| read_failure(path, e))
}

/// Run `emit` against the output file, or stdout when none is given.
fn sink_to(
    output: Option<&Path>,
    emit: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    let result = match output {
        Some(path) => {
            let file = File::create(path).map_err(|e| read_failure(path, e))?;
            let mut writer = BufWriter::new(file);
            emit(&mut writer).and_then(|()| writer.flush())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock).and_then(|()| lock.flush())
        }
    };
    result.map_err(|e| CliError::Read(format!("write failed: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            let _ = error.print();
            return if error.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {}", error.message());
            ExitCode::from(error.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Convert {
            from,
            cti_mode,
            waiting,
            input,
            output,
        } => convert(from, cti_mode.into(), waiting, &input, output.as_deref()),
        Command::Stats { input } => stats(&input),
        Command::Matrix {
            kind,
            blocks,
            input,
            output,
        } => matrix(kind, blocks, &input, output.as_deref()),
        Command::Reach { source, input } => reach(&source, &input),
        Command::Classify { input } => classify(&input),
        Command::Check { input } => check(&input),
    }
}

fn convert(
    from: InputKind,
    mode: CtiMode,
    waiting: bool,
    input: &Path,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let reader = open(input)?;
    let tvg = match from {
        InputKind::Snapshots => {
            let sequence = read_snapshots(reader).map_err(|e| read_failure(input, e))?;
            from_snapshots(&sequence).map_err(model_failure)?
        }
        InputKind::Cti => {
            let intervals = read_cti(reader).map_err(|e| read_failure(input, e))?;
            from_cti(&intervals, mode).map_err(model_failure)?
        }
        InputKind::Ste => {
            let records = read_ste(reader).map_err(|e| read_failure(input, e))?;
            from_ste(&records.contacts, &records.waits).map_err(model_failure)?
        }
        InputKind::Tme => {
            let edges = read_tme(reader).map_err(|e| read_failure(input, e))?;
            from_tme(&edges).map_err(model_failure)?
        }
    };
    let tvg = if waiting {
        add_waiting_edges(&tvg)
    } else {
        tvg
    };
    sink_to(output, |out| write_tvg(&tvg, out))
}

fn stats(input: &Path) -> Result<(), CliError> {
    let tvg = load(input)?;
    let mut kind_counts = [0usize; 4];
    let mut orientation_counts = [0usize; 3];
    for edge in tvg.edges() {
        let class = edge.classify();
        kind_counts[match class.kind {
            EdgeKind::Spatial => 0,
            EdgeKind::Temporal => 1,
            EdgeKind::Mixed => 2,
            EdgeKind::SelfLoop => 3,
        }] += 1;
        orientation_counts[match class.orientation {
            Orientation::Progressive => 0,
            Orientation::Regressive => 1,
            Orientation::Contemporaneous => 2,
        }] += 1;
    }
    let partition = tvg.partition();
    let report = storage_report(&tvg);
    let classes: Vec<String> = detect_class(&tvg)
        .into_iter()
        .map(|c| c.to_string())
        .collect();
    sink_to(None, |out| {
        writeln!(out, "nodes {}", tvg.node_count())?;
        writeln!(out, "instants {}", tvg.time_count())?;
        writeln!(out, "edges {}", tvg.edge_count())?;
        writeln!(out, "spatial {}", kind_counts[0])?;
        writeln!(out, "temporal {}", kind_counts[1])?;
        writeln!(out, "mixed {}", kind_counts[2])?;
        writeln!(out, "self-loop {}", kind_counts[3])?;
        writeln!(out, "progressive {}", orientation_counts[0])?;
        writeln!(out, "regressive {}", orientation_counts[1])?;
        writeln!(out, "contemporaneous {}", orientation_counts[2])?;
        writeln!(out, "connected-nodes {}", partition.connected_nodes.len())?;
        writeln!(
            out,
            "disconnected-nodes {}",
            partition.disconnected_nodes.len()
        )?;
        writeln!(out, "used-instants {}", partition.used_times.len())?;
        writeln!(out, "unused-instants {}", partition.unused_times.len())?;
        writeln!(out, "edge-records {}", report.edge_items)?;
        writeln!(out, "node-records {}", report.disconnected_node_items)?;
        writeln!(out, "time-records {}", report.unused_time_items)?;
        writeln!(out, "records {}", report.total_items)?;
        writeln!(out, "classes {}", classes.join(" "))?;
        Ok(())
    })
}

fn matrix(
    kind: MatrixKind,
    blocks: bool,
    input: &Path,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let tvg = load(input)?;
    let m = match kind {
        MatrixKind::Adjacency => adjacency_matrix(&tvg),
        MatrixKind::Incidence => {
            if blocks {
                return Err(CliError::Usage(
                    "--blocks applies only to --kind adjacency".to_string(),
                ));
            }
            incidence_matrix(&tvg).map_err(model_failure)?
        }
    };
    if blocks {
        let report = block_report(&m, tvg.companion()).map_err(model_failure)?;
        return sink_to(output, |out| {
            writeln!(out, "spatial {}", report.spatial_nnz)?;
            writeln!(out, "progressive {}", report.progressive_nnz)?;
            writeln!(out, "regressive {}", report.regressive_nnz)?;
            for (row, counts) in report.block_counts.iter().enumerate() {
                for (col, count) in counts.iter().enumerate() {
                    if *count > 0 {
                        writeln!(out, "block {row} {col} {count}")?;
                    }
                }
            }
            Ok(())
        });
    }
    sink_to(output, |out| write_matrix(&m, out))
}

fn reach(source: &str, input: &Path) -> Result<(), CliError> {
    let (node_text, label) = source
        .split_once(',')
        .ok_or_else(|| CliError::Usage("--source takes `node,instant-label`".to_string()))?;
    let node: usize = node_text
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("`{node_text}` is not a node id")))?;
    let tvg = load(input)?;
    let time = tvg
        .time_id(label)
        .ok_or_else(|| CliError::Model(format!("unknown instant label `{label}`")))?;
    let set = reachable(&tvg, TemporalNode::new(node, time)).map_err(model_failure)?;
    sink_to(None, |out| {
        for tn in &set.reached {
            let label = tvg
                .time_label(tn.time)
                .expect("reached instants are in range");
            writeln!(out, "{} {}", tn.node, label)?;
        }
        Ok(())
    })
}

fn classify(input: &Path) -> Result<(), CliError> {
    let tvg = load(input)?;
    sink_to(None, |out| {
        for edge in tvg.edges() {
            let class = edge.classify();
            writeln!(
                out,
                "{} {} {} {} {} {}",
                edge.origin_node,
                tvg.time_label(edge.origin_time)
                    .expect("edge instants are in range"),
                edge.dest_node,
                tvg.time_label(edge.dest_time)
                    .expect("edge instants are in range"),
                class.kind,
                class.orientation
            )?;
        }
        Ok(())
    })
}

/// Probes run by `check`: each re-derives a structural fact two ways and
/// compares. `None` means the probe does not apply to this graph.
fn probe_results(tvg: &Tvg) -> Vec<(&'static str, Option<bool>)> {
    let partition = tvg.partition();
    let covers = partition.connected_nodes.len() + partition.disconnected_nodes.len()
        == tvg.node_count()
        && partition.used_times.len() + partition.unused_times.len() == tvg.time_count()
        && tvg.edges().iter().all(|e| {
            partition.connected_nodes.contains(&e.origin_node)
                && partition.connected_nodes.contains(&e.dest_node)
                && partition.used_times.contains(&e.origin_time)
                && partition.used_times.contains(&e.dest_time)
        });

    let report = storage_report(tvg);
    let accounted = report.total_items
        == tvg.edge_count() + partition.disconnected_nodes.len() + partition.unused_times.len();

    let m = adjacency_matrix(tvg);
    let unfold_refold = m.nnz() == tvg.edge_count()
        && tvg::algebra::refold(&m, tvg.companion())
            .map(|back| {
                let key = |t: &Tvg| {
                    let mut edges: Vec<_> = t
                        .edges()
                        .iter()
                        .map(|e| (e.quadruple(), e.weight.to_bits()))
                        .collect();
                    edges.sort();
                    edges
                };
                key(&back) == key(tvg)
            })
            .unwrap_or(false);

    let has_loops = tvg
        .edges()
        .iter()
        .any(|e| matches!(e.classify().kind, EdgeKind::SelfLoop));
    let incidence = if has_loops {
        None
    } else {
        Some(match incidence_matrix(tvg) {
            Ok(n) => {
                let mut sums = vec![0.0f64; n.cols()];
                let mut counts = vec![0usize; n.cols()];
                for (_, col, value) in n.entries() {
                    sums[col] += value;
                    counts[col] += 1;
                }
                n.cols() == tvg.edge_count()
                    && sums.iter().all(|s| *s == 0.0)
                    && counts.iter().all(|c| *c == 2)
            }
            Err(_) => false,
        })
    };

    let digraph = tvg::analysis::to_static_digraph(tvg);
    let arcs_match = digraph.vertex_count == tvg.companion().temporal_node_count()
        && digraph.arcs.len() == tvg.edge_count();

    let classes = detect_class(tvg);
    let table = classes.contains(&tvg::convert::ModelClass::Unifying)
        && classes.iter().all(|c| {
            tvg::convert::can_represent(*c, *c)
                && tvg::convert::can_represent(tvg::convert::ModelClass::Unifying, *c)
        });

    vec![
        ("partition-cover", Some(covers)),
        ("storage-accounting", Some(accounted)),
        ("unfold-refold", Some(unfold_refold)),
        ("incidence-columns", incidence),
        ("digraph-arcs", Some(arcs_match)),
        ("class-table", Some(table)),
    ]
}

fn check(input: &Path) -> Result<(), CliError> {
    let tvg = load(input)?;
    let probes = probe_results(&tvg);
    let failed = probes.iter().filter(|(_, r)| *r == Some(false)).count();
    sink_to(None, |out| {
        writeln!(
            out,
            "nodes {} instants {} edges {}",
            tvg.node_count(),
            tvg.time_count(),
            tvg.edge_count()
        )?;
        for (name, result) in &probes {
            let verdict = match result {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "skip",
            };
            writeln!(out, "{name} {verdict}")?;
        }
        let flag = |b: bool| if b { "yes" } else { "no" };
        writeln!(out, "regressive {}", flag(has_regressive(&tvg)))?;
        writeln!(out, "cyclic {}", flag(is_cyclic(&tvg)))?;
        writeln!(
            out,
            "cyclic-ignoring-contact-pairs {}",
            flag(is_cyclic_ignoring_spatial_pairs(&tvg))
        )?;
        Ok(())
    })?;
    if failed > 0 {
        return Err(CliError::Model(format!("{failed} probes failed")));
    }
    Ok(())
}
