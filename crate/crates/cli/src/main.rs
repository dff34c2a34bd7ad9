//! `collabnet` command-line tool.

mod manifest;

use std::fmt;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use collabnet::corpus::{Corpus, SpecialtyMap, ALL_FIELDS};
use collabnet::impact::{self, FwciBaselines};
use collabnet::lmm::{self, LmmData, Method, ReportOptions};
use collabnet::longit;
use collabnet::metrics::{self, Graph, NetworkStats};
use collabnet::netbuild::{BuildOptions, CollabNetwork, CountMode, ExportFormat, IsolatePolicy};
use collabnet::syngen::{self, GenConfig};
use collabnet::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad input or arguments; exit 1.
    Validation(String),
    /// Broken invariant; exit 2.
    Internal(String),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CliError::Internal(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "collabnet",
    version,
    about = "International coauthorship network analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic corpus.
    Gen(GenArgs),
    /// Validate raw JSONL records into a corpus.
    Ingest(IngestArgs),
    /// Build the country network of one specialty-year slice.
    Build(BuildArgs),
    /// Compute network statistics.
    Stats(StatsArgs),
    /// Fit the random-intercept model of impact on collaboration.
    Regress(RegressArgs),
    /// Growth and convergence across years.
    Trends(TrendsArgs),
    /// Convert an edge list to another graph format.
    Export(ExportArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// JSON generator config; `--seed` and the other flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    papers: Option<usize>,
    #[arg(long)]
    countries: Option<usize>,
    #[arg(long)]
    attachment: Option<f64>,
    /// Ground-truth log CSV.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IngestArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Journal-to-specialty CSV; the bundled table is used otherwise.
    #[arg(long)]
    map: Option<PathBuf>,
    #[arg(long)]
    rejections: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BuildArgs {
    /// Ingested corpus (JSONL).
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    specialty: String,
    #[arg(long)]
    year: i32,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long, default_value = "drop")]
    isolate_policy: String,
    #[arg(long, default_value = "edges")]
    count_mode: String,
    #[arg(long)]
    no_header: bool,
    #[arg(long)]
    map: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    /// Edge list CSV, or a corpus with `--all-years`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "")]
    specialty: String,
    #[arg(long, default_value_t = 0)]
    year: i32,
    /// Every specialty and year of a corpus, plus All-Fields.
    #[arg(long)]
    all_years: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// Reals with four decimals.
    #[arg(long)]
    fixed4: bool,
    /// JSON instead of CSV.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    no_header: bool,
    #[arg(long, default_value = "drop")]
    isolate_policy: String,
    #[arg(long)]
    map: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RegressArgs {
    /// Corpus JSONL or observation CSV.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Repeatable; defaults to every specialty present.
    #[arg(long)]
    specialty: Vec<String>,
    #[arg(long)]
    reml: bool,
    #[arg(long, default_value_t = 3)]
    decimals: usize,
    /// Report as CSV as well.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    observations_out: Option<PathBuf>,
    #[arg(long)]
    map: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TrendsArgs {
    /// Stats CSV files; repeatable.
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Write the growth table layout instead of the trend CSV.
    #[arg(long)]
    table2: bool,
}

#[derive(Args, Debug)]
struct ExportArgs {
    /// Edge list CSV.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    format: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "")]
    specialty: String,
    #[arg(long, default_value_t = 0)]
    year: i32,
    #[arg(long)]
    no_header: bool,
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn load_map(path: Option<&Path>) -> CliResult<SpecialtyMap> {
    match path {
        None => Ok(SpecialtyMap::bundled()),
        Some(p) => {
            let universe: Vec<&str> = collabnet::corpus::SPECIALTIES.to_vec();
            Ok(SpecialtyMap::from_csv(open(p)?, &universe)?)
        }
    }
}

fn load_corpus(path: &Path) -> CliResult<Corpus> {
    Ok(Corpus::read_jsonl(open(path)?)?)
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> CliResult<T> {
    Ok(s.parse::<T>()?)
}

fn run_gen(a: &GenArgs) -> CliResult<()> {
    let mut cfg = match &a.config {
        Some(p) => serde_json::from_reader(open(p)?)
            .map_err(|e| CliError::validation(format!("config: {e}")))?,
        None => GenConfig::default(),
    };
    cfg.seed = a.seed;
    if let Some(n) = a.papers {
        cfg.n_papers = n;
    }
    if let Some(n) = a.countries {
        cfg.n_countries = n;
    }
    if let Some(s) = a.attachment {
        cfg.attachment_strength = s;
    }
    let generated = syngen::generate(&cfg)?;
    let mut buf = Vec::new();
    generated.write_records(&mut buf)?;
    write_file(&a.out, &buf)?;
    let mut outputs = vec![a.out.clone()];
    if let Some(t) = &a.truth {
        let mut buf = Vec::new();
        generated.write_truth_csv(&mut buf)?;
        write_file(t, &buf)?;
        outputs.push(t.clone());
    }
    let config = serde_json::to_string(&cfg).map_err(|e| CliError::internal(e.to_string()))?;
    let inputs: Vec<PathBuf> = a.config.iter().cloned().collect();
    manifest::write("gen", &config, &inputs, &outputs)?;
    eprintln!("generated {} records", generated.entries.len());
    Ok(())
}

fn run_ingest(a: &IngestArgs) -> CliResult<()> {
    let map = load_map(a.map.as_deref())?;
    let (corpus, report) = Corpus::ingest(open(&a.input)?, &map)?;
    let mut buf = Vec::new();
    corpus.write_jsonl(&mut buf)?;
    write_file(&a.out, &buf)?;
    let mut outputs = vec![a.out.clone()];
    if let Some(r) = &a.rejections {
        let mut buf = Vec::new();
        report.write_csv(&mut buf)?;
        write_file(r, &buf)?;
        outputs.push(r.clone());
    }
    if report.accepted + report.rejected.len() != report.total() {
        return Err(CliError::internal("ingest counts do not add up"));
    }
    let mut inputs = vec![a.input.clone()];
    inputs.extend(a.map.iter().cloned());
    manifest::write("ingest", "", &inputs, &outputs)?;
    eprintln!(
        "accepted {} rejected {} replaced {}",
        report.accepted,
        report.rejected.len(),
        report.replaced
    );
    Ok(())
}

fn run_build(a: &BuildArgs) -> CliResult<()> {
    let format: ExportFormat = parse(&a.format)?;
    let opts = BuildOptions {
        isolate_policy: parse::<IsolatePolicy>(&a.isolate_policy)?,
        count_mode: parse::<CountMode>(&a.count_mode)?,
        all_fields: a.specialty == ALL_FIELDS,
    };
    let map = load_map(a.map.as_deref())?;
    let corpus = load_corpus(&a.input)?;
    let records = corpus.filter(&a.specialty, a.year, &map)?;
    let mut net = CollabNetwork::build(&records, opts)?;
    net.cosine_weights()?;
    let mut buf = Vec::new();
    net.export(format, !a.no_header, &mut buf)?;
    write_file(&a.out, &buf)?;
    let config = format!(
        "specialty={};year={};format={format};isolates={};count={};header={}",
        a.specialty, a.year, a.isolate_policy, a.count_mode, !a.no_header
    );
    let mut inputs = vec![a.input.clone()];
    inputs.extend(a.map.iter().cloned());
    manifest::write("build", &config, &inputs, std::slice::from_ref(&a.out))?;
    println!(
        "nodes {} edges {}",
        net.node_count(),
        net.reported_edge_count()
    );
    Ok(())
}

fn stats_for_corpus(a: &StatsArgs) -> CliResult<Vec<NetworkStats>> {
    let map = load_map(a.map.as_deref())?;
    let corpus = load_corpus(&a.input)?;
    let policy: IsolatePolicy = parse(&a.isolate_policy)?;
    let mut specialties: Vec<String> = map.universe().to_vec();
    specialties.push(ALL_FIELDS.to_string());
    let years: Vec<i32> = corpus.years().into_iter().collect();
    let mut out = Vec::new();
    for s in &specialties {
        for &y in &years {
            let records = corpus.filter(s, y, &map)?;
            if records.is_empty() {
                continue;
            }
            let opts = BuildOptions {
                isolate_policy: policy,
                all_fields: s == ALL_FIELDS,
                ..Default::default()
            };
            let net = CollabNetwork::build(&records, opts)?;
            match NetworkStats::from_network(&net) {
                Ok(st) => out.push(st),
                Err(e @ (Error::DegenerateNetwork(_) | Error::NoPaths)) => {
                    eprintln!("warning: {s} {y}: {e}");
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(out)
}

fn render_grid(stats: &[NetworkStats]) -> String {
    let mut years: Vec<i32> = stats.iter().map(|s| s.year).collect();
    years.sort_unstable();
    years.dedup();
    let mut specialties: Vec<&str> = Vec::new();
    for s in stats {
        if !specialties.contains(&s.specialty.as_str()) {
            specialties.push(&s.specialty);
        }
    }
    type Cell = fn(&NetworkStats) -> String;
    let measures: [(&str, Cell); 5] = [
        ("Diameter", |s| s.diameter.to_string()),
        ("Avg Degree", |s| format!("{:.2}", s.avg_degree)),
        ("Density", |s| format!("{:.2}", s.density)),
        ("Betweenness Centralization", |s| {
            format!("{:.4}", s.betweenness_centralization)
        }),
        ("Clustering", |s| format!("{:.2}", s.transitivity)),
    ];
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["Field".to_string(), "Measure".to_string()];
    header.extend(years.iter().map(|y| y.to_string()));
    rows.push(header);
    for sp in &specialties {
        for (i, (label, cell)) in measures.iter().enumerate() {
            let mut row = vec![
                if i == 0 {
                    sp.to_string()
                } else {
                    String::new()
                },
                label.to_string(),
            ];
            for y in &years {
                row.push(
                    stats
                        .iter()
                        .find(|s| s.specialty == *sp && s.year == *y)
                        .map(cell)
                        .unwrap_or_default(),
                );
            }
            rows.push(row);
        }
    }
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, v)| {
                if c < 2 {
                    format!("{v:<w$}", w = widths[c])
                } else {
                    format!("{v:>w$}", w = widths[c])
                }
            })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn run_stats(a: &StatsArgs) -> CliResult<()> {
    let compute = || -> CliResult<Vec<NetworkStats>> {
        if a.all_years {
            stats_for_corpus(a)
        } else {
            let net = CollabNetwork::from_edgelist_csv(
                open(&a.input)?,
                !a.no_header,
                &a.specialty,
                a.year,
            )?;
            Ok(vec![NetworkStats::compute(
                &Graph::from_network(&net),
                &a.specialty,
                a.year,
            )?])
        }
    };
    let stats = match a.threads {
        Some(0) => return Err(CliError::validation("--threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::internal(e.to_string()))?
            .install(compute)?,
        None => compute()?,
    };
    for s in &stats {
        if (s.avg_degree * s.n_nodes as f64 - 2.0 * s.n_edges as f64).abs()
            > 1e-9 * s.n_edges.max(1) as f64
        {
            return Err(CliError::internal(format!(
                "handshake identity fails for {} {}",
                s.specialty, s.year
            )));
        }
    }
    let mut buf = Vec::new();
    if a.json {
        serde_json::to_writer_pretty(&mut buf, &stats)
            .map_err(|e| CliError::internal(e.to_string()))?;
        buf.push(b'\n');
    } else {
        metrics::write_stats_csv(&stats, a.fixed4, &mut buf)?;
    }
    write_file(&a.out, &buf)?;
    let config = format!(
        "specialty={};year={};all_years={};fixed4={};json={};header={};isolates={}",
        a.specialty, a.year, a.all_years, a.fixed4, a.json, !a.no_header, a.isolate_policy
    );
    let mut inputs = vec![a.input.clone()];
    inputs.extend(a.map.iter().cloned());
    manifest::write("stats", &config, &inputs, std::slice::from_ref(&a.out))?;
    if a.all_years {
        print!("{}", render_grid(&stats));
    }
    Ok(())
}

fn is_jsonl(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("jsonl" | "json")
    )
}

fn run_regress(a: &RegressArgs) -> CliResult<()> {
    let method = if a.reml { Method::Reml } else { Method::Ml };
    let mut slices: Vec<(String, Vec<impact::ComboObservation>)> = Vec::new();
    let mut inputs = vec![a.input.clone()];
    if is_jsonl(&a.input) {
        let map = load_map(a.map.as_deref())?;
        inputs.extend(a.map.iter().cloned());
        let corpus = load_corpus(&a.input)?;
        let baselines = FwciBaselines::from_corpus(&corpus);
        let specialties: Vec<String> = if a.specialty.is_empty() {
            let present: std::collections::BTreeSet<String> =
                corpus.slices().into_iter().map(|(s, _)| s).collect();
            map.universe()
                .iter()
                .filter(|s| present.contains(*s))
                .cloned()
                .collect()
        } else {
            a.specialty.clone()
        };
        let years: Vec<i32> = corpus.years().into_iter().collect();
        for s in specialties {
            let mut records = Vec::new();
            for &y in &years {
                records.extend(corpus.filter(&s, y, &map)?);
            }
            let set = impact::build_observations(&records, &baselines);
            for ex in &set.exclusions {
                eprintln!("warning: {s}: excluded {}: {}", ex.id, ex.reason);
            }
            slices.push((s, set.observations));
        }
    } else {
        let obs = impact::read_observations_csv(open(&a.input)?)?;
        let label = a
            .specialty
            .first()
            .cloned()
            .unwrap_or_else(|| "Model".to_string());
        slices.push((label, obs));
    }

    let mut outputs = vec![a.out.clone()];
    if let Some(p) = &a.observations_out {
        let all: Vec<impact::ComboObservation> =
            slices.iter().flat_map(|(_, o)| o.iter().cloned()).collect();
        let mut buf = Vec::new();
        impact::write_observations_csv(&all, &mut buf)?;
        write_file(p, &buf)?;
        outputs.push(p.clone());
    }

    let mut fits = Vec::new();
    for (label, obs) in &slices {
        let data = LmmData::from_observations(obs);
        match lmm::fit(&data, method) {
            Ok(f) => {
                for w in &f.warnings {
                    eprintln!("warning: {label}: {w}");
                }
                fits.push((label.clone(), f));
            }
            Err(e @ Error::TooFewObservations { .. }) if slices.len() > 1 => {
                eprintln!("warning: {label}: {e}; skipped");
            }
            Err(e) => return Err(CliError::validation(format!("{label}: {e}"))),
        }
    }
    if fits.is_empty() {
        return Err(CliError::validation(
            "no slice had enough observations to fit",
        ));
    }
    let columns: Vec<(String, &lmm::LmmFit)> = fits.iter().map(|(l, f)| (l.clone(), f)).collect();
    let opts = ReportOptions {
        decimals: a.decimals,
    };
    write_file(&a.out, lmm::render_report(&columns, opts).as_bytes())?;
    if let Some(p) = &a.csv {
        write_file(p, lmm::report_csv(&columns, opts)?.as_bytes())?;
        outputs.push(p.clone());
    }
    let config = format!(
        "specialties={};method={method:?};decimals={}",
        a.specialty.join("|"),
        a.decimals
    );
    manifest::write("regress", &config, &inputs, &outputs)?;
    Ok(())
}

fn run_trends(a: &TrendsArgs) -> CliResult<()> {
    let readers = a
        .input
        .iter()
        .map(|p| open(p))
        .collect::<CliResult<Vec<_>>>()?;
    let series = longit::read_series_csv(readers)?;
    if series.is_empty() {
        return Err(CliError::validation("no stats rows in input"));
    }
    if let Ok(conv) = longit::convergence(&series) {
        for s in conv.non_monotone() {
            eprintln!("warning: {s}: node share curve is not monotone");
        }
    }
    let mut buf = Vec::new();
    if a.table2 {
        buf.extend_from_slice(longit::render_table2(&series)?.as_bytes());
    } else {
        longit::write_trend_csv(&series, &mut buf)?;
    }
    write_file(&a.out, &buf)?;
    if a.table2 {
        print!("{}", String::from_utf8_lossy(&buf));
    }
    manifest::write(
        "trends",
        &format!("table2={}", a.table2),
        &a.input,
        std::slice::from_ref(&a.out),
    )?;
    Ok(())
}

fn run_export(a: &ExportArgs) -> CliResult<()> {
    let format: ExportFormat = parse(&a.format)?;
    let net =
        CollabNetwork::from_edgelist_csv(open(&a.input)?, !a.no_header, &a.specialty, a.year)?;
    let mut buf = Vec::new();
    net.export(format, true, &mut buf)?;
    write_file(&a.out, &buf)?;
    let config = format!("format={format};specialty={};year={}", a.specialty, a.year);
    manifest::write(
        "export",
        &config,
        std::slice::from_ref(&a.input),
        std::slice::from_ref(&a.out),
    )?;
    Ok(())
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Ingest(a) => run_ingest(a),
        Command::Build(a) => run_build(a),
        Command::Stats(a) => run_stats(a),
        Command::Regress(a) => run_regress(a),
        Command::Trends(a) => run_trends(a),
        Command::Export(a) => run_export(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| dispatch(&cli)) {
        Ok(Ok(())) => {
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => ExitCode::from(2),
    }
}
