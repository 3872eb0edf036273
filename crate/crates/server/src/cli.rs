use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use lifelog_core::corpus::synth::{generate_synthetic, SynthParams};
use lifelog_core::corpus::{ingest_corpus, IngestConfig};
use lifelog_core::dsl::SortKey;
use lifelog_core::engine::{EngineSettings, IndexSet};

use crate::config::ApiConfig;
use crate::service::{self, OptionsInput, TemporalRequest};

#[derive(Debug, Parser)]
#[command(name = "lifelog", version, about = "Search a lifelog image corpus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a metadata file and print corpus statistics.
    Ingest {
        file: PathBuf,
        /// Print statistics as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Write a synthetic corpus and its ground-truth manifest.
    Gen(GenArgs),
    /// Evaluate one query (or a temporal chain with --then) and print hits.
    Query(QueryArgs),
    /// Serve the HTTP API.
    Serve {
        #[arg(long)]
        config: PathBuf,
        /// Override the bind address from the config file.
        #[arg(long)]
        bind: Option<String>,
    },
    /// Run the mock submission endpoint.
    MockSubmitServer {
        #[arg(long, default_value = "127.0.0.1:9090")]
        bind: SocketAddr,
        /// Ids judged correct; every id is correct when none are given.
        #[arg(long = "target")]
        targets: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Start from the bundled demo preset (story Monday 2016-09-05).
    #[arg(long)]
    pub demo: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub days: Option<u32>,
    #[arg(long)]
    pub images_per_day: Option<u32>,
    /// First date, YYYY-MM-DD.
    #[arg(long)]
    pub start_date: Option<NaiveDate>,
    #[arg(long, allow_hyphen_values = true)]
    pub utc_offset_hours: Option<i32>,
    #[arg(long)]
    pub feature_dim: Option<usize>,
    /// Plant the airport, taxi, meeting story on the first Monday.
    #[arg(long)]
    pub story: bool,
    #[arg(long)]
    pub out: PathBuf,
    /// Manifest path; defaults to `<out>.manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// Query text, e.g. "--concepts hotel/outdoor --objects car,person".
    #[arg(allow_hyphen_values = true)]
    pub query: String,
    /// Further temporal stages, in order.
    #[arg(long = "then", allow_hyphen_values = true)]
    pub then: Vec<String>,
    /// Metadata file to search.
    #[arg(long, conflicts_with = "config")]
    pub corpus: Option<PathBuf>,
    /// Service config naming the corpus and engine settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Global minimum detection score.
    #[arg(long)]
    pub score: Option<f64>,
    #[arg(long)]
    pub limit: Option<usize>,
    /// Keep one hit per near-duplicate cluster.
    #[arg(long)]
    pub reduced: bool,
    /// date, confidence or object_count.
    #[arg(long)]
    pub sort: Option<SortKey>,
    /// Temporal chains: maximum gap between consecutive stages, in seconds.
    #[arg(long)]
    pub max_span: Option<i64>,
    /// Temporal chains: allow stages on different dates.
    #[arg(long)]
    pub any_day: bool,
    /// Print the same JSON document the HTTP API returns.
    #[arg(long)]
    pub json: bool,
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging();
    match run(cli.command, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        // Output cut short by a closed pipe, e.g. `lifelog query ... | head`.
        Err(e)
            if e
                .downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn init_logging() {
    let filter = tracing_subscriber::EnvFilter::try_from_default_env()
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info"));
    let _ = tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .try_init();
}

pub fn run(command: Command, out: &mut dyn Write) -> anyhow::Result<()> {
    match command {
        Command::Ingest { file, json } => ingest(&file, json, out),
        Command::Gen(args) => gen(&args, out),
        Command::Query(args) => query(&args, out),
        Command::Serve { config, bind } => {
            let mut config = ApiConfig::load(&config)?;
            if let Some(b) = bind {
                config.bind = b;
            }
            runtime()?.block_on(crate::serve(config))
        }
        Command::MockSubmitServer { bind, targets } => {
            runtime()?.block_on(crate::serve_mock(bind, targets))
        }
    }
}

fn runtime() -> anyhow::Result<tokio::runtime::Runtime> {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .context("starting async runtime")
}

#[derive(Debug, serde::Serialize)]
struct CorpusStats {
    records: usize,
    days: usize,
    first_date: Option<NaiveDate>,
    last_date: Option<NaiveDate>,
    with_geo: usize,
    with_feature: usize,
    feature_dim: Option<usize>,
    clusters: usize,
    named_locations: usize,
    concepts: usize,
    objects: usize,
    attributes: usize,
}

fn ingest(file: &Path, json: bool, out: &mut dyn Write) -> anyhow::Result<()> {
    let corpus = ingest_corpus(file, &IngestConfig::default())?;
    let idx = IndexSet::build(Arc::new(corpus), EngineSettings::default());
    let records = idx.corpus().records();
    let vocab = |k| idx.vocabulary().filter(|(kind, _, _)| *kind == k).count();
    use lifelog_core::corpus::DetectionKind as K;
    let stats = CorpusStats {
        records: records.len(),
        days: idx.days().count(),
        first_date: idx.days().next().map(|(d, _)| d),
        last_date: idx.days().last().map(|(d, _)| d),
        with_geo: idx.geo_list().len(),
        with_feature: records.iter().filter(|r| r.feature.is_some()).count(),
        feature_dim: idx.corpus().feature_dim(),
        clusters: records
            .iter()
            .map(|r| r.cluster_id)
            .collect::<std::collections::BTreeSet<_>>()
            .len(),
        named_locations: idx.locations().count(),
        concepts: vocab(K::Concept),
        objects: vocab(K::Object),
        attributes: vocab(K::Attribute),
    };
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&stats)?)?;
        return Ok(());
    }
    writeln!(out, "{}: ok", file.display())?;
    let range = match (stats.first_date, stats.last_date) {
        (Some(a), Some(b)) => format!("{a} .. {b}"),
        _ => "-".to_owned(),
    };
    writeln!(out, "  records          {}", stats.records)?;
    writeln!(out, "  days             {} ({range})", stats.days)?;
    writeln!(out, "  with coordinates {}", stats.with_geo)?;
    writeln!(
        out,
        "  with features    {} (dim {})",
        stats.with_feature,
        stats.feature_dim.map_or("-".to_owned(), |d| d.to_string())
    )?;
    writeln!(out, "  clusters         {}", stats.clusters)?;
    writeln!(out, "  named locations  {}", stats.named_locations)?;
    writeln!(
        out,
        "  vocabulary       {} concepts, {} objects, {} attributes",
        stats.concepts, stats.objects, stats.attributes
    )?;
    Ok(())
}

fn gen(args: &GenArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut p = if args.demo {
        SynthParams::demo()
    } else {
        SynthParams::default()
    };
    if let Some(v) = args.seed {
        p.seed = v;
    }
    if let Some(v) = args.days {
        p.days = v;
    }
    if let Some(v) = args.images_per_day {
        p.images_per_day = v;
    }
    if let Some(v) = args.start_date {
        p.start_date = v;
    }
    if let Some(h) = args.utc_offset_hours {
        if !(-23..=23).contains(&h) {
            bail!("--utc-offset-hours must lie in -23..=23");
        }
        p.utc_offset_secs = h * 3600;
    }
    if let Some(v) = args.feature_dim {
        p.feature_dim = v;
    }
    p.story |= args.story;

    let synth = generate_synthetic(&p)?;
    let manifest = args.manifest.clone().unwrap_or_else(|| {
        let mut name = args.out.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    });
    synth
        .write(&args.out, &manifest)
        .with_context(|| format!("writing {}", args.out.display()))?;
    writeln!(
        out,
        "wrote {} records over {} days to {} (manifest {})",
        synth.manifest.total_records,
        synth.manifest.days,
        args.out.display(),
        manifest.display()
    )?;
    if let Some(story) = &synth.manifest.story {
        writeln!(out, "story on {}: target {}", story.date, story.target_id)?;
    }
    Ok(())
}

fn query(args: &QueryArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let (idx, defaults) = match (&args.corpus, &args.config) {
        (Some(path), None) => {
            let corpus = ingest_corpus(path, &IngestConfig::default())?;
            let idx = IndexSet::build(Arc::new(corpus), EngineSettings::default());
            (idx, OptionsInput::default())
        }
        (None, Some(cfg)) => {
            let config = ApiConfig::load(cfg)?;
            (config.build_index()?, config.defaults)
        }
        _ => bail!("pass --corpus <file> or --config <file>"),
    };
    let options = OptionsInput {
        score: args.score,
        limit: args.limit,
        reduced: args.reduced.then_some(true),
        sort: args.sort,
    }
    .or(defaults);

    if args.then.is_empty() {
        let q = service::parse_query(&args.query, &options)?;
        let resp = service::search(&idx, &q);
        if args.json {
            writeln!(out, "{}", serde_json::to_string_pretty(&resp)?)?;
            return Ok(());
        }
        writeln!(out, "query: {}", resp.query)?;
        writeln!(
            out,
            "{:>5}  {:<20} {:<25} {:>6} {:>7} {:>7}",
            "rank", "id", "timestamp", "score", "objects", "cluster"
        )?;
        for (i, h) in resp.hits.iter().enumerate() {
            writeln!(
                out,
                "{:>5}  {:<20} {:<25} {:>6.3} {:>7} {:>7}",
                i + 1,
                h.id,
                h.timestamp.to_rfc3339(),
                h.score,
                h.object_count,
                h.cluster_id
            )?;
        }
        writeln!(out, "{} hits ({} before limit)", resp.returned, resp.total)?;
        return Ok(());
    }

    let mut stages = vec![args.query.clone()];
    stages.extend(args.then.iter().cloned());
    let tq = service::parse_temporal(&TemporalRequest {
        stages,
        max_span_secs: args.max_span,
        same_day: Some(!args.any_day),
        options,
    })?;
    let resp = service::search_temporal(&idx, &tq)?;
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&resp)?)?;
        return Ok(());
    }
    for (i, s) in resp.stages.iter().enumerate() {
        writeln!(out, "stage {}: {s}", i + 1)?;
    }
    for (i, m) in resp.matches.iter().enumerate() {
        let chain: Vec<String> = m
            .hits
            .iter()
            .map(|h| format!("{} ({})", h.id, h.timestamp.format("%H:%M:%S")))
            .collect();
        writeln!(out, "{:>5}  {}", i + 1, chain.join(" -> "))?;
    }
    writeln!(out, "{} matches ({} before limit)", resp.returned, resp.total)?;
    Ok(())
}
