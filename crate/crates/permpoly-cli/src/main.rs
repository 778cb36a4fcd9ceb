//! `permpoly`: bivariate permanent polynomials of small graphs.
//!
//! Subcommands: `poly` (one polynomial), `gen` (isomorph-free universe),
//! `survey` (collision statistics for a whole order), `mates` (copermanent
//! families). Results go to stdout, progress and timing to stderr.
//!
//! Exit codes: 0 success, 1 usage error, 2 data/decode error, 3 capacity
//! (order or overflow) error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use permpoly::bipoly::{BiPoly, PolyError};
use permpoly::engine::{self, EngineError};
use permpoly::enumerate::{self, EnumerateError, StreamError};
use permpoly::graph::{Graph, Graph6Error};
use permpoly::survey::{self, SurveyError, SurveyReport};
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

/// In-repo generation stops here; larger universes are ingested.
const MAX_GEN: usize = 8;

#[derive(Parser)]
#[command(name = "permpoly", version, about = "Bivariate permanent polynomials of small graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the polynomial of one graph6 record
    Poly {
        /// graph6 record, e.g. "A_" for a single edge
        graph6: String,
        /// Also evaluate at the integer point X,L
        #[arg(long, value_parser = parse_eval, value_name = "X,L")]
        eval: Option<(i64, i64)>,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Generate all isomorphism classes of a given order as graph6 lines
    Gen {
        /// Order of the generated graphs (0..=8)
        #[arg(long)]
        n: usize,
        /// Write to a file instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Survey an order: group graphs by polynomial and report statistics
    Survey {
        #[command(flatten)]
        source: SourceArgs,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the full JSON report to this file
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print the statistics as one CSV row instead of a table
        #[arg(long)]
        csv: bool,
        /// Resume from / append fingerprints to this checkpoint file
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// List copermanent families (non-isomorphic graphs sharing a polynomial)
    Mates {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// Survey the in-repo universe of this order (0..=8)
    #[arg(long, conflicts_with_all = ["input", "order"], required_unless_present = "input")]
    n: Option<usize>,
    /// Read the universe from a graph6 file, one record per line
    #[arg(long, requires = "order")]
    input: Option<PathBuf>,
    /// Order of every record in --input (checked, not inferred)
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Copy, Clone, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

fn parse_eval(s: &str) -> Result<(i64, i64), String> {
    let (x, l) = s
        .split_once(',')
        .ok_or_else(|| format!("expected X,L but got {s:?}"))?;
    let x = x.trim().parse().map_err(|e| format!("bad X: {e}"))?;
    let l = l.trim().parse().map_err(|e| format!("bad L: {e}"))?;
    Ok((x, l))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }
    fn data(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
    fn capacity(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl From<Graph6Error> for CliError {
    fn from(e: Graph6Error) -> Self {
        match e {
            Graph6Error::OrderTooLarge => CliError::capacity(e.to_string()),
            _ => CliError::data(e.to_string()),
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::BadFingerprint(_) => CliError::data(e.to_string()),
            _ => CliError::capacity(e.to_string()),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Poly(p) => p.into(),
            EngineError::NonSquareMatrix => CliError::data(e.to_string()),
            _ => CliError::capacity(e.to_string()),
        }
    }
}

impl From<EnumerateError> for CliError {
    fn from(e: EnumerateError) -> Self {
        CliError::capacity(e.to_string())
    }
}

impl From<StreamError> for CliError {
    fn from(e: StreamError) -> Self {
        match &e {
            StreamError::Decode { source: Graph6Error::OrderTooLarge, .. } => {
                CliError::capacity(e.to_string())
            }
            _ => CliError::data(e.to_string()),
        }
    }
}

impl From<SurveyError> for CliError {
    fn from(e: SurveyError) -> Self {
        match e {
            SurveyError::Engine { ref source, .. } => CliError {
                code: CliError::from(source.clone()).code,
                message: e.to_string(),
            },
            SurveyError::Enumerate(inner) => inner.into(),
            _ => CliError::data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::data(e.to_string())
    }
}

/// Spell λ as "λ" only when the locale says the terminal speaks UTF-8;
/// machine formats always use the ASCII name "y".
fn lambda_is_safe() -> bool {
    ["LC_ALL", "LC_CTYPE", "LANG"]
        .iter()
        .find_map(|k| std::env::var(k).ok().filter(|v| !v.is_empty()))
        .map(|v| v.to_ascii_lowercase().replace('-', "").contains("utf8"))
        .unwrap_or(false)
}

fn poly_text(p: &BiPoly) -> String {
    if lambda_is_safe() {
        p.format_text()
    } else {
        p.format_text_ascii()
    }
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Poly { graph6, eval, format } => cmd_poly(&graph6, eval, format),
        Cmd::Gen { n, output } => cmd_gen(n, output.as_deref()),
        Cmd::Survey { source, jobs, report, csv, checkpoint } => {
            cmd_survey(&source, jobs.unwrap_or(0), report.as_deref(), csv, checkpoint.as_deref())
        }
        Cmd::Mates { source, format } => cmd_mates(&source, format),
    }
}

fn cmd_poly(graph6: &str, eval: Option<(i64, i64)>, format: OutFormat) -> Result<(), CliError> {
    let g = Graph::from_graph6(graph6)?;
    let p = engine::bivariate_permanent(&g)?;
    let value = eval.map(|(x, l)| p.evaluate(x, l)).transpose()?;
    match format {
        OutFormat::Text => {
            println!("{}", poly_text(&p));
            if let Some(v) = value {
                println!("{v}");
            }
        }
        OutFormat::Json => {
            let coeffs: Vec<(usize, usize, i64)> = p.terms().collect();
            let mut obj = serde_json::json!({
                "graph6": g.to_graph6(),
                "order": g.order(),
                "polynomial": p.format_text_ascii(),
                "coefficients": coeffs,
            });
            if let (Some((x, l)), Some(v)) = (eval, value) {
                obj["eval"] = serde_json::json!({"x": x, "y": l, "value": v.to_string()});
            }
            println!("{}", serde_json::to_string_pretty(&obj).expect("json"));
        }
    }
    Ok(())
}

fn cmd_gen(n: usize, output: Option<&std::path::Path>) -> Result<(), CliError> {
    let graphs = generate_capped(n)?;
    let mut out: Box<dyn Write> = match output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    for g in &graphs {
        writeln!(out, "{}", g.to_graph6())?;
    }
    out.flush()?;
    eprintln!("{} graphs of order {}", graphs.len(), n);
    Ok(())
}

fn generate_capped(n: usize) -> Result<Vec<Graph>, CliError> {
    if n > MAX_GEN {
        return Err(CliError::capacity(format!(
            "orders above {MAX_GEN} are not generated in-repo; generate the universe \
             externally and ingest it with --input FILE.g6 --order {n}"
        )));
    }
    Ok(enumerate::generate_all(n)?)
}

fn load_source(source: &SourceArgs) -> Result<(Vec<Graph>, usize), CliError> {
    if let Some(n) = source.n {
        return Ok((generate_capped(n)?, n));
    }
    let path = source.input.as_ref().expect("clap enforces the source group");
    let order = source.order.ok_or_else(|| CliError::usage("--input requires --order"))?;
    let file = BufReader::new(File::open(path)?);
    let graphs = enumerate::read_graph6_stream(file)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::from(e))?;
    Ok((graphs, order))
}

fn cmd_survey(
    source: &SourceArgs,
    jobs: usize,
    report_path: Option<&std::path::Path>,
    csv: bool,
    checkpoint: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let mut cache = HashMap::new();
    let mut sink = None;
    if let Some(path) = checkpoint {
        if path.exists() {
            let file = BufReader::new(File::open(path)?);
            cache = survey::read_checkpoint(file)?.into_iter().collect();
            eprintln!("resumed {} fingerprints from {}", cache.len(), path.display());
        }
        sink = Some(BufWriter::new(
            File::options().create(true).append(true).open(path)?,
        ));
    }

    let started = Instant::now();
    let report = survey::with_worker_pool(jobs, || -> Result<SurveyReport, CliError> {
        let (graphs, order) = load_source(source)?;
        let sink_ref = sink.as_mut().map(|w| w as &mut dyn Write);
        Ok(survey::run_survey_with_checkpoint(graphs, order, 0, &cache, sink_ref)?)
    })?;
    eprintln!(
        "surveyed {} graphs of order {} in {:.2?}",
        report.num_graphs,
        report.order,
        started.elapsed()
    );

    if csv {
        println!("{}", report.to_csv_row());
    } else {
        println!("{}", report.to_text_table());
    }
    if let Some(path) = report_path {
        std::fs::write(path, report.to_json_bytes())?;
    }
    Ok(())
}

fn cmd_mates(source: &SourceArgs, format: OutFormat) -> Result<(), CliError> {
    let (graphs, order) = load_source(source)?;
    let report = survey::run_survey(graphs, order, 0)?;
    match format {
        OutFormat::Text => {
            if report.families.is_empty() {
                println!("no copermanent families");
            }
            for (k, family) in report.families.iter().enumerate() {
                println!(
                    "family {} ({} members): {}",
                    k + 1,
                    family.members.len(),
                    family.members.join(" ")
                );
                println!("  {}", poly_text(&family.polynomial));
            }
        }
        OutFormat::Json => {
            let families: Vec<serde_json::Value> = report
                .families
                .iter()
                .map(|f| {
                    let coeffs: Vec<(usize, usize, i64)> = f.polynomial.terms().collect();
                    serde_json::json!({
                        "fingerprint": f.fingerprint.to_hex(),
                        "polynomial": f.polynomial.format_text_ascii(),
                        "coefficients": coeffs,
                        "members": f.members,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&families).expect("json"));
        }
    }
    Ok(())
}
