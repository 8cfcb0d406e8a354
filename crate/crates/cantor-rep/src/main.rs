use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cantor_rep::{
    cmts_value, decimal_string, enumerate_table, format_rational, parse_pattern, parse_points,
    represent_point, run_suite, AddressRow, Pattern, PointTarget, Result, SuiteConfig,
};

#[derive(Parser)]
#[command(
    name = "cantor-rep",
    version,
    about = "Exact sequence-space addresses for finite geometric patterns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile pattern points to their sequence-space addresses
    Represent(RepresentArgs),
    /// Run the brute-force invariant suite and report one line per check
    Verify(VerifyArgs),
    /// Emit middle-thirds coordinates for a pattern's address table as CSV
    Embed(EmbedArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("queries").required(true).args(["points", "samples"]))]
struct RepresentArgs {
    /// Pattern document (JSON)
    #[arg(long, value_name = "FILE")]
    pattern: PathBuf,

    /// Query points document (JSON array of {path, arc, t} / {path, node})
    #[arg(long, value_name = "FILE")]
    points: Option<PathBuf>,

    /// Enumerate the full table instead, sampling each arc at k/D
    #[arg(long, value_name = "D", conflicts_with = "points",
          value_parser = clap::value_parser!(u64).range(2..))]
    samples: Option<u64>,

    /// Write the address document here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Exhaustive truncation depth N for partition checks
    #[arg(long, value_name = "N", default_value_t = 12,
          value_parser = clap::value_parser!(u64).range(1..=30))]
    depth: u64,

    /// Sample count for randomized identities
    #[arg(long, value_name = "K", default_value_t = 200,
          value_parser = clap::value_parser!(u64).range(1..))]
    random_samples: u64,

    /// Exhaustive denominator bound for interval-fiber checks
    #[arg(long, value_name = "B", default_value_t = 1024,
          value_parser = clap::value_parser!(i64).range(1..))]
    max_denominator: i64,

    /// Arc sample denominator for compiled-table checks
    #[arg(long, value_name = "D", default_value_t = 8,
          value_parser = clap::value_parser!(u64).range(2..))]
    table_denominator: u64,

    /// Base seed for the fixed-seed samplers
    #[arg(long, value_name = "SEED", default_value_t = SuiteConfig::default().seed)]
    seed: u64,

    /// Extra pattern documents to compile in place of the bundled corpus
    #[arg(long, value_name = "FILE")]
    corpus: Vec<PathBuf>,

    /// Adds one deliberately false assertion so failure paths can be tested
    #[arg(long, hide = true)]
    inject_fault: bool,

    /// Write the report (JSON lines) here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    /// Pattern document (JSON)
    #[arg(long, value_name = "FILE")]
    pattern: PathBuf,

    /// Sample each arc at t = k/D for k = 1..D−1
    #[arg(long, value_name = "D", default_value_t = 2,
          value_parser = clap::value_parser!(u64).range(2..))]
    samples: u64,

    /// Decimal digits in the rounded coordinate column
    #[arg(long, value_name = "P", default_value_t = 6,
          value_parser = clap::value_parser!(u64).range(1..=50))]
    precision: u64,

    /// Write the CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Represent(args) => cmd_represent(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Embed(args) => cmd_embed(args),
    }
}

const USAGE_FAILURE: u8 = 2;
const CHECK_FAILURE: u8 = 1;

/// Reads and parses an input document; any failure is a usage-class error
/// reported with the file path (and, for JSON, line and column).
fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T>) -> std::result::Result<T, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(USAGE_FAILURE)
    })?;
    parse(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(USAGE_FAILURE)
    })
}

fn emit(out: Option<&Path>, content: &str) -> ExitCode {
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, content) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(USAGE_FAILURE);
            }
            ExitCode::SUCCESS
        }
        None => {
            print!("{content}");
            ExitCode::SUCCESS
        }
    }
}

fn cmd_represent(args: RepresentArgs) -> ExitCode {
    let pattern = match load(&args.pattern, parse_pattern) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let mut unresolved = 0usize;
    let rows: Vec<AddressRow> = if let Some(points_path) = &args.points {
        let points = match load(points_path, parse_points) {
            Ok(p) => p,
            Err(code) => return code,
        };
        let mut rows = Vec::new();
        for (i, point) in points.iter().enumerate() {
            match represent_point(&pattern, point) {
                Ok(entry) => rows.push(entry.to_row()),
                Err(e) => {
                    eprintln!("error: point {} ({point}): {e}", i + 1);
                    unresolved += 1;
                }
            }
        }
        rows
    } else {
        let d = args.samples.expect("clap group requires one source");
        match enumerate_table(&pattern, d) {
            Ok(entries) => entries.iter().map(|e| e.to_row()).collect(),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(CHECK_FAILURE);
            }
        }
    };
    let mut document =
        serde_json::to_string_pretty(&rows).expect("address rows serialize");
    document.push('\n');
    let code = emit(args.out.as_deref(), &document);
    if code == ExitCode::SUCCESS && unresolved > 0 {
        eprintln!("error: {unresolved} point(s) could not be resolved");
        return ExitCode::from(CHECK_FAILURE);
    }
    code
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let mut corpus = Vec::new();
    for path in &args.corpus {
        let pattern: Pattern = match load(path, parse_pattern) {
            Ok(p) => p,
            Err(code) => return code,
        };
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        corpus.push((name, pattern));
    }
    let config = SuiteConfig {
        depth: args.depth as usize,
        samples: args.random_samples as usize,
        max_denominator: args.max_denominator,
        table_denominator: args.table_denominator,
        corpus,
        inject_fault: args.inject_fault,
        seed: args.seed,
    };
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_FAILURE);
        }
    };
    let mut lines = String::new();
    for record in &report.records {
        lines.push_str(&serde_json::to_string(record).expect("records serialize"));
        lines.push('\n');
    }
    let code = emit(args.out.as_deref(), &lines);
    if code != ExitCode::SUCCESS {
        return code;
    }
    let failed = report.failures().count();
    eprintln!("suite: {} checks, {failed} failed", report.records.len());
    if failed > 0 {
        return ExitCode::from(CHECK_FAILURE);
    }
    ExitCode::SUCCESS
}

/// Quotes a CSV field only when it needs it, so numeric columns stay bare.
fn csv_field(raw: &str) -> String {
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

fn cmd_embed(args: EmbedArgs) -> ExitCode {
    let pattern = match load(&args.pattern, parse_pattern) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let entries = match enumerate_table(&pattern, args.samples) {
        Ok(entries) => entries,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_FAILURE);
        }
    };
    let mut csv = String::from("cluster_path,arc_or_node,t,sequence,cmts_exact,cmts_decimal\n");
    for entry in &entries {
        let path = entry
            .point
            .path
            .iter()
            .map(|step| step.to_string())
            .collect::<Vec<_>>()
            .join(".");
        let (place, t) = match &entry.point.target {
            PointTarget::Arc { arc, t } => (format!("arc:{arc}"), format_rational(t)),
            PointTarget::Node { node } => (format!("node:{node}"), String::new()),
        };
        for element in &entry.fiber {
            let value = cmts_value(element);
            csv.push_str(&format!(
                "{path},{},{t},{element},{}/{},{}\n",
                csv_field(&place),
                value.numer(),
                value.denom(),
                decimal_string(&value, args.precision as usize)
            ));
        }
    }
    emit(args.out.as_deref(), &csv)
}
