//! The `fdiff` command line. Data goes to stdout, progress to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::json;

use crate::cascade::{self, compress_records, load_log, table_csv, table_markdown, CascadeOptions};
use crate::clique::{brute_force_max_clique, Budget, SearchConfig};
use crate::error::Error;
use crate::formulas::{greedy_construct, greedy_guarantee, verify_formula, Formula};
use crate::graph::zero_neighborhood_graph;
use crate::modular::{self, format_ratio, DensityRecord};
use crate::sets::{parse_integer_lines, ForbiddenSet};
use crate::validate::forbidden_pair;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fdiff",
    version,
    about = "Maximum sets of integers avoiding forbidden differences"
)]
struct Cli {
    /// Solver threads (0 = all cores; 1 gives reproducible witnesses).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Search budget: a node count, or seconds with an `s` suffix.
    #[arg(long, global = true, env = "FDIFF_BUDGET")]
    budget: Option<Budget>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute D(X, N) with an optimal witness.
    Compute {
        #[arg(long)]
        set: ForbiddenSet,
        #[arg(long, value_parser = positive)]
        n: u64,
        /// Use the brute-force oracle (small graphs only).
        #[arg(long)]
        oracle: bool,
        /// Also write the graph in DIMACS format.
        #[arg(long)]
        dimacs: Option<PathBuf>,
    },
    /// Resolve D(X, n) for every n in [min, max] top-down.
    Cascade {
        #[arg(long)]
        set: ForbiddenSet,
        #[arg(long, value_parser = positive)]
        min: u64,
        #[arg(long, value_parser = positive)]
        max: u64,
        /// JSONL record log.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        resume: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the range table stored in a cascade log.
    Table {
        #[arg(long)]
        log: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Local density d_X(m).
    Density {
        #[arg(long)]
        set: ForbiddenSet,
        #[arg(long, value_parser = positive)]
        m: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Best d_X(m)/m over m <= max-m.
    MuLower {
        #[arg(long)]
        set: ForbiddenSet,
        #[arg(long, value_parser = positive)]
        max_m: u64,
        /// Cascade log giving the upper estimate min D(X, N)/N.
        #[arg(long)]
        upper_from_log: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check a closed form against solver values.
    Verify {
        #[arg(long)]
        formula: Formula,
        #[arg(long, value_parser = positive)]
        min: u64,
        #[arg(long, value_parser = positive)]
        max: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Greedy X-set in [N].
    Greedy {
        #[arg(long)]
        set: ForbiddenSet,
        #[arg(long, value_parser = positive)]
        n: u64,
    },
    /// Check that a set has no forbidden differences.
    ValidateWitness {
        #[arg(long)]
        set: ForbiddenSet,
        /// A file (one integer per line, or one comma-separated line) or an inline list.
        #[arg(long)]
        witness: String,
    },
}

/// Runs the command line, writing to the given streams. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BudgetExhausted(_) => EXIT_BUDGET,
                Error::InvalidWitness(_) => EXIT_INVALID,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn check_range(min: u64, max: u64) -> Result<(), Error> {
    if min >= max {
        return Err(Error::InvalidArgument(format!("--min {min} must be below --max {max}")));
    }
    Ok(())
}

fn emit(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), Error> {
    writeln!(out, "{}", serde_json::to_string(value).expect("json value serializes"))?;
    Ok(())
}

fn parse_witness(arg: &str) -> Result<Vec<i64>, Error> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg)?
    } else {
        arg.to_string()
    };
    let flat = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>();
    if flat.iter().filter(|l| !l.trim().is_empty()).count() == 1 && flat.iter().any(|l| l.contains(',')) {
        let line = flat.iter().find(|l| !l.trim().is_empty()).expect("one line");
        return line
            .split(',')
            .map(|t| {
                t.trim().parse::<i64>().map_err(|e| Error::Parse {
                    line: 1,
                    reason: format!("`{}`: {e}", t.trim()),
                })
            })
            .collect();
    }
    parse_integer_lines(&text)
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let config = SearchConfig::default()
        .with_threads(cli.threads)
        .with_budget(cli.budget.unwrap_or_default());
    match cli.command {
        Command::Compute { set, n, oracle, dimacs } => {
            if let Some(path) = dimacs {
                std::fs::write(path, zero_neighborhood_graph(n, &set)?.to_dimacs())?;
            }
            let (d, witness, nodes, elapsed, method) = if oracle {
                let graph = zero_neighborhood_graph(n, &set)?;
                let o = brute_force_max_clique(&graph)?;
                let mut w = vec![1];
                w.extend(o.witness.iter().map(|c| c + 1));
                (o.size as u64 + 1, w, o.nodes_expanded, o.elapsed, "oracle")
            } else {
                let v = cascade::compute_d(&set, n, &config)?;
                (v.d, v.witness, v.nodes_expanded, v.elapsed, "branch-and-bound")
            };
            emit(
                out,
                &json!({
                    "set": set.to_string(), "n": n, "d": d, "witness": witness,
                    "method": method, "nodes": nodes, "elapsed_ms": elapsed.as_millis() as u64,
                }),
            )?;
        }
        Command::Cascade {
            set,
            min,
            max,
            out: log,
            resume,
            format,
        } => {
            check_range(min, max)?;
            let options = CascadeOptions {
                search: config,
                log: Some(log),
                resume,
            };
            let records = cascade::cascade(&set, min, max, &options, |r| {
                let _ = writeln!(err, "[{}, {}] d = {}", r.n_lo, r.n_hi, r.d);
            })?;
            let rows = compress_records(&records)?;
            write_table(out, &rows, &set.to_string(), format)?;
        }
        Command::Table { log, format } => {
            let (set, records) = load_log(&log)?;
            let rows = compress_records(&records)?;
            write_table(out, &rows, &set.to_string(), format)?;
        }
        Command::Density { set, m, format } => {
            let record = modular::local_density_with(&set, m, modular::DEFAULT_MODULUS_CAP, &config)?;
            write_densities(out, &[record], format)?;
        }
        Command::MuLower {
            set,
            max_m,
            upper_from_log,
            format,
        } => {
            let scan = modular::density_scan(&set, max_m, &config)?;
            if matches!(format, Format::Csv | Format::Md) {
                write_densities(out, &scan, format)?;
                return Ok(EXIT_OK);
            }
            let best = modular::best_ratio(scan)?;
            let mut value = json!({ "set": set.to_string(), "lower": best });
            if let Some(path) = upper_from_log {
                let (log_set, records) = load_log(&path)?;
                if log_set != set {
                    return Err(Error::LogMismatch(format!("log is for `{log_set}`, requested `{set}`")));
                }
                let upper = records
                    .iter()
                    .map(|r| (Ratio::new(r.d, r.n_hi), r.n_hi))
                    .min_by(|a, b| a.0.cmp(&b.0))
                    .expect("load_log returns at least one record");
                value["upper"] = json!({ "n": upper.1, "ratio": format_ratio(&upper.0) });
            }
            emit(out, &value)?;
        }
        Command::Verify {
            formula,
            min,
            max,
            format,
        } => {
            check_range(min, max)?;
            let report = verify_formula(formula, min, max, &config)?;
            match format {
                Format::Csv | Format::Md => write!(out, "{}", report.to_csv())?,
                Format::Json => {
                    let slack: Vec<u64> = report.slack().map(|r| r.n).collect();
                    let mismatched: Vec<u64> = report.mismatches().map(|r| r.n).collect();
                    emit(
                        out,
                        &json!({
                            "formula": formula.to_string(), "min": min, "max": max,
                            "mismatches": mismatched, "slack": slack, "rows": report.rows,
                        }),
                    )?;
                }
            }
            if report.mismatches().next().is_some() {
                let _ = writeln!(err, "formula disagrees with computed values");
                return Ok(EXIT_INVALID);
            }
        }
        Command::Greedy { set, n } => {
            let g = greedy_construct(&set, n)?;
            let guarantee = greedy_guarantee(&set, n)?;
            emit(
                out,
                &json!({ "set": set.to_string(), "n": n, "value": g.value, "guarantee": guarantee, "witness": g.witness }),
            )?;
        }
        Command::ValidateWitness { set, witness } => {
            let values = parse_witness(&witness)?;
            let mut distinct = values.clone();
            distinct.sort_unstable();
            distinct.dedup();
            let violation = forbidden_pair(&set, &distinct)?;
            emit(
                out,
                &json!({
                    "set": set.to_string(), "valid": violation.is_none(), "size": distinct.len(),
                    "min": distinct.first(), "max": distinct.last(),
                    "violation": violation.map(|(a, b)| vec![a, b]),
                }),
            )?;
            if violation.is_some() {
                return Ok(EXIT_INVALID);
            }
        }
    }
    Ok(EXIT_OK)
}

fn write_table(out: &mut dyn Write, rows: &[cascade::TableRow], set: &str, format: Format) -> Result<(), Error> {
    match format {
        Format::Json => emit(out, &json!({ "set": set, "rows": rows })),
        Format::Csv => Ok(write!(out, "{}", table_csv(rows))?),
        Format::Md => Ok(write!(out, "{}", table_markdown(rows, set))?),
    }
}

fn write_densities(out: &mut dyn Write, records: &[DensityRecord], format: Format) -> Result<(), Error> {
    match format {
        Format::Json if records.len() == 1 => emit(out, &serde_json::to_value(&records[0]).expect("serializes")),
        Format::Json => emit(out, &serde_json::to_value(records).expect("serializes")),
        Format::Csv | Format::Md => {
            writeln!(out, "{}", DensityRecord::csv_header())?;
            for r in records {
                writeln!(out, "{}", r.csv_row())?;
            }
            Ok(())
        }
    }
}
