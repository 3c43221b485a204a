//! Command-line front end: group files in, JSON documents out.

pub mod document;
pub mod error;
pub mod groupfile;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde::Serialize;

use ddpd_core::apps::{
    count_conjugacy_classes, count_conjugacy_classes_via_ddpd, derived_subgroup,
    derived_subgroup_via_ddpd, run_benchmark, summarize, BenchConfig, BenchSummary, BenchTask,
    DEFAULT_ORDER_CAP,
};
use ddpd_core::ddpd::orbit_ordered_handle;
use ddpd_core::oracle::{
    brute_force_decompose, random_ddp_group, supports_equivalent, RandomInstanceSpec,
    DEFAULT_ORBIT_CAP,
};
use ddpd_core::{groups, GroupHandle};

use crate::document::{read_support_family, DecompositionDocument, ExpectedDocument, ToolInfo};
pub use crate::error::{CliError, CliResult};
use crate::groupfile::GroupFile;

#[derive(Debug, Parser)]
#[command(
    name = "ddpd",
    version,
    about = "Finest disjoint direct product decomposition of permutation groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose the group in a group file and print the document.
    Decompose {
        file: PathBuf,
        /// Also verify the result against the group.
        #[arg(long)]
        check: bool,
    },
    /// Decompose by exhaustive search over two-cell splits.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        cap: usize,
    },
    /// Check a decomposition document against a group file.
    Check { file: PathBuf, document: PathBuf },
    /// Generate a random group with known decomposition.
    Randgen {
        /// Built-in name (C3, D8, A4, S4, ...) or a group file.
        #[arg(long)]
        inner: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Group file to write; the ground truth goes to `<stem>.expected.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two documents by their factor supports.
    Verify { left: PathBuf, right: PathBuf },
    /// Time whole-group against decomposed computations.
    Bench {
        #[arg(long, default_value = "decompose")]
        task: String,
        #[arg(long)]
        inner: String,
        /// One or more values, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        /// Seconds per measured computation.
        #[arg(long, default_value_t = 600.0)]
        time_limit: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        order_cap: u64,
        /// One JSON object per row instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Derived subgroup order, directly and through the decomposition.
    Derived { file: PathBuf },
    /// Number of conjugacy classes, directly and through the decomposition.
    Classes {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap: u64,
    },
}

pub(crate) fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            0
        }
        Err(e) => {
            eprintln!("ddpd: {e}");
            e.exit_code()
        }
    }
}

/// Runs one command, returning what it prints on success.
pub fn run(command: &Command) -> CliResult<String> {
    match command {
        Command::Decompose { file, check } => cmd_decompose(file, *check),
        Command::Oracle { file, cap } => cmd_oracle(file, *cap),
        Command::Check { file, document } => {
            let group = GroupFile::read(file)?;
            document::read_document(document)?.check_against(&group.handle()?)?;
            Ok("ok\n".into())
        }
        Command::Randgen {
            inner,
            r,
            s,
            seed,
            out,
        } => cmd_randgen(inner, *r, *s, *seed, out),
        Command::Verify { left, right } => cmd_verify(left, right),
        Command::Bench {
            task,
            inner,
            r,
            s,
            reps,
            time_limit,
            seed,
            order_cap,
            json,
        } => {
            let task: BenchTask = task
                .parse()
                .map_err(|_| CliError::Usage(format!("unknown task {task:?}")))?;
            if !(time_limit.is_finite() && *time_limit > 0.0) {
                return Err(CliError::Usage("--time-limit must be positive".into()));
            }
            let inner_group = load_inner(inner)?;
            let mut rows = Vec::new();
            for &r in r {
                for &s in s {
                    let config = BenchConfig {
                        inner_name: inner.clone(),
                        spec: RandomInstanceSpec {
                            inner: inner_group.clone(),
                            r,
                            s,
                            seed: *seed,
                        },
                        task,
                        repetitions: *reps,
                        time_limit: Duration::from_secs_f64(*time_limit),
                        order_cap: *order_cap,
                    };
                    let records = run_benchmark(&config)?;
                    rows.push(summarize(&config, &records));
                }
            }
            Ok(if *json {
                bench_json(&rows)
            } else {
                bench_table(&rows)
            })
        }
        Command::Derived { file } => {
            let h = GroupFile::read(file)?.handle()?;
            let whole = derived_subgroup(&h)?;
            let decomposed = derived_subgroup_via_ddpd(&h)?;
            Ok(format!(
                "group order: {}\nderived order (whole group): {}\nderived order (decomposed): {}\n",
                h.order(),
                whole.order(),
                decomposed.order()
            ))
        }
        Command::Classes { file, cap } => {
            let h = GroupFile::read(file)?.handle()?;
            let mut out = format!("group order: {}\n", h.order());
            match count_conjugacy_classes(&h, *cap) {
                Ok(report) => writeln!(out, "classes (whole group): {}", report.count).unwrap(),
                Err(ddpd_core::Error::OrderCap { .. }) => {
                    writeln!(out, "classes (whole group): N/A (order above cap {cap})").unwrap()
                }
                Err(e) => return Err(e.into()),
            }
            let report = count_conjugacy_classes_via_ddpd(&h, *cap)?;
            let per: Vec<String> = report
                .per_factor_counts
                .unwrap_or_default()
                .iter()
                .map(|c| c.to_string())
                .collect();
            writeln!(
                out,
                "classes (decomposed): {} = product of [{}]",
                report.count,
                per.join(", ")
            )
            .unwrap();
            Ok(out)
        }
    }
}

fn cmd_decompose(file: &Path, check: bool) -> CliResult<String> {
    let group = GroupFile::read(file)?;
    let handle = orbit_ordered_handle(&group.generators, group.degree)?;
    let result = ddpd_core::ddpd::decompose_handle(
        &handle,
        ddpd_core::ddpd::DecomposeOptions { verify: check },
    )?;
    let doc = DecompositionDocument::from_result(&result);
    if check {
        result.check_laws(&group.generators)?;
        doc.check_against(&handle)?;
    }
    Ok(doc.to_json())
}

fn cmd_oracle(file: &Path, cap: usize) -> CliResult<String> {
    let group = GroupFile::read(file)?;
    let handle = group.handle()?;
    let partition = brute_force_decompose(&handle, cap)?;
    Ok(DecompositionDocument::from_partition(&handle, &partition)?.to_json())
}

/// A built-in group name or a group file holding a transitive group.
pub fn load_inner(spec: &str) -> CliResult<GroupHandle> {
    let path = Path::new(spec);
    if path.is_file() {
        return GroupFile::read(path)?.handle();
    }
    groups::named(spec)
        .map_err(|_| CliError::Usage(format!("{spec:?} is neither a group name nor a file")))
}

/// `x.txt` becomes `x.expected.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("expected.json")
}

fn cmd_randgen(inner: &str, r: usize, s: usize, seed: u64, out: &Path) -> CliResult<String> {
    let inner_group = load_inner(inner)?;
    let instance = random_ddp_group(&RandomInstanceSpec {
        inner: inner_group,
        r,
        s,
        seed,
    })?;
    let group = GroupFile::new(
        instance.group.degree(),
        instance.group.generators().to_vec(),
    );
    let expected = ExpectedDocument {
        tool: ToolInfo::new("randgen", Some(seed)),
        inner: inner.to_string(),
        r,
        s,
        degree: group.degree,
        supports: instance
            .expected_supports
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect(),
    };
    group.write(out)?;
    let sidecar = sidecar_path(out);
    write_text(&sidecar, &expected.to_json())?;
    Ok(format!(
        "wrote {} and {}\n",
        out.display(),
        sidecar.display()
    ))
}

fn cmd_verify(left: &Path, right: &Path) -> CliResult<String> {
    let a = read_support_family(left)?;
    let b = read_support_family(right)?;
    if a.degree != b.degree {
        return Err(CliError::NotEquivalent(format!(
            "degrees differ: {} vs {}",
            a.degree, b.degree
        )));
    }
    let report = supports_equivalent(a.supports, b.supports);
    match report.mismatch {
        None => Ok("equivalent\n".into()),
        Some(diff) => Err(CliError::NotEquivalent(diff)),
    }
}

fn fmt_seconds(t: Option<f64>) -> String {
    t.map_or_else(|| "N/A".to_string(), |t| format!("{t:.4}"))
}

fn bench_table(rows: &[BenchSummary]) -> String {
    let mut out = String::new();
    let (whole, decomposed) = match rows.first().map(|r| r.task) {
        Some(BenchTask::Decompose) => ("oracle", "-"),
        _ => ("full", "decomposed"),
    };
    writeln!(
        out,
        "{:<8} {:>3} {:>3} {:>12} {:>3} {:>13} {:>3} {:>12} {:>3}",
        "inner", "r", "s", whole, "#", "decomposition", "#", decomposed, "#"
    )
    .unwrap();
    for row in rows {
        let decomposed = if row.task == BenchTask::Decompose {
            ("-".to_string(), "-".to_string())
        } else {
            (
                fmt_seconds(row.decomposed_median),
                row.decomposed_completed.to_string(),
            )
        };
        writeln!(
            out,
            "{:<8} {:>3} {:>3} {:>12} {:>3} {:>13} {:>3} {:>12} {:>3}",
            row.inner,
            row.r,
            row.s,
            fmt_seconds(row.whole_median),
            row.whole_completed,
            fmt_seconds(row.decomposition_median),
            row.decomposition_completed,
            decomposed.0,
            decomposed.1,
        )
        .unwrap();
    }
    out
}

#[derive(Serialize)]
struct BenchRow<'a> {
    task: String,
    inner: &'a str,
    r: usize,
    s: usize,
    reps: usize,
    whole_median_seconds: Option<f64>,
    whole_completed: usize,
    decomposition_median_seconds: Option<f64>,
    decomposition_completed: usize,
    decomposed_median_seconds: Option<f64>,
    decomposed_completed: usize,
}

fn bench_json(rows: &[BenchSummary]) -> String {
    let mut out = String::new();
    for row in rows {
        let row = BenchRow {
            task: row.task.to_string(),
            inner: &row.inner,
            r: row.r,
            s: row.s,
            reps: row.repetitions,
            whole_median_seconds: row.whole_median,
            whole_completed: row.whole_completed,
            decomposition_median_seconds: row.decomposition_median,
            decomposition_completed: row.decomposition_completed,
            decomposed_median_seconds: row.decomposed_median,
            decomposed_completed: row.decomposed_completed,
        };
        out += &serde_json::to_string(&row).expect("row serializes");
        out.push('\n');
    }
    out
}
