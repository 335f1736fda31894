//! The `knet` command line.
//!
//! Results go to the output stream, diagnostics to the error stream. Exit
//! statuses: 0 success, 1 usage or parse error, 2 invalid network or refuted
//! check, 3 resource budget exceeded.
//!
//! With `--format json` every subcommand except `gen` prints one JSON object
//! carrying `schema_version` and `command` next to the command's own fields.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bounds::{comparison_bounds, merge_insertion_sort, BoundsReport};
use crate::construct::{stooge_scheme_with_order, triangle, StoogeOrder};
use crate::error::Error;
use crate::netcore::{read_network, write_network, Network};
use crate::parallel::{parallel_merge_sort_schedule, schedule_stage_table, StageTable};
use crate::verify::{
    check_postulations, permutation_verify, search_min_passes, zero_one_sample, zero_one_verify,
    Counterexample, PostulationReport, SearchMode, SearchSpec, VerificationReport, Witness,
    PERMUTATION_WIDTH_LIMIT,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_BUDGET: u64 = 1_000_000_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "knet",
    version,
    about = "Comparator networks built from k-sorters"
)]
pub struct Cli {
    /// Work cap for verification and search, in inputs × candidates.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads; 0 uses the available parallelism.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a network in knet format.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        /// Output file; standard output when absent.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Check a knet network by the 0-1 principle.
    Verify {
        /// knet file; standard input when absent or `-`.
        network: Option<PathBuf>,
        /// Test this many random 0-1 inputs instead of all of them.
        #[arg(long, conflicts_with = "permutations")]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0, requires = "sample")]
        seed: u64,
        /// Enumerate permutations of 1..=n instead of 0-1 inputs.
        #[arg(long)]
        permutations: bool,
    },
    /// Run a knet network on a sequence of integers.
    Apply {
        network: PathBuf,
        #[command(flatten)]
        input: SequenceInput,
    },
    /// Find the fewest window sorts that sort n lines.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        window: usize,
        #[arg(long)]
        max_passes: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Contiguous)]
        mode: ModeArg,
    },
    /// Check the window-pass claims on their test instances.
    Postulations,
    /// Print the parallel merge sort stage table and round count.
    Schedule {
        #[arg(long)]
        n: usize,
    },
    /// Print comparison-count bounds for sorting n keys.
    Bounds {
        #[arg(long)]
        n: u64,
    },
    /// Sort with merge insertion and report the comparison count.
    Fjsort {
        #[command(flatten)]
        input: SequenceInput,
    },
}

#[derive(Debug, Subcommand)]
enum GenFamily {
    Triangle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    Stooge {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = OrderArg::FirstLastFirst)]
        order: OrderArg,
    },
    Parmerge {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct SequenceInput {
    /// Comma-separated integers.
    #[arg(long, allow_hyphen_values = true)]
    input: Option<String>,
    /// File with one integer per line.
    #[arg(long)]
    input_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Contiguous,
    ArbitrarySubsets,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderArg {
    FirstLastFirst,
    LastFirstLast,
}

/// Envelope shared by every machine-readable report.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct Document<T> {
    pub schema_version: u32,
    pub command: String,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct VerifyBody {
    pub width: usize,
    pub size: usize,
    /// `exhaustive`, `sampled` or `permutations`.
    pub method: String,
    pub valid: bool,
    pub inputs_tested: u64,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ApplyBody {
    pub output: Vec<i64>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SearchBody {
    pub n: usize,
    pub window: usize,
    pub max_passes: usize,
    pub mode: SearchMode,
    pub found: bool,
    pub min_passes: Option<usize>,
    pub witness: Option<Witness>,
    pub sequences_tested: u64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ScheduleBody {
    pub n: usize,
    pub rounds: usize,
    pub comparisons: usize,
    /// t(t+1)/2 with t = ⌈log₂ n⌉.
    pub round_bound: usize,
    pub stage_table: Option<StageTable>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct FjsortBody {
    pub output: Vec<i64>,
    pub comparisons: u64,
    pub upper_bound: u64,
}

/// Failure of a subcommand, already mapped to its exit status.
struct Failure {
    status: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Resource { .. } => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            status: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure {
            status: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        status: EXIT_USAGE,
        message: message.into(),
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return status;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(&cli, &mut buf));
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    match result {
        Ok(status) => status,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.status
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let fmt = cli.format;
    match &cli.command {
        Command::Gen { family, output } => {
            let net = match family {
                GenFamily::Triangle { n, k } => triangle(*n, *k)?,
                GenFamily::Stooge { n, order } => {
                    let order = match order {
                        OrderArg::FirstLastFirst => StoogeOrder::FirstLastFirst,
                        OrderArg::LastFirstLast => StoogeOrder::LastFirstLast,
                    };
                    stooge_scheme_with_order(*n, order)?.to_network()
                }
                GenFamily::Parmerge { n } => parallel_merge_sort_schedule(*n)?.to_network(),
            };
            let text = write_network(&net);
            match output {
                Some(path) => std::fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            network,
            sample,
            seed,
            permutations,
        } => {
            let net = load_network(network.as_deref())?;
            let (method, report) = if let Some(samples) = sample {
                check_budget(*samples, cli.budget)?;
                ("sampled", zero_one_sample(&net, *samples, *seed)?)
            } else if *permutations {
                (
                    "permutations",
                    permutation_verify(&net, PERMUTATION_WIDTH_LIMIT)?,
                )
            } else {
                if net.width() < 64 {
                    check_budget(1u64 << net.width(), cli.budget)?;
                }
                ("exhaustive", zero_one_verify(&net)?)
            };
            emit_verify(out, fmt, &net, method, &report)?;
            Ok(if report.valid() {
                EXIT_OK
            } else {
                EXIT_INVALID
            })
        }
        Command::Apply { network, input } => {
            let net = load_network(Some(network))?;
            let values = input.read()?;
            let output = net.apply(&values)?;
            match fmt {
                Format::Text => writeln!(out, "{}", join(&output))?,
                Format::Json => write_json(out, "apply", &ApplyBody { output })?,
            }
            Ok(EXIT_OK)
        }
        Command::Search {
            n,
            window,
            max_passes,
            mode,
        } => {
            let mode = match mode {
                ModeArg::Contiguous => SearchMode::Contiguous,
                ModeArg::ArbitrarySubsets => SearchMode::ArbitrarySubsets,
            };
            let spec = SearchSpec::new(*n, *window, *max_passes, mode)?;
            let result = search_min_passes(&spec, cli.budget)?;
            let body = SearchBody {
                n: *n,
                window: *window,
                max_passes: *max_passes,
                mode,
                found: result.found,
                min_passes: result.min_passes,
                witness: result.witness,
                sequences_tested: result.sequences_tested,
            };
            match fmt {
                Format::Text => write_search_text(out, &body)?,
                Format::Json => write_json(out, "search", &body)?,
            }
            Ok(EXIT_OK)
        }
        Command::Postulations => {
            let report = check_postulations(cli.budget)?;
            match fmt {
                Format::Text => write_postulations_text(out, &report)?,
                Format::Json => write_json(out, "postulations", &report)?,
            }
            Ok(if report.any_refuted() {
                EXIT_INVALID
            } else {
                EXIT_OK
            })
        }
        Command::Schedule { n } => {
            let schedule = parallel_merge_sort_schedule(*n)?;
            let t = ceil_log2(*n);
            let body = ScheduleBody {
                n: *n,
                rounds: schedule.round_count(),
                comparisons: schedule.comparison_count(),
                round_bound: t * (t + 1) / 2,
                stage_table: n
                    .is_power_of_two()
                    .then(|| schedule_stage_table(*n))
                    .transpose()?,
            };
            match fmt {
                Format::Text => write_schedule_text(out, &body)?,
                Format::Json => write_json(out, "schedule", &body)?,
            }
            Ok(EXIT_OK)
        }
        Command::Bounds { n } => {
            let report = comparison_bounds(*n)?;
            match fmt {
                Format::Text => writeln!(out, "lower={} upper={}", report.lower, report.upper)?,
                Format::Json => write_json::<BoundsReport>(out, "bounds", &report)?,
            }
            Ok(EXIT_OK)
        }
        Command::Fjsort { input } => {
            let values = input.read()?;
            let run = merge_insertion_sort(&values);
            let upper_bound = match values.len() {
                0 => 0,
                n => comparison_bounds(n as u64)?.upper,
            };
            let body = FjsortBody {
                output: run.output,
                comparisons: run.comparisons,
                upper_bound,
            };
            match fmt {
                Format::Text => {
                    writeln!(out, "{}", join(&body.output))?;
                    writeln!(
                        out,
                        "comparisons={} upper={}",
                        body.comparisons, body.upper_bound
                    )?;
                }
                Format::Json => write_json(out, "fjsort", &body)?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

fn check_budget(work: u64, budget: u64) -> std::result::Result<(), Failure> {
    if work > budget {
        return Err(Error::Resource {
            msg: format!("{work} inputs exceed budget {budget}"),
            progress: 0,
        }
        .into());
    }
    Ok(())
}

fn load_network(path: Option<&std::path::Path>) -> std::result::Result<Network, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text =
                std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
        }
        _ => {
            io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(read_network(&text)?)
}

impl SequenceInput {
    fn read(&self) -> std::result::Result<Vec<i64>, Failure> {
        if let Some(list) = &self.input {
            return parse_sequence(list.split(','), "--input");
        }
        let path = self.input_file.as_ref().expect("clap requires one input");
        let text =
            std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        parse_sequence(
            text.lines().filter(|l| !l.is_empty()),
            &path.display().to_string(),
        )
    }
}

fn parse_sequence<'a>(
    items: impl Iterator<Item = &'a str>,
    origin: &str,
) -> std::result::Result<Vec<i64>, Failure> {
    items
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| usage(format!("{origin}: invalid integer `{t}`")))
        })
        .collect()
}

fn join(values: &[i64]) -> String {
    values
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn write_json<T: Serialize>(
    out: &mut dyn Write,
    command: &str,
    body: &T,
) -> std::result::Result<(), Failure> {
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        body,
    };
    serde_json::to_writer(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(())
}

fn emit_verify(
    out: &mut dyn Write,
    fmt: Format,
    net: &Network,
    method: &str,
    report: &VerificationReport,
) -> std::result::Result<(), Failure> {
    match fmt {
        Format::Json => write_json(
            out,
            "verify",
            &VerifyBody {
                width: net.width(),
                size: net.size(),
                method: method.to_string(),
                valid: report.valid(),
                inputs_tested: report.inputs_tested(),
                counterexample: report.counterexample().cloned(),
            },
        ),
        Format::Text => {
            let noun = match method {
                "permutations" => "permutations",
                "sampled" => "sampled inputs",
                _ => "inputs",
            };
            let verdict = if report.valid() { "valid" } else { "invalid" };
            writeln!(out, "{verdict} ({} {noun})", report.inputs_tested())?;
            if let Some(c) = report.counterexample() {
                writeln!(
                    out,
                    "counterexample: {} -> {}",
                    join(&c.input),
                    join(&c.output)
                )?;
            }
            Ok(())
        }
    }
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Offsets(o) => format!(
            "offsets={}",
            o.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
        ),
        Witness::Subsets(s) => format!(
            "subsets={}",
            s.iter()
                .map(|l| format!(
                    "{{{}}}",
                    l.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
                ))
                .collect::<Vec<_>>()
                .join(",")
        ),
    }
}

fn write_search_text(out: &mut dyn Write, body: &SearchBody) -> io::Result<()> {
    writeln!(
        out,
        "n={} window={} mode={} max_passes={}",
        body.n, body.window, body.mode, body.max_passes
    )?;
    match (&body.min_passes, &body.witness) {
        (Some(m), Some(w)) => writeln!(out, "found min_passes={m} {}", witness_text(w))?,
        _ => writeln!(out, "not found within {} passes", body.max_passes)?,
    }
    writeln!(out, "sequences_tested={}", body.sequences_tested)
}

fn write_postulations_text(out: &mut dyn Write, report: &PostulationReport) -> io::Result<()> {
    for e in &report.entries {
        write!(
            out,
            "postulation {} [{}] n={} window={} mode={} max_passes={}: {}",
            e.postulation, e.claim, e.n, e.window, e.mode, e.max_passes, e.verdict
        )?;
        if let (Some(m), Some(w)) = (e.min_passes, &e.witness) {
            write!(out, " min_passes={m} {}", witness_text(w))?;
        }
        if let Some(ok) = e.reference_witness_valid {
            write!(
                out,
                " stooge_witness={}",
                if ok { "valid" } else { "invalid" }
            )?;
        }
        writeln!(
            out,
            " inputs_tested={} sequences_tested={}",
            e.inputs_tested, e.sequences_tested
        )?;
    }
    Ok(())
}

fn write_schedule_text(out: &mut dyn Write, body: &ScheduleBody) -> io::Result<()> {
    if let Some(table) = &body.stage_table {
        writeln!(out, "run_length run_count rounds")?;
        for row in &table.rows {
            writeln!(out, "{} {} {}", row.run_length, row.run_count, row.rounds)?;
        }
    }
    writeln!(
        out,
        "rounds={} comparisons={} round_bound={}",
        body.rounds, body.comparisons, body.round_bound
    )
}
