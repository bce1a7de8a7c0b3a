mod commands;
mod resolve;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bfl_core::error::GroupError;
use bfl_core::verify::{emit_report, overall_status, PlanMode, ReportFormat, ScanPlan, Status, Verdict};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_FAILS: u8 = 1;
pub const EXIT_INDETERMINATE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(name = "bfl", version, about = "Finite-group verifiers for Baer-Fischer pairs, commutator-closed sets and wreath sections")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args)]
pub struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Resolve inputs and print the plan without computing.
    #[arg(long, global = true)]
    pub dry_run: bool,
    /// Largest orbit followed when building permutation actions.
    #[arg(long, global = true, value_parser = positive)]
    pub orbit_cap: Option<usize>,
    /// Largest group listed element by element.
    #[arg(long, global = true, value_parser = positive)]
    pub enum_cap: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlanArg {
    Exhaustive,
    Sample,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).map_err(|e| e.to_string()),
        None => s.parse().map_err(|e: std::num::ParseIntError| e.to_string()),
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Args, Clone)]
pub struct PlanArgs {
    #[arg(long, value_enum)]
    pub plan: Option<PlanArg>,
    #[arg(long, default_value_t = bfl_core::verify::plan::DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value = "0xBF", value_parser = parse_seed)]
    pub seed: u64,
    /// Largest class an exhaustive plan lists in full.
    #[arg(long, default_value_t = bfl_core::verify::plan::DEFAULT_CLASS_CAP, value_parser = positive)]
    pub class_cap: usize,
}

impl PlanArgs {
    pub fn build(&self, default: PlanMode) -> ScanPlan {
        let mode = match self.plan {
            Some(PlanArg::Exhaustive) => PlanMode::Exhaustive,
            Some(PlanArg::Sample) => PlanMode::Sample,
            None => default,
        };
        ScanPlan { mode, samples: self.samples, seed: self.seed, class_cap: self.class_cap }
    }
}

#[derive(Args, Clone)]
pub struct PairArgs {
    /// Group spec: `sym:6`, `gl:4:3`, `psl2:9+diag`, `d8`, `q8`, `wreath:3`, `file:path`.
    #[arg(long)]
    pub group: String,
    /// Class of c: a label, `order:k,size:m`, or a special element name.
    #[arg(long, conflicts_with = "c_elem")]
    pub c_class: Option<String>,
    /// Named element of a generator file.
    #[arg(long)]
    pub c_elem: Option<String>,
    #[arg(long, conflicts_with = "d_elem")]
    pub d_class: Option<String>,
    #[arg(long)]
    pub d_elem: Option<String>,
    #[arg(long)]
    pub p: u64,
    #[command(flatten)]
    pub plan: PlanArgs,
}

#[derive(Args, Clone)]
pub struct SetArgs {
    #[arg(long)]
    pub group: String,
    /// Class selectors making up C; repeat for a union of classes.
    #[arg(long = "class", required = true)]
    pub classes: Vec<String>,
    #[arg(long)]
    pub p: u64,
    /// Pair scans larger than this are sampled.
    #[arg(long, default_value_t = bfl_core::verify::DEFAULT_PAIR_CAP)]
    pub pair_cap: u64,
    #[command(flatten)]
    pub plan: PlanArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TierArg {
    Quotient,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Found,
    Absent,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityArg {
    Commutator,
    Inversion,
    Both,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build a group and report its order, form and special elements.
    Catalog {
        #[arg(long, required_unless_present = "list")]
        group: Option<String>,
        #[arg(long)]
        special: Vec<String>,
        /// List the supported families.
        #[arg(long)]
        list: bool,
    },
    /// Conjugacy classes with labels, sizes and element orders.
    Classes {
        #[arg(long)]
        group: String,
        /// Print representatives as well.
        #[arg(long)]
        reps: bool,
    },
    /// Is ⟨c, d^g⟩ a p-group for all g? Directly, or from a character table.
    BfPair {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Pair scan that also asks for no Z_p wr Z_p section.
    WreathFree {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Is C closed under commutators? Also reports squares and inverses.
    CommClosed {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Does CC⁻¹ consist of p-elements?
    CcInverse {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Class multiplication coefficients from a character table.
    Structconst {
        /// Table path or name searched in BFL_TABLE_DIR, ./tables and the shipped tables.
        #[arg(long)]
        table: String,
        #[arg(long)]
        i: String,
        #[arg(long)]
        j: String,
        #[arg(long)]
        e: Option<String>,
        #[arg(long)]
        list_support: bool,
        /// Also run the table-level pair test for this prime.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Search a p-group for a section isomorphic to Z_p wr Z_p.
    WreathSection {
        #[arg(long)]
        group: String,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = TierArg::Full)]
        tier: TierArg,
        /// Turn the search into a check with this expected outcome.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        /// Largest group the section search will tabulate.
        #[arg(long, default_value_t = 20_000, value_parser = positive)]
        closure_cap: usize,
    },
    /// Fixed-space bound and direct-sum section check on modules.
    RepnCheck {
        /// Generator file of matrices; without it the built-in battery runs.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, required_unless_present = "battery")]
        p: Option<u64>,
        #[arg(long)]
        battery: bool,
    },
    /// All pairs of involution classes of S_n.
    ScanSym {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Non-conjugate reflections of GO_3(q).
    ScanO3 {
        #[arg(long = "q", default_values_t = vec![3u32, 5, 7, 9])]
        qs: Vec<u32>,
    },
    /// pm_i element against reflection conjugates in GL_{2n}(3).
    ScanSl2n3 {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Trace of x y x⁻¹ y⁻¹ against t + 3 in SL_2(q).
    L2qTrace {
        #[arg(long = "q", default_values_t = vec![3u32, 5, 7, 9, 11, 13])]
        qs: Vec<u32>,
    },
    /// Degree of s⁴ tr[x, x^{diag(s, 1/s)}] for sampled x.
    L2qLaurent {
        #[arg(long = "q", default_values_t = vec![11u32, 13])]
        qs: Vec<u32>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value = "0xBF", value_parser = parse_seed)]
        seed: u64,
    },
    /// [x,y][y,x] = 1 and the involution inversion identity on samples.
    IdentityScan {
        #[arg(long = "group", required = true)]
        groups: Vec<String>,
        #[arg(long, value_enum, default_value_t = IdentityArg::Both)]
        identity: IdentityArg,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Compute a character table and write it as JSON.
    GenTable {
        #[arg(long, conflicts_with_all = ["shipped", "all_shipped"])]
        group: Option<String>,
        #[arg(long)]
        name: Option<String>,
        /// One of the shipped table stems.
        #[arg(long)]
        shipped: Option<String>,
        /// Regenerate every shipped table into --dir.
        #[arg(long)]
        all_shipped: bool,
        #[arg(long, default_value = "tables")]
        dir: PathBuf,
    },
    /// Re-check every witness of a JSON report.
    Replay {
        #[arg(long)]
        report: PathBuf,
    },
}

/// What a subcommand produced.
pub enum Report {
    Verdicts(Vec<Verdict>),
    Text { human: String, json: serde_json::Value },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Overflow(String),
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Overflow { .. } => CliError::Overflow(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<bfl_core::class_algebra::TableError> for CliError {
    fn from(e: bfl_core::class_algebra::TableError) -> Self {
        CliError::Data(e.to_string())
    }
}

fn render(report: &Report, format: Format) -> String {
    match (report, format) {
        (Report::Verdicts(v), Format::Human) => emit_report(v, ReportFormat::Human),
        (Report::Verdicts(v), Format::Json) => emit_report(v, ReportFormat::Json),
        (Report::Text { human, .. }, Format::Human) => human.clone(),
        (Report::Text { json, .. }, Format::Json) => format!("{}\n", serde_json::to_string_pretty(json).expect("json value")),
    }
}

fn exit_code(report: &Report) -> u8 {
    match report {
        Report::Text { .. } => 0,
        Report::Verdicts(v) => match overall_status(v) {
            Status::Fails => EXIT_FAILS,
            Status::Indeterminate => EXIT_INDETERMINATE,
            _ => 0,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.global.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let mut caps = bfl_core::group::Caps::default();
    if let Some(n) = cli.global.orbit_cap {
        caps.orbit = n;
    }
    if let Some(n) = cli.global.enum_cap {
        caps.enumeration = n;
    }
    resolve::set_caps(caps);
    let report = match commands::run(&cli) {
        Ok(r) => r,
        Err(CliError::Usage(m)) => {
            eprintln!("usage error: {m}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(CliError::Data(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(EXIT_DATA);
        }
        Err(CliError::Overflow(m)) => {
            eprintln!("indeterminate: {m}");
            return ExitCode::from(EXIT_INDETERMINATE);
        }
    };
    let text = render(&report, cli.global.format);
    let written = match &cli.global.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_DATA);
    }
    ExitCode::from(exit_code(&report))
}
