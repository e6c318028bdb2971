//! Command-line front end. `run` parses arguments, dispatches, and returns
//! the process exit code: 0 ok, 1 check failure, 2 usage or input error,
//! 3 cap or budget exceeded.

mod campaign;

pub use campaign::{run_campaign, CampaignConfig, CampaignJob, CampaignRow, CampaignSummary, RowStatus};

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::basic::{check_chamber_filtration, check_sd_iso, trace_csv};
use crate::complexes::{barycentric_subdivision, build_cn, check_links, check_stabilizers, check_transitivity, ComplexError, SimplicialComplex};
use crate::diagrams::{builtin_family, parse_any, parse_builtin, DiagramError, FamilySpec};
use crate::engine::{check_section3, EngineError, Tower, DEFAULT_GROUP_CAP};
use crate::homology::{chain_complex_of, check_weakly_cm, homology, Coefficients, HomologyError};
use crate::report::Report;
use crate::semisimplicial::{build_dn, check_dn, check_phi_iso};
use crate::stability::{
    borel_spectral_sequence, induction_report, main_theorem_report, verify_main_theorem, StabilityError,
    DEFAULT_BUDGET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::CapExceeded { .. } | EngineError::WordTooLong { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::Engine(inner) => inner.into(),
            ComplexError::SearchBudget(_) => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        match e {
            StabilityError::Engine(inner) => inner.into(),
            StabilityError::Complex(inner) => inner.into(),
            StabilityError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            StabilityError::IncompleteTable(_) => CliError::Budget(e.to_string()),
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "coxstab", version, about = "Coset complexes and homological stability for Coxeter families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// A, B, D, I:<m>, or file:<path> with a diagram that marks a preferred vertex.
    #[arg(long)]
    pub family: String,
    /// Largest group or coset table to enumerate.
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    pub cap: usize,
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// Write the JSON document here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate W_n.
    Enumerate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "n", allow_hyphen_values = true)]
        n: i64,
        /// Include every element as a reduced word.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Cosets of W_sub in W_n (sub defaults to n - 1).
    Cosets {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "n")]
        n: i64,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "drop_top")]
        sub: Option<i64>,
        /// Shorthand for `--sub n-1`.
        #[arg(long = "drop-top")]
        drop_top: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Simplicial complexes.
    Complex {
        #[command(subcommand)]
        action: ComplexCommand,
    },
    /// Homology of a complex stored as JSON.
    Homology {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "z")]
        coeff: Coefficients,
        #[arg(long)]
        reduced: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The semisimplicial set D^n.
    Dn {
        #[command(subcommand)]
        action: DnCommand,
    },
    /// Run verification checks.
    Check {
        kind: CheckKind,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "n")]
        n: i64,
        /// CSV trace of the chamber filtration (check basic).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Check every link instead of one per orbit (check links).
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Group homology and stabilization.
    Stability {
        #[command(subcommand)]
        action: StabilityCommand,
    },
    /// Run a batch of jobs described by a JSON config.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        /// Directory for the summary and per-table CSVs.
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum ComplexCommand {
    /// Build C^n (or its subdivision) and write it as JSON.
    Build {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "n")]
        n: i64,
        #[arg(long)]
        sd: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum DnCommand {
    Build {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "n")]
        n: i64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum StabilityCommand {
    /// H_l(W_m) for m ≤ nmax and the verdict of every stabilization map; CSV.
    Table {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        nmax: i64,
        /// Highest degree; defaults to nmax / 2.
        #[arg(long)]
        maxdeg: Option<usize>,
        #[arg(long, default_value = "f2")]
        coeff: Coefficients,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// JSON report with the in-range verdicts and the E^2 checks.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// E^1 page and d^1 of the spectral sequence for W_n acting on D^n.
    Ss {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "n")]
        n: i64,
        #[arg(long, default_value_t = 2)]
        maxdeg: usize,
        #[arg(long, default_value = "f2")]
        coeff: Coefficients,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    S3,
    Links,
    Transitivity,
    Stabilizers,
    Basic,
    Cm,
    Phi,
    DnConnectivity,
    All,
}

impl CheckKind {
    pub const EACH: [CheckKind; 8] = [
        CheckKind::S3,
        CheckKind::Links,
        CheckKind::Transitivity,
        CheckKind::Stabilizers,
        CheckKind::Basic,
        CheckKind::Cm,
        CheckKind::Phi,
        CheckKind::DnConnectivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::S3 => "s3",
            CheckKind::Links => "links",
            CheckKind::Transitivity => "transitivity",
            CheckKind::Stabilizers => "stabilizers",
            CheckKind::Basic => "basic",
            CheckKind::Cm => "cm",
            CheckKind::Phi => "phi",
            CheckKind::DnConnectivity => "dn-connectivity",
            CheckKind::All => "all",
        }
    }
}

/// `A`, `B`, `D`, `I:<m>` or `file:<path>`.
pub fn parse_family(text: &str) -> Result<FamilySpec, CliError> {
    if let Some(path) = text.strip_prefix("file:") {
        let body = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
        return Ok(FamilySpec::from_diagram(parse_any(&body)?)?);
    }
    let tag = parse_builtin(text).ok_or_else(|| CliError::Usage(format!("unknown family `{text}`")))?;
    Ok(builtin_family(tag)?)
}

/// Runs one check kind; `basic` also returns its trace. Without `all`, links
/// are checked one per orbit once transitivity has been confirmed.
pub fn run_check(
    kind: CheckKind,
    spec: &FamilySpec,
    n: i64,
    cap: usize,
    all: bool,
) -> Result<(Report, Option<String>), CliError> {
    let config = json!({"family": spec.name(), "n": n});
    let report = match kind {
        CheckKind::S3 => check_section3(spec, n, cap)?,
        CheckKind::Links => {
            let all = all || !check_transitivity(spec, n, cap)?.passed();
            check_links(spec, n, cap, all)?
        }
        CheckKind::Transitivity => check_transitivity(spec, n, cap)?,
        CheckKind::Stabilizers => check_stabilizers(spec, n, cap)?,
        CheckKind::Basic => {
            let mut r = Report::new("check basic", config);
            r.extend("sd_iso.", check_sd_iso(spec, n, cap)?);
            let (filt, trace) = check_chamber_filtration(spec, n, cap)?;
            r.extend("filtration.", filt);
            return Ok((r, Some(trace_csv(&trace))));
        }
        CheckKind::Cm => check_weakly_cm(spec, n, cap)?,
        CheckKind::Phi => check_phi_iso(spec, n, cap)?,
        CheckKind::DnConnectivity => check_dn(spec, n, cap)?,
        CheckKind::All => {
            let mut r = Report::new("check all", config);
            let mut trace = None;
            for k in CheckKind::EACH {
                let (sub, t) = run_check(k, spec, n, cap, all)?;
                trace = trace.or(t);
                r.extend(&format!("{}.", k.name()), sub);
            }
            return Ok((r, trace));
        }
    };
    Ok((report, None))
}

fn emit(out: &OutArgs, body: &str) -> Result<(), CliError> {
    match &out.out {
        Some(path) => write_file(path, body),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn finish_report(report: &mut Report, start: Instant, out: &OutArgs) -> Result<i32, CliError> {
    report.elapsed_ms = Some(start.elapsed().as_millis());
    emit(out, &report.to_json())?;
    eprint!("{}", report.to_text());
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    let start = Instant::now();
    match cmd {
        Command::Enumerate { family, n, list, out } => {
            let spec = parse_family(&family.family)?;
            let tower = Tower::new(&spec, n)?;
            let elements = tower.elements(family.cap)?;
            let longest = elements.word(elements.len() - 1);
            let mut doc = json!({
                "schema": 1,
                "family": spec.name(),
                "n": n,
                "generators": tower.system.matrix().generators(),
                "order": elements.len(),
                "length_distribution": elements.length_distribution(),
                "longest": tower.system.format_word(&longest),
            });
            if list {
                let words: Vec<String> = (0..elements.len()).map(|g| tower.system.format_word(&elements.word(g))).collect();
                doc["elements"] = json!(words);
            }
            emit(&out, &to_json(&doc))?;
            eprintln!("{} n={n}: |W| = {}", spec.name(), elements.len());
            Ok(EXIT_OK)
        }
        Command::Cosets { family, n, sub, drop_top: _, out } => {
            let spec = parse_family(&family.family)?;
            let sub = sub.unwrap_or(n - 1);
            if sub > n {
                return Err(CliError::Usage(format!("--sub {sub} is larger than --n {n}")));
            }
            let tower = Tower::new(&spec, n)?;
            let table = tower.cosets(sub, family.cap)?;
            let reps: Vec<String> = (0..table.len()).map(|r| tower.system.format_word(&table.representative(r))).collect();
            let doc = json!({"schema": 1, "family": spec.name(), "n": n, "sub": sub, "index": table.len(), "representatives": reps});
            emit(&out, &to_json(&doc))?;
            eprintln!("{} n={n}: [W_{n} : W_{sub}] = {}", spec.name(), table.len());
            Ok(EXIT_OK)
        }
        Command::Complex { action: ComplexCommand::Build { family, n, sd, out } } => {
            let spec = parse_family(&family.family)?;
            let cn = build_cn(&spec, n, family.cap)?;
            let names = cn.generator_names();
            let doc = if sd {
                let s = barycentric_subdivision(&cn.complex);
                let action = s.induced_action(&cn.action);
                s.complex.to_json(names, Some(&action))
            } else {
                cn.complex.to_json(names, Some(&cn.action))
            };
            emit(&out, &to_json(&doc))?;
            eprintln!("{} n={n}: f-vector {:?}", spec.name(), doc.simplices.iter().map(|s| s.len()).collect::<Vec<_>>());
            Ok(EXIT_OK)
        }
        Command::Homology { input, coeff, reduced, out } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| CliError::Usage(format!("{}: {e}", input.display())))?;
            let complex = SimplicialComplex::from_json(&text)?;
            let table = homology(&chain_complex_of(&complex, reduced), coeff);
            emit(&out, &to_json(&table))?;
            eprint!("{}", table.to_text());
            Ok(EXIT_OK)
        }
        Command::Dn { action: DnCommand::Build { family, n, out } } => {
            let spec = parse_family(&family.family)?;
            let dn = build_dn(&spec, n, family.cap)?;
            emit(&out, &to_json(&json!({"schema": 1, "family": spec.name(), "n": n, "dn": dn.ss})))?;
            eprintln!("{} n={n}: levels {:?}", spec.name(), dn.ss.levels);
            Ok(if dn.well_defined { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Check { kind, family, n, trace, all, out } => {
            let spec = parse_family(&family.family)?;
            let (mut report, csv) = run_check(kind, &spec, n, family.cap, all)?;
            if let (Some(path), Some(csv)) = (trace, csv) {
                write_file(&path, &csv)?;
            }
            finish_report(&mut report, start, &out)
        }
        Command::Stability { action } => match action {
            StabilityCommand::Table { family, nmax, maxdeg, coeff, budget, report, out } => {
                let spec = parse_family(&family.family)?;
                let p = field_of(coeff)?;
                let lmax = maxdeg.unwrap_or((nmax.max(0) / 2) as usize);
                let table = verify_main_theorem(&spec, nmax, lmax, p, budget, family.cap)?;
                let mut rep = main_theorem_report(&table);
                rep.extend("induction.", induction_report(&spec, &table, family.cap)?);
                for note in &table.notes {
                    rep.skip("budget", note.clone());
                }
                rep.elapsed_ms = Some(start.elapsed().as_millis());
                emit(&out, table.to_csv().trim_end())?;
                if let Some(path) = report {
                    write_file(&path, &rep.to_json())?;
                }
                eprint!("{}", rep.to_text());
                let untested = table.entries.iter().any(|e| e.in_range && e.map_rank.is_none());
                Ok(if !rep.passed() {
                    EXIT_CHECK_FAILED
                } else if untested {
                    EXIT_BUDGET
                } else {
                    EXIT_OK
                })
            }
            StabilityCommand::Ss { family, n, maxdeg, coeff, budget, out } => {
                let spec = parse_family(&family.family)?;
                let p = field_of(coeff)?;
                let (page, mut rep) = borel_spectral_sequence(&spec, n, maxdeg, p, budget, family.cap)?;
                rep.elapsed_ms = Some(start.elapsed().as_millis());
                emit(&out, &to_json(&json!({"schema": 1, "page": page, "report": rep})))?;
                eprint!("{}", rep.to_text());
                Ok(if rep.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
            }
        },
        Command::Campaign { config, out_dir, out } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Usage(format!("{}: {e}", config.display())))?;
            let cfg: CampaignConfig =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", config.display())))?;
            let summary = run_campaign(&cfg, out_dir.as_deref())?;
            emit(&out, &to_json(&summary))?;
            eprint!("{}", summary.to_text());
            Ok(summary.exit_code())
        }
    }
}

fn field_of(coeff: Coefficients) -> Result<u32, CliError> {
    match coeff {
        Coefficients::Field(p) => Ok(p),
        Coefficients::Integers => Err(CliError::Usage("stability computations need a field (f2, f<p>)".into())),
    }
}

fn init_threads() {
    if let Some(n) = std::env::var("COXSTAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    init_threads();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}
