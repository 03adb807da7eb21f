//! Command-line front end. `run` does all the work and hands back the exit
//! status and both output streams, so the binary is a thin wrapper.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::CyclotomicNumber;
use crate::dataset::{parse_dataset, DatasetError, FixedPointDataset, ManifoldInvariants};
use crate::lefschetz::{k_vector, spin_index, spin_number, spin_tuple, KVector, LefschetzError};
use crate::repring::InstanceParameters;
use crate::rigidity::{
    classify_spin, enumerate_pseudofree_p3, quotient_invariants, verdict_with, verify_prop41_with,
    Prop41Report, QuotientReport, RigidityError, RigidityVerdict, SpinClass, VerdictOptions,
    DEFAULT_PRECISION,
};
use crate::selftest::{self, SelftestOptions, SelftestReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "spinrigid",
    version,
    about = "Equivariant index invariants and rigidity checks for ℤ_p actions on spin 4-manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Bits of working precision for numeric estimates of irrational spin
    /// numbers. Exact results never depend on it.
    #[arg(long, global = true, value_name = "BITS", default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct Input {
    /// Fixed-point dataset (JSON).
    #[arg(required_unless_present = "batch", conflicts_with = "batch")]
    pub input: Option<PathBuf>,
    /// Evaluate every *.json file in a directory, in file-name order.
    #[arg(long, value_name = "DIR")]
    pub batch: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Spin number of a power of the action.
    Spin {
        #[command(flatten)]
        input: Input,
        /// Power j of the generator.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        power: i64,
    },
    /// Signature and Euler characteristic of the quotient (p = 3).
    Quotient {
        #[command(flatten)]
        input: Input,
    },
    /// Spin numbers of all powers and the eigenspace defects kᵢ.
    Kvector {
        #[command(flatten)]
        input: Input,
    },
    /// Full constraint pipeline: Contradiction, ConstraintViolation or
    /// NoObstruction, with the reason chain.
    Verdict {
        #[command(flatten)]
        input: Input,
    },
    /// Pseudofree fixed-point counts (f1, f2) allowed by the G-signature
    /// theorem.
    Enumerate {
        #[arg(long = "p", default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        quotient_b_plus: i64,
        /// Require a homologically trivial action.
        #[arg(long)]
        trivial: bool,
        /// Manifold invariants (JSON); K3 when omitted.
        manifold: Option<PathBuf>,
    },
    /// Adams kernel and Seiberg-Witten vanishing for one instance.
    Prop41 {
        /// Instance parameters (JSON); the p = 3, m = (2,2,2), n = (2,1,1)
        /// instance when omitted.
        input: Option<PathBuf>,
        /// Adams operations to intersect; repeat for several.
        #[arg(long = "q", default_values_t = vec![2u64])]
        qs: Vec<u64>,
    },
    /// Run the built-in acceptance battery.
    Selftest {
        /// Signature of the K3 preset (negative control: -8 must fail).
        #[arg(long, default_value_t = -16, allow_negative_numbers = true)]
        k3_signature: i64,
        /// Smaller corpora and oracle instances.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Invalid(_) => EXIT_INVALID,
        }
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<LefschetzError> for CliError {
    fn from(e: LefschetzError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<RigidityError> for CliError {
    fn from(e: RigidityError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_dataset(path: &Path) -> Result<FixedPointDataset, CliError> {
    parse_dataset(&read(path)?).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinReport {
    pub p: u64,
    pub power: i64,
    pub value: CyclotomicNumber,
    pub spin: SpinClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KVectorReport {
    pub p: u64,
    /// Spin(τ̂^j) for j = 0..p−1; slot 0 is the index −σ/8.
    pub spin_numbers: Vec<CyclotomicNumber>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_vector: Option<KVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub p: u64,
    pub quotient_b_plus: i64,
    pub trivial: bool,
    pub manifold: ManifoldInvariants,
    /// (f1, f2): points of type (1,2) and of type (1,1)
    pub counts: Vec<(u64, u64)>,
}

/// One evaluated file of a batch run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub struct BatchEntry<T> {
    pub file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// What a run produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

trait Render {
    fn text(&self) -> String;
}

fn class_text(c: &SpinClass) -> String {
    match (&c.value, &c.estimate) {
        (Some(v), _) => format!("{v} ({})", c.sign),
        (None, Some(e)) => format!("≈ {e} (irrational, sign not decided exactly)"),
        (None, None) => format!("({})", c.sign),
    }
}

fn kebab<T: Serialize>(x: &T) -> String {
    match serde_json::to_value(x) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

impl Render for SpinReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p = {}, power {}", self.p, self.power);
        let _ = writeln!(s, "spin number: {}", class_text(&self.spin));
        if !self.spin.rational {
            let _ = writeln!(s, "exact value: {}", self.value);
        }
        s
    }
}

impl Render for QuotientReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "σ(X/ℤ₃) = {}", self.sigma);
        let _ = writeln!(s, "χ(X/ℤ₃) = {}", self.euler);
        match &self.b_minus {
            Some(b) => {
                let _ = writeln!(s, "b₋(X/ℤ₃) = {b}");
            }
            None => {
                let _ = writeln!(s, "not integral: no smooth quotient with these invariants");
            }
        }
        s
    }
}

impl Render for KVectorReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for (j, v) in self.spin_numbers.iter().enumerate() {
            let _ = writeln!(s, "Spin(τ̂^{j}) = {v}");
        }
        match (&self.k_vector, &self.error) {
            (Some(k), _) => {
                let _ = writeln!(s, "k = {k}");
            }
            (None, Some(e)) => {
                let _ = writeln!(s, "no integral k-vector: {e}");
            }
            _ => {}
        }
        s
    }
}

impl Render for Prop41Report {
    fn text(&self) -> String {
        let mut s = String::new();
        let pr = &self.parameters;
        let _ = writeln!(
            s,
            "p = {}, m = {:?}, n = {:?}, l = {}, d = {}, q ∈ {:?}",
            pr.p, pr.m_vector, pr.n_vector, pr.l, pr.d, self.qs
        );
        let opt = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
        if let (Some(dim), Some(rank)) = (self.ambient_dimension, self.kernel_rank) {
            let _ = writeln!(s, "kernel rank {rank} in dimension {dim}");
        }
        let _ = writeln!(
            s,
            "σ(1−t)^{} in kernel: {}",
            (pr.truncation_degree() - 1).max(0),
            opt(self.sigma_in_kernel)
        );
        let _ = writeln!(s, "kernel spanned by it: {}", opt(self.spanned_by_sigma));
        if let Some(step) = &self.scalar_step {
            let _ = writeln!(
                s,
                "scalar step (q = {}): a·p·({}) = 0, a forced to 0: {}",
                step.q, step.obstruction, step.a_forced_zero
            );
        }
        match &self.sw_value {
            Some(v) => {
                let _ = writeln!(s, "SW = {v}");
            }
            None => {
                let _ = writeln!(s, "SW not determined");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

impl Render for RigidityVerdict {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "outcome: {}", self.outcome);
        let _ = writeln!(s, "p = {}", self.p);
        let _ = writeln!(s, "spin number: {}", class_text(&self.spin));
        if let Some(k) = &self.k_vector {
            let _ = writeln!(s, "k-vector: {k}");
        }
        if let Some(q) = &self.quotient {
            let bm = q
                .b_minus
                .as_ref()
                .map_or("-".to_string(), ToString::to_string);
            let _ = writeln!(s, "quotient: σ = {}, χ = {}, b₋ = {bm}", q.sigma, q.euler);
        }
        if !self.lift_sweep.is_empty() {
            let _ = writeln!(s, "lifts:");
            for e in &self.lift_sweep {
                let spin = if e.real {
                    class_text(&e.spin)
                } else {
                    "not real".into()
                };
                let _ = writeln!(s, "  q = {}: k = {}, spin {spin}", e.q, e.k_vector);
            }
        }
        if let Some(r) = &self.prop41 {
            let _ = writeln!(s, "Adams kernel:");
            for line in r.text().lines() {
                let _ = writeln!(s, "  {line}");
            }
        }
        let _ = writeln!(s, "reasons:");
        for r in &self.reasons {
            let _ = writeln!(
                s,
                "  [{}] {}: {}",
                kebab(&r.status),
                kebab(&r.anchor),
                r.detail
            );
        }
        s
    }
}

impl Render for EnumerateReport {
    fn text(&self) -> String {
        let pairs: Vec<String> = self
            .counts
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect();
        let set = if pairs.is_empty() {
            "∅".to_string()
        } else {
            pairs.join(",")
        };
        format!(
            "pseudofree ℤ_{} actions, b₊(X/ℤ_{}) = {}{}:\n(f1,f2) ∈ {set}\n",
            self.p,
            self.p,
            self.quotient_b_plus,
            if self.trivial {
                ", homologically trivial"
            } else {
                ""
            }
        )
    }
}

impl Render for SelftestReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for i in &self.items {
            let _ = writeln!(
                s,
                "{} {}: {}",
                if i.passed { "PASS" } else { "FAIL" },
                i.name,
                i.detail
            );
        }
        let failed = self.items.iter().filter(|i| !i.passed).count();
        let _ = writeln!(
            s,
            "{} of {} items passed",
            self.items.len() - failed,
            self.items.len()
        );
        s
    }
}

fn emit<T: Serialize + Render>(format: Format, report: &T) -> String {
    match format {
        Format::Text => report.text(),
        Format::Json => json(report),
    }
}

fn json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("reports serialize");
    s.push('\n');
    s
}

fn spin_report(
    d: &FixedPointDataset,
    power: i64,
    precision: usize,
) -> Result<SpinReport, CliError> {
    let value = if power.rem_euclid(d.p as i64) == 0 {
        CyclotomicNumber::from_rational(d.p, spin_index(&d.manifold)?)
    } else {
        spin_number(d, power)?
    };
    let spin = classify_spin(&value, precision)?;
    Ok(SpinReport {
        p: d.p,
        power,
        value,
        spin,
    })
}

fn kvector_report(d: &FixedPointDataset) -> Result<KVectorReport, CliError> {
    let tuple = spin_tuple(d)?;
    let (k, error) = match k_vector(&tuple) {
        Ok(k) => (Some(k), None),
        Err(e @ LefschetzError::NonIntegral { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    Ok(KVectorReport {
        p: d.p,
        spin_numbers: tuple.values,
        k_vector: k,
        error,
    })
}

/// Applies `f` to one dataset or to every dataset of a batch directory.
fn over_inputs<T, F>(cli: &Cli, input: &Input, f: F) -> Output
where
    T: Serialize + Render + Send,
    F: Fn(&FixedPointDataset) -> Result<T, CliError> + Sync,
{
    let Some(dir) = &input.batch else {
        let path = input.input.as_deref().expect("clap enforces an input");
        return match load_dataset(path).and_then(|d| f(&d)) {
            Ok(r) => Output {
                code: EXIT_OK,
                stdout: emit(cli.format, &r),
                stderr: String::new(),
            },
            Err(e) => failure(e),
        };
    };
    let files = match batch_files(dir) {
        Ok(f) => f,
        Err(e) => return failure(e),
    };
    let results: Vec<(String, Result<T, CliError>)> = files
        .par_iter()
        .map(|path| {
            let name = path
                .file_name()
                .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
            (name, load_dataset(path).and_then(|d| f(&d)))
        })
        .collect();
    let code = results
        .iter()
        .filter_map(|(_, r)| r.as_ref().err().map(CliError::exit_code))
        .max()
        .unwrap_or(EXIT_OK);
    let mut stdout = String::new();
    let mut stderr = String::new();
    match cli.format {
        Format::Text => {
            for (name, r) in &results {
                let _ = writeln!(stdout, "== {name} ==");
                match r {
                    Ok(r) => stdout.push_str(&r.text()),
                    Err(e) => {
                        let _ = writeln!(stdout, "error: {e}");
                        let _ = writeln!(stderr, "error: {name}: {e}");
                    }
                }
            }
        }
        Format::Json => {
            let entries: Vec<BatchEntry<&T>> = results
                .iter()
                .map(|(name, r)| BatchEntry {
                    file: name.clone(),
                    report: r.as_ref().ok(),
                    error: r.as_ref().err().map(ToString::to_string),
                })
                .collect();
            stdout = json(&entries);
            for (name, r) in &results {
                if let Err(e) = r {
                    let _ = writeln!(stderr, "error: {name}: {e}");
                }
            }
        }
    }
    Output {
        code,
        stdout,
        stderr,
    }
}

fn batch_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let io = |source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn failure(e: CliError) -> Output {
    Output {
        code: e.exit_code(),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

fn single<T: Serialize + Render>(format: Format, r: Result<T, CliError>) -> Output {
    match r {
        Ok(r) => Output {
            code: EXIT_OK,
            stdout: emit(format, &r),
            stderr: String::new(),
        },
        Err(e) => failure(e),
    }
}

pub fn execute(cli: &Cli) -> Output {
    let opts = VerdictOptions {
        precision: cli.precision,
        ..VerdictOptions::default()
    };
    match &cli.command {
        Command::Spin { input, power } => {
            over_inputs(cli, input, |d| spin_report(d, *power, cli.precision))
        }
        Command::Quotient { input } => over_inputs(cli, input, |d| Ok(quotient_invariants(d)?)),
        Command::Kvector { input } => over_inputs(cli, input, kvector_report),
        Command::Verdict { input } => over_inputs(cli, input, |d| Ok(verdict_with(d, &opts)?)),
        Command::Enumerate {
            p,
            quotient_b_plus,
            trivial,
            manifold,
        } => single(
            cli.format,
            (|| {
                if *p != 3 {
                    return Err(CliError::Invalid(format!(
                        "enumeration is implemented for p = 3, got p = {p}"
                    )));
                }
                let manifold = match manifold {
                    Some(path) => serde_json::from_str::<ManifoldInvariants>(&read(path)?)
                        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?,
                    None => ManifoldInvariants::k3(),
                };
                let counts =
                    enumerate_pseudofree_p3(&BigInt::from(*quotient_b_plus), *trivial, &manifold)?;
                Ok(EnumerateReport {
                    p: *p,
                    quotient_b_plus: *quotient_b_plus,
                    trivial: *trivial,
                    manifold,
                    counts,
                })
            })(),
        ),
        Command::Prop41 { input, qs } => single(
            cli.format,
            (|| {
                let params = match input {
                    Some(path) => serde_json::from_str::<InstanceParameters>(&read(path)?)
                        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?,
                    None => InstanceParameters::new(3, vec![2, 2, 2], vec![2, 1, 1], 1, 0),
                };
                Ok(verify_prop41_with(&params, qs)?)
            })(),
        ),
        Command::Selftest {
            k3_signature,
            quick,
        } => {
            let mut o = SelftestOptions {
                k3_signature: *k3_signature,
                ..SelftestOptions::default()
            };
            if *quick {
                o.corpus_size = 30;
                o.property_size = 30;
                o.oracle_max_m = 2;
            }
            single(cli.format, Ok(selftest::run(&o)))
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Output {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}
