//! Command-line surface for the spectral calculus.
//!
//! Operators are described in small text files (`sum(pole(1, ord=1,
//! rank=inf), quasinil(0))`), matrices in a plain numeric format with a
//! `rows cols` header. Every command renders either a human-readable text
//! report or, under `--json`, a stable JSON document; identical inputs
//! produce byte-identical output.
//!
//! Exit codes: 0 on success (and on an agreeing `oracle` run), 1 on domain
//! errors and oracle disagreement, 2 on usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use bweyl_core::{
    ascent_descent, drazin_inverse, elementary_rep, gen_model, kron, oracle_agreement,
    parse_matrix, parse_operator, product_report, render_matrix, render_operator, transfer_report,
    validate_matrix_pair, AgreementReport, BlockModel, CalcError, DslError, ExactMatrix,
    GaussianRational, GenParams, MatrixError, MatrixPairReport, Mode, ProductReport,
    SpectralProfile, TransferReport,
};

#[derive(Parser)]
#[command(name = "bweyl", version, about = "Exact spectral calculus for operator products")]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Scan depth for cluster collision analysis
    #[arg(long, global = true, default_value_t = 64, value_name = "N")]
    depth: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one operator: profile, flags, derived spectral sets
    Classify {
        /// Operator description file
        file: PathBuf,
    },
    /// Spectrum of a product, with per-point provenance
    Product {
        a: PathBuf,
        b: PathBuf,
        /// Which product to form
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
    },
    /// Spectral transfer report (inclusion, witnesses, predictions)
    Transfer {
        a: PathBuf,
        b: PathBuf,
    },
    /// Compare the classification calculus against the block oracle
    Oracle {
        a: PathBuf,
        b: PathBuf,
    },
    /// Exact matrix operations
    Matrix {
        #[command(subcommand)]
        op: MatrixOp,
    },
    /// Generate a seeded random operator in canonical text form
    Gen {
        /// Generator seed
        #[arg(long)]
        seed: u64,
        /// Upper bound on the number of primitive blocks
        #[arg(long, default_value_t = 4, value_name = "N")]
        max_blocks: usize,
        /// Never draw cluster blocks
        #[arg(long)]
        no_clusters: bool,
    },
}

#[derive(Subcommand)]
enum MatrixOp {
    /// Kronecker product of two matrices
    Kron { a: PathBuf, b: PathBuf },
    /// Matrix of the two-sided multiplication operator on square matrices
    Elem { a: PathBuf, b: PathBuf },
    /// Ascent, descent, and pole order of a matrix at a point
    Ascent {
        m: PathBuf,
        /// The spectrum point, e.g. `2` or `1/2-1/3i`
        lambda: String,
    },
    /// Drazin inverse and Drazin index
    Drazin { m: PathBuf },
    /// Check a matrix pair against the symbolic product calculus
    Validate {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum ModeArg {
    #[default]
    Tensor,
    Elem,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Tensor => Mode::Tensor,
            ModeArg::Elem => Mode::Elementary,
        }
    }
}

struct AppError {
    code: &'static str,
    message: String,
}

fn calc_code(e: &CalcError) -> &'static str {
    match e {
        CalcError::NotFinitelyRepresentable => "not_finitely_representable",
        CalcError::CollisionDepthExceeded(_) => "collision_depth_exceeded",
        CalcError::EmptyFactorization => "empty_factorization",
        CalcError::InvalidProfile(_) => "invalid_profile",
        CalcError::Internal(_) => "internal",
    }
}

impl From<CalcError> for AppError {
    fn from(e: CalcError) -> Self {
        AppError { code: calc_code(&e), message: e.to_string() }
    }
}

impl From<DslError> for AppError {
    fn from(e: DslError) -> Self {
        let code = match &e {
            DslError::Syntax { .. } => "syntax",
            DslError::Validation(inner) => calc_code(inner),
        };
        AppError { code, message: e.to_string() }
    }
}

impl From<MatrixError> for AppError {
    fn from(e: MatrixError) -> Self {
        let code = match &e {
            MatrixError::NonSquare => "non_square",
            MatrixError::ShapeMismatch(..) => "shape_mismatch",
            MatrixError::SizeOverflow => "size_overflow",
            MatrixError::NotTriangular => "not_triangular",
            MatrixError::Singular => "singular",
            MatrixError::VerificationFailed => "verification_failed",
            MatrixError::Parse(_) => "parse",
        };
        AppError { code, message: e.to_string() }
    }
}

fn read_file(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path)
        .map_err(|e| AppError { code: "io", message: format!("{}: {e}", path.display()) })
}

fn load_operator(path: &Path, depth: u32) -> Result<BlockModel, AppError> {
    let text = read_file(path)?;
    parse_operator(&text, depth).map_err(|e| {
        let mut app = AppError::from(e);
        app.message = format!("{}: {}", path.display(), app.message);
        app
    })
}

fn load_matrix(path: &Path) -> Result<ExactMatrix, AppError> {
    let text = read_file(path)?;
    parse_matrix(&text).map_err(|e| {
        let mut app = AppError::from(e);
        app.message = format!("{}: {}", path.display(), app.message);
        app
    })
}

/// The lowercase wire name of a unit enum variant, reused in text output so
/// the two formats never drift apart.
fn tag<T: serde::Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::from("?"),
    }
}

fn json_line(value: &serde_json::Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("reports serialize");
    out.push('\n');
    out
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    json_line(&serde_json::to_value(value).expect("reports serialize"))
}

fn classify_text(profile: &SpectralProfile, depth: u32) -> String {
    let flags = profile.flags();
    let derived = profile.derived_sets(depth);
    let mut s = String::new();
    s.push_str(&format!("profile: {profile}\n"));
    s.push_str(&format!("zero_class: {}\n", tag(&flags.zero_class)));
    s.push_str(&format!("nilpotent: {}\n", flags.nilpotent));
    s.push_str(&format!("quasinilpotent: {}\n", flags.quasinilpotent));
    s.push_str(&format!("algebraic: {}\n", flags.algebraic));
    s.push_str(&format!("drazin_invertible: {}\n", flags.drazin_invertible));
    s.push_str(&format!("sigma: {}\n", derived.sigma));
    s.push_str(&format!("isolated: {}\n", derived.isolated));
    s.push_str(&format!("acc: {}\n", derived.acc));
    s.push_str(&format!("poles: {}\n", derived.poles));
    s.push_str(&format!("finite_rank_poles: {}\n", derived.finite_rank_poles));
    s.push_str(&format!("iso_non_poles: {}\n", derived.iso_non_poles));
    s.push_str(&format!("drazin_spectrum: {}\n", derived.drazin_spectrum));
    s.push_str(&format!("bweyl_spectrum: {}\n", derived.bweyl_spectrum));
    s.push_str(&format!("weyl_spectrum: {}\n", derived.weyl_spectrum));
    s
}

fn product_text(report: &ProductReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("mode: {}\n", tag(&report.mode)));
    s.push_str(&format!("profile: {}\n", report.profile));
    s.push_str(&format!("zero_class: {}\n", tag(&report.zero_class)));
    s.push_str(&format!("zero_case: {}\n", tag(&report.zero_case)));
    if report.nonzero.is_empty() {
        s.push_str("nonzero: (none)\n");
    } else {
        s.push_str("nonzero:\n");
        for p in &report.nonzero {
            s.push_str(&format!("  {}: {}\n", p.point, tag(&p.case)));
        }
    }
    s
}

fn transfer_text(report: &TransferReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("scenario: {}\n", tag(&report.scenario)));
    s.push_str(&format!("s_set: {}\n", report.s_set));
    s.push_str(&format!("sigma_bw_product: {}\n", report.sigma_bw_product));
    s.push_str(&format!("inclusion_holds: {}\n", report.inclusion_holds));
    if report.witnesses.is_empty() {
        s.push_str("witnesses: (none)\n");
    } else {
        let pts: Vec<String> = report.witnesses.iter().map(|w| w.to_string()).collect();
        s.push_str(&format!("witnesses: {}\n", pts.join(", ")));
    }
    s.push_str(&format!("reverse_inclusion_holds: {}\n", report.reverse_inclusion_holds));
    match &report.prediction {
        None => s.push_str("prediction: (none)\n"),
        Some(p) => s.push_str(&format!(
            "prediction: {} hypotheses_met={} predicted_inclusion={} agrees={}\n",
            tag(&p.rule),
            p.hypotheses_met,
            p.predicted_inclusion,
            p.agrees
        )),
    }
    s.push_str(&format!("delta: {}\n", tag(&report.delta)));
    s.push_str(&format!("equality_hypotheses_met: {}\n", report.equality_hypotheses_met));
    s.push_str(&format!("s_equals_bweyl_product: {}\n", report.s_equals_bweyl_product));
    s.push_str(&format!("weyl_identity_holds: {}\n", report.weyl_identity_holds));
    s
}

fn oracle_text(tensor: &AgreementReport, elem: &AgreementReport) -> String {
    if tensor.equal && elem.equal {
        return String::from("AGREE\n");
    }
    let mut s = String::from("DISAGREE\n");
    for (name, rep) in [("tensor", tensor), ("elem", elem)] {
        if rep.equal {
            continue;
        }
        for atom in &rep.only_oracle {
            s.push_str(&format!("{name} only_oracle: {atom}\n"));
        }
        for atom in &rep.only_calculus {
            s.push_str(&format!("{name} only_calculus: {atom}\n"));
        }
    }
    s
}

fn validate_text(report: &MatrixPairReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("mode: {}\n", tag(&report.mode)));
    s.push_str(&format!("product_dim: {}\n", report.product_dim));
    if report.spectrum.is_empty() {
        s.push_str("spectrum: (empty)\n");
    } else {
        let pts: Vec<String> =
            report.spectrum.iter().map(|p| format!("{} (ord {})", p.point, p.order)).collect();
        s.push_str(&format!("spectrum: {}\n", pts.join(", ")));
    }
    for check in &report.checks {
        match (&check.passed, &check.witness) {
            (true, _) => s.push_str(&format!("{}: pass\n", check.name)),
            (false, None) => s.push_str(&format!("{}: fail\n", check.name)),
            (false, Some(w)) => s.push_str(&format!("{}: fail ({w})\n", check.name)),
        }
    }
    s.push_str(&format!("all_passed: {}\n", report.all_passed));
    s
}

fn run(cli: &Cli) -> Result<(String, ExitCode), AppError> {
    let depth = cli.depth;
    match &cli.command {
        Command::Classify { file } => {
            let model = load_operator(file, depth)?;
            let profile = model.profile(depth)?;
            let out = if cli.json {
                json_line(&json!({
                    "profile": profile,
                    "flags": profile.flags(),
                    "derived": profile.derived_sets(depth),
                }))
            } else {
                classify_text(&profile, depth)
            };
            Ok((out, ExitCode::SUCCESS))
        }
        Command::Product { a, b, mode } => {
            let pa = load_operator(a, depth)?.profile(depth)?;
            let pb = load_operator(b, depth)?.profile(depth)?;
            let report = product_report(&pa, &pb, Mode::from(*mode), depth)?;
            let out = if cli.json { to_json(&report) } else { product_text(&report) };
            Ok((out, ExitCode::SUCCESS))
        }
        Command::Transfer { a, b } => {
            let pa = load_operator(a, depth)?.profile(depth)?;
            let pb = load_operator(b, depth)?.profile(depth)?;
            let tensor = transfer_report(&pa, &pb, Mode::Tensor, depth)?;
            let elem = transfer_report(&pa, &pb, Mode::Elementary, depth)?;
            if !tensor.same_findings(&elem) {
                return Err(CalcError::Internal(
                    "transfer findings differ between product modes".into(),
                )
                .into());
            }
            let out = if cli.json { to_json(&tensor) } else { transfer_text(&tensor) };
            Ok((out, ExitCode::SUCCESS))
        }
        Command::Oracle { a, b } => {
            let ma = load_operator(a, depth)?;
            let mb = load_operator(b, depth)?;
            let tensor = oracle_agreement(&ma, &mb, Mode::Tensor, depth)?;
            let elem = oracle_agreement(&ma, &mb, Mode::Elementary, depth)?;
            let agree = tensor.equal && elem.equal;
            let out = if cli.json {
                json_line(&json!({ "agree": agree, "tensor": tensor, "elem": elem }))
            } else {
                oracle_text(&tensor, &elem)
            };
            let code = if agree { ExitCode::SUCCESS } else { ExitCode::from(1) };
            Ok((out, code))
        }
        Command::Matrix { op } => run_matrix(cli, op),
        Command::Gen { seed, max_blocks, no_clusters } => {
            let params = GenParams {
                seed: *seed,
                max_blocks: *max_blocks,
                allow_clusters: !no_clusters,
                ..GenParams::default()
            };
            let model = gen_model(&params, depth);
            let text = render_operator(&model);
            let out = if cli.json {
                json_line(&json!({ "text": text, "blocks": model }))
            } else {
                format!("{text}\n")
            };
            Ok((out, ExitCode::SUCCESS))
        }
    }
}

fn run_matrix(cli: &Cli, op: &MatrixOp) -> Result<(String, ExitCode), AppError> {
    match op {
        MatrixOp::Kron { a, b } => {
            let m = kron(&load_matrix(a)?, &load_matrix(b)?)?;
            Ok((matrix_out(cli, &m), ExitCode::SUCCESS))
        }
        MatrixOp::Elem { a, b } => {
            let m = elementary_rep(&load_matrix(a)?, &load_matrix(b)?)?;
            Ok((matrix_out(cli, &m), ExitCode::SUCCESS))
        }
        MatrixOp::Ascent { m, lambda } => {
            let mat = load_matrix(m)?;
            let point: GaussianRational = lambda
                .parse()
                .map_err(|e| AppError { code: "parse", message: format!("{lambda}: {e}") })?;
            let report = ascent_descent(&mat, &point)?;
            let out = if cli.json {
                to_json(&report)
            } else {
                format!(
                    "ascent: {}\ndescent: {}\npole_order: {}\n",
                    report.ascent, report.descent, report.pole_order
                )
            };
            Ok((out, ExitCode::SUCCESS))
        }
        MatrixOp::Drazin { m } => {
            let mat = load_matrix(m)?;
            let drazin = drazin_inverse(&mat)?;
            let rendered = render_matrix(&drazin.d);
            let out = if cli.json {
                json_line(&json!({ "index": drazin.index, "matrix": rendered }))
            } else {
                format!("index: {}\n{rendered}", drazin.index)
            };
            Ok((out, ExitCode::SUCCESS))
        }
        MatrixOp::Validate { a, b, mode } => {
            let report =
                validate_matrix_pair(&load_matrix(a)?, &load_matrix(b)?, Mode::from(*mode))?;
            let out = if cli.json { to_json(&report) } else { validate_text(&report) };
            let code = if report.all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) };
            Ok((out, code))
        }
    }
}

fn matrix_out(cli: &Cli, m: &ExactMatrix) -> String {
    let rendered = render_matrix(m);
    if cli.json {
        json_line(&json!({ "matrix": rendered }))
    } else {
        rendered
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            code
        }
        Err(e) => {
            if cli.json {
                print!(
                    "{}",
                    json_line(&json!({ "error": { "code": e.code, "message": e.message } }))
                );
            } else {
                eprintln!("error[{}]: {}", e.code, e.message);
            }
            ExitCode::from(1)
        }
    }
}
