//! Command-line driver: verification suites, state synthesis, weight solving,
//! entangled-state construction, and time evolution, all emitting JSON.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails,
//! 2 on bad arguments or malformed input files.

use clap::{Args, Parser, Subcommand, ValueEnum};
use pgq_core::deformed::{
    solve_structure_parameter, verify_deformed_algebra, verify_deformed_algebra_float, BzVariant,
};
use pgq_core::entangle::{make_named_state, NamedState, TensorState};
use pgq_core::frame::{
    ladder_ops, ladder_ops_float, verify_oscillator_relations, verify_oscillator_relations_float,
    FloatFrame, Frame, FrameFile,
};
use pgq_core::pgalg::PGVar;
use pgq_core::qscalar::{Complex64, DeformParams};
use pgq_core::report::{Report, SCHEMA_VERSION};
use pgq_core::states::{
    coherent, evolve, solve_identity_weight, squeeze, stability_check, supercoherent,
    supersqueeze, susy_check, verify_identity_weight, BosonSector, PGState, SpectrumModel,
    SuperVariant, SusyConfig, DEFAULT_TAIL_TOL, DEFAULT_TRUNCATION,
};
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

const FLOAT_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "pgq", version, about = "Exact kernel for deformed-oscillator frames, states, and entanglement")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the oscillator, deformed-algebra, and identity-weight suites.
    Verify(VerifyArgs),
    /// Dump a state's coefficient data.
    State(StateArgs),
    /// Solve for an integration weight.
    Weight(WeightArgs),
    /// Build a named entangled state.
    Entangle(EntangleArgs),
    /// Evolve a state under a spectrum and test stability.
    Evolve(EvolveArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    Float,
}

#[derive(Args)]
struct CommonArgs {
    /// Nilpotency index p (space dimension p+1).
    #[arg(long)]
    p: u32,
    #[arg(long, value_enum, default_value = "exact")]
    backend: Backend,
    /// Frame choice: identity | random | file:PATH
    #[arg(long, default_value = "identity")]
    frame: String,
    /// Seed for random frames.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance for the float backend.
    #[arg(long, default_value_t = FLOAT_TOL)]
    tol: f64,
}

enum FrameSel {
    Identity,
    Random(u64),
    File(PathBuf),
}

impl CommonArgs {
    fn params(&self) -> Result<DeformParams, CliError> {
        if self.p < 1 || self.p > 12 {
            return Err(CliError::bad_args(format!("field `p`: must be in 1..=12, got {}", self.p)));
        }
        Ok(DeformParams::new(self.p))
    }

    fn frame_sel(&self) -> Result<FrameSel, CliError> {
        if self.frame == "identity" {
            Ok(FrameSel::Identity)
        } else if self.frame == "random" {
            Ok(FrameSel::Random(self.seed))
        } else if let Some(path) = self.frame.strip_prefix("file:") {
            Ok(FrameSel::File(PathBuf::from(path)))
        } else {
            Err(CliError::bad_args(format!(
                "field `frame`: expected identity | random | file:PATH, got {:?}",
                self.frame
            )))
        }
    }

    fn exact_frame(&self) -> Result<Frame, CliError> {
        let params = self.params()?;
        match self.frame_sel()? {
            FrameSel::Identity => Ok(Frame::identity(params)),
            FrameSel::Random(seed) => Ok(Frame::random(params, seed)),
            FrameSel::File(path) => {
                let file = load_frame_file(&path, self.p)?;
                file.to_exact_frame()
                    .map_err(|e| CliError::bad_args(format!("field `frame`: {e}")))
            }
        }
    }

    fn float_frame(&self) -> Result<FloatFrame, CliError> {
        let params = self.params()?;
        match self.frame_sel()? {
            FrameSel::Identity => Ok(FloatFrame::identity(params)),
            FrameSel::Random(seed) => Ok(Frame::random(params, seed).to_float()),
            FrameSel::File(path) => {
                let file = load_frame_file(&path, self.p)?;
                file.to_float_frame()
                    .map_err(|e| CliError::bad_args(format!("field `frame`: {e}")))
            }
        }
    }
}

fn load_frame_file(path: &PathBuf, p: u32) -> Result<FrameFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::bad_args(format!("field `frame`: cannot read {}: {e}", path.display())))?;
    let file: FrameFile = serde_json::from_str(&text)
        .map_err(|e| CliError::bad_args(format!("field `frame`: malformed frame file: {e}")))?;
    if file.p != p {
        return Err(CliError::bad_args(format!(
            "field `frame`: file declares p = {}, command uses p = {p}",
            file.p
        )));
    }
    Ok(file)
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of random frames to sweep (seed, seed+1, ...).
    #[arg(long, default_value_t = 1)]
    frames: u32,
}

#[derive(Args)]
struct StateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum)]
    kind: StateKind,
    /// Expand in the dual (phi) basis.
    #[arg(long)]
    dual: bool,
    /// Boson coherent amplitude, real part (supercoherent).
    #[arg(long, default_value_t = 1.0)]
    alpha_re: f64,
    /// Boson coherent amplitude, imaginary part.
    #[arg(long, default_value_t = 0.0)]
    alpha_im: f64,
    /// Squeeze amplitude, real part (supersqueezed).
    #[arg(long, default_value_t = 0.01)]
    z_re: f64,
    #[arg(long, default_value_t = 0.0)]
    z_im: f64,
    /// Boson truncation level.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    m_trunc: usize,
    /// Dual boson basis for hybrid states.
    #[arg(long)]
    boson_dual: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateKind {
    Coherent,
    Squeezed,
    Supercoherent,
    Supersqueezed,
}

#[derive(Args)]
struct WeightArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value = "identity")]
    target: WeightTarget,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightTarget {
    /// Resolution-of-identity weight.
    Identity,
    /// Diagonal qudit target weight.
    QuditDiag,
}

#[derive(Args)]
struct EntangleArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum)]
    kind: EntangleKind,
    #[arg(long, default_value_t = 3)]
    parties: usize,
    /// Number of leading slots expanded in the dual basis.
    #[arg(long, default_value_t = 0)]
    duals: usize,
    /// Sign variant where the family has one.
    #[arg(long, value_enum, default_value = "plus")]
    sign: SignArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum EntangleKind {
    PbellShared,
    PbellPaired,
    W,
    Ghz,
    QutritDiag,
    QutritAnti,
    QuditDiag,
    Subspace,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// JSON spectrum file: {"energies": [...]} or {"linear": {"e0": .., "c": ..}}.
    #[arg(long)]
    spectrum: PathBuf,
    /// Comma-separated list of times.
    #[arg(long, default_value = "0.0,0.5,1.0")]
    t: String,
    /// Which state to evolve.
    #[arg(long, value_enum, default_value = "coherent")]
    kind: EvolveKind,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvolveKind {
    Coherent,
    Squeezed,
}

// ---------------------------------------------------------------------------

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn bad_args(message: impl Into<String>) -> Self {
        CliError { message: message.into(), code: 2 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.cmd {
        Cmd::Verify(a) => run_verify(a),
        Cmd::State(a) => run_state(a),
        Cmd::Weight(a) => run_weight(a),
        Cmd::Entangle(a) => run_entangle(a),
        Cmd::Evolve(a) => run_evolve(a),
    };
    match out {
        Ok((doc, all_passed)) => {
            let text = serde_json::to_string_pretty(&doc).expect("serializable");
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                println!("{text}");
            }
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", e.message);
            ExitCode::from(e.code)
        }
    }
}

#[derive(Serialize)]
struct VerifyDoc {
    schema_version: u32,
    command: String,
    p: u32,
    backend: String,
    frame: String,
    seeds: Vec<u64>,
    passed: bool,
    checks: Vec<pgq_core::report::CheckResult>,
    notes: Vec<String>,
}

fn run_verify(args: &VerifyArgs) -> Result<(serde_json::Value, bool), CliError> {
    let params = args.common.params()?;
    let mut report = Report::new("verify");
    let mut seeds = Vec::new();

    let frame_runs: Vec<(String, u64)> = match args.common.frame_sel()? {
        FrameSel::Random(seed) => (0..args.frames.max(1) as u64)
            .map(|i| ("random".to_string(), seed + i))
            .collect(),
        _ => vec![(args.common.frame.clone(), args.common.seed)],
    };

    for (_, seed) in &frame_runs {
        seeds.push(*seed);
        let mut sub = args.common.frame.clone();
        if sub == "random" {
            sub = format!("random seed {seed}");
        }
        match args.common.backend {
            Backend::Exact => {
                let frame = match args.common.frame_sel()? {
                    FrameSel::Random(_) => Frame::random(params, *seed),
                    _ => args.common.exact_frame()?,
                };
                let mut r = frame.verify_invariants();
                r.checks.iter_mut().for_each(|c| c.relation = format!("[{sub}] {}", c.relation));
                report.merge(r);
                let ops = ladder_ops(&frame);
                let mut r = verify_oscillator_relations(&ops);
                r.checks.iter_mut().for_each(|c| c.relation = format!("[{sub}] {}", c.relation));
                report.merge(r);
                for variant in [BzVariant::LowerRaise, BzVariant::RaiseLower] {
                    for root in solve_structure_parameter(params, variant) {
                        let mut r = verify_deformed_algebra(&ops, params, variant, &root);
                        r.checks
                            .iter_mut()
                            .for_each(|c| c.relation = format!("[{sub}] {}", c.relation));
                        report.merge(r);
                    }
                }
            }
            Backend::Float => {
                let frame = match args.common.frame_sel()? {
                    FrameSel::Random(_) => Frame::random(params, *seed).to_float(),
                    _ => args.common.float_frame()?,
                };
                let mut r = pgq_core::frame::verify_frame_invariants_float(&frame, args.common.tol);
                r.checks.iter_mut().for_each(|c| c.relation = format!("[{sub}] {}", c.relation));
                report.merge(r);
                let ops = ladder_ops_float(&frame);
                let mut r = verify_oscillator_relations_float(&ops, args.common.tol);
                r.checks.iter_mut().for_each(|c| c.relation = format!("[{sub}] {}", c.relation));
                report.merge(r);
                for variant in [BzVariant::LowerRaise, BzVariant::RaiseLower] {
                    for root in solve_structure_parameter(params, variant) {
                        let mut r =
                            verify_deformed_algebra_float(&ops, params, variant, &root, args.common.tol);
                        r.checks
                            .iter_mut()
                            .for_each(|c| c.relation = format!("[{sub}] {}", c.relation));
                        report.merge(r);
                    }
                }
            }
        }
    }

    // parameter-level suites (frame independent)
    let theta = PGVar::theta(0);
    match solve_identity_weight(params, theta) {
        Ok(w) => report.merge(verify_identity_weight(params, &w)),
        Err(e) => report.push(format!("identity weight solve: {e}"), false, f64::INFINITY),
    }
    if params.p() == 1 {
        report.merge(susy_check(&SusyConfig::identity(10)));
    }

    let passed = report.all_passed();
    let doc = VerifyDoc {
        schema_version: SCHEMA_VERSION,
        command: "verify".into(),
        p: params.p(),
        backend: match args.common.backend {
            Backend::Exact => "exact".into(),
            Backend::Float => "float".into(),
        },
        frame: args.common.frame.clone(),
        seeds,
        passed,
        checks: report.checks,
        notes: report.notes,
    };
    Ok((serde_json::to_value(doc).unwrap(), passed))
}

fn state_json(params: DeformParams, s: &PGState) -> serde_json::Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "p": params.p(),
        "state": s,
    })
}

fn run_state(args: &StateArgs) -> Result<(serde_json::Value, bool), CliError> {
    let params = args.common.params()?;
    let theta = PGVar::theta(0);
    let doc = match args.kind {
        StateKind::Coherent => state_json(params, &coherent(params, theta, args.dual)),
        StateKind::Squeezed => {
            let basis = if args.dual {
                pgq_core::states::Basis::Phi
            } else {
                pgq_core::states::Basis::Psi
            };
            let s = squeeze(params, theta, args.dual).apply(&PGState::vacuum(params, basis));
            state_json(params, &s)
        }
        StateKind::Supercoherent => {
            let alpha = Complex64::new(args.alpha_re, args.alpha_im);
            let boson = BosonSector::new(args.m_trunc, alpha, DEFAULT_TAIL_TOL)
                .map_err(|e| CliError::bad_args(format!("field `m_trunc`: {e}")))?;
            let variant = SuperVariant { boson_dual: args.boson_dual, pg_dual: args.dual };
            let s = supercoherent(params, &boson, theta, variant);
            let residual = s.eigen_residual(alpha);
            json!({
                "schema_version": SCHEMA_VERSION,
                "p": params.p(),
                "eigen_residual": residual,
                "state": s,
            })
        }
        StateKind::Supersqueezed => {
            let z = Complex64::new(args.z_re, args.z_im);
            let variant = SuperVariant { boson_dual: args.boson_dual, pg_dual: args.dual };
            let s = supersqueeze(params, z, args.m_trunc + 1, theta, variant);
            json!({
                "schema_version": SCHEMA_VERSION,
                "p": params.p(),
                "state": s,
            })
        }
    };
    Ok((doc, true))
}

fn run_weight(args: &WeightArgs) -> Result<(serde_json::Value, bool), CliError> {
    let params = args.common.params()?;
    let theta = PGVar::theta(0);
    match args.target {
        WeightTarget::Identity => {
            let w = solve_identity_weight(params, theta)
                .map_err(|e| CliError::bad_args(format!("identity weight: {e}")))?;
            let report = verify_identity_weight(params, &w);
            let passed = report.all_passed();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "p": params.p(),
                "target": "identity",
                "weight": w.poly,
                "checks": report.checks,
            });
            Ok((doc, passed))
        }
        WeightTarget::QuditDiag => {
            let w = pgq_core::entangle::qudit_closed_form_weight(params, theta);
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "p": params.p(),
                "target": "qudit-diag",
                "weight": w,
            });
            Ok((doc, true))
        }
    }
}

fn tensor_doc(params: DeformParams, frame: &Frame, ts: &TensorState) -> serde_json::Value {
    let norms = ts.norms(frame);
    json!({
        "schema_version": SCHEMA_VERSION,
        "p": params.p(),
        "state": ts,
        "norm_standard": norms.map(|n| n.0),
        "norm_eta": norms.map(|n| n.1),
        "schmidt_rank": ts.schmidt_rank(),
    })
}

fn run_entangle(args: &EntangleArgs) -> Result<(serde_json::Value, bool), CliError> {
    let params = args.common.params()?;
    let frame = args.common.exact_frame()?;
    let plus = args.sign == SignArg::Plus;
    let two_duals = |d: usize| [d >= 1, d >= 2];
    let kind = match args.kind {
        EntangleKind::PbellShared => NamedState::PBellShared { plus, duals: two_duals(args.duals) },
        EntangleKind::PbellPaired => NamedState::PBellPaired { plus, duals: two_duals(args.duals) },
        EntangleKind::W => NamedState::W { parties: args.parties, leading_duals: args.duals },
        EntangleKind::Ghz => NamedState::Ghz { parties: args.parties, leading_duals: args.duals },
        EntangleKind::QutritDiag => NamedState::QutritDiag { plus, duals: two_duals(args.duals) },
        EntangleKind::QutritAnti => NamedState::QutritAnti { plus, duals: two_duals(args.duals) },
        EntangleKind::QuditDiag => NamedState::QuditDiag { duals: two_duals(args.duals) },
        EntangleKind::Subspace => NamedState::Subspace { duals: two_duals(args.duals) },
    };
    let ts = make_named_state(params, &kind)
        .map_err(|e| CliError::bad_args(format!("field `kind`: {e}")))?;
    Ok((tensor_doc(params, &frame, &ts), true))
}

fn run_evolve(args: &EvolveArgs) -> Result<(serde_json::Value, bool), CliError> {
    let params = args.common.params()?;
    let text = std::fs::read_to_string(&args.spectrum).map_err(|e| {
        CliError::bad_args(format!("field `spectrum`: cannot read {}: {e}", args.spectrum.display()))
    })?;
    let spectrum: SpectrumModel = serde_json::from_str(&text)
        .map_err(|e| CliError::bad_args(format!("field `spectrum`: malformed: {e}")))?;
    if let SpectrumModel::Energies(es) = &spectrum {
        if es.len() < params.dim() {
            return Err(CliError::bad_args(format!(
                "field `spectrum`: needs {} energies, got {}",
                params.dim(),
                es.len()
            )));
        }
    }
    let times: Result<Vec<f64>, _> = args.t.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let times = times.map_err(|e| CliError::bad_args(format!("field `t`: {e}")))?;
    let theta = PGVar::theta(0);
    let state = match args.kind {
        EvolveKind::Coherent => coherent(params, theta, false),
        EvolveKind::Squeezed => {
            squeeze(params, theta, false).apply(&PGState::vacuum(params, pgq_core::states::Basis::Psi))
        }
    };
    let witness = stability_check(&spectrum, params.dim());
    let mut snapshots = Vec::new();
    for t in &times {
        let ev = evolve(&state, &spectrum, *t);
        let coeffs: Vec<serde_json::Value> = ev
            .coefficients()
            .iter()
            .map(|((idx, mono), v)| {
                json!({"index": idx, "monomial": format!("{mono}"), "value": [v.re, v.im]})
            })
            .collect();
        snapshots.push(json!({"t": t, "coeffs": coeffs}));
    }
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "p": params.p(),
        "stability": witness,
        "snapshots": snapshots,
    });
    Ok((doc, true))
}
