//! Command-line front end.
//!
//! Every subcommand reads a problem from a JSON spec file (`--spec`) and/or
//! flags, runs one analysis and writes JSON or CSV to stdout or `--out`.
//! Exit codes: 0 success, 2 invalid input, 3 I/O failure.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate, phase_portrait, IntegratorConfig, ReplicatorField, Trajectory};
use crate::ess::{compare_classical_quantum, ComparisonReport};
use crate::game::{
    k_params, quantum_transform, ClassicalBimatrix, InitialStateWeights, Payoff2, SimplifiedGame,
};
use crate::scenarios::{make_case, scan_flip, CaseLabel, ScanRow};
use crate::stability::{analyze, AnalyzedEquilibrium};

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "quantum-replicator",
    version,
    about = "Replicator dynamics of classical and Marinatto-Weber quantized 2x2 bi-matrix games"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantized payoff matrices omega, chi and the state parameters K1, K2
    Transform(CommonArgs),
    /// Rest points with Jacobians, eigenvalues and classification
    Classify(CommonArgs),
    /// ESS and attractor verdicts at (1,0), classical vs quantum
    Ess(CommonArgs),
    /// Integrate one trajectory (CSV: t,x,y)
    Simulate(CommonArgs),
    /// Integrate a grid of trajectories (CSV: id,t,x,y)
    Portrait(CommonArgs),
    /// Scan the weight simplex for stability flips (CSV: w11,w12,w21,w22,flip)
    Scan(CommonArgs),
    /// Print one of the verified case studies
    Demo {
        /// a, b or c
        case: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Default, Clone)]
pub struct CommonArgs {
    /// JSON problem spec
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Reduced game constants "a,b,c,d"
    #[arg(long, allow_hyphen_values = true)]
    pub game: Option<String>,
    /// Full bi-matrix "a11,a12,a21,a22,b11,b12,b21,b22"
    #[arg(long, allow_hyphen_values = true)]
    pub bimatrix: Option<String>,
    /// Initial-state weights "w11,w12,w21,w22"
    #[arg(long)]
    pub weights: Option<String>,
    /// Start point "x,y" for simulate
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Zero band for eigenvalue classification and ESS strictness
    #[arg(long)]
    pub tol: Option<f64>,
    /// Divide the weights by their sum instead of rejecting them
    #[arg(long)]
    pub renormalize: bool,
}

/// Game as written in a spec file: either the four reduced constants or all
/// eight bi-matrix entries, never both.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSpec {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub a11: Option<f64>,
    pub a12: Option<f64>,
    pub a21: Option<f64>,
    pub a22: Option<f64>,
    pub b11: Option<f64>,
    pub b12: Option<f64>,
    pub b21: Option<f64>,
    pub b22: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawWeights {
    pub w11: f64,
    pub w12: f64,
    pub w21: f64,
    pub w22: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub step: Option<f64>,
    pub max_steps: Option<usize>,
    pub convergence_tol: Option<f64>,
    pub tol: Option<f64>,
    pub grid: Option<usize>,
    pub resolution: Option<usize>,
    pub start: Option<[f64; 2]>,
    pub renormalize: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub game: Option<GameSpec>,
    pub weights: Option<RawWeights>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GameForm {
    Simplified(SimplifiedGame),
    Full(ClassicalBimatrix),
}

impl GameForm {
    pub fn reduced(&self) -> SimplifiedGame {
        match self {
            GameForm::Simplified(g) => *g,
            GameForm::Full(m) => m.reduce(),
        }
    }

    pub fn bimatrix(&self) -> ClassicalBimatrix {
        match self {
            GameForm::Simplified(g) => g.to_bimatrix(),
            GameForm::Full(m) => *m,
        }
    }
}

/// Fully resolved and validated problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub game: GameForm,
    pub state: InitialStateWeights,
    pub integrator: IntegratorConfig,
    pub tol: f64,
    pub grid: usize,
    pub resolution: usize,
    pub start: Option<(f64, f64)>,
}

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_GRID: usize = 10;
pub const DEFAULT_RESOLUTION: usize = 20;

impl GameSpec {
    fn resolve(&self) -> CliResult<GameForm> {
        let simple = [("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)];
        let full = [
            ("a11", self.a11),
            ("a12", self.a12),
            ("a21", self.a21),
            ("a22", self.a22),
            ("b11", self.b11),
            ("b12", self.b12),
            ("b21", self.b21),
            ("b22", self.b22),
        ];
        let any_simple = simple.iter().any(|(_, v)| v.is_some());
        let any_full = full.iter().any(|(_, v)| v.is_some());
        if any_simple && any_full {
            return Err(CliError::Validation(
                "invalid game: give either a,b,c,d or the eight entries a11..b22, not both".into(),
            ));
        }
        let require = |fields: &[(&str, Option<f64>)]| -> CliResult<Vec<f64>> {
            fields
                .iter()
                .map(|(name, v)| {
                    v.ok_or_else(|| CliError::Validation(format!("invalid {name}: missing game entry")))
                })
                .collect()
        };
        if any_full {
            let v = require(&full)?;
            let m: Payoff2 = [[v[0], v[1]], [v[2], v[3]]];
            let f: Payoff2 = [[v[4], v[5]], [v[6], v[7]]];
            Ok(GameForm::Full(ClassicalBimatrix::new(m, f)?))
        } else {
            let v = require(&simple)?;
            Ok(GameForm::Simplified(SimplifiedGame::new(v[0], v[1], v[2], v[3])?))
        }
    }
}

fn parse_list(field: &str, text: &str, len: usize) -> CliResult<Vec<f64>> {
    let vals: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::Validation(format!("invalid {field}: {e}")))?;
    if vals.len() != len {
        return Err(CliError::Validation(format!(
            "invalid {field}: expected {len} comma-separated numbers, got {}",
            vals.len()
        )));
    }
    Ok(vals)
}

fn read_spec_file(path: &Path) -> CliResult<SpecFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("invalid spec {}: {e}", path.display())))
}

impl ProblemSpec {
    /// Merges the spec file (if any) with flag overrides and validates the result.
    pub fn resolve(args: &CommonArgs) -> CliResult<Self> {
        let file = match &args.spec {
            Some(p) => read_spec_file(p)?,
            None => SpecFile::default(),
        };
        let opts = &file.options;

        let game = if let Some(text) = &args.game {
            let v = parse_list("game", text, 4)?;
            GameForm::Simplified(SimplifiedGame::new(v[0], v[1], v[2], v[3])?)
        } else if let Some(text) = &args.bimatrix {
            let v = parse_list("bimatrix", text, 8)?;
            GameForm::Full(ClassicalBimatrix::new(
                [[v[0], v[1]], [v[2], v[3]]],
                [[v[4], v[5]], [v[6], v[7]]],
            )?)
        } else {
            file.game
                .as_ref()
                .ok_or_else(|| CliError::Validation("invalid game: no game given".into()))?
                .resolve()?
        };

        let raw = match &args.weights {
            Some(text) => {
                let v = parse_list("weights", text, 4)?;
                Some(RawWeights { w11: v[0], w12: v[1], w21: v[2], w22: v[3] })
            }
            None => file.weights,
        };
        let renormalize = args.renormalize || opts.renormalize.unwrap_or(false);
        let state = match raw {
            None => InitialStateWeights::classical(),
            Some(w) if renormalize => InitialStateWeights::renormalized(w.w11, w.w12, w.w21, w.w22)?,
            Some(w) => InitialStateWeights::new(w.w11, w.w12, w.w21, w.w22)?,
        };

        let defaults = IntegratorConfig::default();
        let integrator = IntegratorConfig {
            step: args.step.or(opts.step).unwrap_or(defaults.step),
            max_steps: args.max_steps.or(opts.max_steps).unwrap_or(defaults.max_steps),
            convergence_tol: opts.convergence_tol.unwrap_or(defaults.convergence_tol),
        };
        integrator.validate()?;

        let tol = args.tol.or(opts.tol).unwrap_or(DEFAULT_TOL);
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Validation("invalid tol: tolerance must be positive".into()));
        }

        let start = match &args.start {
            Some(text) => {
                let v = parse_list("start", text, 2)?;
                Some((v[0], v[1]))
            }
            None => opts.start.map(|[x, y]| (x, y)),
        };

        Ok(Self {
            game,
            state,
            integrator,
            tol,
            grid: args.grid.or(opts.grid).unwrap_or(DEFAULT_GRID),
            resolution: args.resolution.or(opts.resolution).unwrap_or(DEFAULT_RESOLUTION),
            start,
        })
    }

    pub fn field(&self) -> ReplicatorField {
        ReplicatorField::quantum(self.game.reduced(), &self.state)
    }

    fn full_game_warning(&self) -> Option<String> {
        match self.game {
            GameForm::Full(_) => Some(format!(
                "full bi-matrix reduced to a={}, b={}, c={}, d={} for the replicator analysis",
                self.game.reduced().a,
                self.game.reduced().b,
                self.game.reduced().c,
                self.game.reduced().d
            )),
            GameForm::Simplified(_) => None,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TransformReport {
    pub omega: Payoff2,
    pub chi: Payoff2,
    #[serde(rename = "K1")]
    pub k1: f64,
    #[serde(rename = "K2")]
    pub k2: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub game: SimplifiedGame,
    #[serde(rename = "K1")]
    pub k1: f64,
    #[serde(rename = "K2")]
    pub k2: f64,
    pub equilibria: Vec<AnalyzedEquilibrium>,
    pub degenerate_reason: Option<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EssReport {
    pub game: SimplifiedGame,
    pub weights: InitialStateWeights,
    #[serde(flatten)]
    pub comparison: ComparisonReport,
    pub warnings: Vec<String>,
}

pub fn cmd_transform(spec: &ProblemSpec) -> TransformReport {
    let pair = quantum_transform(&spec.game.bimatrix(), &spec.state);
    let k = k_params(&spec.state);
    TransformReport { omega: pair.omega, chi: pair.chi, k1: k.k1, k2: k.k2 }
}

pub fn cmd_classify(spec: &ProblemSpec) -> ClassifyReport {
    let field = spec.field();
    let report = analyze(&field, spec.tol);
    let mut warnings: Vec<String> = spec.full_game_warning().into_iter().collect();
    if let Some(reason) = &report.degenerate_reason {
        warnings.push(format!("interior equilibrium omitted: {reason}"));
    }
    for e in &report.equilibria {
        if e.linearization.tag == crate::stability::ClassificationTag::Degenerate {
            warnings.push(format!(
                "equilibrium ({}, {}) is non-hyperbolic; linearization is inconclusive",
                e.equilibrium.x, e.equilibrium.y
            ));
        }
    }
    ClassifyReport {
        game: field.game,
        k1: field.k.k1,
        k2: field.k.k2,
        equilibria: report.equilibria,
        degenerate_reason: report.degenerate_reason,
        warnings,
    }
}

pub fn cmd_ess(spec: &ProblemSpec) -> EssReport {
    let game = spec.game.reduced();
    let comparison = compare_classical_quantum(&game, &spec.state, spec.tol);
    let mut warnings: Vec<String> = spec.full_game_warning().into_iter().collect();
    for (name, v) in [("classical", &comparison.classical), ("quantum", &comparison.quantum)] {
        if v.marginal {
            warnings.push(format!("{name} verdict is marginal: a margin or root is within tol of 0"));
        }
        if v.ess_not_attractor {
            warnings.push(format!("{name} verdict: ESS by strict-NE margins but not an attractor"));
        }
    }
    EssReport { game, weights: spec.state, comparison, warnings }
}

pub fn cmd_simulate(spec: &ProblemSpec) -> CliResult<Trajectory> {
    let start = spec
        .start
        .ok_or_else(|| CliError::Validation("invalid start: simulate needs --start x,y".into()))?;
    Ok(integrate(&spec.field(), start, &spec.integrator)?)
}

pub fn cmd_portrait(spec: &ProblemSpec) -> CliResult<Vec<Trajectory>> {
    Ok(phase_portrait(&spec.field(), spec.grid, &spec.integrator)?)
}

pub fn cmd_scan(spec: &ProblemSpec) -> CliResult<Vec<ScanRow>> {
    Ok(scan_flip(&spec.game.reduced(), spec.resolution, spec.tol)?)
}

pub fn trajectory_csv(t: &Trajectory) -> String {
    let mut s = String::from("t,x,y\n");
    for p in &t.samples {
        let _ = writeln!(s, "{:?},{:?},{:?}", p.t, p.x, p.y);
    }
    s
}

pub fn portrait_csv(ts: &[Trajectory]) -> String {
    let mut s = String::from("id,t,x,y\n");
    for (id, t) in ts.iter().enumerate() {
        for p in &t.samples {
            let _ = writeln!(s, "{id},{:?},{:?},{:?}", p.t, p.x, p.y);
        }
    }
    s
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut s = String::from("w11,w12,w21,w22,flip\n");
    for r in rows {
        let [a, b, c, d] = r.weights;
        let _ = writeln!(s, "{a:?},{b:?},{c:?},{d:?},{}", r.flip);
    }
    s
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v)
        .map_err(|e| CliError::Validation(format!("cannot serialize report: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}"))),
    }
}

/// Runs a parsed command, writing the primary output to `stdout` or `--out`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Demo { case, out } => {
            let label: CaseLabel = case.parse()?;
            let instance = make_case(label)?;
            emit(&to_json(&instance)?, out.as_deref(), stdout)
        }
        Command::Transform(args) => {
            let spec = ProblemSpec::resolve(args)?;
            emit(&to_json(&cmd_transform(&spec))?, args.out.as_deref(), stdout)
        }
        Command::Classify(args) => {
            let spec = ProblemSpec::resolve(args)?;
            emit(&to_json(&cmd_classify(&spec))?, args.out.as_deref(), stdout)
        }
        Command::Ess(args) => {
            let spec = ProblemSpec::resolve(args)?;
            emit(&to_json(&cmd_ess(&spec))?, args.out.as_deref(), stdout)
        }
        Command::Simulate(args) => {
            let spec = ProblemSpec::resolve(args)?;
            let t = cmd_simulate(&spec)?;
            emit(&trajectory_csv(&t), args.out.as_deref(), stdout)
        }
        Command::Portrait(args) => {
            let spec = ProblemSpec::resolve(args)?;
            let ts = cmd_portrait(&spec)?;
            emit(&portrait_csv(&ts), args.out.as_deref(), stdout)
        }
        Command::Scan(args) => {
            let spec = ProblemSpec::resolve(args)?;
            let rows = cmd_scan(&spec)?;
            emit(&scan_csv(&rows), args.out.as_deref(), stdout)
        }
    }
}
