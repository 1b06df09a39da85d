//! The three worked case studies and a lattice scan of the weight simplex.
//!
//! Each case builder checks every defining inequality at construction and
//! refuses to return an instance that violates one.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::ReplicatorField;
use crate::error::{Error, Result};
use crate::ess::{compare_classical_quantum, ComparisonReport, Flip, DEFAULT_STRICT_TOL};
use crate::game::{k_params, InitialStateWeights, KParams, SimplifiedGame};
use crate::stability::{
    equilibria, interior_lambda_sq, linearize, ClassificationTag, DEFAULT_ZERO_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseLabel {
    A,
    B,
    C,
}

impl std::str::FromStr for CaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(CaseLabel::A),
            "b" => Ok(CaseLabel::B),
            "c" => Ok(CaseLabel::C),
            _ => Err(Error::validation("case", format!("unknown case {s:?}, expected a, b or c"))),
        }
    }
}

/// A named inequality together with the quantities it compares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub values: Vec<f64>,
    pub holds: bool,
}

impl Check {
    fn new(name: &str, values: &[f64], holds: bool) -> Self {
        Self {
            name: name.to_string(),
            values: values.to_vec(),
            holds,
        }
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// Interior rest point summary for one parameterization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorSummary {
    pub k: KParams,
    pub x: f64,
    pub y: f64,
    pub inside_unit_square: bool,
    pub lambda_sq: f64,
    pub tag: ClassificationTag,
}

fn interior_summary(game: &SimplifiedGame, k: KParams) -> Result<InteriorSummary> {
    let field = ReplicatorField::new(*game, k);
    let eqs = equilibria(&field);
    let p = eqs.interior().cloned().ok_or_else(|| {
        Error::DegenerateInterior(eqs.degenerate_reason.clone().unwrap_or_default())
    })?;
    let lambda_sq = interior_lambda_sq(game, &k)?;
    let tag = linearize(&field, (p.x, p.y), DEFAULT_ZERO_TOL).tag;
    Ok(InteriorSummary {
        k,
        x: p.x,
        y: p.y,
        inside_unit_square: p.inside_unit_square,
        lambda_sq,
        tag,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioInstance {
    pub case_label: CaseLabel,
    pub game: SimplifiedGame,
    pub state: InitialStateWeights,
    pub k: KParams,
    pub verification: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical_interior: Option<InteriorSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum_interior: Option<InteriorSummary>,
    pub notes: Vec<String>,
}

impl ScenarioInstance {
    fn verified(self) -> Result<Self> {
        match self.verification.iter().find(|c| !c.holds) {
            Some(c) => Err(Error::ScenarioCheck(format!(
                "case {:?}: {} (values {:?})",
                self.case_label, c.name, c.values
            ))),
            None => Ok(self),
        }
    }
}

/// Non-ESS attractor at (1, 0) classically that becomes an ESS under quantization.
pub fn case_a(game: SimplifiedGame, state: InitialStateWeights) -> Result<ScenarioInstance> {
    let SimplifiedGame { a, b, c, d } = game;
    let cmp = compare_classical_quantum(&game, &state, DEFAULT_STRICT_TOL);
    let (cl, qu) = (&cmp.classical, &cmp.quantum);
    let order = [state.w21(), state.w22(), state.w11(), state.w12()];
    let verification = vec![
        Check::new("a > 0 and d > 0", &[a, d], a > 0.0 && d > 0.0),
        Check::new("b < 0 and c < 0", &[b, c], b < 0.0 && c < 0.0),
        Check::new("w21 < w22 < w11 < w12", &order, strictly_increasing(&order)),
        Check::new("classical (1,0) attractor", &[cl.roots.0, cl.roots.1], cl.is_attractor),
        Check::new(
            "classical (1,0) not ESS",
            &[cl.margins.m_male, cl.margins.m_female],
            !cl.is_ess,
        ),
        Check::new("quantum (1,0) attractor", &[qu.roots.0, qu.roots.1], qu.is_attractor),
        Check::new(
            "quantum (1,0) ESS",
            &[qu.margins.m_male, qu.margins.m_female],
            qu.is_ess,
        ),
    ];
    ScenarioInstance {
        case_label: CaseLabel::A,
        game,
        state,
        k: k_params(&state),
        verification,
        comparison: Some(cmp),
        classical_interior: None,
        quantum_interior: None,
        notes: vec![],
    }
    .verified()
}

/// ESS attractor at (1, 0) classically that stays an attractor but loses ESS status.
pub fn case_b(game: SimplifiedGame, state: InitialStateWeights) -> Result<ScenarioInstance> {
    let SimplifiedGame { a, b, c, d } = game;
    let cmp = compare_classical_quantum(&game, &state, DEFAULT_STRICT_TOL);
    let (cl, qu) = (&cmp.classical, &cmp.quantum);
    let order = [state.w22(), state.w21(), state.w11(), state.w12()];
    let lhs = c * (state.w12() - state.w22());
    let rhs = d * (state.w11() - state.w21());
    let verification = vec![
        Check::new("a, c, d > 0", &[a, c, d], a > 0.0 && c > 0.0 && d > 0.0),
        Check::new("b < 0", &[b], b < 0.0),
        Check::new("w22 < w21 < w11 < w12", &order, strictly_increasing(&order)),
        Check::new("c(w12 - w22) < d(w11 - w21)", &[lhs, rhs], lhs < rhs),
        Check::new("classical (1,0) attractor", &[cl.roots.0, cl.roots.1], cl.is_attractor),
        Check::new(
            "classical (1,0) ESS",
            &[cl.margins.m_male, cl.margins.m_female],
            cl.is_ess,
        ),
        Check::new("quantum (1,0) attractor", &[qu.roots.0, qu.roots.1], qu.is_attractor),
        Check::new(
            "quantum (1,0) not ESS",
            &[qu.margins.m_male, qu.margins.m_female],
            !qu.is_ess,
        ),
    ];
    ScenarioInstance {
        case_label: CaseLabel::B,
        game,
        state,
        k: k_params(&state),
        verification,
        comparison: Some(cmp),
        classical_interior: None,
        quantum_interior: None,
        notes: vec![],
    }
    .verified()
}

/// Interior rest point that is a linear centre classically and a saddle once quantized.
pub fn case_c(game: SimplifiedGame, state: InitialStateWeights) -> Result<ScenarioInstance> {
    let classical = interior_summary(&game, KParams::CLASSICAL)?;
    let quantum = interior_summary(&game, k_params(&state))?;
    let verification = vec![
        Check::new(
            "classical interior inside (0,1)^2",
            &[classical.x, classical.y],
            classical.inside_unit_square,
        ),
        Check::new("classical lambda^2 < 0", &[classical.lambda_sq], classical.lambda_sq < 0.0),
        Check::new(
            "classical interior is center-linearization",
            &[classical.lambda_sq],
            classical.tag == ClassificationTag::CenterLinearization,
        ),
        Check::new("quantum lambda^2 > 0", &[quantum.lambda_sq], quantum.lambda_sq > 0.0),
        Check::new(
            "quantum interior is saddle",
            &[quantum.lambda_sq],
            quantum.tag == ClassificationTag::Saddle,
        ),
        Check::new(
            "quantum interior outside (0,1)^2",
            &[quantum.x, quantum.y],
            !quantum.inside_unit_square,
        ),
    ];
    let notes = vec![
        "the quantum interior rest point lies outside the unit square; its saddle type \
         refers to the planar field, not to a population state"
            .to_string(),
        "inside the unit square the sign of lambda^2 equals the sign of (a+b)(c+d) for \
         every initial state"
            .to_string(),
    ];
    ScenarioInstance {
        case_label: CaseLabel::C,
        game,
        state,
        k: k_params(&state),
        verification,
        comparison: None,
        classical_interior: Some(classical),
        quantum_interior: Some(quantum),
        notes,
    }
    .verified()
}

pub fn make_case_a() -> Result<ScenarioInstance> {
    case_a(
        SimplifiedGame::new(1.0, -1.0, -1.0, 1.0)?,
        InitialStateWeights::new(0.3, 0.4, 0.1, 0.2)?,
    )
}

pub fn make_case_b() -> Result<ScenarioInstance> {
    case_b(
        SimplifiedGame::new(1.0, -1.0, 1.0, 2.0)?,
        InitialStateWeights::new(0.35, 0.40, 0.15, 0.10)?,
    )
}

pub fn make_case_c() -> Result<ScenarioInstance> {
    case_c(
        SimplifiedGame::new(1.0, 3.0, -2.0, -1.0)?,
        InitialStateWeights::new(0.25, 0.60, 0.05, 0.10)?,
    )
}

pub fn make_case(label: CaseLabel) -> Result<ScenarioInstance> {
    match label {
        CaseLabel::A => make_case_a(),
        CaseLabel::B => make_case_b(),
        CaseLabel::C => make_case_c(),
    }
}

/// Number of points `C(r+3, 3)` in the resolution-`r` weight lattice.
pub fn lattice_size(resolution: usize) -> usize {
    (resolution + 1) * (resolution + 2) * (resolution + 3) / 6
}

/// Integer coordinates `(k11, k12, k21, k22)` summing to `resolution`, in
/// lexicographic order.
pub fn simplex_lattice(resolution: usize) -> Vec<[usize; 4]> {
    let r = resolution;
    let mut out = Vec::with_capacity(lattice_size(r));
    for k11 in 0..=r {
        for k12 in 0..=r - k11 {
            for k21 in 0..=r - k11 - k12 {
                out.push([k11, k12, k21, r - k11 - k12 - k21]);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub weights: [f64; 4],
    pub flip: Flip,
}

/// Lattice points of the weight simplex at which the verdict at (1, 0)
/// differs between the classical and quantum game.
pub fn scan_flip(game: &SimplifiedGame, resolution: usize, tol: f64) -> Result<Vec<ScanRow>> {
    if resolution == 0 {
        return Err(Error::validation("resolution", "resolution must be positive"));
    }
    let denom = resolution as f64;
    let lattice = simplex_lattice(resolution);
    lattice
        .par_iter()
        .map(|k| {
            let w = k.map(|v| v as f64 / denom);
            let state = InitialStateWeights::new(w[0], w[1], w[2], w[3])?;
            let flip = compare_classical_quantum(game, &state, tol).flip;
            Ok((flip != Flip::None).then_some(ScanRow { weights: w, flip }))
        })
        .filter_map(|r: Result<Option<ScanRow>>| r.transpose())
        .collect()
}
