//! Replicator vector fields and their numerical integration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{k_params, InitialStateWeights, KParams, Payoff2, SimplifiedGame};

/// Tolerance on the frequency sum of an n-strategy population state.
pub const SIMPLEX_SUM_TOL: f64 = 1e-12;

/// Overshoot past a face of the unit square that is snapped back after a step.
pub const CLAMP_GUARD: f64 = 1e-9;

/// Integration stops with [`TerminalStatus::LeftDomain`] outside `[-0.1, 1.1]²`.
pub const DOMAIN_MIN: f64 = -0.1;
pub const DOMAIN_MAX: f64 = 1.1;

/// Planar replicator field of the (possibly quantized) reduced game:
///
/// ```text
/// ẋ = x(1−x)[aK1 + bK2 − (a+b)(K1+K2)y]
/// ẏ = y(1−y)[cK1 + dK2 − (c+d)(K1+K2)x]
/// ```
///
/// With `(K1, K2) = (1, 0)` this is the classical two-population field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicatorField {
    pub game: SimplifiedGame,
    pub k: KParams,
}

impl ReplicatorField {
    pub fn new(game: SimplifiedGame, k: KParams) -> Self {
        Self { game, k }
    }

    pub fn classical(game: SimplifiedGame) -> Self {
        Self::new(game, KParams::CLASSICAL)
    }

    pub fn quantum(game: SimplifiedGame, state: &InitialStateWeights) -> Self {
        Self::new(game, k_params(state))
    }

    /// Constant part of the male bracket, `aK1 + bK2`.
    pub fn male_offset(&self) -> f64 {
        self.game.a * self.k.k1 + self.game.b * self.k.k2
    }

    /// Coefficient of `y` in the male bracket, `(a+b)(K1+K2)`.
    pub fn male_slope(&self) -> f64 {
        (self.game.a + self.game.b) * (self.k.k1 + self.k.k2)
    }

    /// Constant part of the female bracket, `cK1 + dK2`.
    pub fn female_offset(&self) -> f64 {
        self.game.c * self.k.k1 + self.game.d * self.k.k2
    }

    /// Coefficient of `x` in the female bracket, `(c+d)(K1+K2)`.
    pub fn female_slope(&self) -> f64 {
        (self.game.c + self.game.d) * (self.k.k1 + self.k.k2)
    }

    pub fn male_bracket(&self, y: f64) -> f64 {
        self.male_offset() - self.male_slope() * y
    }

    pub fn female_bracket(&self, x: f64) -> f64 {
        self.female_offset() - self.female_slope() * x
    }

    /// Velocity `(ẋ, ẏ)`; defined on the whole plane.
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        (
            x * (1.0 - x) * self.male_bracket(y),
            y * (1.0 - y) * self.female_bracket(x),
        )
    }
}

/// Two-population replicator field written directly in the bi-matrix
/// entries, in the Schuster–Sigmund form:
///
/// ```text
/// ẋ = x(1−x){y(m11 − m12 − m21 + m22) + (m12 − m22)}
/// ẏ = y(1−y){x(f11 − f12 − f21 + f22) + (f12 − f22)}
/// ```
pub fn two_population_field(male: &Payoff2, female: &Payoff2, x: f64, y: f64) -> (f64, f64) {
    let m = male;
    let f = female;
    let dx = x * (1.0 - x) * (y * (m[0][0] - m[0][1] - m[1][0] + m[1][1]) + (m[0][1] - m[1][1]));
    let dy = y * (1.0 - y) * (x * (f[0][0] - f[0][1] - f[1][0] + f[1][1]) + (f[0][1] - f[1][1]));
    (dx, dy)
}

/// Single-population state on the n-simplex with its payoff matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NPopulationState {
    freqs: Vec<f64>,
    payoff: Vec<Vec<f64>>,
}

impl NPopulationState {
    pub fn new(freqs: Vec<f64>, payoff: Vec<Vec<f64>>) -> Result<Self> {
        let n = freqs.len();
        if n == 0 {
            return Err(Error::Dimension("empty frequency vector".into()));
        }
        if payoff.len() != n || payoff.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension(format!(
                "payoff matrix must be {n}×{n} to match the frequency vector"
            )));
        }
        if freqs.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::validation("x", "frequencies must be finite and nonnegative"));
        }
        let sum: f64 = freqs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_SUM_TOL {
            return Err(Error::validation("x", format!("frequencies must sum to 1 (got {sum})")));
        }
        Ok(Self { freqs, payoff })
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn payoff(&self) -> &[Vec<f64>] {
        &self.payoff
    }
}

/// `ẋ_i = x_i((Ax)_i − xᵀAx)`.
pub fn replicator_field_n(state: &NPopulationState) -> Vec<f64> {
    let x = &state.freqs;
    let fitness: Vec<f64> = state
        .payoff
        .iter()
        .map(|row| row.iter().zip(x).map(|(a, xj)| a * xj).sum())
        .collect();
    let mean: f64 = x.iter().zip(&fitness).map(|(xi, p)| xi * p).sum();
    x.iter().zip(&fitness).map(|(xi, p)| xi * (p - mean)).collect()
}

/// One classical fourth-order Runge–Kutta step of a planar autonomous field.
pub fn rk4_step<F>(f: F, (x, y): (f64, f64), h: f64) -> (f64, f64)
where
    F: Fn(f64, f64) -> (f64, f64),
{
    let k1 = f(x, y);
    let k2 = f(x + 0.5 * h * k1.0, y + 0.5 * h * k1.1);
    let k3 = f(x + 0.5 * h * k2.0, y + 0.5 * h * k2.1);
    let k4 = f(x + h * k3.0, y + h * k3.1);
    (
        x + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        y + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub step: f64,
    pub max_steps: usize,
    pub convergence_tol: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            step: 0.01,
            max_steps: 100_000,
            convergence_tol: 1e-10,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::validation("step", "step must be positive"));
        }
        if self.max_steps == 0 {
            return Err(Error::validation("max_steps", "max_steps must be positive"));
        }
        if !(self.convergence_tol.is_finite() && self.convergence_tol > 0.0) {
            return Err(Error::validation("tol", "convergence tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalStatus {
    Converged,
    MaxSteps,
    LeftDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub status: TerminalStatus,
}

impl Trajectory {
    pub fn start(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always holds its start")
    }
}

fn in_domain(x: f64, y: f64) -> bool {
    x.is_finite()
        && y.is_finite()
        && (DOMAIN_MIN..=DOMAIN_MAX).contains(&x)
        && (DOMAIN_MIN..=DOMAIN_MAX).contains(&y)
}

fn clamp_overshoot(prev: f64, next: f64) -> f64 {
    if !(0.0..=1.0).contains(&prev) {
        return next;
    }
    if next < 0.0 && next > -CLAMP_GUARD {
        0.0
    } else if next > 1.0 && next < 1.0 + CLAMP_GUARD {
        1.0
    } else {
        next
    }
}

fn sup_norm((dx, dy): (f64, f64)) -> f64 {
    dx.abs().max(dy.abs())
}

/// Fixed-step RK4 integration from `start`.
///
/// Stops as soon as the sup-norm of the velocity drops below the convergence
/// tolerance, the state leaves `[-0.1, 1.1]²`, or `max_steps` is exhausted.
pub fn integrate(
    field: &ReplicatorField,
    start: (f64, f64),
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    config.validate()?;
    if !(start.0.is_finite() && start.1.is_finite()) {
        return Err(Error::validation("start", "start point must be finite"));
    }

    let h = config.step;
    let mut samples = vec![Sample { t: 0.0, x: start.0, y: start.1 }];
    if !in_domain(start.0, start.1) {
        return Ok(Trajectory { samples, status: TerminalStatus::LeftDomain });
    }
    if sup_norm(field.eval(start.0, start.1)) < config.convergence_tol {
        return Ok(Trajectory { samples, status: TerminalStatus::Converged });
    }

    let mut p = start;
    for n in 1..=config.max_steps {
        let (nx, ny) = rk4_step(|x, y| field.eval(x, y), p, h);
        p = (clamp_overshoot(p.0, nx), clamp_overshoot(p.1, ny));
        // t from the step index, not accumulated, to keep the spacing exact
        samples.push(Sample { t: n as f64 * h, x: p.0, y: p.1 });

        if !in_domain(p.0, p.1) {
            return Ok(Trajectory { samples, status: TerminalStatus::LeftDomain });
        }
        if sup_norm(field.eval(p.0, p.1)) < config.convergence_tol {
            return Ok(Trajectory { samples, status: TerminalStatus::Converged });
        }
    }
    Ok(Trajectory { samples, status: TerminalStatus::MaxSteps })
}

/// Interior seeds of a `grid_n × grid_n` lattice, `((i+1)/(n+1), (j+1)/(n+1))`,
/// ordered with `x` as the slow index.
pub fn portrait_seeds(grid_n: usize) -> Vec<(f64, f64)> {
    let denom = (grid_n + 1) as f64;
    (0..grid_n)
        .flat_map(|i| (0..grid_n).map(move |j| ((i + 1) as f64 / denom, (j + 1) as f64 / denom)))
        .collect()
}

/// One trajectory per lattice seed inside the open unit square.
///
/// Seeds that already sit on a rest point (velocity below the convergence
/// tolerance) are skipped. Output order follows [`portrait_seeds`].
pub fn phase_portrait(
    field: &ReplicatorField,
    grid_n: usize,
    config: &IntegratorConfig,
) -> Result<Vec<Trajectory>> {
    if grid_n < 2 {
        return Err(Error::validation("grid", "grid size must be at least 2"));
    }
    config.validate()?;
    let seeds: Vec<(f64, f64)> = portrait_seeds(grid_n)
        .into_iter()
        .filter(|&(x, y)| sup_norm(field.eval(x, y)) >= config.convergence_tol)
        .collect();
    seeds
        .par_iter()
        .map(|&s| integrate(field, s, config))
        .collect()
}
