//! Games, initial-state weights and Marinatto–Weber quantized payoffs.
//!
//! Strategy index 0 is the first pure strategy (X1 for the male, Y1 for the
//! female), index 1 the second. Matrices are indexed `[male][female]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 2×2 payoff matrix indexed `[male strategy][female strategy]`.
pub type Payoff2 = [[f64; 2]; 2];

/// Tolerance on the sum of the initial-state weights.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Full bi-matrix game: `male[i][j] = a_ij`, `female[i][j] = b_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalBimatrix {
    male: Payoff2,
    female: Payoff2,
}

impl ClassicalBimatrix {
    pub fn new(male: Payoff2, female: Payoff2) -> Result<Self> {
        for (name, m) in [("a", &male), ("b", &female)] {
            for (i, row) in m.iter().enumerate() {
                if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                    return Err(Error::validation(
                        format!("{name}{}{}", i + 1, j + 1),
                        "payoff must be finite",
                    ));
                }
            }
        }
        Ok(Self { male, female })
    }

    pub fn male(&self) -> &Payoff2 {
        &self.male
    }

    pub fn female(&self) -> &Payoff2 {
        &self.female
    }

    /// Reduces to the four-constant form by zeroing a11, a22, b11, b22
    /// through column shifts, which leave the replicator field unchanged.
    ///
    /// The female constants follow the replicator convention where the
    /// female bracket reads `x(b11 − b12 − b21 + b22) + (b12 − b22)`.
    pub fn reduce(&self) -> SimplifiedGame {
        let m = &self.male;
        let f = &self.female;
        SimplifiedGame {
            a: m[0][1] - m[1][1],
            b: m[1][0] - m[0][0],
            c: f[0][1] - f[1][1],
            d: f[1][0] - f[0][0],
        }
    }
}

/// Battle-of-the-Sexes style reduced game with zero diagonal payoffs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplifiedGame {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl SimplifiedGame {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let g = Self { a, b, c, d };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)] {
            if !v.is_finite() {
                return Err(Error::validation(name, "payoff must be finite"));
            }
        }
        Ok(())
    }

    /// Embeds as a11 = b11 = a22 = b22 = 0, a12 = a, a21 = b, b12 = c, b21 = d.
    pub fn to_bimatrix(&self) -> ClassicalBimatrix {
        ClassicalBimatrix {
            male: [[0.0, self.a], [self.b, 0.0]],
            female: [[0.0, self.c], [self.d, 0.0]],
        }
    }
}

/// Squared magnitudes `|c_ij|²` of the initial two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialStateWeights {
    w11: f64,
    w12: f64,
    w21: f64,
    w22: f64,
}

impl InitialStateWeights {
    pub fn new(w11: f64, w12: f64, w21: f64, w22: f64) -> Result<Self> {
        for (name, w) in [("w11", w11), ("w12", w12), ("w21", w21), ("w22", w22)] {
            if !w.is_finite() || !(0.0..=1.0).contains(&w) {
                return Err(Error::validation(name, "weight must lie in [0, 1]"));
            }
        }
        let sum = w11 + w12 + w21 + w22;
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::validation(
                "weights",
                format!("weights must sum to 1 (got {sum})"),
            ));
        }
        Ok(Self { w11, w12, w21, w22 })
    }

    /// Divides nonnegative raw weights by their sum.
    pub fn renormalized(w11: f64, w12: f64, w21: f64, w22: f64) -> Result<Self> {
        for (name, w) in [("w11", w11), ("w12", w12), ("w21", w21), ("w22", w22)] {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::validation(name, "weight must be finite and nonnegative"));
            }
        }
        let sum = w11 + w12 + w21 + w22;
        if sum <= 0.0 {
            return Err(Error::validation("weights", "weights must have a positive sum"));
        }
        Self::new(w11 / sum, w12 / sum, w21 / sum, w22 / sum)
    }

    /// The product state |11⟩, which reproduces the classical game.
    pub fn classical() -> Self {
        Self {
            w11: 1.0,
            w12: 0.0,
            w21: 0.0,
            w22: 0.0,
        }
    }

    pub fn w11(&self) -> f64 {
        self.w11
    }
    pub fn w12(&self) -> f64 {
        self.w12
    }
    pub fn w21(&self) -> f64 {
        self.w21
    }
    pub fn w22(&self) -> f64 {
        self.w22
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.w11, self.w12, self.w21, self.w22]
    }

    /// Weights as a matrix indexed `[male basis][female basis]`.
    pub fn as_matrix(&self) -> [[f64; 2]; 2] {
        [[self.w11, self.w12], [self.w21, self.w22]]
    }

    pub fn is_classical(&self) -> bool {
        self.w11 == 1.0
    }
}

impl<'de> Deserialize<'de> for InitialStateWeights {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            w11: f64,
            w12: f64,
            w21: f64,
            w22: f64,
        }
        let r = Raw::deserialize(de)?;
        Self::new(r.w11, r.w12, r.w21, r.w22).map_err(serde::de::Error::custom)
    }
}

/// State parameters of the quantum replicator field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KParams {
    pub k1: f64,
    pub k2: f64,
}

impl KParams {
    pub const CLASSICAL: KParams = KParams { k1: 1.0, k2: 0.0 };
}

/// K1 = w11 − w21, K2 = w22 − w12.
pub fn k_params(state: &InitialStateWeights) -> KParams {
    KParams {
        k1: state.w11 - state.w21,
        k2: state.w22 - state.w12,
    }
}

/// Quantized payoff matrices: ω for the male, χ for the female.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffMatrixPair {
    pub omega: Payoff2,
    pub chi: Payoff2,
}

fn permuted_sums(p: &Payoff2, s: &InitialStateWeights) -> Payoff2 {
    let (p11, p12, p21, p22) = (p[0][0], p[0][1], p[1][0], p[1][1]);
    let (w11, w12, w21, w22) = (s.w11, s.w12, s.w21, s.w22);
    [
        [
            p11 * w11 + p12 * w12 + p21 * w21 + p22 * w22,
            p11 * w12 + p12 * w11 + p21 * w22 + p22 * w21,
        ],
        [
            p11 * w21 + p12 * w22 + p21 * w11 + p22 * w12,
            p11 * w22 + p12 * w21 + p21 * w12 + p22 * w11,
        ],
    ]
}

/// Marinatto–Weber quantization of both payoff matrices.
pub fn quantum_transform(game: &ClassicalBimatrix, state: &InitialStateWeights) -> PayoffMatrixPair {
    PayoffMatrixPair {
        omega: permuted_sums(&game.male, state),
        chi: permuted_sums(&game.female, state),
    }
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::validation(name, format!("probability must lie in [0, 1] (got {p})")))
    }
}

fn bilinear(m: &Payoff2, x: f64, y: f64) -> f64 {
    let xv = [x, 1.0 - x];
    let yv = [y, 1.0 - y];
    let mut acc = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            acc += xv[i] * m[i][j] * yv[j];
        }
    }
    acc
}

/// Male payoff `xᵀ ω y` with strategy vectors (x, 1−x) and (y, 1−y).
pub fn payoff_male(pair: &PayoffMatrixPair, x: f64, y: f64) -> Result<f64> {
    check_probability("x", x)?;
    check_probability("y", y)?;
    Ok(bilinear(&pair.omega, x, y))
}

/// Female payoff `xᵀ χ y`.
pub fn payoff_female(pair: &PayoffMatrixPair, x: f64, y: f64) -> Result<f64> {
    check_probability("x", x)?;
    check_probability("y", y)?;
    Ok(bilinear(&pair.chi, x, y))
}

/// Expected (male, female) payoffs by enumerating the four operator branches
/// of the protocol directly: each player applies the identity or a spin flip
/// to their own qubit, then the final state is measured.
///
/// Kept independent of [`quantum_transform`] so the two can check each other.
#[allow(clippy::needless_range_loop)]
pub fn mw_scheme_oracle(
    game: &ClassicalBimatrix,
    state: &InitialStateWeights,
    x: f64,
    y: f64,
) -> Result<(f64, f64)> {
    check_probability("x", x)?;
    check_probability("y", y)?;

    let w = state.as_matrix();
    let branches = [
        (false, false, x * y),
        (false, true, x * (1.0 - y)),
        (true, false, (1.0 - x) * y),
        (true, true, (1.0 - x) * (1.0 - y)),
    ];

    let mut male = 0.0;
    let mut female = 0.0;
    for (flip_male, flip_female, prob) in branches {
        // Measurement weight of basis |ij⟩ in the final state.
        let mut fin = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let ti = if flip_male { 1 - i } else { i };
                let tj = if flip_female { 1 - j } else { j };
                fin[ti][tj] += w[i][j];
            }
        }
        let mut pm = 0.0;
        let mut pf = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                pm += game.male[i][j] * fin[i][j];
                pf += game.female[i][j] * fin[i][j];
            }
        }
        male += prob * pm;
        female += prob * pf;
    }
    Ok((male, female))
}
