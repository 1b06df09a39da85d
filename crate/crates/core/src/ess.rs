//! Evolutionary stability of the corner (1, 0).
//!
//! In an asymmetric bi-matrix game a strategy pair is an ESS exactly when it
//! is a strict Nash equilibrium, so the test reduces to two strict
//! inequalities. Attractor status comes from the corner eigenvalues. The two
//! flags are reported side by side and neither is derived from the other.

use serde::{Deserialize, Serialize};

use crate::game::{k_params, InitialStateWeights, SimplifiedGame};
use crate::stability::corner_roots_10;

pub const DEFAULT_STRICT_TOL: f64 = 1e-9;

/// Payoff losses of unilateral deviation from (1, 0), per unit of deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EssMargins {
    /// `a(w11 − w21) + b(w22 − w12)`
    pub m_male: f64,
    /// `c(w11 − w12) + d(w22 − w21)`
    pub m_female: f64,
}

pub fn strict_ne_margins_10(game: &SimplifiedGame, state: &InitialStateWeights) -> EssMargins {
    let (w11, w12, w21, w22) = (state.w11(), state.w12(), state.w21(), state.w22());
    EssMargins {
        m_male: game.a * (w11 - w21) + game.b * (w22 - w12),
        m_female: game.c * (w11 - w12) + game.d * (w22 - w21),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub is_attractor: bool,
    pub is_ess: bool,
    /// Some margin or root lies within the tolerance band around zero.
    pub marginal: bool,
    /// ESS by the strict-NE test yet not an attractor of the linearization.
    pub ess_not_attractor: bool,
    pub roots: (f64, f64),
    pub margins: EssMargins,
}

pub fn verdict_10(game: &SimplifiedGame, state: &InitialStateWeights, tol: f64) -> StabilityVerdict {
    let roots = corner_roots_10(game, &k_params(state));
    let margins = strict_ne_margins_10(game, state);
    let is_attractor = roots.0 < -tol && roots.1 < -tol;
    let is_ess = margins.m_male > tol && margins.m_female > tol;
    let marginal = [roots.0, roots.1, margins.m_male, margins.m_female]
        .iter()
        .any(|v| v.abs() <= tol);
    StabilityVerdict {
        is_attractor,
        is_ess,
        marginal,
        ess_not_attractor: is_ess && !is_attractor,
        roots,
        margins,
    }
}

/// How the verdict at (1, 0) changes from the classical game to the quantum one.
///
/// An ESS change takes precedence over an attractor change when both occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flip {
    None,
    GainedEss,
    LostEss,
    GainedAttractor,
    LostAttractor,
}

impl Flip {
    pub fn between(classical: &StabilityVerdict, quantum: &StabilityVerdict) -> Flip {
        match (classical.is_ess, quantum.is_ess) {
            (false, true) => return Flip::GainedEss,
            (true, false) => return Flip::LostEss,
            _ => {}
        }
        match (classical.is_attractor, quantum.is_attractor) {
            (false, true) => Flip::GainedAttractor,
            (true, false) => Flip::LostAttractor,
            _ => Flip::None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Flip::None => "none",
            Flip::GainedEss => "gained-ess",
            Flip::LostEss => "lost-ess",
            Flip::GainedAttractor => "gained-attractor",
            Flip::LostAttractor => "lost-attractor",
        }
    }
}

impl std::fmt::Display for Flip {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub classical: StabilityVerdict,
    pub quantum: StabilityVerdict,
    pub flip: Flip,
}

pub fn compare_classical_quantum(
    game: &SimplifiedGame,
    state: &InitialStateWeights,
    tol: f64,
) -> ComparisonReport {
    let classical = verdict_10(game, &InitialStateWeights::classical(), tol);
    let quantum = verdict_10(game, state, tol);
    ComparisonReport {
        classical,
        quantum,
        flip: Flip::between(&classical, &quantum),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(a: f64, b: f64, c: f64, d: f64) -> SimplifiedGame {
        SimplifiedGame::new(a, b, c, d).unwrap()
    }

    fn w(w11: f64, w12: f64, w21: f64, w22: f64) -> InitialStateWeights {
        InitialStateWeights::new(w11, w12, w21, w22).unwrap()
    }

    #[test]
    fn classical_margins_are_a_and_c() {
        let m = strict_ne_margins_10(&g(2.0, -3.0, 5.0, 7.0), &InitialStateWeights::classical());
        assert_eq!((m.m_male, m.m_female), (2.0, 5.0));
    }

    #[test]
    fn case_a_margins() {
        let m = strict_ne_margins_10(&g(1.0, -1.0, -1.0, 1.0), &w(0.3, 0.4, 0.1, 0.2));
        assert!((m.m_male - 0.4).abs() < 1e-12);
        assert!((m.m_female - 0.2).abs() < 1e-12);
    }

    #[test]
    fn case_b_margins() {
        let m = strict_ne_margins_10(&g(1.0, -1.0, 1.0, 2.0), &w(0.35, 0.40, 0.15, 0.10));
        assert!((m.m_male - 0.5).abs() < 1e-12);
        assert!((m.m_female + 0.15).abs() < 1e-12);
    }

    #[test]
    fn verdicts_for_the_cases() {
        let a = compare_classical_quantum(&g(1.0, -1.0, -1.0, 1.0), &w(0.3, 0.4, 0.1, 0.2), DEFAULT_STRICT_TOL);
        assert!(a.classical.is_attractor && !a.classical.is_ess);
        assert!(a.quantum.is_attractor && a.quantum.is_ess);
        assert_eq!(a.flip, Flip::GainedEss);

        let b = compare_classical_quantum(&g(1.0, -1.0, 1.0, 2.0), &w(0.35, 0.40, 0.15, 0.10), DEFAULT_STRICT_TOL);
        assert!(b.classical.is_attractor && b.classical.is_ess);
        assert!(b.quantum.is_attractor && !b.quantum.is_ess);
        assert_eq!(b.flip, Flip::LostEss);
    }

    #[test]
    fn zero_payoffs_are_marginal() {
        let v = verdict_10(&g(0.0, 1.0, 1.0, 0.0), &InitialStateWeights::classical(), DEFAULT_STRICT_TOL);
        assert!(v.marginal && !v.is_attractor && !v.is_ess);
    }

    #[test]
    fn classical_state_never_flips() {
        let r = compare_classical_quantum(&g(1.0, -1.0, -1.0, 1.0), &InitialStateWeights::classical(), DEFAULT_STRICT_TOL);
        assert_eq!(r.flip, Flip::None);
    }

    #[test]
    fn attractor_flip_when_ess_is_unchanged() {
        // Not an ESS either way (a < 0); attractor status changes with the state.
        let game = g(-1.0, 2.0, 1.0, -1.0);
        let classical = verdict_10(&game, &InitialStateWeights::classical(), DEFAULT_STRICT_TOL);
        assert!(!classical.is_attractor && !classical.is_ess);
        let s = w(0.1, 0.0, 0.0, 0.9);
        let quantum = verdict_10(&game, &s, DEFAULT_STRICT_TOL);
        assert!(quantum.is_attractor);
        assert!(!quantum.is_ess);
        assert_eq!(Flip::between(&classical, &quantum), Flip::GainedAttractor);
        assert_eq!(Flip::between(&quantum, &classical), Flip::LostAttractor);
    }

    #[test]
    fn flip_names() {
        assert_eq!(serde_json::to_string(&Flip::GainedEss).unwrap(), "\"gained-ess\"");
        assert_eq!(Flip::LostAttractor.to_string(), "lost-attractor");
    }

    proptest! {
        #[test]
        fn male_margin_is_minus_first_root(a in -5.0..5.0f64, b in -5.0..5.0f64, c in -5.0..5.0f64,
                                           d in -5.0..5.0f64, r in [0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64]) {
            prop_assume!(r.iter().sum::<f64>() > 1e-6);
            let s = InitialStateWeights::renormalized(r[0], r[1], r[2], r[3]).unwrap();
            let v = verdict_10(&g(a, b, c, d), &s, DEFAULT_STRICT_TOL);
            prop_assert!((v.margins.m_male + v.roots.0).abs() < 1e-12);
        }

        #[test]
        fn classical_verdict_depends_on_signs(a in -5.0..5.0f64, b in -5.0..5.0f64,
                                              c in -5.0..5.0f64, d in -5.0..5.0f64) {
            let v = verdict_10(&g(a, b, c, d), &InitialStateWeights::classical(), DEFAULT_STRICT_TOL);
            let tol = DEFAULT_STRICT_TOL;
            prop_assert_eq!(v.is_ess, a > tol && c > tol);
            prop_assert_eq!(v.is_attractor, a > tol && d > tol);
        }

        #[test]
        fn symmetric_weights_tie_ess_to_attractor(a in -5.0..5.0f64, b in -5.0..5.0f64,
                                                  c in -5.0..5.0f64, d in -5.0..5.0f64,
                                                  r in [0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64]) {
            prop_assume!(2.0 * r[0] + r[1] + r[2] > 1e-6);
            let st = InitialStateWeights::renormalized(r[0], r[1], r[2], r[0]).unwrap();
            let v = verdict_10(&g(a, b, c, d), &st, DEFAULT_STRICT_TOL);
            if !v.marginal {
                prop_assert_eq!(v.is_ess, v.is_attractor);
            }
        }
    }
}
