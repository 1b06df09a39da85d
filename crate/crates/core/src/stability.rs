//! Rest points of the planar replicator field and their linear stability.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::ReplicatorField;
use crate::error::{Error, Result};
use crate::game::{KParams, SimplifiedGame};

/// Default band around zero inside which eigenvalue parts are undecided.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

/// Denominators of the interior rest point below this magnitude are treated as zero.
pub const DENOMINATOR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquilibriumKind {
    Corner,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub x: f64,
    pub y: f64,
    pub kind: EquilibriumKind,
    /// Strict containment in the open square `(0, 1)²`; always false for corners.
    pub inside_unit_square: bool,
}

/// The four corners plus the interior rest point when it exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibria {
    pub points: Vec<Equilibrium>,
    /// Why the interior rest point was omitted, if it was.
    pub degenerate_reason: Option<String>,
}

impl Equilibria {
    pub fn interior(&self) -> Option<&Equilibrium> {
        self.points.iter().find(|p| p.kind == EquilibriumKind::Interior)
    }
}

pub const CORNERS: [(f64, f64); 4] = [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)];

fn strictly_inside(v: f64) -> bool {
    v > 0.0 && v < 1.0
}

/// Enumerates the rest points of the field.
///
/// The interior point is reported wherever it lands in the plane; callers
/// that care about population-valid states should check `inside_unit_square`.
pub fn equilibria(field: &ReplicatorField) -> Equilibria {
    let mut points: Vec<Equilibrium> = CORNERS
        .iter()
        .map(|&(x, y)| Equilibrium {
            x,
            y,
            kind: EquilibriumKind::Corner,
            inside_unit_square: false,
        })
        .collect();

    let game = &field.game;
    let ksum = field.k.k1 + field.k.k2;
    let den_x = (game.c + game.d) * ksum;
    let den_y = (game.a + game.b) * ksum;

    let degenerate_reason = if ksum.abs() <= DENOMINATOR_TOL {
        Some("K1+K2 = 0".to_string())
    } else if den_x.abs() <= DENOMINATOR_TOL {
        Some("c+d = 0".to_string())
    } else if den_y.abs() <= DENOMINATOR_TOL {
        Some("a+b = 0".to_string())
    } else {
        let x = field.female_offset() / den_x;
        let y = field.male_offset() / den_y;
        points.push(Equilibrium {
            x,
            y,
            kind: EquilibriumKind::Interior,
            inside_unit_square: strictly_inside(x) && strictly_inside(y),
        });
        None
    };

    Equilibria { points, degenerate_reason }
}

/// 2×2 real matrix, row-major: `[[Xx, Xy], [Yx, Yy]]`.
pub type Matrix2 = [[f64; 2]; 2];

/// Closed-form Jacobian of the field at `(x, y)`.
pub fn jacobian(field: &ReplicatorField, (x, y): (f64, f64)) -> Matrix2 {
    [
        [
            (1.0 - 2.0 * x) * field.male_bracket(y),
            -x * (1.0 - x) * field.male_slope(),
        ],
        [
            -y * (1.0 - y) * field.female_slope(),
            (1.0 - 2.0 * y) * field.female_bracket(x),
        ],
    ]
}

/// Roots of `λ² − tr·λ + det = 0`.
///
/// Real roots come back in descending order; a complex pair as
/// `(α + iβ, α − iβ)` with `β > 0`.
pub fn eigenvalues(m: &Matrix2) -> [Complex64; 2] {
    let [[p, q], [r, s]] = *m;
    let tr = p + s;
    let det = p * s - q * r;
    // (p − s)² + 4qr avoids the cancellation in tr² − 4det.
    let disc = (p - s) * (p - s) + 4.0 * q * r;

    if disc >= 0.0 {
        let root = disc.sqrt();
        let big = 0.5 * (tr + tr.signum() * root);
        let (l1, l2) = if root == 0.0 {
            (0.5 * tr, 0.5 * tr)
        } else if big == 0.0 {
            (0.5 * root, -0.5 * root)
        } else {
            (big, det / big)
        };
        let (hi, lo) = if l1 >= l2 { (l1, l2) } else { (l2, l1) };
        [Complex64::new(hi, 0.0), Complex64::new(lo, 0.0)]
    } else {
        let alpha = 0.5 * tr;
        let beta = 0.5 * (-disc).sqrt();
        [Complex64::new(alpha, beta), Complex64::new(alpha, -beta)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassificationTag {
    StableNode,
    UnstableNode,
    Saddle,
    StableSpiral,
    UnstableSpiral,
    CenterLinearization,
    Degenerate,
}

impl ClassificationTag {
    pub fn is_attractor(self) -> bool {
        matches!(self, ClassificationTag::StableNode | ClassificationTag::StableSpiral)
    }

    pub fn is_repellor(self) -> bool {
        matches!(self, ClassificationTag::UnstableNode | ClassificationTag::UnstableSpiral)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClassificationTag::StableNode => "stable-node",
            ClassificationTag::UnstableNode => "unstable-node",
            ClassificationTag::Saddle => "saddle",
            ClassificationTag::StableSpiral => "stable-spiral",
            ClassificationTag::UnstableSpiral => "unstable-spiral",
            ClassificationTag::CenterLinearization => "center-linearization",
            ClassificationTag::Degenerate => "degenerate",
        }
    }
}

impl std::fmt::Display for ClassificationTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies a rest point from its linearization eigenvalues.
///
/// A zero eigenvalue (modulus within `zero_tol`) is always `Degenerate`;
/// repeated real roots count as nodes.
pub fn classify(eigs: &[Complex64; 2], zero_tol: f64) -> ClassificationTag {
    use ClassificationTag::*;

    if eigs.iter().any(|l| l.norm() <= zero_tol) {
        return Degenerate;
    }
    let real = eigs.iter().all(|l| l.im.abs() <= zero_tol);
    if real {
        let (r1, r2) = (eigs[0].re, eigs[1].re);
        if r1 < -zero_tol && r2 < -zero_tol {
            StableNode
        } else if r1 > zero_tol && r2 > zero_tol {
            UnstableNode
        } else if (r1 > zero_tol && r2 < -zero_tol) || (r1 < -zero_tol && r2 > zero_tol) {
            Saddle
        } else {
            Degenerate
        }
    } else {
        let alpha = 0.5 * (eigs[0].re + eigs[1].re);
        if alpha < -zero_tol {
            StableSpiral
        } else if alpha > zero_tol {
            UnstableSpiral
        } else {
            CenterLinearization
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearizationReport {
    pub jacobian: Matrix2,
    pub eigenvalues: [Complex64; 2],
    pub tag: ClassificationTag,
}

pub fn linearize(field: &ReplicatorField, point: (f64, f64), zero_tol: f64) -> LinearizationReport {
    let jacobian = jacobian(field, point);
    let eigenvalues = eigenvalues(&jacobian);
    LinearizationReport {
        jacobian,
        eigenvalues,
        tag: classify(&eigenvalues, zero_tol),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzedEquilibrium {
    #[serde(flatten)]
    pub equilibrium: Equilibrium,
    pub linearization: LinearizationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub equilibria: Vec<AnalyzedEquilibrium>,
    pub degenerate_reason: Option<String>,
}

/// Linearizes the field at every rest point.
pub fn analyze(field: &ReplicatorField, zero_tol: f64) -> StabilityReport {
    let eqs = equilibria(field);
    StabilityReport {
        equilibria: eqs
            .points
            .into_iter()
            .map(|e| {
                let linearization = linearize(field, (e.x, e.y), zero_tol);
                AnalyzedEquilibrium { equilibrium: e, linearization }
            })
            .collect(),
        degenerate_reason: eqs.degenerate_reason,
    }
}

/// Closed-form eigenvalues at the corner (1, 0): `(−aK1 − bK2, −cK2 − dK1)`.
pub fn corner_roots_10(game: &SimplifiedGame, k: &KParams) -> (f64, f64) {
    (
        -game.a * k.k1 - game.b * k.k2,
        -game.c * k.k2 - game.d * k.k1,
    )
}

/// Closed-form `λ²` at the interior rest point; the eigenvalues there are `±√λ²`.
pub fn interior_lambda_sq(game: &SimplifiedGame, k: &KParams) -> Result<f64> {
    let SimplifiedGame { a, b, c, d } = *game;
    let KParams { k1, k2 } = *k;
    let ksum = k1 + k2;
    for (name, v) in [("a+b", a + b), ("c+d", c + d), ("K1+K2", ksum)] {
        if v.abs() <= DENOMINATOR_TOL {
            return Err(Error::DegenerateInterior(format!("{name} = 0")));
        }
    }
    let num = (a * k1 + b * k2) * (a * k2 + b * k1) * (c * k1 + d * k2) * (c * k2 + d * k1);
    Ok(num / ((a + b) * (c + d) * ksum * ksum))
}
