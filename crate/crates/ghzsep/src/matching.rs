//! Matched witnesses and the resulting separability criteria.
//!
//! For a GHZ-diagonal state the best witness in the symmetric sector gives
//! `L_min = 1 / (1 - 16 Omega + R~)`, where `Omega` is the smallest diagonal
//! entry and `R~` the largest normalized overlap of the anti-diagonal sector
//! with the state's correlations. `L_min >= 1` is necessary for full
//! separability and, for permutation-symmetric states, also sufficient.

use crate::states::GhzState;
use crate::witness::{g_tilde, polyhedron_vertex, WitnessParams};
use serde::{Deserialize, Serialize};

/// Tolerance on criterion margins when issuing verdicts.
pub const TAU_V: f64 = 1e-10;
/// Below this `|R'_9|` the ratio-based case conditions are not used.
pub const RP9_EPS: f64 = 1e-10;
/// Tolerance for the permutation-symmetry test.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RCase {
    I,
    II,
    III,
    IV,
}

impl RCase {
    pub const ALL: [RCase; 4] = [RCase::I, RCase::II, RCase::III, RCase::IV];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::fmt::Display for RCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RCase::I => "I",
            RCase::II => "II",
            RCase::III => "III",
            RCase::IV => "IV",
        };
        f.write_str(s)
    }
}

/// Value of `R~` together with the per-case expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RTilde {
    pub value: f64,
    pub case: RCase,
    /// Literal value of each case expression (`None` when it divides by zero).
    pub expressions: [Option<f64>; 4],
    /// Whether the witness behind each expression lies in the admissible
    /// region, i.e. the expression is an attained overlap.
    pub attained: [bool; 4],
}

fn curve(t: f64) -> f64 {
    3.0 + 0.5 * (9.0 / t - t)
}

/// Tangency abscissa `-9 a / (3 a + R'_9)` on the curved boundary, if it lies in `[-3, -1]`.
fn curve_point(a: f64, rp9: f64) -> Option<f64> {
    let den = 3.0 * a + rp9;
    if a == 0.0 || den == 0.0 {
        return None;
    }
    let x = -9.0 * a / den;
    (-3.0 - 1e-12..=-1.0 + 1e-12).contains(&x).then(|| x.clamp(-3.0, -1.0))
}

/// The literal case dispatch, usable when `R'_9 != 0`.
fn literal_case(r8: f64, rp9: f64, r15: f64) -> RCase {
    let a = r8 / rp9;
    let b = r15 / rp9;
    let prod = r8 * r15 / (rp9 * rp9);
    if a <= 1.0 / 6.0 && b <= 1.0 / 6.0 {
        RCase::I
    } else if prod >= 1.0 / 36.0 && a > 0.0 && b > 0.0 {
        RCase::II
    } else if b > 1.0 / 6.0 && prod < 1.0 / 36.0 {
        RCase::III
    } else {
        RCase::IV
    }
}

/// `R~` for the anti-diagonal correlations `(R_8, R'_9, R_15)`.
///
/// Computed as the maximum over the attained case expressions
/// `|R'9 - R8 - R15|`, `|R'9/3 + R8 + R15|`,
/// `|R15 - R8 + R'9/3 + R'9^2/(18 R15)|` and its `8 <-> 15` mirror. When
/// `R'_9 != 0` the reported case is the one the ratio conditions select (it
/// always carries the maximum); otherwise the first maximizing case.
pub fn r_tilde(r8: f64, rp9: f64, r15: f64) -> RTilde {
    let e1 = (rp9 - r8 - r15).abs();
    let e2 = (rp9 / 3.0 + r8 + r15).abs();
    let e3 = (r15 != 0.0).then(|| (r15 - r8 + rp9 / 3.0 + rp9 * rp9 / (18.0 * r15)).abs());
    let e4 = (r8 != 0.0).then(|| (r8 - r15 + rp9 / 3.0 + rp9 * rp9 / (18.0 * r8)).abs());
    let expressions = [Some(e1), Some(e2), e3, e4];
    let attained = [
        true,
        true,
        e3.is_some() && curve_point(r15, rp9).is_some(),
        e4.is_some() && curve_point(r8, rp9).is_some(),
    ];
    let mut value = 0.0f64;
    let mut argmax = RCase::I;
    for c in RCase::ALL {
        if attained[c.index()] {
            let v = expressions[c.index()].unwrap();
            if v > value {
                value = v;
                argmax = c;
            }
        }
    }
    let scale = value.max(1.0);
    let case = if rp9.abs() >= RP9_EPS {
        let lit = literal_case(r8, rp9, r15);
        match (attained[lit.index()], expressions[lit.index()]) {
            (true, Some(v)) if (v - value).abs() <= 1e-12 * scale => lit,
            _ => argmax,
        }
    } else {
        argmax
    };
    RTilde {
        value,
        case,
        expressions,
        attained,
    }
}

/// `1 - 16 Omega + R~`; its reciprocal is `L_min`.
pub fn l_min_denominator(state: &GhzState) -> f64 {
    let r = &state.r;
    let rt = r_tilde(r.get(8), r.rp9(), r.get(15)).value;
    1.0 - 16.0 * state.x.omega() + rt
}

/// `L_min`, or `+inf` when no sector witness has a positive mean on the state.
pub fn l_min(state: &GhzState) -> f64 {
    let den = l_min_denominator(state);
    if den <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / den
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Separable,
    Entangled,
    EntangledByNecessity,
    Undetermined,
}

/// Criterion margins in density-matrix units (left side minus right side);
/// positive means violated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "II")]
    pub ii: f64,
    /// `None` when the expression divides by `R_15 = 0`.
    #[serde(rename = "III")]
    pub iii: Option<f64>,
    /// `None` when the expression divides by `R_8 = 0`.
    #[serde(rename = "IV")]
    pub iv: Option<f64>,
}

impl Margins {
    pub fn get(&self, c: RCase) -> Option<f64> {
        match c {
            RCase::I => Some(self.i),
            RCase::II => Some(self.ii),
            RCase::III => self.iii,
            RCase::IV => self.iv,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub omega: f64,
    pub r_tilde: f64,
    pub case: RCase,
    pub l_min: f64,
    pub margins: Margins,
    /// Whether each criterion applies to this state (III and IV only when
    /// their witness is admissible).
    pub applicable: [bool; 4],
    pub symmetric: bool,
    pub verdict: Verdict,
    pub matched_witness: WitnessParams,
}

impl CriterionReport {
    /// True when criterion `c` is applicable and its margin exceeds `tol`.
    pub fn violated(&self, c: RCase, tol: f64) -> bool {
        self.applicable[c.index()] && self.margins.get(c).is_some_and(|m| m > tol)
    }
}

/// The four criteria, `L_min`, the verdict and the matched witness.
pub fn criteria(state: &GhzState) -> CriterionReport {
    criteria_with_tol(state, TAU_V)
}

pub fn criteria_with_tol(state: &GhzState, tol: f64) -> CriterionReport {
    let x = &state.x;
    let r = &state.r;
    let (r8, rp9, r15) = (r.get(8), r.rp9(), r.get(15));
    let omega = x.omega();
    let rt = r_tilde(r8, rp9, r15);
    let margins = Margins {
        i: x.a[0].abs() - omega,
        ii: (x.a[3] + x.a[5] + x.a[6]).abs() / 3.0 - omega,
        iii: rt.expressions[2].map(|e| e / 16.0 - omega),
        iv: rt.expressions[3].map(|e| e / 16.0 - omega),
    };
    let applicable = rt.attained;
    let symmetric = state.is_symmetric(SYMMETRY_TOL);
    let mut report = CriterionReport {
        omega,
        r_tilde: rt.value,
        case: rt.case,
        l_min: l_min(state),
        margins,
        applicable,
        symmetric,
        verdict: Verdict::Undetermined,
        matched_witness: matched_witness_for(state, &rt),
    };
    let any_violated = RCase::ALL.iter().any(|&c| report.violated(c, tol));
    report.verdict = match (symmetric, any_violated) {
        (true, false) => Verdict::Separable,
        (true, true) => Verdict::Entangled,
        (false, true) => Verdict::EntangledByNecessity,
        (false, false) => Verdict::Undetermined,
    };
    report
}

/// Anti-diagonal direction `(M8/M9, M15/M9)` realizing a case.
fn case_direction(c: RCase, r8: f64, rp9: f64, r15: f64) -> (f64, f64) {
    match c {
        RCase::I => (-1.0, -1.0),
        RCase::II => (3.0, 3.0),
        RCase::III => {
            let x = curve_point(r15, rp9).unwrap_or(-1.0);
            (x, curve(x))
        }
        RCase::IV => {
            let y = curve_point(r8, rp9).unwrap_or(-1.0);
            (curve(y), y)
        }
    }
}

/// Index `i` (1..=8) of the smallest diagonal entry.
pub fn min_diagonal_block(state: &GhzState) -> usize {
    let d = &state.x.d;
    (0..8).min_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap()).unwrap() + 1
}

fn matched_witness_for(state: &GhzState, rt: &RTilde) -> WitnessParams {
    let r = &state.r;
    let (r8, rp9, r15) = (r.get(8), r.rp9(), r.get(15));
    let (x, y) = case_direction(rt.case, r8, rp9, r15);
    let g = g_tilde(x, 1.0, y);
    let overlap = x * r8 + rp9 + y * r15;
    let s = if overlap < 0.0 { -1.0 } else { 1.0 } / g;
    WitnessParams::sector(polyhedron_vertex(min_diagonal_block(state)), s * x, s, s * y)
}

/// Sector witness attaining `L_min`, normalized so that `g~ = Lambda = 1`.
///
/// Its mean on the state is `1 - 16 Omega + R~`, so
/// `Tr(rho W) = 16 Omega - R~` (negative exactly when `L_min < 1`).
pub fn matched_witness(state: &GhzState) -> WitnessParams {
    let r = &state.r;
    let rt = r_tilde(r.get(8), r.rp9(), r.get(15));
    matched_witness_for(state, &rt)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    pub holds: bool,
    /// `max_i |rho_{i,17-i}| - min_j rho_{j,j}`
    pub margin: f64,
}

/// Positive partial transpose test in element form: `max |a_i| <= min d_j`.
pub fn ppt_criterion(state: &GhzState) -> PptReport {
    ppt_criterion_with_tol(state, TAU_V)
}

pub fn ppt_criterion_with_tol(state: &GhzState, tol: f64) -> PptReport {
    let x = &state.x;
    let amax = x.a.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let margin = amax - x.omega();
    PptReport {
        holds: margin <= tol,
        margin,
    }
}

/// `R_9 R_15 <= 0` and `R_9 R_8 <= 0`; when it holds PPT and full
/// separability coincide for symmetric states.
pub fn kay_condition(state: &GhzState) -> bool {
    let r = &state.r;
    r.get(9) * r.get(15) <= 0.0 && r.get(9) * r.get(8) <= 0.0
}
