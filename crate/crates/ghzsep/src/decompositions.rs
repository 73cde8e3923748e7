//! Explicit fully separable states: finite mixtures of pure product states
//! that land on the boundary of the separable set.
//!
//! Every constructor returns the term list itself, never a pre-assembled
//! matrix, so separability holds by construction.

use crate::boundaries::{hs_curve_parametrization, CurveVariant};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::matching::l_min;
use crate::pauli::ghz_basis_vector;
use crate::states::{GhzProbabilities, GhzState};
use crate::witness::ProductState;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

const W_TOL: f64 = 1e-12;

/// One pure product term of a mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Term {
    Product {
        w: f64,
        theta: [f64; 4],
        phi: [f64; 4],
    },
    /// Computational basis product state, qubit 1 first (e.g. `"0110"`).
    Basis {
        w: f64,
        basis: String,
    },
}

impl Term {
    pub fn weight(&self) -> f64 {
        match self {
            Term::Product { w, .. } | Term::Basis { w, .. } => *w,
        }
    }

    fn scaled(&self, f: f64) -> Term {
        match self {
            Term::Product { w, theta, phi } => Term::Product {
                w: w * f,
                theta: *theta,
                phi: *phi,
            },
            Term::Basis { w, basis } => Term::Basis {
                w: w * f,
                basis: basis.clone(),
            },
        }
    }

    fn product(w: f64, s: ProductState) -> Term {
        Term::Product {
            w,
            theta: s.theta,
            phi: s.phi,
        }
    }

    fn basis(w: f64, index: usize) -> Term {
        Term::Basis {
            w,
            basis: format!("{index:04b}"),
        }
    }

    pub fn amplitudes(&self) -> Result<[Complex64; 16]> {
        match self {
            Term::Product { theta, phi, .. } => Ok(ProductState::new(*theta, *phi)?.amplitudes()),
            Term::Basis { basis, .. } => {
                let idx = usize::from_str_radix(basis, 2)
                    .ok()
                    .filter(|_| basis.len() == 4)
                    .ok_or_else(|| Error::Regime(format!("bad basis label {basis:?}")))?;
                let mut v = [Complex64::new(0.0, 0.0); 16];
                v[idx] = Complex64::new(1.0, 0.0);
                Ok(v)
            }
        }
    }
}

/// A convex combination of pure product states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparableDecomposition {
    pub terms: Vec<Term>,
    /// Entrywise distance between the assembled matrix and the state it is
    /// meant to represent (its own GHZ-diagonal projection until verified
    /// against an explicit target).
    pub target_residual: f64,
}

impl SeparableDecomposition {
    fn from_terms(terms: Vec<Term>) -> Self {
        let mut d = Self {
            terms,
            target_residual: 0.0,
        };
        d.target_residual = d.ghz_defect().unwrap_or(f64::NAN);
        d
    }

    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(Term::weight).sum()
    }

    pub fn min_weight(&self) -> f64 {
        self.terms.iter().map(Term::weight).fold(f64::INFINITY, f64::min)
    }

    pub fn assemble(&self) -> Result<CMatrix> {
        let mut m = CMatrix::zeros(16);
        for t in &self.terms {
            m.add_projector(t.weight(), &t.amplitudes()?);
        }
        Ok(m)
    }

    /// GHZ-basis weights `<GHZ_j| rho |GHZ_j>` of the assembled matrix.
    pub fn ghz_weights(&self) -> Result<[f64; 16]> {
        let m = self.assemble()?;
        Ok(ghz_weights_of(&m))
    }

    /// The GHZ-diagonal state with the same GHZ-basis weights.
    pub fn to_state(&self) -> Result<GhzState> {
        Ok(GhzState::from_probabilities(GhzProbabilities::new(
            self.ghz_weights()?,
        )?))
    }

    /// Distance of the assembled matrix from GHZ-diagonal form.
    pub fn ghz_defect(&self) -> Result<f64> {
        let m = self.assemble()?;
        let p = ghz_weights_of(&m);
        let mut proj = CMatrix::zeros(16);
        for (j, pj) in p.iter().enumerate() {
            proj.add_projector(*pj, &ghz_basis_vector(j + 1).unwrap().amplitudes());
        }
        Ok(m.max_abs_diff(&proj))
    }

    /// Convex combination of decompositions; zero-weight parts are dropped.
    pub fn mix(parts: &[(f64, &SeparableDecomposition)]) -> Result<Self> {
        let mut terms = Vec::new();
        for (w, d) in parts {
            if *w < -W_TOL {
                return Err(Error::param("mixing weight", *w, "must be nonnegative"));
            }
            if *w > W_TOL {
                terms.extend(d.terms.iter().map(|t| t.scaled(*w)));
            }
        }
        Ok(Self::from_terms(terms))
    }
}

fn ghz_weights_of(m: &CMatrix) -> [f64; 16] {
    let mut p = [0.0; 16];
    for (j, pj) in p.iter_mut().enumerate() {
        let g = ghz_basis_vector(j + 1).unwrap();
        let s = g.sign as f64;
        let v = m.get(g.low, g.low) + m.get(g.high, g.high) + (m.get(g.low, g.high) + m.get(g.high, g.low)) * s;
        *pj = 0.5 * v.re;
    }
    p
}

fn check_weight(name: &str, w: f64) -> Result<f64> {
    if !(-W_TOL..=1.0 + W_TOL).contains(&w) || !w.is_finite() {
        return Err(Error::Regime(format!("{name} = {w} outside [0, 1]")));
    }
    Ok(w.clamp(0.0, 1.0))
}

fn sign_of(sign: i8) -> Result<f64> {
    match sign {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        s => Err(Error::param("sign", s as f64, "must be +1 or -1")),
    }
}

/// Phase-shift and conjugation symmetrized mixture built on
/// `(x)_{j<=3} (|0> + e^{i phi_j}|1>) (x) (|0> ± e^{-i(phi_1+phi_2+phi_3)}|1>)`
/// with all `phi_j = phi`: 8 shifts `phi_j -> phi_j + k_j pi` times a complex
/// conjugate pair, 16 equal-weight terms.
pub fn rho3(phi: f64, sign: i8) -> Result<SeparableDecomposition> {
    let extra = if sign_of(sign)? > 0.0 { 0.0 } else { PI };
    let mut terms = Vec::with_capacity(16);
    for k in 0..8u32 {
        let mut f = [0.0; 4];
        for j in 0..3 {
            f[j] = phi + if (k >> j) & 1 == 1 { PI } else { 0.0 };
        }
        f[3] = -(f[0] + f[1] + f[2]) + extra;
        terms.push(Term::product(1.0 / 16.0, ProductState::equatorial(f)));
        terms.push(Term::product(1.0 / 16.0, ProductState::equatorial(f.map(|x| -x))));
    }
    Ok(SeparableDecomposition::from_terms(terms))
}

/// `(1 - q1 - q2) rho3(0) + q1 rho3(pi/4) + q2 rho3(pi/2)`.
pub fn rho4(q1: f64, q2: f64, sign: i8) -> Result<SeparableDecomposition> {
    let q1 = check_weight("q1", q1)?;
    let q2 = check_weight("q2", q2)?;
    let q0 = check_weight("1 - q1 - q2", 1.0 - q1 - q2)?;
    SeparableDecomposition::mix(&[
        (q0, &rho3(0.0, sign)?),
        (q1, &rho3(FRAC_PI_4, sign)?),
        (q2, &rho3(FRAC_PI_2, sign)?),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineBranch {
    /// `u rho4(+) + p16 (|0000><0000| + |1111><1111|)`: straight edges at `alpha = 8`.
    Plus,
    /// `(1 - 2 p1) rho4(-) + p1 (|0000><0000| + |1111><1111|)`: edge at `alpha = 6`.
    Minus,
}

fn ends(w: f64) -> Vec<Term> {
    vec![Term::basis(w, 0), Term::basis(w, 15)]
}

fn with_terms(mut d: SeparableDecomposition, extra: Vec<Term>) -> SeparableDecomposition {
    d.terms.extend(extra.into_iter().filter(|t| t.weight() > W_TOL));
    SeparableDecomposition::from_terms(d.terms)
}

/// States on the straight boundary edges fixed by the anti-diagonal corner
/// criterion, mixing [`rho4`] with the two all-equal basis states.
pub fn line_state(p16: f64, q1: f64, q2: f64, branch: LineBranch) -> Result<SeparableDecomposition> {
    if !(0.0..=0.5).contains(&p16) {
        return Err(Error::param("p16", p16, "must lie in [0, 1/2]"));
    }
    match branch {
        LineBranch::Plus => {
            let u = 1.0 - 2.0 * p16;
            let core = SeparableDecomposition::mix(&[(u, &rho4(q1, q2, 1)?)])?;
            Ok(with_terms(core, ends(p16)))
        }
        LineBranch::Minus => {
            // rho4(-) carries weight 1/8 on GHZ_16, so matching p16 fixes p1.
            let p1 = (4.0 * p16 - 0.5) / 3.0;
            if p1 < -W_TOL {
                return Err(Error::Regime(format!("minus branch needs p16 >= 1/8, got {p16}")));
            }
            let p1 = p1.max(0.0);
            let core = SeparableDecomposition::mix(&[(1.0 - 2.0 * p1, &rho4(q1, q2, -1)?)])?;
            Ok(with_terms(core, ends(p1)))
        }
    }
}

/// Parity-class mixture of `(x)_j (|0> + e^{i(phi + m_j pi)}|1>)` over the
/// eight `m` of parity 0 (`sign = +1`) or 1 (`sign = -1`), together with the
/// complex conjugates; 16 equal-weight terms. Its Pauli expansion is
/// `(I ± [cos^4 XXXX + sin^4 YYYY + cos^2 sin^2 (six mixed strings)])/16`.
pub fn rho_pm(phi: f64, sign: i8) -> Result<SeparableDecomposition> {
    let parity = if sign_of(sign)? > 0.0 { 0 } else { 1 };
    let mut terms = Vec::with_capacity(16);
    for m in 0..16u32 {
        if m.count_ones() % 2 != parity {
            continue;
        }
        let mut f = [0.0; 4];
        for j in 0..4 {
            f[j] = phi + if (m >> j) & 1 == 1 { PI } else { 0.0 };
        }
        terms.push(Term::product(1.0 / 16.0, ProductState::equatorial(f)));
        terms.push(Term::product(1.0 / 16.0, ProductState::equatorial(f.map(|x| -x))));
    }
    Ok(SeparableDecomposition::from_terms(terms))
}

/// `(rho_pm(phi, s) + sin^2(phi) rho_pm(pi/2, -s)) / (1 + sin^2 phi)`,
/// parameterized by `sin^2 phi` in `[0, 1/2]`.
pub fn rho5(sin2phi: f64, sign: i8) -> Result<SeparableDecomposition> {
    if !(-W_TOL..=0.5 + W_TOL).contains(&sin2phi) {
        return Err(Error::param("sin2phi", sin2phi, "must lie in [0, 1/2]"));
    }
    let s2 = sin2phi.clamp(0.0, 0.5);
    let phi = s2.sqrt().asin();
    SeparableDecomposition::mix(&[
        (1.0 / (1.0 + s2), &rho_pm(phi, sign)?),
        (s2 / (1.0 + s2), &rho_pm(FRAC_PI_2, -sign)?),
    ])
}

fn branch_sign(variant: CurveVariant) -> i8 {
    match variant {
        CurveVariant::LM => -1,
        CurveVariant::KN => 1,
        CurveVariant::BelowDiag(s) => s,
    }
}

/// States on the curved boundaries of the highly symmetric family.
///
/// * `LM` / `KN`: `w rho5(-/+) + (1 - w)(|0000><0000| + |1111><1111|)/2`
///   with `w = 8u/alpha`, valid where `alpha >= 8u`.
/// * `BelowDiag(s)`: `w rho5(s) + (1 - w)(I - |0000><0000| - |1111><1111|)/14`
///   with `w = 8(1 - 7u/alpha)`, valid between `alpha = 8u` and the `p1 = 0` face.
pub fn curve_state(p16: f64, variant: CurveVariant, sin2phi: f64) -> Result<SeparableDecomposition> {
    let (_, alpha) = hs_curve_parametrization(p16, variant, sin2phi)?;
    let u = 1.0 - 2.0 * p16;
    let sign = branch_sign(variant);
    match variant {
        CurveVariant::LM | CurveVariant::KN => {
            let w = check_weight("w", 8.0 * u / alpha)?;
            let core = SeparableDecomposition::mix(&[(w, &rho5(sin2phi, sign)?)])?;
            Ok(with_terms(core, ends(0.5 * (1.0 - w))))
        }
        CurveVariant::BelowDiag(_) => below_diag_raw(sign, sin2phi, 8.0 * (1.0 - 7.0 * u / alpha)),
    }
}

/// `w rho5(sign) + (1 - w)(I - |0000><0000| - |1111><1111|)/14` for an explicit
/// weight. At `p16 = 0` the curved family degenerates and this traces the two
/// straight edges: `sign = +1, sin2phi = 0` and `sign = -1, sin2phi = 1/2`.
pub fn below_diag_raw(sign: i8, sin2phi: f64, w: f64) -> Result<SeparableDecomposition> {
    let w = check_weight("w", w)?;
    let core = SeparableDecomposition::mix(&[(w, &rho5(sin2phi, sign)?)])?;
    let rest = (1..15).map(|b| Term::basis((1.0 - w) / 14.0, b)).collect();
    Ok(with_terms(core, rest))
}

/// Two-component mixtures on the curved faces of the symmetric family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymVariant {
    /// `rho_+(phi) + mu rho_-(pi/2)`, `cos 2phi >= 0`
    PlusPi2,
    /// `rho_+(phi) + mu rho_-(0)`, `cos 2phi <= 0`
    PlusZero,
    /// `rho_-(phi) + mu rho_+(pi/2)`, `cos 2phi >= 0`
    MinusPi2,
    /// `rho_-(phi) + mu rho_+(0)`, `cos 2phi <= 0`
    MinusZero,
}

/// `(rho_a(phi) + mu rho_b(phi_b)) / (1 + mu)` per [`SymVariant`]; `mu = inf`
/// gives the pure second component.
pub fn sym_boundary_state(mu: f64, phi: f64, variant: SymVariant) -> Result<SeparableDecomposition> {
    if !(mu >= 0.0) {
        return Err(Error::param("mu", mu, "must be nonnegative"));
    }
    let c2 = (2.0 * phi).cos();
    let (main, other, other_phi, need_pos) = match variant {
        SymVariant::PlusPi2 => (1, -1, FRAC_PI_2, true),
        SymVariant::PlusZero => (1, -1, 0.0, false),
        SymVariant::MinusPi2 => (-1, 1, FRAC_PI_2, true),
        SymVariant::MinusZero => (-1, 1, 0.0, false),
    };
    if (need_pos && c2 < -1e-12) || (!need_pos && c2 > 1e-12) {
        return Err(Error::Regime(format!(
            "cos(2 phi) = {c2} has the wrong sign for {variant:?}"
        )));
    }
    let t = if mu.is_infinite() { 1.0 } else { mu / (1.0 + mu) };
    SeparableDecomposition::mix(&[(1.0 - t, &rho_pm(phi, main)?), (t, &rho_pm(other_phi, other)?)])
}

/// Interior of the parabolas on the faces `rho_{4,13} = ±Omega` (flat diagonal):
/// a mix of the two parabola points with the same `x = rho_{1,16}/Omega`.
pub fn parabola_interior(x: f64, y: f64, face: i8) -> Result<SeparableDecomposition> {
    let s = sign_of(face)?;
    if !(-1.0 - W_TOL..=1.0 + W_TOL).contains(&x) {
        return Err(Error::param("x", x, "must lie in [-1, 1]"));
    }
    let x = x.clamp(-1.0, 1.0);
    let yp = (0.5 * (1.0 + s * x)).sqrt();
    if y.abs() > yp + 1e-12 {
        return Err(Error::Regime(format!("|y| = {} exceeds parabola {yp}", y.abs())));
    }
    let phi = 0.25 * (s * x).clamp(-1.0, 1.0).acos();
    let t = if yp > 0.0 { 0.5 * (1.0 + s * y / yp) } else { 0.5 };
    let t = t.clamp(0.0, 1.0);
    let sign = if s > 0.0 { 1 } else { -1 };
    SeparableDecomposition::mix(&[(t, &rho_pm(phi, sign)?), (1.0 - t, &rho_pm(FRAC_PI_2 - phi, sign)?)])
}

/// `16 omega * d + (1 - 16 omega)(|0000><0000| + |1111><1111|)/2`: rescales the
/// anti-diagonal of a flat-diagonal state so its minimal diagonal is `omega`.
pub fn lift_to_omega(d: &SeparableDecomposition, omega: f64) -> Result<SeparableDecomposition> {
    let f = 16.0 * omega;
    if !(0.0..=1.0 + W_TOL).contains(&f) {
        return Err(Error::param("omega", omega, "must lie in [0, 1/16]"));
    }
    let f = f.min(1.0);
    let core = SeparableDecomposition::mix(&[(f, d)])?;
    Ok(with_terms(core, ends(0.5 * (1.0 - f))))
}

/// Decomposition of a boundary point `(x, z, y) = (rho_{1,16}, rho_{4,13}, rho_{2,15})/Omega`
/// of the symmetric family at the given `omega`.
pub fn sym_point_decomposition(omega: f64, x: f64, z: f64, y: f64) -> Result<SeparableDecomposition> {
    const TOL: f64 = 1e-12;
    let flat = if (x - 1.0).abs() <= TOL {
        let q1 = 0.5 * (1.0 - z);
        line_state(0.0, q1, 0.5 * (1.0 - q1 - y), LineBranch::Plus)?
    } else if (x + 1.0).abs() <= TOL {
        let q1 = 0.5 * (1.0 + z);
        line_state(0.125, q1, 0.5 * (1.0 - q1 + y), LineBranch::Minus)?
    } else if x <= z {
        curved_face(x, z, y, 1)?
    } else {
        curved_face(-x, -z, -y, -1)?
    };
    if (omega - 1.0 / 16.0).abs() <= TOL {
        Ok(flat)
    } else {
        lift_to_omega(&flat, omega)
    }
}

/// Inverse of the two-component map for `x <= z` (after the overall sign flip).
fn curved_face(x: f64, z: f64, y: f64, main: i8) -> Result<SeparableDecomposition> {
    let mu = if 1.0 + z <= 0.0 {
        f64::INFINITY
    } else {
        (1.0 - z) / (1.0 + z)
    };
    let c4 = if mu.is_infinite() {
        -1.0
    } else {
        (x * (1.0 + mu) + mu).clamp(-1.0, 1.0)
    };
    let c2 = (0.5 * (1.0 + c4)).sqrt();
    let (phi, variant) = match (main > 0, y >= 0.0) {
        (true, true) => (0.5 * c2.acos(), SymVariant::PlusPi2),
        (true, false) => (0.5 * (-c2).acos(), SymVariant::PlusZero),
        (false, true) => (0.5 * c2.acos(), SymVariant::MinusPi2),
        (false, false) => (0.5 * (-c2).acos(), SymVariant::MinusZero),
    };
    sym_boundary_state(mu, phi, variant)
}

/// Residual report of a decomposition against a target state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub weight_sum: f64,
    pub min_weight: f64,
    /// Largest `| ||psi|| - 1 |` over the product terms.
    pub norm_defect: f64,
    pub ghz_defect: f64,
    pub target_residual: f64,
    pub min_eigenvalue: f64,
    pub l_min: f64,
}

impl VerifyReport {
    /// All structural checks pass and the target is reproduced within `tol`.
    pub fn ok(&self, tol: f64) -> bool {
        (self.weight_sum - 1.0).abs() <= 1e-12
            && self.min_weight >= 0.0
            && self.norm_defect <= 1e-12
            && self.ghz_defect <= 1e-10
            && self.min_eigenvalue >= -1e-11
            && self.target_residual <= tol
    }
}

/// Assembles the mixture and compares it with `target`.
pub fn verify(decomp: &SeparableDecomposition, target: &GhzState) -> Result<VerifyReport> {
    let m = decomp.assemble()?;
    let mut norm_defect: f64 = 0.0;
    for t in &decomp.terms {
        let v = t.amplitudes()?;
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        norm_defect = norm_defect.max((n - 1.0).abs());
    }
    let ev = hermitian_eigenvalues(&m);
    let p = ghz_weights_of(&m);
    let assembled_state = GhzProbabilities::new(p).map(GhzState::from_probabilities);
    Ok(VerifyReport {
        weight_sum: decomp.weight_sum(),
        min_weight: decomp.min_weight(),
        norm_defect,
        ghz_defect: decomp.ghz_defect()?,
        target_residual: m.max_abs_diff(&target.p.dense()),
        min_eigenvalue: ev[0],
        l_min: assembled_state.map(|s| l_min(&s)).unwrap_or(f64::NAN),
    })
}
