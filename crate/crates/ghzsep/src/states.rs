//! GHZ-diagonal four-qubit states in three equivalent encodings.
//!
//! * [`GhzProbabilities`]: the 16 mixing weights `p_j` of the GHZ basis projectors.
//! * [`XMatrixElements`]: the diagonal pairs `d_i = rho_{i,i} = rho_{17-i,17-i}` and
//!   anti-diagonal entries `a_i = rho_{i,17-i}` of the X-shaped density matrix.
//! * [`PauliCorrelations`]: the coefficients `R_1..R_15` of the Pauli expansion
//!   `rho = (I + sum_i R_i P_i) / 16`.
//!
//! Public accessors take the 1-based indices used in the physics literature;
//! storage is 0-based.

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::{self, ghz_basis_vector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Validation tolerance on probability nonnegativity and normalization.
pub const TAU_P: f64 = 1e-12;

/// Mixing weights `p_1..p_16`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzProbabilities {
    p: [f64; 16],
}

impl GhzProbabilities {
    /// Validates and (within [`TAU_P`]) cleans up a weight vector: tiny negative
    /// entries are clamped to zero and the vector is renormalized.
    pub fn new(p: [f64; 16]) -> Result<Self> {
        let mut p = p;
        for (j, x) in p.iter_mut().enumerate() {
            if !x.is_finite() || *x < -TAU_P {
                return Err(Error::param(format!("p_{}", j + 1), *x, "must be nonnegative"));
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > TAU_P {
            return Err(Error::NotNormalized { sum });
        }
        for x in p.iter_mut() {
            *x /= sum;
        }
        Ok(Self { p })
    }

    pub fn from_slice(p: &[f64]) -> Result<Self> {
        let arr: [f64; 16] = p.try_into().map_err(|_| Error::WrongLength {
            expected: 16,
            got: p.len(),
        })?;
        Self::new(arr)
    }

    pub fn uniform() -> Self {
        Self { p: [1.0 / 16.0; 16] }
    }

    /// `p_j`, 1-based.
    pub fn get(&self, j: usize) -> f64 {
        self.p[j - 1]
    }

    pub fn as_array(&self) -> &[f64; 16] {
        &self.p
    }

    pub fn to_elements(&self) -> XMatrixElements {
        let mut d = [0.0; 8];
        let mut a = [0.0; 8];
        for i in 0..8 {
            let (x, y) = (self.p[i], self.p[15 - i]);
            d[i] = 0.5 * (x + y);
            a[i] = 0.5 * (x - y);
        }
        XMatrixElements { d, a }
    }

    pub fn to_correlations(&self) -> PauliCorrelations {
        let s = pauli::sign_matrix();
        let mut r = [0.0; 15];
        for (i, ri) in r.iter_mut().enumerate() {
            *ri = (0..16).map(|j| s[i][j] * self.p[j]).sum();
        }
        PauliCorrelations { r }
    }

    /// Dense density matrix assembled from the GHZ projectors.
    pub fn dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(16);
        for j in 1..=16 {
            if self.p[j - 1] != 0.0 {
                let v = ghz_basis_vector(j).unwrap().amplitudes();
                m.add_projector(self.p[j - 1], &v);
            }
        }
        m
    }
}

/// The nonzero entries of the X-shaped density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XMatrixElements {
    /// `d[i-1] = rho_{i,i} = rho_{17-i,17-i}`
    pub d: [f64; 8],
    /// `a[i-1] = rho_{i,17-i} = rho_{17-i,i}`
    pub a: [f64; 8],
}

impl XMatrixElements {
    pub fn new(d: [f64; 8], a: [f64; 8]) -> Result<Self> {
        let x = Self { d, a };
        x.to_probabilities()?;
        Ok(x)
    }

    pub fn to_probabilities(&self) -> Result<GhzProbabilities> {
        let mut p = [0.0; 16];
        for i in 0..8 {
            p[i] = self.d[i] + self.a[i];
            p[15 - i] = self.d[i] - self.a[i];
        }
        GhzProbabilities::new(p)
    }

    pub fn to_correlations(&self) -> Result<PauliCorrelations> {
        Ok(self.to_probabilities()?.to_correlations())
    }

    /// `rho_{r,c}` with 1-based indices.
    pub fn entry(&self, r: usize, c: usize) -> f64 {
        let block = |k: usize| if k <= 8 { k - 1 } else { 16 - k };
        if r == c {
            self.d[block(r)]
        } else if r + c == 17 {
            self.a[block(r)]
        } else {
            0.0
        }
    }

    /// Half the smallest diagonal pair sum, i.e. the smallest `d_i`.
    pub fn omega(&self) -> f64 {
        self.d.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(16);
        for r in 0..16 {
            m.set(r, r, Complex64::new(self.entry(r + 1, r + 1), 0.0));
            m.set(r, 15 - r, Complex64::new(self.entry(r + 1, 16 - r), 0.0));
        }
        m
    }
}

/// Pauli correlation coefficients `R_1..R_15`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliCorrelations {
    r: [f64; 15],
}

impl PauliCorrelations {
    pub fn new(r: [f64; 15]) -> Result<Self> {
        for (i, x) in r.iter().enumerate() {
            if !x.is_finite() || x.abs() > 1.0 + TAU_P {
                return Err(Error::param(format!("R_{}", i + 1), *x, "must lie in [-1, 1]"));
            }
        }
        let c = Self { r };
        c.to_probabilities()?;
        Ok(c)
    }

    pub fn from_slice(r: &[f64]) -> Result<Self> {
        let arr: [f64; 15] = r.try_into().map_err(|_| Error::WrongLength {
            expected: 15,
            got: r.len(),
        })?;
        Self::new(arr)
    }

    /// `R_i`, 1-based.
    pub fn get(&self, i: usize) -> f64 {
        self.r[i - 1]
    }

    pub fn as_array(&self) -> &[f64; 15] {
        &self.r
    }

    /// `R'_9 = R_9 + ... + R_14`.
    pub fn rp9(&self) -> f64 {
        self.r[8..14].iter().sum()
    }

    pub fn to_probabilities(&self) -> Result<GhzProbabilities> {
        let s = pauli::sign_matrix();
        let mut p = [0.0; 16];
        for (j, pj) in p.iter_mut().enumerate() {
            *pj = (1.0 + (0..15).map(|i| s[i][j] * self.r[i]).sum::<f64>()) / 16.0;
        }
        GhzProbabilities::new(p)
    }
}

/// A GHZ-diagonal state carrying all three encodings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzState {
    pub p: GhzProbabilities,
    pub x: XMatrixElements,
    pub r: PauliCorrelations,
}

impl GhzState {
    pub fn from_probabilities(p: GhzProbabilities) -> Self {
        Self {
            p,
            x: p.to_elements(),
            r: p.to_correlations(),
        }
    }

    pub fn from_elements(x: XMatrixElements) -> Result<Self> {
        Ok(Self::from_probabilities(x.to_probabilities()?))
    }

    pub fn from_correlations(r: PauliCorrelations) -> Result<Self> {
        Ok(Self::from_probabilities(r.to_probabilities()?))
    }

    /// Permutation symmetry test: `R_1..R_6` equal and `R_9..R_14` equal within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let r = self.r.as_array();
        let spread = |s: &[f64]| {
            let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        };
        spread(&r[0..6]) <= tol && spread(&r[8..14]) <= tol
    }
}

/// The six distinct weights of a permutation-symmetric GHZ-diagonal state.
///
/// Each weight is shared by a qubit-permutation orbit of GHZ vectors:
/// `p2` by j in {2,3,5,8}, `p4` by {4,6,7}, `p13` by {10,11,13}, `p15` by {9,12,14,15}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricParams {
    pub p1: f64,
    pub p2: f64,
    pub p4: f64,
    pub p13: f64,
    pub p15: f64,
    pub p16: f64,
}

const CLASS_P2: [usize; 4] = [2, 3, 5, 8];
const CLASS_P4: [usize; 3] = [4, 6, 7];
const CLASS_P13: [usize; 3] = [10, 11, 13];
const CLASS_P15: [usize; 4] = [9, 12, 14, 15];

/// Weights of a highly symmetric state: `p_2 = .. = p_8`, `p_9 = .. = p_15`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HighlySymmetricParams {
    pub p1: f64,
    pub p2: f64,
    pub p15: f64,
    pub p16: f64,
}

impl HighlySymmetricParams {
    /// Builds from `(p16, v, alpha)` with `u = 1 - 2 p16`, `p15 = v u / alpha`,
    /// `p2 = (1 - v) u / alpha` and `p1` fixed by normalization.
    pub fn from_v_alpha(p16: f64, v: f64, alpha: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p16) {
            return Err(Error::param("p16", p16, "must lie in [0, 1/2]"));
        }
        if !(-TAU_P..=1.0 + TAU_P).contains(&v) {
            return Err(Error::param("v", v, "must lie in [0, 1]"));
        }
        if !(alpha > 0.0) {
            return Err(Error::param("alpha", alpha, "must be positive"));
        }
        let u = 1.0 - 2.0 * p16;
        let p15 = v * u / alpha;
        let p2 = (1.0 - v) * u / alpha;
        let p1 = 1.0 - p16 - 7.0 * (p2 + p15);
        Ok(Self { p1, p2, p15, p16 })
    }

    pub fn u(&self) -> f64 {
        1.0 - 2.0 * self.p16
    }

    /// `(v, alpha)`, defined when `p2 + p15 > 0`.
    pub fn v_alpha(&self) -> Option<(f64, f64)> {
        let s = self.p2 + self.p15;
        if s <= 0.0 {
            return None;
        }
        Some((self.p15 / s, self.u() / s))
    }
}

fn checked(p: [f64; 16]) -> Result<GhzProbabilities> {
    for (j, x) in p.iter().enumerate() {
        if *x < -TAU_P || !x.is_finite() {
            return Err(Error::param(
                format!("p_{}", j + 1),
                *x,
                "resulting probability is negative",
            ));
        }
    }
    GhzProbabilities::new(p)
}

/// `p |GHZ_1><GHZ_1| + (1 - p) I / 16`.
pub fn make_werner(p: f64) -> Result<GhzProbabilities> {
    let mut w = [(1.0 - p) / 16.0; 16];
    w[0] += p;
    checked(w)
}

pub fn make_highly_symmetric(h: &HighlySymmetricParams) -> Result<GhzProbabilities> {
    let mut p = [0.0; 16];
    p[0] = h.p1;
    p[15] = h.p16;
    for j in 2..=8 {
        p[j - 1] = h.p2;
    }
    for j in 9..=15 {
        p[j - 1] = h.p15;
    }
    checked(p)
}

pub fn make_symmetric(s: &SymmetricParams) -> Result<GhzProbabilities> {
    let mut p = [0.0; 16];
    p[0] = s.p1;
    p[15] = s.p16;
    for j in CLASS_P2 {
        p[j - 1] = s.p2;
    }
    for j in CLASS_P4 {
        p[j - 1] = s.p4;
    }
    for j in CLASS_P13 {
        p[j - 1] = s.p13;
    }
    for j in CLASS_P15 {
        p[j - 1] = s.p15;
    }
    checked(p)
}

/// Symmetric state from its element coordinates: the shared minimal diagonal
/// `omega` (every block except the first), and the anti-diagonal ratios
/// `x = rho_{1,16}/omega`, `z = rho_{4,13}/omega`, `y = rho_{2,15}/omega`.
pub fn symmetric_from_ratios(omega: f64, x: f64, z: f64, y: f64) -> Result<GhzState> {
    if !(omega > 0.0 && omega <= 1.0 / 16.0 + TAU_P) {
        return Err(Error::param("omega", omega, "must lie in (0, 1/16]"));
    }
    let mut d = [omega; 8];
    d[0] = 0.5 - 7.0 * omega;
    let mut a = [0.0; 8];
    a[0] = x * omega;
    for j in CLASS_P2 {
        a[j - 1] = y * omega;
    }
    for j in CLASS_P4 {
        a[j - 1] = z * omega;
    }
    GhzState::from_elements(XMatrixElements::new(d, a)?)
}

/// JSON description of a state; exactly one of the variants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Probabilities(Vec<f64>),
    Correlations {
        #[serde(rename = "R")]
        r: Vec<f64>,
    },
    Werner {
        p: f64,
    },
    HighlySymmetric {
        p16: f64,
        v: f64,
        alpha: f64,
    },
    Symmetric(SymmetricParams),
}

impl StateSpec {
    pub fn build(&self) -> Result<GhzState> {
        let p = match self {
            StateSpec::Probabilities(p) => GhzProbabilities::from_slice(p)?,
            StateSpec::Correlations { r } => PauliCorrelations::from_slice(r)?.to_probabilities()?,
            StateSpec::Werner { p } => make_werner(*p)?,
            StateSpec::HighlySymmetric { p16, v, alpha } => {
                make_highly_symmetric(&HighlySymmetricParams::from_v_alpha(*p16, *v, *alpha)?)?
            }
            StateSpec::Symmetric(s) => make_symmetric(s)?,
        };
        Ok(GhzState::from_probabilities(p))
    }
}
