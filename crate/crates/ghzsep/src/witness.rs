//! Witness operators `M = sum_i M_i P_i` on the GHZ-diagonal Pauli sector and
//! their maxima over pure product states.

use crate::error::{Error, Result};
use crate::pauli::{self, Letter, STRINGS};
use crate::states::PauliCorrelations;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Coefficients `M_1..M_15`, in the same string order as the correlations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessParams {
    #[serde(rename = "M")]
    m: [f64; 15],
}

impl WitnessParams {
    pub fn new(m: [f64; 15]) -> Self {
        Self { m }
    }

    pub fn from_slice(m: &[f64]) -> Result<Self> {
        let arr: [f64; 15] = m.try_into().map_err(|_| Error::WrongLength {
            expected: 15,
            got: m.len(),
        })?;
        Ok(Self::new(arr))
    }

    /// Witness in the symmetric sector `M_9 = .. = M_14`.
    pub fn sector(diag: [f64; 7], m8: f64, m9: f64, m15: f64) -> Self {
        let mut m = [0.0; 15];
        m[..7].copy_from_slice(&diag);
        m[7] = m8;
        for x in &mut m[8..14] {
            *x = m9;
        }
        m[14] = m15;
        Self { m }
    }

    /// `M_i`, 1-based.
    pub fn get(&self, i: usize) -> f64 {
        self.m[i - 1]
    }

    pub fn as_array(&self) -> &[f64; 15] {
        &self.m
    }

    /// True when `M_9 = M_10 = .. = M_14` exactly.
    pub fn symmetric_sector(&self) -> bool {
        self.m[8..14].iter().all(|&x| x == self.m[8])
    }

    pub fn diag(&self) -> [f64; 7] {
        self.m[..7].try_into().unwrap()
    }

    pub fn m8(&self) -> f64 {
        self.m[7]
    }
    pub fn m9(&self) -> f64 {
        self.m[8]
    }
    pub fn m15(&self) -> f64 {
        self.m[14]
    }

    /// `Tr(rho M) = sum_i M_i R_i`.
    pub fn mean(&self, r: &PauliCorrelations) -> f64 {
        self.m.iter().zip(r.as_array()).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, f: f64) -> Self {
        let mut m = self.m;
        m.iter_mut().for_each(|x| *x *= f);
        Self { m }
    }
}

/// Pure product state `(x)_j [cos(theta_j/2)|0> + sin(theta_j/2) e^{i phi_j}|1>]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductState {
    pub theta: [f64; 4],
    pub phi: [f64; 4],
}

impl ProductState {
    /// Normalizes `phi` into `[0, 2pi)`; rejects `theta` outside `[0, pi]`.
    pub fn new(theta: [f64; 4], phi: [f64; 4]) -> Result<Self> {
        for (k, t) in theta.iter().enumerate() {
            if !(-1e-12..=PI + 1e-12).contains(t) {
                return Err(Error::param(format!("theta_{}", k + 1), *t, "must lie in [0, pi]"));
            }
        }
        let mut phi = phi;
        for f in phi.iter_mut() {
            if !f.is_finite() {
                return Err(Error::param("phi", *f, "must be finite"));
            }
            *f = f.rem_euclid(TAU);
        }
        Ok(Self {
            theta: theta.map(|t| t.clamp(0.0, PI)),
            phi,
        })
    }

    /// Equator state with the given phases (`theta = pi/2`).
    pub fn equatorial(phi: [f64; 4]) -> Self {
        Self::new([PI / 2.0; 4], phi).unwrap()
    }

    pub fn from_bloch(n: &[[f64; 3]; 4]) -> Self {
        let mut theta = [0.0; 4];
        let mut phi = [0.0; 4];
        for k in 0..4 {
            let [x, y, z] = n[k];
            let r = (x * x + y * y + z * z).sqrt();
            theta[k] = (z / r).clamp(-1.0, 1.0).acos();
            phi[k] = y.atan2(x).rem_euclid(TAU);
        }
        Self { theta, phi }
    }

    pub fn bloch(&self, k: usize) -> [f64; 3] {
        let (st, ct) = self.theta[k].sin_cos();
        let (sp, cp) = self.phi[k].sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn amplitudes(&self) -> [Complex64; 16] {
        let q: Vec<[Complex64; 2]> = (0..4)
            .map(|k| {
                let h = self.theta[k] / 2.0;
                [
                    Complex64::new(h.cos(), 0.0),
                    Complex64::from_polar(h.sin(), self.phi[k]),
                ]
            })
            .collect();
        let mut v = [Complex64::new(0.0, 0.0); 16];
        for (idx, out) in v.iter_mut().enumerate() {
            let mut a = Complex64::new(1.0, 0.0);
            for (k, qk) in q.iter().enumerate() {
                a *= qk[(idx >> (3 - k)) & 1];
            }
            *out = a;
        }
        v
    }
}

#[inline]
fn letter_value(l: Letter, n: &[f64; 3]) -> f64 {
    match l {
        Letter::I => 1.0,
        Letter::X => n[0],
        Letter::Y => n[1],
        Letter::Z => n[2],
    }
}

/// `<psi| sum_i M_i P_i |psi>` for Bloch vectors `n`.
pub(crate) fn mean_on_bloch(m: &[f64; 15], n: &[[f64; 3]; 4]) -> f64 {
    let mut acc = 0.0;
    for (mi, s) in m.iter().zip(STRINGS.iter()) {
        if *mi == 0.0 {
            continue;
        }
        let mut t = *mi;
        for q in 0..4 {
            t *= letter_value(s[q], &n[q]);
        }
        acc += t;
    }
    acc
}

/// `<psi|M|psi>` on a product state.
pub fn f_eval(s: &ProductState, w: &WitnessParams) -> f64 {
    let n = [s.bloch(0), s.bloch(1), s.bloch(2), s.bloch(3)];
    mean_on_bloch(&w.m, &n)
}

/// Phase-reduced coefficients: for fixed `phi_1, phi_2` the maximum of the
/// anti-diagonal part over `phi_3, phi_4` is
/// `g_1 = |(A1 c+ + A3 c-, A5 s+ - A7 s-)| + |(A2 c+ + A4 c-, A6 s+ - A8 s-)|`
/// with `c± = cos(phi_1 ± phi_2)`, `s± = sin(phi_1 ± phi_2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GPhaseCoefficients {
    pub a: [f64; 8],
}

impl GPhaseCoefficients {
    pub fn from_params(w: &WitnessParams) -> Self {
        let g = |i: usize| w.get(i);
        let (m8, m9, m10, m11, m12, m13, m14, m15) = (g(8), g(9), g(10), g(11), g(12), g(13), g(14), g(15));
        // normalized 4x4 Hadamard applied to (M8, -M9, -M14, M15) and (M10..M13)
        let a = [
            0.25 * (m8 - m9 - m14 + m15),
            0.25 * (m8 + m9 - m14 - m15),
            0.25 * (m8 - m9 + m14 - m15),
            0.25 * (m8 + m9 + m14 + m15),
            0.25 * (m10 + m11 + m12 + m13),
            0.25 * (m10 - m11 + m12 - m13),
            0.25 * (m10 + m11 - m12 - m13),
            0.25 * (m10 - m11 - m12 + m13),
        ];
        Self { a }
    }

    pub fn g1(&self, phi_plus: f64, phi_minus: f64) -> f64 {
        let a = &self.a;
        let (sp, cp) = phi_plus.sin_cos();
        let (sm, cm) = phi_minus.sin_cos();
        (a[0] * cp + a[2] * cm).hypot(a[4] * sp - a[6] * sm) + (a[1] * cp + a[3] * cm).hypot(a[5] * sp - a[7] * sm)
    }
}

/// Anti-diagonal part of `<psi|M|psi>` at unit transverse Bloch length:
/// `g(phi) = sum_{i>=8} M_i prod_k (cos|sin)(phi_k)`.
pub fn g_eval(w: &WitnessParams, phi: &[f64; 4]) -> f64 {
    let n: [[f64; 3]; 4] = phi.map(|f| [f.cos(), f.sin(), 0.0]);
    let mut m = *w.as_array();
    m[..7].iter_mut().for_each(|x| *x = 0.0);
    mean_on_bloch(&m, &n)
}

/// Breakdown of the maximum of `g` over phases in the symmetric sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GTilde {
    pub value: f64,
    /// `|h*|` when the interior stationary phase is admissible.
    pub stationary: Option<f64>,
    /// `max(|M8|, |M9|, |M15|)`
    pub endpoint: f64,
}

/// Maximum over phases of the sector anti-diagonal function, by candidate max.
///
/// With `m = M9` and `D = 6m - M8 - M15`, the stationary candidate is
/// `h* = (9m^2 - M8 M15) / D`, admissible when `C* = (3m - M15)/D` lies in `[0, 1]`.
pub fn g_tilde_detail(m8: f64, m9: f64, m15: f64) -> GTilde {
    let endpoint = m8.abs().max(m9.abs()).max(m15.abs());
    // p = 3m - M8, q = 3m - M15 give D = p + q and h* = 3m - pq/(p + q),
    // which stays accurate when D nearly cancels
    let (p, q) = (3.0 * m9 - m8, 3.0 * m9 - m15);
    let d = p + q;
    let scale = endpoint.max(f64::MIN_POSITIVE);
    let mut stationary = None;
    if m9 != 0.0 && d.abs() > 1e-14 * scale {
        let c = q / d;
        if (-1e-15..=1.0 + 1e-15).contains(&c) {
            stationary = Some((3.0 * m9 - p * c).abs());
        }
    }
    let value = stationary.map_or(endpoint, |h| h.max(endpoint));
    GTilde {
        value,
        stationary,
        endpoint,
    }
}

pub fn g_tilde(m8: f64, m9: f64, m15: f64) -> f64 {
    g_tilde_detail(m8, m9, m15).value
}

/// Closed region bounded by `x = 3`, `y = 3` and the two curves
/// `y = 3 + (9/x - x)/2`, `x = 3 + (9/y - y)/2` on `[-3, -1]`.
pub fn delta_region_contains(x: f64, y: f64) -> bool {
    let curve = |t: f64| 3.0 + 0.5 * (9.0 / t - t);
    if x > 3.0 || y > 3.0 {
        return false;
    }
    if x < -1.0 && (x < -3.0 || y < curve(x)) {
        return false;
    }
    if y < -1.0 && (y < -3.0 || x < curve(y)) {
        return false;
    }
    true
}

/// Polyhedron vertex for diagonal block `i` in 1..=8: the coordinates
/// `-<b|P_k|b>` of the seven Z-type strings on `|b>`, `b = i - 1`.
///
/// In `(j1, j2, j3)` form this is `(j1, j2, -j1 j2, j3, -j1 j3, -j2 j3, j1 j2 j3)`.
pub fn polyhedron_vertex(i: usize) -> [f64; 7] {
    assert!((1..=8).contains(&i));
    let mut v = [0.0; 7];
    for (k, s) in STRINGS[..7].iter().enumerate() {
        v[k] = -pauli::z_eigenvalue(s, i - 1);
    }
    v
}

/// Barycentric weights of `m` with respect to the eight vertices. Because the
/// vertex coordinates are the nontrivial characters of `{±1}^3`, the weights are
/// `lambda_i = (1 + m . P_i) / 8`.
pub fn polyhedron_weights(m: &[f64; 7]) -> [f64; 8] {
    let mut l = [0.0; 8];
    for (i, li) in l.iter_mut().enumerate() {
        let v = polyhedron_vertex(i + 1);
        *li = (1.0 + m.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>()) / 8.0;
    }
    l
}

pub const POLYHEDRON_TOL: f64 = 1e-12;

pub fn polyhedron_contains(m: &[f64; 7]) -> bool {
    polyhedron_weights(m).iter().all(|&l| l >= -POLYHEDRON_TOL)
}

/// Numeric search settings for the product-state maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaOptions {
    /// Grid starts per polar angle (the search uses `grid^3` starts).
    pub grid: usize,
    pub max_iter: usize,
    /// Stop when the compass step falls below this.
    pub step_tol: f64,
    /// Random starts for the general (non-sector) fallback.
    pub starts: usize,
    pub seed: u64,
}

impl Default for LambdaOptions {
    fn default() -> Self {
        Self {
            grid: 11,
            max_iter: 500,
            step_tol: 1e-12,
            starts: 64,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMethod {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaResult {
    pub value: f64,
    pub method: LambdaMethod,
}

/// Sector maximum after optimizing phases and `theta_4`:
/// `f2 = M6 z1z2 + M5 z1z3 + M3 z2z3 + sqrt([M4 z1 + M2 z2 + M1 z3 + M7 z1z2z3]^2 + (g t1t2t3)^2)`.
pub fn f2(m: &[f64; 7], gt: f64, theta: &[f64; 3]) -> f64 {
    let (t1, z1) = theta[0].sin_cos();
    let (t2, z2) = theta[1].sin_cos();
    let (t3, z3) = theta[2].sin_cos();
    let lin = m[3] * z1 + m[1] * z2 + m[0] * z3 + m[6] * z1 * z2 * z3;
    let tr = gt * t1 * t2 * t3;
    m[5] * z1 * z2 + m[4] * z1 * z3 + m[2] * z2 * z3 + lin.hypot(tr)
}

/// Grid multistart plus compass refinement of [`f2`] over `[0, pi]^3`.
pub fn maximize_f2(m: &[f64; 7], gt: f64, opts: &LambdaOptions) -> f64 {
    let g = opts.grid.max(2);
    let h = PI / (g - 1) as f64;
    let mut best = f64::NEG_INFINITY;
    for a in 0..g {
        for b in 0..g {
            for c in 0..g {
                let mut x = [a as f64 * h, b as f64 * h, c as f64 * h];
                let mut fx = f2(m, gt, &x);
                let mut step = 0.5 * h;
                for _ in 0..opts.max_iter {
                    if step < opts.step_tol {
                        break;
                    }
                    let mut moved = false;
                    for k in 0..3 {
                        for dir in [1.0, -1.0] {
                            let mut y = x;
                            y[k] = (y[k] + dir * step).clamp(0.0, PI);
                            let fy = f2(m, gt, &y);
                            if fy > fx {
                                x = y;
                                fx = fy;
                                moved = true;
                            }
                        }
                    }
                    if !moved {
                        step *= 0.5;
                    }
                }
                best = best.max(fx);
            }
        }
    }
    best
}

/// Exact block-coordinate ascent on Bloch vectors: `<psi|M|psi>` is linear in
/// each qubit's Bloch vector, so each update sets it to the normalized gradient.
pub(crate) fn bloch_ascent(m: &[f64; 15], start: [[f64; 3]; 4], max_sweeps: usize) -> f64 {
    let mut n = start;
    let mut f = mean_on_bloch(m, &n);
    for _ in 0..max_sweeps {
        for k in 0..4 {
            let mut grad = [0.0; 3];
            for (mi, s) in m.iter().zip(STRINGS.iter()) {
                if *mi == 0.0 || s[k] == Letter::I {
                    continue;
                }
                let mut t = *mi;
                for q in 0..4 {
                    if q != k {
                        t *= letter_value(s[q], &n[q]);
                    }
                }
                match s[k] {
                    Letter::X => grad[0] += t,
                    Letter::Y => grad[1] += t,
                    Letter::Z => grad[2] += t,
                    Letter::I => {}
                }
            }
            let norm = (grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2]).sqrt();
            if norm > 0.0 {
                n[k] = grad.map(|g| g / norm);
            }
        }
        let fnew = mean_on_bloch(m, &n);
        let done = fnew - f <= 1e-15 * f.abs().max(1.0);
        f = f.max(fnew);
        if done {
            break;
        }
    }
    f
}

/// Largest eigenvalue of the diagonal (Z-type) part, attained on a basis state.
fn diagonal_max(m: &[f64; 7]) -> f64 {
    (0..16)
        .map(|b| {
            m.iter()
                .zip(STRINGS[..7].iter())
                .map(|(mk, s)| mk * pauli::z_eigenvalue(s, b))
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `Lambda = max_{product psi} <psi|M|psi>`.
///
/// In the symmetric sector with `M_1..7 / g~` inside the polyhedron this is
/// exactly `g~`; outside it `f2` is maximized numerically (the result is a
/// lower bound). Witnesses outside the sector use a multistart ascent over all
/// eight angles.
pub fn lambda_product_max(w: &WitnessParams, opts: &LambdaOptions) -> LambdaResult {
    if !w.symmetric_sector() {
        return LambdaResult {
            value: crate::oracle::numeric_lambda(w, opts.starts, 2000, opts.seed),
            method: LambdaMethod::Numeric,
        };
    }
    let gt = g_tilde(w.m8(), w.m9(), w.m15());
    let diag = w.diag();
    if gt == 0.0 {
        return LambdaResult {
            value: diagonal_max(&diag),
            method: LambdaMethod::Analytic,
        };
    }
    let scaled = diag.map(|x| x / gt);
    if polyhedron_contains(&scaled) {
        return LambdaResult {
            value: gt,
            method: LambdaMethod::Analytic,
        };
    }
    LambdaResult {
        value: maximize_f2(&diag, gt, opts).max(gt),
        method: LambdaMethod::Numeric,
    }
}

/// `Tr(rho W) = Lambda - sum_i M_i R_i` for `W = Lambda I - M`.
pub fn witness_value(r: &PauliCorrelations, w: &WitnessParams) -> f64 {
    witness_value_with(r, w, &LambdaOptions::default())
}

pub fn witness_value_with(r: &PauliCorrelations, w: &WitnessParams, opts: &LambdaOptions) -> f64 {
    lambda_product_max(w, opts).value - w.mean(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_tilde_examples() {
        assert!((g_tilde(1.0, -1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((g_tilde(0.0, 1.0, 0.0) - 1.5).abs() < 1e-15);
        assert!((g_tilde(3.0, 1.0, 3.0) - 3.0).abs() < 1e-15);
        assert_eq!(g_tilde(2.0, 0.0, -0.5), 2.0);
    }

    #[test]
    fn delta_region_examples() {
        assert!(delta_region_contains(0.0, 0.0));
        assert!(delta_region_contains(-1.0, -1.0));
        assert!(!delta_region_contains(4.0, 0.0));
        assert!(delta_region_contains(3.0, 3.0));
        assert!(delta_region_contains(-3.0, 3.0));
        assert!(!delta_region_contains(-2.0, -2.0));
    }

    #[test]
    fn polyhedron_center_and_vertex() {
        let l = polyhedron_weights(&[0.0; 7]);
        assert!(l.iter().all(|&x| (x - 0.125).abs() < 1e-15));
        let v = polyhedron_vertex(3);
        let l = polyhedron_weights(&v);
        for (i, x) in l.iter().enumerate() {
            let want = if i == 2 { 1.0 } else { 0.0 };
            assert!((x - want).abs() < 1e-15);
        }
        assert!(!polyhedron_contains(&[2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn vertex_matches_j_form() {
        for i in 1..=8usize {
            let b = i - 1;
            let z = |k: usize| if (b >> (3 - k)) & 1 == 1 { -1.0 } else { 1.0 };
            let (j1, j2, j3) = (-z(2) * z(3), -z(1) * z(3), -z(3));
            let want = [j1, j2, -j1 * j2, j3, -j1 * j3, -j2 * j3, j1 * j2 * j3];
            assert_eq!(polyhedron_vertex(i), want);
        }
    }

    #[test]
    fn f_eval_basics() {
        let w = WitnessParams::sector([1.0; 7], 0.3, -0.2, 0.5);
        let zero = ProductState::new([0.0; 4], [1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((f_eval(&zero, &w) - 7.0).abs() < 1e-14);
        let mut m = [0.0; 15];
        m[7] = 1.0;
        let plus = ProductState::equatorial([0.0; 4]);
        assert!((f_eval(&plus, &WitnessParams::new(m)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bloch_round_trip() {
        let s = ProductState::new([0.3, 1.2, 2.9, 0.0], [0.1, 6.0, 3.3, 0.0]).unwrap();
        let n = [s.bloch(0), s.bloch(1), s.bloch(2), s.bloch(3)];
        let t = ProductState::from_bloch(&n);
        for k in 0..3 {
            assert!((t.theta[k] - s.theta[k]).abs() < 1e-12);
            assert!((t.phi[k] - s.phi[k]).abs() < 1e-12);
        }
    }
}
