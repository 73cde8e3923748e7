//! Brute-force cross-checks for the closed forms: grid and multistart
//! maximizers, a randomized witness search, and dense partial transposes.
//!
//! Everything here is deterministic for a fixed seed and grid.

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::matching::ppt_criterion_with_tol;
use crate::states::{GhzProbabilities, GhzState, PauliCorrelations};
use crate::witness::{
    bloch_ascent, g_tilde, maximize_f2, polyhedron_vertex, GPhaseCoefficients, LambdaOptions, WitnessParams,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Independent generator for trial `i` of a seeded suite.
pub fn trial_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(i as u64 + 1);
    r
}

/// Maximizes `f` over the plane by a coarse grid on `[0, span)^2` followed by
/// shrinking 11x11 windows around the best `keep` grid points.
fn zoom_max2<F: Fn(f64, f64) -> f64>(f: F, n: usize, span: f64, keep: usize) -> (f64, [f64; 2]) {
    let h = span / n as f64;
    let mut pts: Vec<(f64, [f64; 2])> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = [i as f64 * h, j as f64 * h];
            pts.push((f(x[0], x[1]), x));
        }
    }
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    pts.truncate(keep);
    let mut best = (f64::NEG_INFINITY, [0.0; 2]);
    for (mut fv, mut c) in pts {
        let mut w = h;
        while w > 1e-13 {
            let (f0, c0) = (fv, c);
            for a in -5..=5 {
                for b in -5..=5 {
                    let x = [c0[0] + a as f64 * w / 5.0, c0[1] + b as f64 * w / 5.0];
                    let v = f(x[0], x[1]);
                    if v > fv {
                        fv = v;
                        c = x;
                    }
                }
            }
            let _ = f0;
            w *= 0.5;
        }
        if fv > best.0 {
            best = (fv, c);
        }
    }
    best
}

/// Largest singular value of a real 2x2 matrix `[[a, b], [c, d]]`.
fn sigma_max(a: f64, b: f64, c: f64, d: f64) -> f64 {
    0.5 * ((a + d).hypot(b - c) + (a - d).hypot(b + c))
}

/// Maximum over all four phases of the anti-diagonal function `g`.
///
/// Phases 3 and 4 enter bilinearly through unit vectors, so for fixed
/// `(phi_1, phi_2)` their optimum is a 2x2 singular value; the remaining
/// plane is gridded and refined. With the sector flag the phase-reduced
/// `(phi_+, phi_-)` form is maximized instead.
pub fn numeric_g_max(w: &WitnessParams, grid: usize) -> f64 {
    let n = grid.max(16);
    if w.symmetric_sector() {
        let a = GPhaseCoefficients::from_params(w);
        return zoom_max2(|p, q| a.g1(p, q), n, TAU, 8).0;
    }
    let m = |i: usize| w.get(i);
    let f = |p1: f64, p2: f64| {
        let (s1, c1) = p1.sin_cos();
        let (s2, c2) = p2.sin_cos();
        sigma_max(
            m(8) * c1 * c2 + m(14) * s1 * s2,
            m(10) * c1 * s2 + m(12) * s1 * c2,
            m(11) * c1 * s2 + m(13) * s1 * c2,
            m(9) * c1 * c2 + m(15) * s1 * s2,
        )
    };
    zoom_max2(f, n, TAU, 8).0
}

fn random_unit3<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return v.map(|x| x / n);
        }
    }
}

/// `Lambda = max <psi|M|psi>` over product states by multistart exact block
/// ascent on the four Bloch vectors. Deterministic starts (all sixteen
/// `±z` patterns and the all-`x` state) are followed by `starts` random ones.
pub fn numeric_lambda(w: &WitnessParams, starts: usize, iters: usize, seed: u64) -> f64 {
    let m = w.as_array();
    let mut best = f64::NEG_INFINITY;
    for b in 0..16 {
        let mut n = [[0.0; 3]; 4];
        for (k, nk) in n.iter_mut().enumerate() {
            nk[2] = if (b >> k) & 1 == 1 { -1.0 } else { 1.0 };
            // slight tilt so the ascent can leave a stationary pole
            nk[0] = 1e-3;
        }
        best = best.max(bloch_ascent(m, n, iters));
    }
    best = best.max(bloch_ascent(m, [[1.0, 0.0, 0.0]; 4], iters));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..starts {
        let n = [
            random_unit3(&mut rng),
            random_unit3(&mut rng),
            random_unit3(&mut rng),
            random_unit3(&mut rng),
        ];
        best = best.max(bloch_ascent(m, n, iters));
    }
    best
}

/// `R~` by direct maximization of `|M . R| / g~(M)` over sector directions.
///
/// Starts from a grid over `(M8, M15) in [-40, 40]^2` at `M9 = 1` together
/// with the `M9 = 0` circle, then refines the best starts on the sphere.
pub fn numeric_r_tilde(r8: f64, rp9: f64, r15: f64, grid: usize) -> f64 {
    let n = grid.max(3);
    let obj = |m8: f64, m9: f64, m15: f64| {
        let g = g_tilde(m8, m9, m15);
        if g > 0.0 {
            (m8 * r8 + m9 * rp9 + m15 * r15).abs() / g
        } else {
            0.0
        }
    };
    // sphere coordinates: M9 = cos a, M8 = sin a cos b, M15 = sin a sin b
    let sph = |a: f64, b: f64| {
        let (sa, ca) = a.sin_cos();
        let (sb, cb) = b.sin_cos();
        obj(sa * cb, ca, sa * sb)
    };
    let mut starts: Vec<(f64, [f64; 2])> = Vec::with_capacity(n * n + 4 * n);
    for i in 0..n {
        let x = -40.0 + 80.0 * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let y = -40.0 + 80.0 * j as f64 / (n - 1) as f64;
            let r = (1.0 + x * x + y * y).sqrt();
            let a = (1.0 / r).acos();
            let b = y.atan2(x);
            starts.push((obj(x, 1.0, y), [a, b]));
        }
    }
    for k in 0..4 * n {
        let b = TAU * k as f64 / (4 * n) as f64;
        starts.push((sph(0.5 * PI, b), [0.5 * PI, b]));
    }
    starts.sort_by(|a, b| b.0.total_cmp(&a.0));
    starts.truncate(10);
    let mut best = f64::NEG_INFINITY;
    for (mut fv, mut c) in starts {
        let mut w = 0.05;
        while w > 1e-13 {
            let c0 = c;
            for a in -5..=5 {
                for b in -5..=5 {
                    let x = [c0[0] + a as f64 * w / 5.0, c0[1] + b as f64 * w / 5.0];
                    let v = sph(x[0], x[1]);
                    if v > fv {
                        fv = v;
                        c = x;
                    }
                }
            }
            w *= 0.5;
        }
        let (fp, _) = nelder_mead_max(&|x: [f64; 2]| sph(x[0], x[1]), c, 1e-2);
        best = best.max(fv).max(fp);
    }
    best
}

/// Nelder-Mead maximization in the plane with restarts from the incumbent at
/// shrinking simplex sizes; the restarts let it keep following kinked ridges.
fn nelder_mead_max<F: Fn([f64; 2]) -> f64>(f: &F, x0: [f64; 2], size: f64) -> (f64, [f64; 2]) {
    let mut best = (f(x0), x0);
    let mut scale = size;
    while scale > 1e-12 {
        let before = best.0;
        let c = best.1;
        let mut s: Vec<(f64, [f64; 2])> = [c, [c[0] + scale, c[1]], [c[0], c[1] + scale]]
            .into_iter()
            .map(|x| (f(x), x))
            .collect();
        for _ in 0..400 {
            s.sort_by(|a, b| b.0.total_cmp(&a.0));
            let spread = (s[0].1[0] - s[2].1[0])
                .abs()
                .max((s[0].1[1] - s[2].1[1]).abs())
                .max((s[1].1[0] - s[2].1[0]).abs().max((s[1].1[1] - s[2].1[1]).abs()));
            if spread < 1e-14 {
                break;
            }
            let m = [0.5 * (s[0].1[0] + s[1].1[0]), 0.5 * (s[0].1[1] + s[1].1[1])];
            let worst = s[2];
            let at = |t: f64| [m[0] + t * (m[0] - worst.1[0]), m[1] + t * (m[1] - worst.1[1])];
            let xr = at(1.0);
            let fr = f(xr);
            if fr > s[0].0 {
                let xe = at(2.0);
                let fe = f(xe);
                s[2] = if fe > fr { (fe, xe) } else { (fr, xr) };
            } else if fr > s[1].0 {
                s[2] = (fr, xr);
            } else {
                let xc = if fr > worst.0 { at(0.5) } else { at(-0.5) };
                let fc = f(xc);
                if fc > worst.0.max(fr) {
                    s[2] = (fc, xc);
                } else {
                    let b = s[0].1;
                    for k in 1..3 {
                        let x = [0.5 * (b[0] + s[k].1[0]), 0.5 * (b[1] + s[k].1[1])];
                        s[k] = (f(x), x);
                    }
                }
            }
        }
        s.sort_by(|a, b| b.0.total_cmp(&a.0));
        if s[0].0 > best.0 {
            best = s[0];
        }
        if best.0 - before <= 1e-15 * best.0.abs().max(1.0) {
            scale *= 0.1;
        }
    }
    best
}

/// Dense partial transpose over the qubits whose bits are set in `mask`
/// (qubit 1 is bit 3).
pub fn dense_partial_transpose(m: &CMatrix, mask: usize) -> CMatrix {
    let n = m.dim();
    let mut out = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let ip = (i & !mask) | (j & mask);
            let jp = (j & !mask) | (i & mask);
            out.set(ip, jp, m.get(i, j));
        }
    }
    out
}

/// The seven bipartitions, each given by the side containing qubit 1.
pub const CANONICAL_CUTS: [usize; 7] = [8, 9, 10, 11, 12, 13, 14];

/// Eigenvalues (ascending) of the partial transpose over `mask`.
///
/// The transpose of an X-shaped matrix is X-shaped again, so the spectrum
/// comes from the eight 2x2 blocks on `{b, 15 - b}`.
pub fn partial_transpose_spectrum(state: &GhzState, mask: usize) -> Result<[f64; 16]> {
    if mask == 0 || mask >= 15 {
        return Err(Error::param(
            "cut",
            mask as f64,
            "must be a nontrivial bipartition mask in 1..=14",
        ));
    }
    let pt = dense_partial_transpose(&state.p.dense(), mask);
    let mut ev = [0.0; 16];
    for b in 0..8 {
        let c = 15 - b;
        let (p, q) = (pt.get(b, b).re, pt.get(c, c).re);
        let x: Complex64 = pt.get(b, c);
        let mid = 0.5 * (p + q);
        let rad = (0.5 * (p - q)).hypot(x.norm());
        ev[2 * b] = mid - rad;
        ev[2 * b + 1] = mid + rad;
    }
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Smallest partial-transpose eigenvalue over the seven bipartitions.
pub fn min_pt_eigenvalue(state: &GhzState) -> f64 {
    CANONICAL_CUTS
        .iter()
        .map(|&c| partial_transpose_spectrum(state, c).unwrap()[0])
        .fold(f64::INFINITY, f64::min)
}

fn dirichlet<R: Rng, const N: usize>(rng: &mut R) -> [f64; N] {
    let mut x = [0.0; N];
    for v in x.iter_mut() {
        *v = Exp1.sample(rng);
    }
    let s: f64 = x.iter().sum();
    x.map(|v| v / s)
}

/// GHZ-diagonal state with flat-Dirichlet weights.
pub fn random_ghz_state<R: Rng>(rng: &mut R) -> GhzState {
    GhzState::from_probabilities(GhzProbabilities::new(dirichlet::<_, 16>(rng)).unwrap())
}

/// Permutation-symmetric state: flat Dirichlet over the six orbits, each
/// orbit's mass split evenly among its members.
pub fn random_symmetric_state<R: Rng>(rng: &mut R) -> GhzState {
    let c: [f64; 6] = dirichlet(rng);
    let s = crate::states::SymmetricParams {
        p1: c[0],
        p2: c[1] / 4.0,
        p4: c[2] / 3.0,
        p13: c[3] / 3.0,
        p15: c[4] / 4.0,
        p16: c[5],
    };
    GhzState::from_probabilities(crate::states::make_symmetric(&s).unwrap())
}

/// Sector witness with every free entry uniform on `[-1, 1]`.
pub fn random_sector_witness<R: Rng>(rng: &mut R) -> WitnessParams {
    let mut d = [0.0; 7];
    for v in d.iter_mut() {
        *v = rng.random_range(-1.0..=1.0);
    }
    WitnessParams::sector(
        d,
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
    )
}

/// Convex combination of polyhedron vertices with flat-Dirichlet weights.
pub fn random_polyhedron_point<R: Rng>(rng: &mut R) -> [f64; 7] {
    combine(&dirichlet::<_, 8>(rng))
}

fn combine(l: &[f64; 8]) -> [f64; 7] {
    let mut m = [0.0; 7];
    for (i, li) in l.iter().enumerate() {
        let v = polyhedron_vertex(i + 1);
        for k in 0..7 {
            m[k] += li * v[k];
        }
    }
    m
}

/// Outcome of the randomized witness search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub l_best: f64,
    pub witness: Option<WitnessParams>,
    /// Round at which each improvement happened, with the new record.
    pub improvements: Vec<(usize, f64)>,
}

fn sector_mean(r: &PauliCorrelations, diag: &[f64; 7], a: &[f64; 3]) -> f64 {
    diag.iter().enumerate().map(|(i, d)| d * r.get(i + 1)).sum::<f64>()
        + a[0] * r.get(8)
        + a[1] * r.rp9()
        + a[2] * r.get(15)
}

/// Randomized search for the witness ratio `L = Lambda / Tr(rho M)` over
/// sector witnesses, recording the smallest value seen.
///
/// Each round draws an anti-diagonal direction (uniform on the sphere or a
/// log-scale perturbation of the record holder) and diagonal weights
/// (Dirichlet, a pull toward a vertex, or a bare vertex), computes `Lambda`
/// and updates the record. Every drawn direction is also scored with each
/// polyhedron vertex as its diagonal, since all of them share `Lambda = g~`. A small share of rounds places the diagonal
/// outside the polyhedron, where `Lambda` is found numerically.
pub fn numeric_matched_witness(state: &GhzState, rounds: usize, seed: u64) -> WitnessSearch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = &state.r;
    let f2_opts = LambdaOptions {
        grid: 5,
        max_iter: 300,
        step_tol: 1e-10,
        ..LambdaOptions::default()
    };
    let mut out = WitnessSearch {
        l_best: f64::INFINITY,
        witness: None,
        improvements: Vec::new(),
    };
    let mut best_dir = [0.0; 3];
    let mut best_l = [0.125; 8];
    for round in 0..rounds {
        let dir = if out.witness.is_none() || rng.random_bool(0.5) {
            random_unit3(&mut rng)
        } else {
            let sigma = 10f64.powf(rng.random_range(-4.0..0.0));
            let e = random_unit3(&mut rng);
            let v = [0, 1, 2].map(|k| best_dir[k] + sigma * e[k]);
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            v.map(|x| x / n)
        };
        let lam: [f64; 8] = match rng.random_range(0..10) {
            0..=3 => dirichlet(&mut rng),
            4..=6 => {
                let k = rng.random_range(0..8);
                let t = 10f64.powf(rng.random_range(-3.0..0.0));
                let mut l = best_l.map(|x| (1.0 - t) * x);
                l[k] += t;
                l
            }
            _ => {
                let mut l = [0.0; 8];
                l[rng.random_range(0..8)] = 1.0;
                l
            }
        };
        let gt = g_tilde(dir[0], dir[1], dir[2]);
        if gt <= 0.0 {
            continue;
        }
        let outside = rng.random_bool(0.02);
        let scale = if outside { rng.random_range(1.0..1.5) } else { 1.0 };
        // the drawn diagonal, plus each polyhedron vertex (same Lambda = g~)
        let mut candidates = vec![lam];
        for k in 0..8 {
            let mut e = [0.0; 8];
            e[k] = 1.0;
            candidates.push(e);
        }
        for (ci, lam) in candidates.into_iter().enumerate() {
            let out_here = outside && ci == 0;
            let s = if out_here { scale } else { 1.0 };
            let diag = combine(&lam).map(|x| x * gt * s);
            let t = sector_mean(r, &diag, &dir);
            if t <= 0.0 {
                continue;
            }
            let lambda = if out_here {
                maximize_f2(&diag, gt, &f2_opts).max(gt)
            } else {
                gt
            };
            let l = lambda / t;
            if l < out.l_best {
                out.l_best = l;
                out.witness = Some(WitnessParams::sector(diag, dir[0], dir[1], dir[2]));
                out.improvements.push((round, l));
                best_dir = dir;
                if !out_here {
                    best_l = lam;
                }
            }
        }
    }
    out
}

/// Worst-case summary of one oracle suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckSummary {
    fn from_residuals(name: &str, residuals: &[f64], tolerance: f64) -> Self {
        let failures = residuals.iter().filter(|r| !(**r <= tolerance)).count();
        let worst = if residuals.is_empty() {
            0.0
        } else {
            residuals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        };
        Self {
            name: name.into(),
            trials: residuals.len(),
            failures,
            worst_residual: worst,
            tolerance,
            passed: failures == 0,
        }
    }
}

/// Closed-form `g~` against [`numeric_g_max`] on random sector witnesses.
pub fn check_gtilde(trials: usize, seed: u64, grid: usize) -> CheckSummary {
    let res: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let w = random_sector_witness(&mut trial_rng(seed, i));
            (g_tilde(w.m8(), w.m9(), w.m15()) - numeric_g_max(&w, grid)).abs()
        })
        .collect();
    CheckSummary::from_residuals("gtilde", &res, 1e-6)
}

/// Product-state maximum: equals `g~` inside the polyhedron, and exceeds it
/// at vertices scaled by 1.5. `outside` trials use the second test.
pub fn check_lambda(inside: usize, outside: usize, seed: u64) -> Vec<CheckSummary> {
    let res_in: Vec<f64> = (0..inside)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let a: [f64; 3] = [0, 1, 2].map(|_| rng.random_range(-1.0..=1.0));
            let gt = g_tilde(a[0], a[1], a[2]);
            let d = random_polyhedron_point(&mut rng).map(|x| x * gt);
            let w = WitnessParams::sector(d, a[0], a[1], a[2]);
            (numeric_lambda(&w, 32, 2000, seed ^ i as u64) - gt).abs()
        })
        .collect();
    let res_out: Vec<f64> = (0..outside)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, inside + i);
            let a: [f64; 3] = [0, 1, 2].map(|_| rng.random_range(-1.0..=1.0));
            let gt = g_tilde(a[0], a[1], a[2]);
            let v = polyhedron_vertex(rng.random_range(1..=8)).map(|x| 1.5 * x * gt);
            let w = WitnessParams::sector(v, a[0], a[1], a[2]);
            // positive when the gap above g~ is smaller than required
            gt + 1e-4 - numeric_lambda(&w, 32, 2000, seed ^ i as u64)
        })
        .collect();
    vec![
        CheckSummary::from_residuals("lambda-inside", &res_in, 1e-5),
        CheckSummary::from_residuals("lambda-outside", &res_out, 0.0),
    ]
}

/// Random `(R8, R'9, R15)` triple; every `zero_every`-th trial has `R'9 = 0`.
pub fn random_rtilde_input<R: Rng>(rng: &mut R, zero_rp9: bool) -> (f64, f64, f64) {
    let r8 = rng.random_range(-1.0..=1.0);
    let r15 = rng.random_range(-1.0..=1.0);
    let rp9 = if zero_rp9 { 0.0 } else { rng.random_range(-3.0..=3.0) };
    (r8, rp9, r15)
}

/// Closed-form `R~` against [`numeric_r_tilde`]; one trial in twenty has `R'9 = 0`.
pub fn check_rtilde(trials: usize, seed: u64, grid: usize) -> CheckSummary {
    let res: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (r8, rp9, r15) = random_rtilde_input(&mut trial_rng(seed, i), i % 20 == 0);
            (crate::matching::r_tilde(r8, rp9, r15).value - numeric_r_tilde(r8, rp9, r15, grid)).abs()
        })
        .collect();
    CheckSummary::from_residuals("rtilde", &res, 1e-6)
}

/// Element-form PPT test against dense partial-transpose spectra over all
/// seven cuts; the residual is 1 for every disagreement.
pub fn check_ppt(trials: usize, seed: u64) -> CheckSummary {
    let res: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = random_ghz_state(&mut trial_rng(seed, i));
            let by_elements = ppt_criterion_with_tol(&s, 1e-10).holds;
            let by_spectrum = min_pt_eigenvalue(&s) >= -1e-10;
            if by_elements == by_spectrum {
                0.0
            } else {
                1.0
            }
        })
        .collect();
    CheckSummary::from_residuals("ppt", &res, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_max_diagonal() {
        assert!((sigma_max(2.0, 0.0, 0.0, -3.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn trial_rngs_differ() {
        let a: f64 = trial_rng(1, 0).random();
        let b: f64 = trial_rng(1, 1).random();
        assert_ne!(a, b);
    }

    #[test]
    fn pt_rejects_bad_mask() {
        let s = GhzState::from_probabilities(GhzProbabilities::uniform());
        assert!(partial_transpose_spectrum(&s, 15).is_err());
        assert!(partial_transpose_spectrum(&s, 0).is_err());
    }
}
