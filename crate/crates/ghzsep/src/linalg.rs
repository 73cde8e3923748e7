//! Small dense matrices and a cyclic Jacobi eigensolver.

use num_complex::Complex64;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_vec(n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.n + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.n + c] += v;
    }

    /// `self += w |psi><psi|`
    pub fn add_projector(&mut self, w: f64, psi: &[Complex64]) {
        assert_eq!(psi.len(), self.n);
        for r in 0..self.n {
            if psi[r].norm_sqr() == 0.0 {
                continue;
            }
            let a = psi[r] * w;
            for c in 0..self.n {
                self.data[r * self.n + c] += a * psi[c].conj();
            }
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest |M - M^dagger| entry.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.n {
            for c in 0..self.n {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.re).collect()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }
}

/// Eigenvalues of a real symmetric `n x n` matrix (row-major), ascending.
///
/// Cyclic Jacobi sweeps until the off-diagonal Frobenius norm drops below
/// `1e-13` times the matrix norm (or 100 sweeps).
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let norm = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    off += m[p * n + q] * m[p * n + q];
                }
            }
        }
        if off.sqrt() < 1e-13 * norm.max(1.0) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Eigenvalues of a Hermitian matrix via the real `2n` embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of `m` doubled.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.dim();
    let big = 2 * n;
    let mut e = vec![0.0; big * big];
    for r in 0..n {
        for c in 0..n {
            let z = m.get(r, c);
            e[r * big + c] = z.re;
            e[r * big + c + n] = -z.im;
            e[(r + n) * big + c] = z.im;
            e[(r + n) * big + c + n] = z.re;
        }
    }
    let all = symmetric_eigenvalues(&e, big);
    all.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}
