//! Pauli strings on four qubits and the GHZ basis.
//!
//! Qubit 1 is the most significant bit of a computational basis index, so
//! `|0001>` is index 1 and `|1000>` is index 8.

use num_complex::Complex64;
use std::sync::OnceLock;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

pub type PauliString = [Letter; 4];

use Letter::{I, X, Y, Z};

/// The fifteen correlation strings, in the order R_1 .. R_15.
pub const STRINGS: [PauliString; 15] = [
    [I, I, Z, Z],
    [I, Z, I, Z],
    [I, Z, Z, I],
    [Z, I, I, Z],
    [Z, I, Z, I],
    [Z, Z, I, I],
    [Z, Z, Z, Z],
    [X, X, X, X],
    [X, X, Y, Y],
    [X, Y, X, Y],
    [X, Y, Y, X],
    [Y, X, X, Y],
    [Y, X, Y, X],
    [Y, Y, X, X],
    [Y, Y, Y, Y],
];

pub fn string_name(s: &PauliString) -> String {
    s.iter()
        .map(|l| match l {
            I => 'I',
            X => 'X',
            Y => 'Y',
            Z => 'Z',
        })
        .collect()
}

#[inline]
fn bit(index: usize, qubit: usize) -> usize {
    (index >> (3 - qubit)) & 1
}

/// Applies a Pauli string to `|index>`, returning the phase and the image index.
pub fn apply(s: &PauliString, index: usize) -> (Complex64, usize) {
    let mut phase = Complex64::new(1.0, 0.0);
    let mut out = index;
    for (q, l) in s.iter().enumerate() {
        let b = bit(index, q);
        let mask = 1 << (3 - q);
        match l {
            I => {}
            X => out ^= mask,
            Y => {
                out ^= mask;
                // Y|0> = i|1>, Y|1> = -i|0>
                phase *= if b == 0 {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(0.0, -1.0)
                };
            }
            Z => {
                if b == 1 {
                    phase = -phase;
                }
            }
        }
    }
    (phase, out)
}

/// Dense 16x16 matrix of a Pauli string, row-major.
pub fn dense(s: &PauliString) -> Vec<Complex64> {
    let mut m = vec![Complex64::new(0.0, 0.0); 256];
    for col in 0..16 {
        let (ph, row) = apply(s, col);
        m[row * 16 + col] = ph;
    }
    m
}

/// A GHZ basis vector `(|low> + sign |15 - low>)/sqrt(2)` with `low < 8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GhzBasisVector {
    pub low: usize,
    pub high: usize,
    pub sign: i8,
}

impl GhzBasisVector {
    pub fn amplitudes(&self) -> [Complex64; 16] {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = [Complex64::new(0.0, 0.0); 16];
        v[self.low] = Complex64::new(r, 0.0);
        v[self.high] = Complex64::new(r * self.sign as f64, 0.0);
        v
    }

    /// 1-based matrix index of the block this vector lives in (1..=8).
    pub fn block(&self) -> usize {
        self.low + 1
    }
}

/// Basis vector `|GHZ_j>` for `j` in 1..=16.
///
/// `j - 1` is read as a four bit string; for `j <= 8` it is `0 x2 x3 x4` and the
/// state is `|0x2x3x4> + |1x2'x3'x4'>`, for `j > 8` it is `1 x2' x3' x4'` and the
/// relative sign is negative.
pub fn ghz_basis_vector(j: usize) -> crate::Result<GhzBasisVector> {
    if !(1..=16).contains(&j) {
        return Err(crate::Error::IndexOutOfRange {
            index: j,
            lo: 1,
            hi: 16,
        });
    }
    Ok(if j <= 8 {
        GhzBasisVector {
            low: j - 1,
            high: 16 - j,
            sign: 1,
        }
    } else {
        GhzBasisVector {
            low: 16 - j,
            high: j - 1,
            sign: -1,
        }
    })
}

/// `S[i][j] = <GHZ_{j+1}| P_{i+1} |GHZ_{j+1}>`; every entry is +1 or -1.
pub fn sign_matrix() -> &'static [[f64; 16]; 15] {
    static S: OnceLock<[[f64; 16]; 15]> = OnceLock::new();
    S.get_or_init(|| {
        let mut s = [[0.0; 16]; 15];
        for (i, p) in STRINGS.iter().enumerate() {
            for (j, row) in (1..=16).zip(0..) {
                let v = ghz_basis_vector(j).unwrap().amplitudes();
                let mut acc = Complex64::new(0.0, 0.0);
                for col in 0..16 {
                    if v[col].norm_sqr() == 0.0 {
                        continue;
                    }
                    let (ph, r) = apply(p, col);
                    acc += v[r].conj() * ph * v[col];
                }
                debug_assert!(acc.im.abs() < 1e-12);
                s[i][row] = acc.re.round();
            }
        }
        s
    })
}

/// Eigenvalue of a Z-type string on `|index>`; panics for strings with X or Y.
pub fn z_eigenvalue(s: &PauliString, index: usize) -> f64 {
    let mut e = 1.0;
    for (q, l) in s.iter().enumerate() {
        match l {
            I => {}
            Z => {
                if bit(index, q) == 1 {
                    e = -e;
                }
            }
            _ => panic!("z_eigenvalue called on a non-diagonal string"),
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_matrix_rows_are_orthogonal() {
        let s = sign_matrix();
        for a in 0..15 {
            for b in 0..15 {
                let dot: f64 = (0..16).map(|j| s[a][j] * s[b][j]).sum();
                let want = if a == b { 16.0 } else { 0.0 };
                assert_eq!(dot, want, "rows {a} {b}");
            }
            let sum: f64 = s[a].iter().sum();
            assert_eq!(sum, 0.0);
        }
    }

    #[test]
    fn ghz1_has_unit_xxxx() {
        let s = sign_matrix();
        assert_eq!(s[7][0], 1.0);
        assert_eq!(s[8][0], -1.0);
        assert_eq!(s[14][0], 1.0);
        for i in 0..7 {
            assert_eq!(s[i][0], 1.0);
        }
    }

    #[test]
    fn basis_vector_convention() {
        let g = ghz_basis_vector(2).unwrap();
        assert_eq!((g.low, g.high, g.sign), (1, 14, 1));
        let g = ghz_basis_vector(16).unwrap();
        assert_eq!((g.low, g.high, g.sign), (0, 15, -1));
        assert!(ghz_basis_vector(0).is_err());
        assert!(ghz_basis_vector(17).is_err());
    }

    #[test]
    fn y_action() {
        let (ph, out) = apply(&[Y, I, I, I], 0);
        assert_eq!(out, 8);
        assert_eq!(ph, Complex64::new(0.0, 1.0));
    }
}
