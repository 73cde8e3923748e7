#![allow(dead_code)]

use ghzsep::linalg::CMatrix;
use ghzsep::pauli::{dense, PauliString};
use num_complex::Complex64;
use proptest::prelude::*;

/// `Tr(m P)` by dense contraction.
pub fn expectation(m: &CMatrix, s: &PauliString) -> Complex64 {
    let p = dense(s);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..16 {
        for j in 0..16 {
            acc += m.get(i, j) * p[j * 16 + i];
        }
    }
    acc
}

/// `<psi| m |psi>`.
pub fn sandwich(m: &[Complex64], psi: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..16 {
        for j in 0..16 {
            acc += psi[i].conj() * m[i * 16 + j] * psi[j];
        }
    }
    acc
}

/// Strategy for a probability vector of length 16 (normalized positive weights).
pub fn probabilities() -> impl Strategy<Value = [f64; 16]> {
    prop::array::uniform16(0.0f64..1.0).prop_filter_map("zero mass", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| w.map(|x| x / s))
    })
}

pub fn symmetric_weights() -> impl Strategy<Value = [f64; 6]> {
    prop::array::uniform6(0.0f64..1.0).prop_filter_map("zero mass", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| w.map(|x| x / s))
    })
}
