mod common;

use approx::assert_abs_diff_eq;
use ghzsep::boundaries::{curved_plus_y, hs_point_state};
use ghzsep::matching::*;
use ghzsep::oracle::numeric_r_tilde;
use ghzsep::states::*;
use ghzsep::witness::{g_tilde, lambda_product_max, witness_value, LambdaOptions};
use proptest::prelude::*;

fn werner(p: f64) -> GhzState {
    GhzState::from_probabilities(make_werner(p).unwrap())
}

fn from_r(r8: f64, r9: f64, r15: f64) -> GhzState {
    let mut r = [0.0; 15];
    r[7] = r8;
    for x in &mut r[8..14] {
        *x = r9;
    }
    r[14] = r15;
    GhzState::from_correlations(PauliCorrelations::new(r).unwrap()).unwrap()
}

#[test]
fn r_tilde_examples_match_grid_oracle() {
    for (a, b, c, want, case) in [
        (0.3, -1.8, 0.3, 2.4, RCase::I),
        (1.0, 3.0, 1.0, 3.0, RCase::II),
        (0.0, 3.0, 1.0, 2.5, RCase::III),
    ] {
        let rt = r_tilde(a, b, c);
        assert_abs_diff_eq!(rt.value, want, epsilon = 1e-14);
        assert_eq!(rt.case, case);
        assert_abs_diff_eq!(numeric_r_tilde(a, b, c, 201), want, epsilon = 1e-6);
    }
    // mirrored case
    let rt = r_tilde(1.0, 3.0, 0.0);
    assert_eq!(rt.case, RCase::IV);
    assert_abs_diff_eq!(rt.value, 2.5, epsilon = 1e-14);
}

#[test]
fn l_min_examples() {
    for p in [0.05, 0.2, 0.7] {
        assert_abs_diff_eq!(l_min(&werner(p)), 1.0 / (9.0 * p), epsilon = 1e-12);
    }
    assert_abs_diff_eq!(l_min(&from_r(1.0, 0.0, 0.0)), 1.0, epsilon = 1e-14);
    assert_eq!(l_min(&werner(0.0)), f64::INFINITY);
}

#[test]
fn werner_criteria() {
    let r = criteria(&werner(1.0 / 9.0));
    assert!(r.margins.i.abs() < 1e-16);
    assert!(RCase::ALL.iter().all(|&c| !r.violated(c, 1e-15)));
    assert_eq!(r.verdict, Verdict::Separable);
    assert_eq!(r.case, RCase::I);
    let r = criteria(&werner(0.2));
    assert!(r.margins.i > 0.0);
    assert_eq!(r.verdict, Verdict::Entangled);
}

#[test]
fn triangle_vertex_is_separable_boundary() {
    let s = symmetric_from_ratios(1.0 / 16.0, 1.0, 1.0, 1.0).unwrap();
    let r = criteria(&s);
    assert_eq!(r.verdict, Verdict::Separable);
    assert!(r.margins.i.abs() < 1e-15);
    assert!(r.margins.ii.abs() < 1e-15);
    assert_abs_diff_eq!(r.l_min, 1.0, epsilon = 1e-14);
}

#[test]
fn non_symmetric_verdicts() {
    let mut p = [0.0; 16];
    p[0] = 0.5;
    p[1] = 0.5;
    let s = GhzState::from_probabilities(GhzProbabilities::new(p).unwrap());
    assert_eq!(criteria(&s).verdict, Verdict::EntangledByNecessity);
    let mut p = [1.0 / 16.0; 16];
    p[1] += 0.01;
    p[2] -= 0.01;
    let s = GhzState::from_probabilities(GhzProbabilities::new(p).unwrap());
    assert!(!s.is_symmetric(SYMMETRY_TOL));
    assert_eq!(criteria(&s).verdict, Verdict::Undetermined);
}

#[test]
fn matched_witness_saturates() {
    let opts = LambdaOptions::default();
    for s in [
        werner(1.0 / 9.0),
        from_r(1.0, 0.0, 0.0),
        symmetric_from_ratios(1.0 / 16.0, 1.0, 1.0, 1.0).unwrap(),
    ] {
        let w = matched_witness(&s);
        assert_abs_diff_eq!(g_tilde(w.m8(), w.m9(), w.m15()), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(lambda_product_max(&w, &opts).value, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(witness_value(&s.r, &w), 0.0, epsilon = 1e-13);
    }
    let w = matched_witness(&werner(0.3));
    // case I direction with M9 = M10 = .. = M14
    assert_abs_diff_eq!(w.m8(), w.m15(), epsilon = 1e-15);
    assert_abs_diff_eq!(w.m8(), -w.m9(), epsilon = 1e-15);
}

#[test]
fn pushed_past_the_surface_is_detected() {
    let (x, z) = (-0.3, 0.2);
    let y = curved_plus_y(x, z);
    let inside = symmetric_from_ratios(1.0 / 16.0, x, z, y).unwrap();
    assert_abs_diff_eq!(l_min(&inside), 1.0, epsilon = 1e-12);
    let outside = symmetric_from_ratios(1.0 / 16.0, x, z, y * 1.01).unwrap();
    let r = criteria(&outside);
    assert_eq!(r.verdict, Verdict::Entangled);
    assert!(witness_value(&outside.r, &r.matched_witness) < 0.0);
}

#[test]
fn ppt_examples() {
    let r = ppt_criterion(&werner(1.0 / 9.0));
    assert!(r.holds);
    assert!(r.margin.abs() < 1e-16);
    assert!(!ppt_criterion(&werner(1.0)).holds);
}

#[test]
fn kay_examples() {
    assert!(kay_condition(&werner(0.4)));
    assert!(!kay_condition(&from_r(0.1, 0.1, 0.1)));
    // parabola point on the face rho_{4,13} = -Omega
    let s = symmetric_from_ratios(1.0 / 16.0, 0.0, -1.0, 0.5f64.sqrt()).unwrap();
    assert!(!kay_condition(&s));
    assert_abs_diff_eq!(l_min(&s), 1.0, epsilon = 1e-12);
}

#[test]
fn margins_serialize_with_roman_keys() {
    let r = criteria(&werner(0.3));
    let v = serde_json::to_value(r.margins).unwrap();
    for k in ["I", "II", "III", "IV"] {
        assert!(v.get(k).is_some(), "{v}");
    }
    let m = criteria(&from_r(0.2, 0.0, 0.0)).margins;
    assert!(m.iii.is_none());
    assert!(serde_json::to_value(m).unwrap()["III"].is_null());
}

#[test]
fn criteria_two_and_three_agree_on_highly_symmetric_grid() {
    for p16 in [0.0, 0.0625, 0.3] {
        let u = 1.0f64 - 2.0 * p16;
        let lo = 7.0 * u / (1.0 - p16);
        for i in 0..25 {
            for k in 0..25 {
                let v = (i as f64 + 0.5) / 25.0;
                let alpha = lo + (12.0 - lo) * k as f64 / 24.0;
                let s = hs_point_state(p16, v, alpha).unwrap();
                let m = criteria(&s).margins;
                // undefined where R15 vanishes
                if let Some(iii) = m.iii {
                    assert!((m.ii - iii).abs() <= 1e-15, "{p16} {v} {alpha}");
                }
                let p = s.p.as_array();
                let cond = (p[1] - p[14]).abs() - (p[0] + p[15]);
                assert_eq!(m.ii > 1e-13, cond > 1e-13);
            }
        }
    }
}

fn symmetric_state(w: [f64; 6]) -> GhzState {
    let s = SymmetricParams {
        p1: w[0],
        p2: w[1] / 4.0,
        p4: w[2] / 3.0,
        p13: w[3] / 3.0,
        p15: w[4] / 4.0,
        p16: w[5],
    };
    GhzState::from_probabilities(make_symmetric(&s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn verdict_lmin_and_witness_agree(w in common::symmetric_weights()) {
        let s = symmetric_state(w);
        let r = criteria(&s);
        prop_assume!((r.l_min - 1.0).abs() > 1e-8);
        let entangled = r.verdict == Verdict::Entangled;
        prop_assert!(r.verdict == Verdict::Entangled || r.verdict == Verdict::Separable);
        prop_assert_eq!(entangled, r.l_min < 1.0 - 1e-9);
        prop_assert_eq!(entangled, witness_value(&s.r, &r.matched_witness) < 0.0);
        let wv = witness_value(&s.r, &r.matched_witness);
        prop_assert!((wv - (1.0 - 1.0 / r.l_min)).abs() <= 1e-9);
    }

    #[test]
    fn l_min_matches_applicable_margins(p in common::probabilities()) {
        let s = GhzState::from_probabilities(GhzProbabilities::new(p).unwrap());
        let r = criteria(&s);
        prop_assume!((r.l_min - 1.0).abs() > 1e-8);
        let all_hold = RCase::ALL.iter().all(|&c| !r.violated(c, TAU_V));
        prop_assert_eq!(r.l_min >= 1.0, all_hold);
        prop_assert_eq!(r.verdict == Verdict::Separable, all_hold && r.symmetric);
    }

    #[test]
    fn ppt_implies_criterion_one(p in common::probabilities()) {
        let s = GhzState::from_probabilities(GhzProbabilities::new(p).unwrap());
        if ppt_criterion(&s).holds {
            prop_assert!(criteria(&s).margins.i <= TAU_V);
        }
    }

    #[test]
    fn r_tilde_is_the_largest_attained_expression(r8 in -1.0f64..1.0, rp9 in -3.0f64..3.0, r15 in -1.0f64..1.0) {
        let rt = r_tilde(r8, rp9, r15);
        for c in RCase::ALL {
            if rt.attained[c.index()] {
                prop_assert!(rt.expressions[c.index()].unwrap() <= rt.value);
            }
        }
        prop_assert_eq!(rt.expressions[rt.case.index()], Some(rt.value));
    }
}
