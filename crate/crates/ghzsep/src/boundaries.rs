//! Analytic boundaries of the fully separable set for the highly symmetric
//! family (the `(v, alpha)` plane at fixed `p16`) and the symmetric family
//! (element ratios at fixed minimal diagonal).

use crate::error::{Error, Result};
use crate::states::{make_highly_symmetric, symmetric_from_ratios, GhzState, HighlySymmetricParams};
use serde::{Deserialize, Serialize};

/// A labeled sampled piece of a boundary.
///
/// Points are `(v, alpha)` for the highly symmetric family and
/// `(rho_{1,16}, rho_{4,13}, rho_{2,15}) / Omega` for the symmetric family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySegment {
    pub label: String,
    pub points: Vec<Vec<f64>>,
    /// Which closed form generated the points.
    pub source: String,
    /// Points lie where some probability vanishes rather than on a
    /// saturated criterion.
    pub physical_face: bool,
    /// `(rows, cols)` when `points` is a row-major mesh.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<(usize, usize)>,
}

impl BoundarySegment {
    fn curve(label: &str, source: &str, points: Vec<Vec<f64>>) -> Self {
        Self {
            label: label.into(),
            points,
            source: source.into(),
            physical_face: false,
            shape: None,
        }
    }

    pub fn first(&self) -> &[f64] {
        &self.points[0]
    }

    pub fn last(&self) -> &[f64] {
        &self.points[self.points.len() - 1]
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| {
        if k + 1 == n {
            b
        } else {
            a + (b - a) * k as f64 / (n - 1) as f64
        }
    })
}

/// `v` on the upper corner curve through L and M: `alpha >= u(8 - 2v)` regime.
pub fn upper_curve_v(alpha: f64) -> f64 {
    (32.0 - alpha + ((56.0 - alpha) * (8.0 - alpha)).max(0.0).sqrt()) / 36.0
}

/// `v` on the lower corner curve through K and N.
pub fn lower_curve_v(alpha: f64) -> f64 {
    (18.0 - alpha - ((alpha + 42.0) * (alpha - 6.0)).max(0.0).sqrt()) / 36.0
}

/// Curve through V and U (small `v` side, `0 < p16 < 1/8`).
pub fn lower_inner_alpha(u: f64, v: f64) -> f64 {
    let a1 = 3.0 * u + (7.0 + u) * v;
    let b1 = 4.0 * u * (4.0 - 37.0 * v + 9.0 * v * v);
    a1 + (a1 * a1 + b1).max(0.0).sqrt()
}

/// Curve through S and T (large `v` side, `0 < p16 < 1/8`).
pub fn upper_inner_alpha(u: f64, v: f64) -> f64 {
    let a2 = 4.0 * u + (7.0 - u) * v;
    let b2 = 4.0 * u * (3.0 * v + 2.0).powi(2);
    a2 - (a2 * a2 - b2).max(0.0).sqrt()
}

/// The `p1 = 0` face.
pub fn physical_alpha(u: f64) -> f64 {
    14.0 * u / (1.0 + u)
}

/// Corner abscissae `v1 < v2 < v3 < v4` of the hexagonal regime
/// (V, U, T, S in that order).
pub fn corner_vs(p16: f64) -> [f64; 4] {
    let u = 1.0 - 2.0 * p16;
    let v1 = (9.0 - 4.0 * u - ((4.0 * u + 21.0) * (4.0 * u - 3.0)).max(0.0).sqrt()) / 18.0;
    let v2 = (5.0 * u - 2.0) / (3.0 * (1.0 + u));
    let v3 = (4.0 - 3.0 * u) / (1.0 + u);
    let v4 = 2.0 / 9.0 * (4.0 - u + ((7.0 - u) * (1.0 - u)).max(0.0).sqrt());
    [v1, v2, v3, v4]
}

/// Samples the boundary of the separable region in the `(v, alpha)` plane.
///
/// * `p16 = 0`: triangle GHJ.
/// * `0 < p16 <= 1/8`: hexagon PQSTUV, whose side TU lies on the `p1 = 0` face.
/// * `p16 > 1/8`: quadrilateral KLMN.
///
/// Each polygon is traversed in one direction, so consecutive segments share
/// endpoints.
pub fn hs_boundary(p16: f64, n: usize) -> Result<Vec<BoundarySegment>> {
    if !(0.0..=0.5).contains(&p16) {
        return Err(Error::param("p16", p16, "must lie in [0, 1/2]"));
    }
    if n < 2 {
        return Err(Error::param("samples", n as f64, "need at least 2 points per segment"));
    }
    let u = 1.0 - 2.0 * p16;
    let pt = |v: f64, a: f64| vec![v, a];
    let segs = if p16 == 0.0 {
        vec![
            BoundarySegment::curve(
                "GH",
                "corner-line",
                linspace(0.0, 2.0 / 3.0, n).map(|v| pt(v, 8.0)).collect(),
            ),
            BoundarySegment::curve(
                "HJ",
                "diagonal-line",
                linspace(2.0 / 3.0, 0.5, n).map(|v| pt(v, 4.0 + 6.0 * v)).collect(),
            ),
            BoundarySegment::curve(
                "GJ",
                "slanted-line",
                linspace(0.5, 0.0, n).map(|v| pt(v, 8.0 - 2.0 * v)).collect(),
            ),
        ]
    } else if p16 <= 0.125 {
        let [v1, v2, v3, v4] = corner_vs(p16);
        let mut ut = BoundarySegment::curve(
            "UT",
            "p1-zero-face",
            linspace(v3, v2, n).map(|v| pt(v, physical_alpha(u))).collect(),
        );
        ut.physical_face = true;
        vec![
            BoundarySegment::curve(
                "PQ",
                "corner-line",
                linspace(0.0, 2.0 / 3.0, n).map(|v| pt(v, 8.0)).collect(),
            ),
            BoundarySegment::curve(
                "QS",
                "upper-corner-curve",
                linspace(8.0, 8.0 * u, n).map(|a| pt(upper_curve_v(a), a)).collect(),
            ),
            BoundarySegment::curve(
                "ST",
                "upper-inner-curve",
                linspace(v4, v3, n).map(|v| pt(v, upper_inner_alpha(u, v))).collect(),
            ),
            ut,
            BoundarySegment::curve(
                "UV",
                "lower-inner-curve",
                linspace(v2, v1, n).map(|v| pt(v, lower_inner_alpha(u, v))).collect(),
            ),
            BoundarySegment::curve(
                "PV",
                "lower-corner-curve",
                linspace(8.0 * u, 8.0, n).map(|a| pt(lower_curve_v(a), a)).collect(),
            ),
        ]
    } else {
        vec![
            BoundarySegment::curve(
                "KL",
                "corner-line",
                linspace(0.0, 2.0 / 3.0, n).map(|v| pt(v, 8.0)).collect(),
            ),
            BoundarySegment::curve(
                "LM",
                "upper-corner-curve",
                linspace(8.0, 6.0, n).map(|a| pt(upper_curve_v(a), a)).collect(),
            ),
            BoundarySegment::curve(
                "MN",
                "minus-line",
                linspace(1.0, 1.0 / 3.0, n).map(|v| pt(v, 6.0)).collect(),
            ),
            BoundarySegment::curve(
                "KN",
                "lower-corner-curve",
                linspace(6.0, 8.0, n).map(|a| pt(lower_curve_v(a), a)).collect(),
            ),
        ]
    };
    Ok(segs)
}

/// Which curved boundary a `sin^2 phi` parameterization traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveVariant {
    /// Upper corner curve from M (`sin^2 phi = 0`) to L (`1/2`).
    LM,
    /// Lower corner curve from K (`0`) to N (`1/2`).
    KN,
    /// Curves inside the `alpha < 8u` band: sign `-1` traces TS, `+1` traces VU.
    BelowDiag(i8),
}

/// `(v, alpha)` of the boundary state with mixing parameter `sin^2 phi`.
pub fn hs_curve_parametrization(p16: f64, variant: CurveVariant, sin2phi: f64) -> Result<(f64, f64)> {
    if !(0.0..=0.5).contains(&p16) {
        return Err(Error::param("p16", p16, "must lie in [0, 1/2]"));
    }
    if !(0.0..=0.5).contains(&sin2phi) {
        return Err(Error::param("sin2phi", sin2phi, "must lie in [0, 1/2]"));
    }
    let s = sin2phi;
    let c2 = 1.0 - s;
    let c4 = c2 * c2;
    match variant {
        CurveVariant::LM => Ok((1.0 / (1.0 + s), (14.0 - 8.0 * c4) / (1.0 + s))),
        CurveVariant::KN => Ok((s / (1.0 + s), (14.0 * s + 8.0 * c4) / (1.0 + s))),
        CurveVariant::BelowDiag(sign) => {
            let sg = match sign {
                1 => 1.0,
                -1 => -1.0,
                _ => return Err(Error::param("sign", sign as f64, "must be +1 or -1")),
            };
            let u = 1.0 - 2.0 * p16;
            if u >= 1.0 {
                return Err(Error::Regime("inner curves degenerate at p16 = 0".into()));
            }
            let t = sg * c2 * (8.0 * s - 1.0);
            let den = u * (1.0 + s) + t;
            if den <= 0.0 {
                return Err(Error::Regime(format!("inner curve undefined at sin2phi = {s}")));
            }
            let alpha = 7.0 * u * ((1.0 + s) + t) / den;
            let w = 8.0 * (1.0 - 7.0 * u / alpha);
            let r8 = sg * w / (1.0 + s) * c4;
            Ok((alpha / 14.0 * (1.0 - r8 / u), alpha))
        }
    }
}

/// Range of `sin^2 phi` over which an inner curve stays on the boundary.
pub fn below_diag_range(p16: f64, sign: i8) -> Result<(f64, f64)> {
    let u = 1.0 - 2.0 * p16;
    if !(p16 > 0.0 && p16 <= 0.125) {
        return Err(Error::Regime(format!(
            "inner curves exist for 0 < p16 <= 1/8, got {p16}"
        )));
    }
    match sign {
        -1 => Ok((0.0, 0.5 * (2.0 - u - ((1.0 - u) * (7.0 - u)).sqrt()))),
        1 => Ok((
            ((4.0 * u + 1.0 - ((4.0 * u + 21.0) * (4.0 * u - 3.0)).max(0.0).sqrt()) / 8.0).max(0.0),
            0.5,
        )),
        s => Err(Error::param("sign", s as f64, "must be +1 or -1")),
    }
}

/// Highly symmetric state at `(v, alpha)`.
pub fn hs_point_state(p16: f64, v: f64, alpha: f64) -> Result<GhzState> {
    let h = HighlySymmetricParams::from_v_alpha(p16, v, alpha)?;
    Ok(GhzState::from_probabilities(make_highly_symmetric(&h)?))
}

/// `|y|` on the surface traced for `x <= z`.
pub fn curved_plus_y(x: f64, z: f64) -> f64 {
    0.5 * (1.0 - z + ((1.0 + z) * (1.0 + x)).max(0.0).sqrt())
}

/// `|y|` on the surface traced for `x >= z`.
pub fn curved_minus_y(x: f64, z: f64) -> f64 {
    0.5 * (1.0 + z + ((1.0 - z) * (1.0 - x)).max(0.0).sqrt())
}

/// `|y|` on the parabola in the face `z = face`.
pub fn parabola_y(x: f64, face: f64) -> f64 {
    (0.5 * (1.0 + face * x)).max(0.0).sqrt()
}

/// Meshes the boundary of the symmetric family at minimal diagonal `omega`.
///
/// Points are element ratios `(x, z, y)`; each surface is emitted for
/// `y >= 0` and for its mirror image `y <= 0`.
pub fn sym_surface(omega: f64, n: usize) -> Result<Vec<BoundarySegment>> {
    if !(omega > 0.0 && omega <= 1.0 / 16.0) {
        return Err(Error::param("omega", omega, "must lie in (0, 1/16]"));
    }
    if n < 2 {
        return Err(Error::param("grid", n as f64, "need at least 2 points per axis"));
    }
    let mut out = Vec::new();
    for ys in [1.0, -1.0] {
        let tag = if ys > 0.0 { "" } else { "-mirror" };
        // Upper surface: z in [-1, 1], x in [-1, z].
        let mut pts = Vec::with_capacity(n * n);
        for z in linspace(-1.0, 1.0, n) {
            for x in linspace(-1.0, z, n) {
                pts.push(vec![x, z, ys * curved_plus_y(x, z)]);
            }
        }
        out.push(mesh(
            "curvedSurfacePlus",
            &format!("curved-surface-x-le-z{tag}"),
            pts,
            n,
        ));
        let mut pts = Vec::with_capacity(n * n);
        for z in linspace(-1.0, 1.0, n) {
            for x in linspace(z, 1.0, n) {
                pts.push(vec![x, z, ys * curved_minus_y(x, z)]);
            }
        }
        out.push(mesh(
            "curvedSurfaceMinus",
            &format!("curved-surface-x-ge-z{tag}"),
            pts,
            n,
        ));
        for face in [1.0, -1.0] {
            let pts = linspace(-1.0, 1.0, n)
                .map(|x| vec![x, face, ys * parabola_y(x, face)])
                .collect();
            let src = if face > 0.0 {
                "parabola-z-plus"
            } else {
                "parabola-z-minus"
            };
            out.push(BoundarySegment::curve("parabola", &format!("{src}{tag}"), pts));
        }
    }
    for x in [1.0, -1.0] {
        // Triangle where |y| <= (1 + x z) / 2; both signs of y are included.
        let mut pts = Vec::with_capacity(n * n);
        for z in linspace(-1.0, 1.0, n) {
            let h = 0.5 * (1.0 + x * z);
            for y in linspace(-h, h, n) {
                pts.push(vec![x, z, y]);
            }
        }
        let src = if x > 0.0 { "triangle-x-plus" } else { "triangle-x-minus" };
        out.push(mesh("planeTriangle", src, pts, n));
    }
    Ok(out)
}

fn mesh(label: &str, source: &str, points: Vec<Vec<f64>>, n: usize) -> BoundarySegment {
    BoundarySegment {
        label: label.into(),
        points,
        source: source.into(),
        physical_face: false,
        shape: Some((n, n)),
    }
}

/// Symmetric state at element ratios `(x, z, y)`.
pub fn sym_point_state(omega: f64, point: &[f64]) -> Result<GhzState> {
    if point.len() != 3 {
        return Err(Error::WrongLength {
            expected: 3,
            got: point.len(),
        });
    }
    symmetric_from_ratios(omega, point[0], point[1], point[2])
}
