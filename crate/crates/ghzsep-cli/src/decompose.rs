use crate::output::Sink;
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use ghzsep::boundaries::CurveVariant;
use ghzsep::decompositions::*;
use ghzsep::matching::SYMMETRY_TOL;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Clone, Copy, ValueEnum)]
pub enum Construction {
    /// phi, sign
    Rho3,
    /// q1, q2, sign
    Rho4,
    /// phi, sign
    RhoPm,
    /// s (= sin^2 phi), sign
    Rho5,
    /// p16, q1, q2, branch = plus | minus
    Line,
    /// p16, variant = lm | kn | below-plus | below-minus, s
    Curve,
    /// mu, phi, variant = plus-pi2 | plus-zero | minus-pi2 | minus-zero
    SymBoundary,
    /// omega, x, z, y (taken from --target when omitted)
    SymPoint,
    /// x, y, face = 1 | -1, optional omega
    Parabola,
}

#[derive(Args)]
pub struct DecomposeArgs {
    #[arg(long, value_enum)]
    construction: Construction,
    /// Comma-separated `key=value` pairs.
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    /// State to verify the decomposition against.
    #[arg(long)]
    target: Option<PathBuf>,
}

struct Params(BTreeMap<String, String>);

impl Params {
    fn parse(raw: &[String]) -> Result<Self> {
        let mut m = BTreeMap::new();
        for kv in raw.iter().filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| anyhow!("parameter {kv:?} is not key=value"))?;
            if m.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                bail!("parameter {k:?} given twice");
            }
        }
        Ok(Self(m))
    }

    fn str(&self, k: &str) -> Result<&str> {
        self.0
            .get(k)
            .map(String::as_str)
            .ok_or_else(|| anyhow!("missing parameter {k}"))
    }

    fn f(&self, k: &str) -> Result<f64> {
        let v = self.str(k)?;
        match v {
            "inf" | "infinity" => Ok(f64::INFINITY),
            _ => v
                .parse()
                .with_context(|| format!("parameter {k}={v:?} is not a number")),
        }
    }

    fn opt_f(&self, k: &str) -> Result<Option<f64>> {
        if self.0.contains_key(k) {
            self.f(k).map(Some)
        } else {
            Ok(None)
        }
    }

    fn sign(&self, k: &str) -> Result<i8> {
        match self.str(k)? {
            "1" | "+1" | "+" | "plus" => Ok(1),
            "-1" | "-" | "minus" => Ok(-1),
            v => bail!("parameter {k}={v:?} must be +1 or -1"),
        }
    }

    fn has_any(&self) -> bool {
        !self.0.is_empty()
    }
}

fn build(c: Construction, p: &Params, target: Option<&ghzsep::states::GhzState>) -> Result<SeparableDecomposition> {
    Ok(match c {
        Construction::Rho3 => rho3(p.f("phi")?, p.sign("sign")?)?,
        Construction::Rho4 => rho4(p.f("q1")?, p.f("q2")?, p.sign("sign")?)?,
        Construction::RhoPm => rho_pm(p.f("phi")?, p.sign("sign")?)?,
        Construction::Rho5 => rho5(p.f("s")?, p.sign("sign")?)?,
        Construction::Line => {
            let branch = match p.str("branch")? {
                "plus" => LineBranch::Plus,
                "minus" => LineBranch::Minus,
                v => bail!("branch={v:?} must be plus or minus"),
            };
            line_state(p.f("p16")?, p.f("q1")?, p.f("q2")?, branch)?
        }
        Construction::Curve => {
            let variant = match p.str("variant")? {
                "lm" => CurveVariant::LM,
                "kn" => CurveVariant::KN,
                "below-plus" => CurveVariant::BelowDiag(1),
                "below-minus" => CurveVariant::BelowDiag(-1),
                v => bail!("variant={v:?} must be lm, kn, below-plus or below-minus"),
            };
            curve_state(p.f("p16")?, variant, p.f("s")?)?
        }
        Construction::SymBoundary => {
            let variant = match p.str("variant")? {
                "plus-pi2" => SymVariant::PlusPi2,
                "plus-zero" => SymVariant::PlusZero,
                "minus-pi2" => SymVariant::MinusPi2,
                "minus-zero" => SymVariant::MinusZero,
                v => bail!("variant={v:?} must be plus-pi2, plus-zero, minus-pi2 or minus-zero"),
            };
            sym_boundary_state(p.f("mu")?, p.f("phi")?, variant)?
        }
        Construction::SymPoint => {
            if p.has_any() {
                sym_point_decomposition(p.f("omega")?, p.f("x")?, p.f("z")?, p.f("y")?)?
            } else {
                let t = target.ok_or_else(|| anyhow!("sym-point needs --params or --target"))?;
                if !t.is_symmetric(SYMMETRY_TOL) {
                    bail!("target is not in the symmetric family");
                }
                let om = t.x.omega();
                if om <= 0.0 {
                    bail!("target has a vanishing diagonal entry");
                }
                sym_point_decomposition(om, t.x.a[0] / om, t.x.a[3] / om, t.x.a[1] / om)?
            }
        }
        Construction::Parabola => {
            let face = p.sign("face")?;
            let d = parabola_interior(p.f("x")?, p.f("y")?, face)?;
            match p.opt_f("omega")? {
                Some(om) => lift_to_omega(&d, om)?,
                None => d,
            }
        }
    })
}

pub fn run(sink: &Sink, tol: f64, args: DecomposeArgs) -> Result<u8> {
    sink.require_json("decompose")?;
    let params = Params::parse(&args.params)?;
    let target = args.target.as_deref().map(crate::read_state).transpose()?;
    let mut d = build(args.construction, &params, target.as_ref())?;
    let mut code = 0;
    if let Some(t) = &target {
        let rep = verify(&d, t)?;
        d.target_residual = rep.target_residual;
        if !rep.ok(tol) {
            eprintln!(
                "decomposition does not reproduce the target: residual {:e}",
                rep.target_residual
            );
            code = 1;
        }
    }
    sink.json(&d)?;
    Ok(code)
}
