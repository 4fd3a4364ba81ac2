use std::path::Path;

use breather_lab::analytic::sample;
use breather_lab::functionals::{self, Lyapunov, Quadrature};
use breather_lab::BreatherKind;
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{grid_of, parse_kind, resolve_grid, spec_of, Experiment, GridDefaults};
use crate::defaults::{CONSERVED_ABS_TOL, CONSERVED_REL_TOL};
use crate::error::{CliError, CliResult};
use crate::report::Outcome;

/// M, P, E and F of an exact solution, optionally checked against closed forms.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[group(skip)]
#[serde(deny_unknown_fields)]
pub struct Conserved {
    /// stokes, peregrine, km or akhmediev
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Window length [default: 400 for km, 2000 for peregrine, one period for akhmediev]
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub length: Option<f64>,
    /// Grid points [default: 4096 for km, 32768 for peregrine, 256 otherwise]
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub points: Option<usize>,
    /// Compare against the closed-form values and set pass/fail
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub check: Option<bool>,
    /// Relative tolerance for nonzero reference values
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance for zero reference values
    #[arg(long)]
    pub abs_tol: Option<f64>,
}

fn grid_defaults(kind: BreatherKind) -> GridDefaults {
    let line = match kind {
        BreatherKind::KuznetsovMa => (400.0, 4096),
        BreatherKind::Peregrine => (2000.0, 1 << 15),
        _ => (100.0, 256),
    };
    GridDefaults {
        line,
        periodic_points: 256,
    }
}

impl Experiment for Conserved {
    const NAME: &'static str = "conserved";

    fn resolve(mut self) -> CliResult<Self> {
        let kind = parse_kind(&self.kind)?;
        if kind == BreatherKind::Soliton {
            return Err(CliError::Usage("the functionals are measured against the Stokes background; `soliton` has none".into()));
        }
        let spec = spec_of(kind, self.a)?;
        let (l, n) = resolve_grid(&spec, self.length, self.points, grid_defaults(kind))?;
        let check = self.check.unwrap_or(false);
        if check && kind == BreatherKind::Akhmediev {
            return Err(CliError::Usage("no closed-form values to check for `akhmediev`".into()));
        }
        self.kind = Some(kind.name().into());
        self.t = Some(self.t.unwrap_or(0.0));
        self.length = Some(l);
        self.points = Some(n);
        self.check = Some(check);
        self.rel_tol = Some(self.rel_tol.unwrap_or(CONSERVED_REL_TOL));
        self.abs_tol = Some(self.abs_tol.unwrap_or(CONSERVED_ABS_TOL));
        Ok(self)
    }

    fn execute(&self, _out: Option<&Path>) -> CliResult<Outcome> {
        let kind = parse_kind(&self.kind)?;
        let spec = spec_of(kind, self.a)?;
        let grid = grid_of(self.length, self.points)?;
        let u = sample(&spec, &grid, self.t.unwrap_or(0.0), false)?;
        let r = functionals::report(&u, &Quadrature::for_kind(kind))?;

        let mut o = Outcome::default();
        o.put("M", r.mass);
        o.put("P", r.momentum);
        o.put("E", r.energy);
        o.put("F", r.f);
        o.put("frame", r.frame.to_string());
        if kind != BreatherKind::Stokes {
            let l = Lyapunov::for_spec(&spec)?;
            o.put("lyapunov", l.evaluate(&u)?);
            o.put("lyapunov_coefficient", l.coefficient());
        }
        if !self.check.unwrap_or(false) {
            return Ok(o);
        }

        let (rel_tol, abs_tol) = (self.rel_tol.unwrap_or(CONSERVED_REL_TOL), self.abs_tol.unwrap_or(CONSERVED_ABS_TOL));
        let expected = match kind {
            BreatherKind::KuznetsovMa => {
                let b = spec.km_params()?.beta;
                [4.0 * b, 0.0, -(8.0 / 3.0) * b.powi(3), 0.8 * b.powi(5)]
            }
            _ => [0.0; 4],
        };
        let measured = [r.mass, r.momentum, r.energy, r.f];
        let mut checks = serde_json::Map::new();
        for ((name, m), e) in ["M", "P", "E", "F"].into_iter().zip(measured).zip(expected) {
            let (error, ok) = if e == 0.0 {
                (m.abs(), m.abs() < abs_tol)
            } else {
                let rel = ((m - e) / e).abs();
                (rel, rel < rel_tol)
            };
            checks.insert(
                name.into(),
                json!({
                    "expected": e,
                    "error": error,
                    "kind": if e == 0.0 { "absolute" } else { "relative" },
                    "pass": ok,
                }),
            );
            o.require(ok);
        }
        o.put("checks", checks);
        Ok(o)
    }
}
