use std::path::Path;

use breather_lab::variation::{ode_residual_with, pde_residual, Equation};
use breather_lab::BreatherKind;
use clap::Args;
use serde::{Deserialize, Serialize};

use super::{grid_of, parse_kind, resolve_grid, spec_of, Experiment, GridDefaults};
use crate::defaults::{RESIDUAL_DT, RESIDUAL_TOL};
use crate::error::CliResult;
use crate::report::Outcome;

const GRID: GridDefaults = GridDefaults {
    line: (200.0, 4096),
    periodic_points: 4096,
};

/// Residual of the evolution equation or of an elliptic characterization.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[group(skip)]
#[serde(deny_unknown_fields)]
pub struct Residual {
    /// pde, ec-p, ec-km or ec-a [default: the elliptic equation of the kind, pde for stokes]
    #[arg(long)]
    pub equation: Option<String>,
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub length: Option<f64>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub points: Option<usize>,
    /// Time step of the centered difference for `u_t`
    #[arg(long)]
    pub dt: Option<f64>,
    /// Pass threshold on the sup residual
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Experiment for Residual {
    const NAME: &'static str = "residual";

    fn resolve(mut self) -> CliResult<Self> {
        let kind = parse_kind(&self.kind)?;
        let spec = spec_of(kind, self.a)?;
        let equation = match &self.equation {
            Some(e) => e.parse()?,
            None => match kind {
                BreatherKind::Stokes | BreatherKind::Soliton => Equation::NlsPde,
                k => Equation::for_kind(k)?,
            },
        };
        if equation != Equation::NlsPde {
            Equation::for_kind(kind)?;
        }
        let (l, n) = resolve_grid(&spec, self.length, self.points, GRID)?;
        self.equation = Some(equation.name().into());
        self.kind = Some(kind.name().into());
        self.t = Some(self.t.unwrap_or(0.0));
        self.length = Some(l);
        self.points = Some(n);
        self.dt = Some(self.dt.unwrap_or(RESIDUAL_DT));
        self.tol = Some(self.tol.unwrap_or(RESIDUAL_TOL));
        Ok(self)
    }

    fn execute(&self, _out: Option<&Path>) -> CliResult<Outcome> {
        let spec = spec_of(parse_kind(&self.kind)?, self.a)?;
        let grid = grid_of(self.length, self.points)?;
        let t = self.t.unwrap_or(0.0);
        let equation: Equation = self.equation.as_deref().unwrap_or("pde").parse()?;
        let r = match equation {
            Equation::NlsPde => pde_residual(&spec, &grid, t, self.dt.unwrap_or(RESIDUAL_DT))?,
            eq => ode_residual_with(eq, &spec, &grid, t)?,
        };
        let mut o = Outcome::default();
        o.put("sup_residual", r.sup_residual);
        o.put("l2_residual", r.l2_residual);
        o.put("equation", r.equation.name());
        o.put("t", r.t);
        o.put("L", grid.length());
        o.put("N", grid.points());
        o.put("trusted_half_width", r.trusted_half_width);
        o.require(r.sup_residual < self.tol.unwrap_or(RESIDUAL_TOL));
        Ok(o)
    }
}
