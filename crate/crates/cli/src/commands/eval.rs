use std::path::Path;

use breather_lab::analytic::sample;
use breather_lab::evolve::fmt_num;
use breather_lab::SymmetryParams;
use clap::Args;
use serde::{Deserialize, Serialize};

use super::{grid_of, metadata_for, parse_kind, resolve_grid, spec_of, Experiment, GridDefaults};
use crate::error::CliResult;
use crate::report::{metadata_lines, Artifact, Outcome};

const GRID: GridDefaults = GridDefaults {
    line: (100.0, 1024),
    periodic_points: 512,
};

/// Sample an exact solution on a grid.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[group(skip)]
#[serde(deny_unknown_fields)]
pub struct Eval {
    /// stokes, peregrine, km, akhmediev or soliton
    #[arg(long)]
    pub kind: Option<String>,
    /// Family parameter: a > 1/2 for km, 0 < a < 1/2 for akhmediev
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Window length [default: 100, one period for akhmediev]
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub length: Option<f64>,
    /// Grid points, a power of two [default: 1024, 512 for akhmediev]
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub points: Option<usize>,
    /// Sample `w = u e^{-it} - 1` instead of `u`
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub perturbation: Option<bool>,
    /// Symmetry: scaling `c`
    #[arg(long)]
    pub scale: Option<f64>,
    /// Symmetry: Galilean velocity `v`
    #[arg(long)]
    pub velocity: Option<f64>,
    /// Symmetry: phase `γ`
    #[arg(long)]
    pub phase: Option<f64>,
    /// Symmetry: space shift
    #[arg(long)]
    pub x0: Option<f64>,
    /// Symmetry: time shift
    #[arg(long)]
    pub t0: Option<f64>,
}

impl Eval {
    fn symmetry(&self) -> SymmetryParams {
        SymmetryParams {
            scale: self.scale.unwrap_or(1.0),
            velocity: self.velocity.unwrap_or(0.0),
            phase: self.phase.unwrap_or(0.0),
            x0: self.x0.unwrap_or(0.0),
            t0: self.t0.unwrap_or(0.0),
        }
    }
}

impl Experiment for Eval {
    const NAME: &'static str = "eval";

    fn resolve(mut self) -> CliResult<Self> {
        let kind = parse_kind(&self.kind)?;
        let spec = spec_of(kind, self.a)?.with_symmetry(self.symmetry())?;
        let (l, n) = resolve_grid(&spec, self.length, self.points, GRID)?;
        let s = self.symmetry();
        self.kind = Some(kind.name().into());
        self.t = Some(self.t.unwrap_or(0.0));
        self.length = Some(l);
        self.points = Some(n);
        self.perturbation = Some(self.perturbation.unwrap_or(false));
        self.scale = Some(s.scale);
        self.velocity = Some(s.velocity);
        self.phase = Some(s.phase);
        self.x0 = Some(s.x0);
        self.t0 = Some(s.t0);
        Ok(self)
    }

    fn execute(&self, out: Option<&Path>) -> CliResult<Outcome> {
        let spec = spec_of(parse_kind(&self.kind)?, self.a)?.with_symmetry(self.symmetry())?;
        let grid = grid_of(self.length, self.points)?;
        let t = self.t.unwrap_or(0.0);
        let u = sample(&spec, &grid, t, self.perturbation.unwrap_or(false))?;

        let moduli: Vec<f64> = u.values().iter().map(|v| v.norm()).collect();
        let (imax, max) = moduli
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, m)| if m > acc.1 { (i, m) } else { acc });
        let min = moduli.iter().copied().fold(f64::INFINITY, f64::min);

        let mut o = Outcome::default();
        o.put("min_modulus", min);
        o.put("max_modulus", max);
        o.put("x_at_max", grid.node(imax));
        o.put("t", t);
        if let Some(path) = out {
            let mut csv = metadata_lines(&metadata_for(self));
            csv.push_str("x,re_u,im_u,abs_u\n");
            for (j, v) in u.values().iter().enumerate() {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_num(grid.node(j)),
                    fmt_num(v.re),
                    fmt_num(v.im),
                    fmt_num(moduli[j])
                ));
            }
            o.artifacts.push(Artifact {
                path: path.to_path_buf(),
                contents: csv,
            });
        }
        Ok(o)
    }
}
