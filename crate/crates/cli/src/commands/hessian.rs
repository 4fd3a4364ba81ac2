use std::path::Path;

use breather_lab::functionals::{Lyapunov, LyapunovKind};
use breather_lab::variation::{assemble_hessian, windowed_sample};
use breather_lab::BreatherKind;
use clap::Args;
use serde::{Deserialize, Serialize};

use super::{grid_of, metadata_for, parse_kind, resolve_grid, spec_of, Experiment, GridDefaults};
use crate::defaults::{HESSIAN_K, KERNEL_REL_TOL};
use crate::error::{CliError, CliResult};
use crate::report::{metadata_lines, suffixed, Artifact, Outcome};

/// Second variation of the matched Lyapunov functional restricted to
/// `2(2K+1)` Fourier directions. Stokes uses `F`.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[group(skip)]
#[serde(deny_unknown_fields)]
pub struct Hessian {
    /// stokes, peregrine, km or akhmediev
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Highest mode index of the basis
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub modes: Option<usize>,
    /// Window length [default: 80 for km, 400 for peregrine, 200 for stokes, one period for akhmediev]
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub length: Option<f64>,
    /// Grid points [default: 512, 2048 for peregrine, 128 for akhmediev]
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub points: Option<usize>,
    /// Pass threshold on kernel residual / spectral norm (km, akhmediev)
    #[arg(long)]
    pub tol: Option<f64>,
}

fn grid_defaults(kind: BreatherKind) -> GridDefaults {
    let line = match kind {
        BreatherKind::KuznetsovMa => (80.0, 512),
        BreatherKind::Peregrine => (400.0, 2048),
        _ => (200.0, 512),
    };
    GridDefaults {
        line,
        periodic_points: 128,
    }
}

fn functional(kind: BreatherKind, a: f64) -> CliResult<Lyapunov> {
    match kind {
        BreatherKind::Stokes => Ok(Lyapunov::new(LyapunovKind::Peregrine, 0.0)?),
        BreatherKind::Soliton => Err(CliError::Usage("no Lyapunov functional is attached to `soliton`".into())),
        k => Ok(Lyapunov::new(LyapunovKind::try_from(k)?, a)?),
    }
}

/// Stokes and Peregrine are checked for a negative direction, the periodic-in-time
/// and periodic-in-space breathers for the translation kernel.
fn expects_negative(kind: BreatherKind) -> bool {
    matches!(kind, BreatherKind::Stokes | BreatherKind::Peregrine)
}

impl Experiment for Hessian {
    const NAME: &'static str = "hessian";

    fn resolve(mut self) -> CliResult<Self> {
        let kind = parse_kind(&self.kind)?;
        let spec = spec_of(kind, self.a)?;
        functional(kind, spec.a)?;
        let (l, n) = resolve_grid(&spec, self.length, self.points, grid_defaults(kind))?;
        self.kind = Some(kind.name().into());
        self.t = Some(self.t.unwrap_or(0.0));
        self.modes = Some(self.modes.unwrap_or(HESSIAN_K));
        self.length = Some(l);
        self.points = Some(n);
        self.tol = Some(self.tol.unwrap_or(KERNEL_REL_TOL));
        Ok(self)
    }

    fn execute(&self, out: Option<&Path>) -> CliResult<Outcome> {
        let kind = parse_kind(&self.kind)?;
        let spec = spec_of(kind, self.a)?;
        let grid = grid_of(self.length, self.points)?;
        let b = windowed_sample(&spec, &grid, self.t.unwrap_or(0.0))?;
        let h = assemble_hessian(&functional(kind, spec.a)?, &b, self.modes.unwrap_or(HESSIAN_K))?;

        let kernel = h.max_kernel_residual();
        let ratio = if h.spectral_norm > 0.0 { kernel / h.spectral_norm } else { kernel };
        let mut o = Outcome::default();
        o.put("dimension", h.dimension);
        o.put("min_eigenvalue", h.min_eigenvalue);
        o.put("negative_eigenvalues", h.eigenvalues.iter().filter(|v| **v < 0.0).count());
        o.put("spectral_norm", h.spectral_norm);
        o.put("asymmetry", h.asymmetry);
        o.put("kernel_residual", kernel);
        o.put("kernel_ratio", ratio);
        o.put("jacobi_sweeps", h.jacobi_sweeps);
        if expects_negative(kind) {
            o.require(h.min_eigenvalue < 0.0);
        } else {
            o.require(ratio < self.tol.unwrap_or(KERNEL_REL_TOL));
        }
        eprintln!("min eigenvalue {:e}, kernel residual {kernel:e} (ratio {ratio:e})", h.min_eigenvalue);

        if let Some(path) = out {
            let mut json = serde_json::to_string_pretty(&h).map_err(|e| CliError::Numeric(e.to_string()))?;
            json.push('\n');
            o.artifacts.push(Artifact {
                path: path.to_path_buf(),
                contents: json,
            });
            let mut csv = metadata_lines(&metadata_for(self));
            csv.push_str(&h.matrix_csv());
            o.artifacts.push(Artifact {
                path: suffixed(&path.with_extension("csv"), "matrix"),
                contents: csv,
            });
        }
        Ok(o)
    }
}
