use std::path::Path;

use breather_lab::analytic::sample;
use breather_lab::evolve::{run_to_end, SimConfig, Splitting};
use breather_lab::functionals::Frame;
use breather_lab::noise::NoiseSpec;
use breather_lab::variation::windowed_sample;
use breather_lab::{BreatherKind, BreatherSpec, ComplexField, GridSpec};
use clap::Args;
use serde::{Deserialize, Serialize};

use super::{grid_of, metadata_for, parse_kind, resolve_grid, spec_of, Experiment, GridDefaults};
use crate::defaults::BOUNDARY_TOL;
use crate::error::CliResult;
use crate::report::{Artifact, Outcome};

/// Evolve an exact solution, optionally perturbed, and record diagnostics.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[group(skip)]
#[serde(deny_unknown_fields)]
pub struct Evolve {
    /// Initial profile [default: stokes]
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub a: Option<f64>,
    /// Start time [default: 0]
    #[arg(long)]
    pub t0: Option<f64>,
    /// End time [default: 1]
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Time step [default: 0.01]
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub length: Option<f64>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub points: Option<usize>,
    /// strang or yoshida4
    #[arg(long)]
    pub splitting: Option<String>,
    /// Steps between records [default: 10]
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Amplitude of the seeded noise perturbation [default: 0]
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Gaussian envelope width of the noise; 0 disables it [default: L/20 on the line]
    #[arg(long)]
    pub envelope: Option<f64>,
    /// Sobolev index of the diagnostics norms
    #[arg(long)]
    pub s: Option<f64>,
    /// Mode indices to track, comma separated
    #[arg(long, value_delimiter = ',')]
    pub modes: Option<Vec<usize>>,
    /// Record F as well as M and E
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub track_f: Option<bool>,
    /// Record the orbital distance to the unperturbed solution [default: true]
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub reference: Option<bool>,
    /// Taper line-frame profiles to the background near the window edges [default: true]
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub window: Option<bool>,
}

fn grid_defaults(kind: BreatherKind) -> GridDefaults {
    let line = match kind {
        BreatherKind::Stokes => (50.0, 256),
        BreatherKind::Soliton => (40.0, 1024),
        _ => (200.0, 2048),
    };
    GridDefaults {
        line,
        periodic_points: 256,
    }
}

/// Exact profile plus `eps` times seeded noise.
pub fn initial_field(
    spec: &BreatherSpec,
    grid: &GridSpec,
    t0: f64,
    window: bool,
    eps: f64,
    seed: u64,
    envelope: f64,
) -> CliResult<ComplexField> {
    let base = if window {
        windowed_sample(spec, grid, t0)?
    } else {
        sample(spec, grid, t0, false)?
    };
    if eps == 0.0 {
        return Ok(base);
    }
    let mut noise = NoiseSpec::new(seed);
    if envelope > 0.0 {
        noise = noise.with_envelope(envelope);
    }
    Ok(base.axpy(eps, &noise.sample(grid)?)?)
}

impl Experiment for Evolve {
    const NAME: &'static str = "evolve";

    fn resolve(mut self) -> CliResult<Self> {
        let kind = parse_kind(&Some(self.kind.clone().unwrap_or_else(|| "stokes".into())))?;
        let spec = spec_of(kind, self.a)?;
        let (l, n) = resolve_grid(&spec, self.length, self.points, grid_defaults(kind))?;
        let splitting: Splitting = self.splitting.as_deref().unwrap_or("strang").parse()?;
        let periodic = Frame::of_kind(kind) == Frame::Periodic;
        self.kind = Some(kind.name().into());
        self.t0 = Some(self.t0.unwrap_or(0.0));
        self.t_end = Some(self.t_end.unwrap_or(1.0));
        self.dt = Some(self.dt.unwrap_or(0.01));
        self.length = Some(l);
        self.points = Some(n);
        self.splitting = Some(splitting.to_string());
        self.record_every = Some(self.record_every.unwrap_or(10));
        self.eps = Some(self.eps.unwrap_or(0.0));
        self.seed = Some(self.seed.unwrap_or(0));
        self.envelope = Some(self.envelope.unwrap_or(if periodic { 0.0 } else { l / 20.0 }));
        self.s = Some(self.s.unwrap_or(1.0));
        self.modes = Some(self.modes.unwrap_or_default());
        self.track_f = Some(self.track_f.unwrap_or(false));
        self.reference = Some(self.reference.unwrap_or(true));
        self.window = Some(self.window.unwrap_or(true));
        self.config()?.validate()?;
        Ok(self)
    }

    fn execute(&self, out: Option<&Path>) -> CliResult<Outcome> {
        let spec = spec_of(parse_kind(&self.kind)?, self.a)?;
        let cfg = self.config()?;
        let eps = self.eps.unwrap_or(0.0);
        let u0 = initial_field(
            &spec,
            &cfg.grid,
            cfg.t0,
            self.window.unwrap_or(true),
            eps,
            self.seed.unwrap_or(0),
            self.envelope.unwrap_or(0.0),
        )?;
        let (series, u) = run_to_end(&cfg, &u0)?;

        let mut o = Outcome::default();
        let last = series.len() - 1;
        o.put("steps", cfg.steps());
        o.put("records", series.len());
        o.put("halted_at", series.halted_at);
        o.put("t_final", series.times[last]);
        o.put("mass_drift", series.mass[last] - series.mass[0]);
        o.put("energy_drift", series.energy[last] - series.energy[0]);
        if let Some(f) = &series.f {
            o.put("f_drift", f[last] - f[0]);
        }
        if let Some(d) = &series.orbital_distance {
            o.put("max_orbital_distance", d.iter().copied().fold(0.0, f64::max));
            o.put("final_orbital_distance", d[last]);
        }
        if Frame::of_kind(spec.kind) == Frame::Line && spec.kind.has_background() {
            let boundary = series.boundary_deviation.iter().copied().fold(0.0, f64::max);
            o.put("max_boundary_deviation", boundary);
            o.put("boundary_valid", boundary <= BOUNDARY_TOL);
        }
        if eps == 0.0 && series.halted_at.is_none() {
            let exact = sample(&spec, &cfg.grid, u.t(), false)?;
            let err = u.zip_with(&exact, |p, q| p - q)?.sup_norm();
            o.put("sup_error_vs_exact", err);
        }
        if let Some(path) = out {
            o.artifacts.push(Artifact {
                path: path.to_path_buf(),
                contents: series.to_csv(&metadata_for(self)),
            });
        }
        Ok(o)
    }
}

impl Evolve {
    fn config(&self) -> CliResult<SimConfig> {
        let spec = spec_of(parse_kind(&self.kind)?, self.a)?;
        let mut cfg = SimConfig::new(
            grid_of(self.length, self.points)?,
            self.dt.unwrap_or(0.01),
            self.t0.unwrap_or(0.0),
            self.t_end.unwrap_or(1.0),
        );
        cfg.record_every = self.record_every.unwrap_or(10);
        cfg.splitting = self.splitting.as_deref().unwrap_or("strang").parse()?;
        cfg.sobolev_index = self.s.unwrap_or(1.0);
        cfg.tracked_modes = self.modes.clone().unwrap_or_default();
        cfg.track_f = self.track_f.unwrap_or(false);
        cfg.reference = self.reference.unwrap_or(true).then_some(spec);
        Ok(cfg)
    }
}
