use std::f64::consts::SQRT_2;
use std::path::Path;

use breather_lab::analytic::{akhmediev_phase, sample, AkhmedievParams};
use breather_lab::evolve::{fmt_num, run, SimConfig, Splitting};
use breather_lab::functionals::Frame;
use breather_lab::spectral::sobolev_norm;
use breather_lab::{BreatherKind, BreatherSpec, Complex64, GridSpec};
use clap::{Args, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evolve::initial_field;
use super::{grid_of, metadata_for, parse_kind, spec_of, Common, Experiment};
use crate::defaults::*;
use crate::error::{CliError, CliResult};
use crate::report::{metadata_lines, Artifact, Outcome};

#[derive(Subcommand, Debug, Clone)]
pub enum Scenario {
    /// Decay of the Peregrine perturbation ‖Q(t)‖_{H^s} over a log grid in t
    Decay {
        #[command(flatten)]
        params: Decay,
        #[command(flatten)]
        common: Common,
    },
    /// Orbital distance of a perturbed breather run, against an unperturbed control
    PerturbedRun {
        #[command(flatten)]
        params: PerturbedRun,
        #[command(flatten)]
        common: Common,
    },
    /// Distance of the Akhmediev breather to its phase-shifted limits as t → ±∞
    AkhmedievLimits {
        #[command(flatten)]
        params: AkhmedievLimits,
        #[command(flatten)]
        common: Common,
    },
}

impl Scenario {
    pub fn run(&self) -> CliResult<Option<bool>> {
        match self {
            Scenario::Decay { params, common } => super::run(params, common),
            Scenario::PerturbedRun { params, common } => super::run(params, common),
            Scenario::AkhmedievLimits { params, common } => super::run(params, common),
        }
    }
}

fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = x.iter().zip(y).map(|(a, b)| (a.ln(), b.ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[group(skip)]
#[serde(deny_unknown_fields)]
pub struct Decay {
    /// Sobolev index
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub tmin: Option<f64>,
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Sample times per decade
    #[arg(long)]
    pub per_decade: Option<usize>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub points: Option<usize>,
    /// Window length in widths of Q(t)
    #[arg(long)]
    pub window: Option<f64>,
    /// Relative tolerance on the exponent -1/2
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Decay {
    fn times(&self) -> Vec<f64> {
        let (tmin, tmax) = (self.tmin.unwrap_or(DECAY_TMIN), self.tmax.unwrap_or(DECAY_TMAX));
        let per = self.per_decade.unwrap_or(DECAY_PER_DECADE) as f64;
        let n = ((tmax / tmin).log10() * per).round() as usize;
        (0..=n).map(|i| tmin * 10f64.powf(i as f64 / per)).collect()
    }
}

impl Experiment for Decay {
    const NAME: &'static str = "instability-decay";

    fn resolve(mut self) -> CliResult<Self> {
        let (tmin, tmax) = (self.tmin.unwrap_or(DECAY_TMIN), self.tmax.unwrap_or(DECAY_TMAX));
        if !(tmin > 0.0 && tmax > tmin) {
            return Err(CliError::Usage(format!("need 0 < tmin < tmax, got {tmin} and {tmax}")));
        }
        let points = self.points.unwrap_or(DECAY_POINTS);
        GridSpec::new(1.0, points)?;
        self.s = Some(self.s.unwrap_or(1.0));
        self.tmin = Some(tmin);
        self.tmax = Some(tmax);
        self.per_decade = Some(self.per_decade.unwrap_or(DECAY_PER_DECADE).max(1));
        self.points = Some(points);
        self.window = Some(self.window.unwrap_or(DECAY_WINDOW));
        self.tol = Some(self.tol.unwrap_or(DECAY_REL_TOL));
        if self.times().len() < 2 {
            return Err(CliError::Usage("the time grid needs at least two points".into()));
        }
        Ok(self)
    }

    fn execute(&self, out: Option<&Path>) -> CliResult<Outcome> {
        let s = self.s.unwrap_or(1.0);
        let window = self.window.unwrap_or(DECAY_WINDOW);
        let points = self.points.unwrap_or(DECAY_POINTS);
        let times = self.times();
        let norms: Vec<f64> = times
            .par_iter()
            .map(|&t| {
                let width = ((1.0 + 4.0 * t * t).sqrt() / SQRT_2).max(1.0);
                let grid = GridSpec::new(window * width, points)?;
                Ok(sobolev_norm(&sample(&BreatherSpec::peregrine(), &grid, t, true)?, s))
            })
            .collect::<Vec<CliResult<f64>>>()
            .into_iter()
            .collect::<CliResult<_>>()?;
        let exponent = log_slope(&times, &norms);
        let rel = ((exponent - DECAY_EXPONENT) / DECAY_EXPONENT).abs();

        let mut o = Outcome::default();
        o.put("exponent", exponent);
        o.put("expected_exponent", DECAY_EXPONENT);
        o.put("relative_error", rel);
        o.require(rel <= self.tol.unwrap_or(DECAY_REL_TOL));
        if let Some(path) = out {
            let mut csv = metadata_lines(&metadata_for(self));
            csv.push_str("t,norm\n");
            for (t, n) in times.iter().zip(&norms) {
                csv.push_str(&format!("{},{}\n", fmt_num(*t), fmt_num(*n)));
            }
            o.artifacts.push(Artifact {
                path: path.to_path_buf(),
                contents: csv,
            });
        }
        Ok(o)
    }
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[group(skip)]
#[serde(deny_unknown_fields)]
pub struct AkhmedievLimits {
    #[arg(long)]
    pub a: Option<f64>,
    /// Largest |t|
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub points: Option<usize>,
    #[arg(long)]
    pub s: Option<f64>,
    /// Number of tabulated times in (0, T]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Pass threshold on both distances at |t| = T
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Experiment for AkhmedievLimits {
    const NAME: &'static str = "instability-akhmediev-limits";

    fn resolve(mut self) -> CliResult<Self> {
        let a = self.a.unwrap_or(LIMIT_A);
        let period = AkhmedievParams::new(a)?.period();
        let points = self.points.unwrap_or(LIMIT_POINTS);
        GridSpec::new(period, points)?;
        let horizon = self.horizon.unwrap_or(LIMIT_T);
        if !(horizon > 0.0) {
            return Err(CliError::Usage(format!("T must be positive, got {horizon}")));
        }
        self.a = Some(a);
        self.horizon = Some(horizon);
        self.points = Some(points);
        self.s = Some(self.s.unwrap_or(1.0));
        self.samples = Some(self.samples.unwrap_or(LIMIT_SAMPLES).max(1));
        self.tol = Some(self.tol.unwrap_or(LIMIT_TOL));
        Ok(self)
    }

    fn execute(&self, out: Option<&Path>) -> CliResult<Outcome> {
        let a = self.a.unwrap_or(LIMIT_A);
        let spec = BreatherSpec::akhmediev(a)?;
        let grid = GridSpec::new(AkhmedievParams::new(a)?.period(), self.points.unwrap_or(LIMIT_POINTS))?;
        let s = self.s.unwrap_or(1.0);
        let theta = akhmediev_phase(a)?;
        let distance = |t: f64, phase: Complex64| -> CliResult<f64> {
            let limit = Complex64::from_polar(1.0, t) * phase;
            let u = sample(&spec, &grid, t, false)?;
            Ok(sobolev_norm(&u.map(|v| v - limit)?, s))
        };
        let horizon = self.horizon.unwrap_or(LIMIT_T);
        let n = self.samples.unwrap_or(LIMIT_SAMPLES);
        let mut rows = Vec::with_capacity(n);
        for j in 1..=n {
            let t = horizon * j as f64 / n as f64;
            rows.push((t, distance(t, theta)?, distance(-t, theta.conj())?));
        }
        let (_, d_plus, d_minus) = rows[n - 1];
        let tol = self.tol.unwrap_or(LIMIT_TOL);

        let mut o = Outcome::default();
        o.put("theta_re", theta.re);
        o.put("theta_im", theta.im);
        o.put("distance_plus", d_plus);
        o.put("distance_minus", d_minus);
        o.require(d_plus < tol && d_minus < tol);
        if let Some(path) = out {
            let mut csv = metadata_lines(&metadata_for(self));
            csv.push_str("t,distance_plus,distance_minus\n");
            for (t, p, m) in &rows {
                csv.push_str(&format!("{},{},{}\n", fmt_num(*t), fmt_num(*p), fmt_num(*m)));
            }
            o.artifacts.push(Artifact {
                path: path.to_path_buf(),
                contents: csv,
            });
        }
        Ok(o)
    }
}

/// `eps = 0` selects the control preset, any other value the perturbed preset;
/// explicit values override either.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[group(skip)]
#[serde(deny_unknown_fields)]
pub struct PerturbedRun {
    /// peregrine, km or akhmediev [default: peregrine]
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub a: Option<f64>,
    /// Noise amplitude [default: 1e-3]
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Gaussian envelope width of the noise; 0 disables it
    #[arg(long)]
    pub envelope: Option<f64>,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub length: Option<f64>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub points: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub splitting: Option<String>,
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Taper the initial profile to the background near the window edges
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub window: Option<bool>,
    #[arg(long)]
    pub s: Option<f64>,
    /// Control: pass threshold on the largest orbital distance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Perturbed: required growth of the distance relative to the control
    #[arg(long)]
    pub ratio: Option<f64>,
}

impl PerturbedRun {
    fn config(&self, spec: &BreatherSpec) -> CliResult<SimConfig> {
        let mut cfg = SimConfig::new(
            grid_of(self.length, self.points)?,
            self.dt.unwrap_or(PERTURBED_RUN.dt),
            self.t0.unwrap_or(PERTURBED_RUN.t0),
            self.t_end.unwrap_or(PERTURBED_RUN.t_end),
        );
        cfg.record_every = self.record_every.unwrap_or(PERTURBED_RUN.record_every);
        cfg.splitting = self.splitting.as_deref().unwrap_or(PERTURBED_RUN.splitting).parse()?;
        cfg.sobolev_index = self.s.unwrap_or(1.0);
        cfg.reference = Some(*spec);
        Ok(cfg)
    }

    fn distances(&self, spec: &BreatherSpec, cfg: &SimConfig, eps: f64) -> CliResult<(Vec<f64>, Vec<f64>, Option<f64>)> {
        let u0 = initial_field(
            spec,
            &cfg.grid,
            cfg.t0,
            self.window.unwrap_or(true),
            eps,
            self.seed.unwrap_or(1),
            self.envelope.unwrap_or(0.0),
        )?;
        let series = run(cfg, &u0)?;
        let d = series.orbital_distance.unwrap_or_default();
        Ok((series.times, d, series.halted_at))
    }
}

impl Experiment for PerturbedRun {
    const NAME: &'static str = "instability-perturbed-run";

    fn resolve(mut self) -> CliResult<Self> {
        let kind = parse_kind(&Some(self.kind.clone().unwrap_or_else(|| "peregrine".into())))?;
        if matches!(kind, BreatherKind::Stokes | BreatherKind::Soliton) {
            return Err(CliError::Usage(format!("`{kind}` is not a breather")));
        }
        let spec = spec_of(kind, self.a)?;
        let eps = self.eps.unwrap_or(PERTURBATION_EPS);
        let preset = if eps == 0.0 { &CONTROL_RUN } else { &PERTURBED_RUN };
        let periodic = Frame::of_kind(kind) == Frame::Periodic;
        let (l, n) = if periodic {
            (AkhmedievParams::new(spec.a)?.period(), 256)
        } else {
            (preset.length, preset.points)
        };
        self.kind = Some(kind.name().into());
        self.eps = Some(eps);
        self.seed = Some(self.seed.unwrap_or(1));
        self.envelope = Some(self.envelope.unwrap_or(if periodic { 0.0 } else { ENVELOPE_WIDTH }));
        self.length = Some(self.length.unwrap_or(l));
        self.points = Some(self.points.unwrap_or(n));
        self.dt = Some(self.dt.unwrap_or(preset.dt));
        self.t0 = Some(self.t0.unwrap_or(preset.t0));
        self.t_end = Some(self.t_end.unwrap_or(preset.t_end));
        let splitting: Splitting = self.splitting.as_deref().unwrap_or(preset.splitting).parse()?;
        self.splitting = Some(splitting.to_string());
        self.record_every = Some(self.record_every.unwrap_or(preset.record_every));
        self.window = Some(self.window.unwrap_or(preset.window && !periodic));
        self.s = Some(self.s.unwrap_or(1.0));
        self.tol = Some(self.tol.unwrap_or(CONTROL_DISTANCE_TOL));
        self.ratio = Some(self.ratio.unwrap_or(GROWTH_RATIO));
        self.config(&spec)?.validate()?;
        Ok(self)
    }

    fn execute(&self, out: Option<&Path>) -> CliResult<Outcome> {
        let spec = spec_of(parse_kind(&self.kind)?, self.a)?;
        let cfg = self.config(&spec)?;
        let eps = self.eps.unwrap_or(PERTURBATION_EPS);
        let (perturbed, control) = if eps == 0.0 {
            (self.distances(&spec, &cfg, 0.0)?, None)
        } else {
            let (p, c) = rayon::join(|| self.distances(&spec, &cfg, eps), || self.distances(&spec, &cfg, 0.0));
            (p?, Some(c?))
        };
        let (times, d, halted) = perturbed;
        let max = d.iter().copied().fold(0.0, f64::max);

        let mut o = Outcome::default();
        o.put("max_distance", max);
        o.put("final_distance", d.last().copied().unwrap_or(0.0));
        o.put("halted_at", halted);
        match &control {
            None => o.require(max < self.tol.unwrap_or(CONTROL_DISTANCE_TOL)),
            Some((_, c, _)) => {
                let growth = d
                    .iter()
                    .zip(c)
                    .filter(|(_, c)| **c > 0.0)
                    .map(|(p, c)| p / c)
                    .fold(0.0, f64::max);
                o.put("control_max_distance", c.iter().copied().fold(0.0, f64::max));
                o.put("growth_ratio", growth);
                o.require(growth > self.ratio.unwrap_or(GROWTH_RATIO));
            }
        }
        if let Some(path) = out {
            let mut csv = metadata_lines(&metadata_for(self));
            csv.push_str("t,orbital_distance,control_distance\n");
            for (i, t) in times.iter().enumerate() {
                let c = control.as_ref().and_then(|(_, c, _)| c.get(i)).map(|v| fmt_num(*v)).unwrap_or_default();
                csv.push_str(&format!("{},{},{c}\n", fmt_num(*t), fmt_num(d[i])));
            }
            o.artifacts.push(Artifact {
                path: path.to_path_buf(),
                contents: csv,
            });
        }
        Ok(o)
    }
}
