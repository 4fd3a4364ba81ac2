//! Split-step Fourier integration of `i u_t + u_xx + |u|² u = 0` on a
//! periodic grid, with conservation and orbital diagnostics.
//!
//! The field `u` is evolved with its background. Both substeps are exact
//! flows: the nonlinear one is the phase rotation `u e^{i|u|² τ}` and the
//! linear one multiplies Fourier mode `m` by `e^{-i k_m² τ}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

use crate::analytic::BreatherSpec;
use crate::error::{check_range, Error, Result};
use crate::functionals::{self, Frame, Quadrature};
use crate::spectral::{sobolev_norm, spectrum, ComplexField, GridSpec, RustFftTransform, Transform};
use crate::variation::orbital_distance;

/// Upper bound on the number of steps of one run.
pub const MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    /// Second order: half nonlinear, full linear, half nonlinear.
    #[default]
    Strang,
    /// Fourth order triple-jump composition of Strang steps.
    Yoshida4,
}

impl std::str::FromStr for Splitting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "strang" => Ok(Splitting::Strang),
            "yoshida4" | "yoshida" => Ok(Splitting::Yoshida4),
            other => Err(Error::Usage(format!("unknown splitting `{other}`"))),
        }
    }
}

impl std::fmt::Display for Splitting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Splitting::Strang => "strang",
            Splitting::Yoshida4 => "yoshida4",
        })
    }
}

fn yoshida_weights() -> (f64, f64) {
    let c = 2f64.powf(1.0 / 3.0);
    let w1 = 1.0 / (2.0 - c);
    (w1, -c * w1)
}

/// Reusable integrator for one grid. Linear multipliers are cached per
/// substep length.
pub struct Stepper {
    grid: GridSpec,
    splitting: Splitting,
    fft: RustFftTransform,
    k2: Vec<f64>,
    cache: Vec<(u64, Vec<Complex64>)>,
}

impl Stepper {
    pub fn new(grid: GridSpec, splitting: Splitting) -> Self {
        let k2 = grid.wavenumbers().iter().map(|k| k * k).collect();
        Self {
            grid,
            splitting,
            fft: RustFftTransform::new(grid.points()),
            k2,
            cache: Vec::new(),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn multiplier(&mut self, tau: f64) -> usize {
        let key = tau.to_bits();
        if let Some(i) = self.cache.iter().position(|(k, _)| *k == key) {
            return i;
        }
        let m = self.k2.iter().map(|k2| Complex64::from_polar(1.0, -k2 * tau)).collect();
        self.cache.push((key, m));
        self.cache.len() - 1
    }

    fn strang(&mut self, u: &mut [Complex64], tau: f64) {
        let half = 0.5 * tau;
        nonlinear(u, half);
        let i = self.multiplier(tau);
        self.fft.forward(u);
        for (v, m) in u.iter_mut().zip(&self.cache[i].1) {
            *v *= m;
        }
        self.fft.inverse(u);
        nonlinear(u, half);
    }

    /// Advances samples in place by `dt` (negative `dt` runs backwards).
    /// Fails with [`Error::NonFinite`] on overflow.
    pub fn advance(&mut self, u: &mut [Complex64], dt: f64) -> Result<()> {
        match self.splitting {
            Splitting::Strang => self.strang(u, dt),
            Splitting::Yoshida4 => {
                let (w1, w0) = yoshida_weights();
                self.strang(u, w1 * dt);
                self.strang(u, w0 * dt);
                self.strang(u, w1 * dt);
            }
        }
        if u.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("evolved field"))
        }
    }

    pub fn step(&mut self, u: &ComplexField, dt: f64) -> Result<ComplexField> {
        if u.grid() != &self.grid {
            return Err(Error::GridMismatch("field and stepper grids differ".into()));
        }
        let mut values = u.values().to_vec();
        self.advance(&mut values, dt)?;
        ComplexField::new(self.grid, u.t() + dt, values)
    }
}

fn nonlinear(u: &mut [Complex64], tau: f64) {
    for v in u.iter_mut() {
        *v *= Complex64::from_polar(1.0, v.norm_sqr() * tau);
    }
}

/// One Strang step.
pub fn step(u: &ComplexField, dt: f64) -> Result<ComplexField> {
    Stepper::new(*u.grid(), Splitting::Strang).step(u, dt)
}

fn default_sobolev_index() -> f64 {
    1.0
}

fn default_record_every() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub grid: GridSpec,
    pub dt: f64,
    pub t0: f64,
    pub t_end: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub reference: Option<BreatherSpec>,
    #[serde(default = "default_sobolev_index")]
    pub sobolev_index: f64,
    #[serde(default)]
    pub splitting: Splitting,
    /// Non-negative mode indices `m`; each records `|ŵ_m| + |ŵ_{-m}|`.
    #[serde(default)]
    pub tracked_modes: Vec<usize>,
    #[serde(default)]
    pub track_f: bool,
    /// Frame of the orbital distance; defaults to the reference's natural frame.
    #[serde(default)]
    pub orbital_frame: Option<Frame>,
}

impl SimConfig {
    pub fn new(grid: GridSpec, dt: f64, t0: f64, t_end: f64) -> Self {
        Self {
            grid,
            dt,
            t0,
            t_end,
            record_every: 1,
            reference: None,
            sobolev_index: 1.0,
            splitting: Splitting::Strang,
            tracked_modes: Vec::new(),
            track_f: false,
            orbital_frame: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_range("dt", self.dt, "(0, inf)", self.dt > 0.0)?;
        check_range("t0", self.t0, "finite", self.t0.is_finite())?;
        check_range("t_end", self.t_end, "[t0, inf)", self.t_end >= self.t0)?;
        check_range("record_every", self.record_every as f64, "[1, inf)", self.record_every >= 1)?;
        check_range("sobolev_index", self.sobolev_index, "[0, inf)", self.sobolev_index >= 0.0)?;
        if let Some(r) = &self.reference {
            r.validate()?;
        }
        let half = self.grid.points() / 2;
        if let Some(m) = self.tracked_modes.iter().find(|m| **m >= half) {
            return Err(Error::Usage(format!("tracked mode {m} is not resolved by the grid")));
        }
        let steps = (self.t_end - self.t0) / self.dt;
        if steps.round() > MAX_STEPS as f64 {
            return Err(Error::Usage(format!("{steps:.0} steps exceed the cap of {MAX_STEPS}")));
        }
        Ok(())
    }

    /// Number of steps; the last step lands on `t0 + steps·dt`.
    pub fn steps(&self) -> usize {
        ((self.t_end - self.t0) / self.dt).round() as usize
    }
}

/// Time-indexed diagnostics of one run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DiagnosticSeries {
    pub times: Vec<f64>,
    #[serde(rename = "M")]
    pub mass: Vec<f64>,
    #[serde(rename = "E")]
    pub energy: Vec<f64>,
    #[serde(rename = "F")]
    pub f: Option<Vec<f64>>,
    /// `‖u e^{-it} - 1‖_{H^s}`.
    pub hs_norm_of_perturbation: Vec<f64>,
    pub orbital_distance: Option<Vec<f64>>,
    pub tracked_modes: Vec<usize>,
    /// One row per record, one column per tracked mode.
    pub mode_amplitudes: Vec<Vec<f64>>,
    /// `|u(x_0) - e^{it}|` at the left window edge.
    pub boundary_deviation: Vec<f64>,
    /// Time of the last finite state when the run stopped on overflow.
    pub halted_at: Option<f64>,
}

impl DiagnosticSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// CSV with a header row; `metadata` lines are written first, `#`-prefixed.
    /// Absent optional columns are left empty.
    pub fn to_csv(&self, metadata: &[(String, String)]) -> String {
        let mut out = String::new();
        for (k, v) in metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut header = vec![
            "t".to_string(),
            "M".into(),
            "E".into(),
            "F".into(),
            "hs_norm".into(),
            "orbital_distance".into(),
            "boundary_deviation".into(),
        ];
        header.extend(self.tracked_modes.iter().map(|m| format!("mode_{m}")));
        out.push_str(&header.join(","));
        out.push('\n');
        let opt = |v: &Option<Vec<f64>>, i: usize| v.as_ref().map(|v| fmt_num(v[i])).unwrap_or_default();
        for i in 0..self.len() {
            let mut row = vec![
                fmt_num(self.times[i]),
                fmt_num(self.mass[i]),
                fmt_num(self.energy[i]),
                opt(&self.f, i),
                fmt_num(self.hs_norm_of_perturbation[i]),
                opt(&self.orbital_distance, i),
                fmt_num(self.boundary_deviation[i]),
            ];
            row.extend(self.mode_amplitudes[i].iter().map(|v| fmt_num(*v)));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest representation that round-trips.
pub fn fmt_num(v: f64) -> String {
    format!("{v:e}")
}

struct Recorder<'a> {
    config: &'a SimConfig,
    series: DiagnosticSeries,
}

impl<'a> Recorder<'a> {
    fn new(config: &'a SimConfig) -> Self {
        let series = DiagnosticSeries {
            f: config.track_f.then(Vec::new),
            orbital_distance: config.reference.map(|_| Vec::new()),
            tracked_modes: config.tracked_modes.clone(),
            ..Default::default()
        };
        Self { config, series }
    }

    fn record(&mut self, u: &ComplexField) -> Result<()> {
        let t = u.t();
        let s = &mut self.series;
        let quad = Quadrature::PERIODIC;
        let report = functionals::report(u, &quad)?;
        s.times.push(t);
        s.mass.push(report.mass);
        s.energy.push(report.energy);
        if let Some(f) = s.f.as_mut() {
            f.push(report.f);
        }
        let rot = Complex64::from_polar(1.0, -t);
        let w = u.map(|v| v * rot - 1.0)?;
        s.hs_norm_of_perturbation.push(sobolev_norm(&w, self.config.sobolev_index));
        if let (Some(reference), Some(d)) = (&self.config.reference, s.orbital_distance.as_mut()) {
            let frame = self.config.orbital_frame.unwrap_or(Frame::of_kind(reference.kind));
            d.push(orbital_distance(u, reference, self.config.sobolev_index, frame)?.distance);
        }
        if !self.config.tracked_modes.is_empty() {
            let c = spectrum(&w);
            let g = u.grid();
            let amp = |m: i64| g.bin_of_mode(m).map(|b| c[b].norm()).unwrap_or(0.0);
            let row = self
                .config
                .tracked_modes
                .iter()
                .map(|&m| {
                    let m = m as i64;
                    if m == 0 {
                        amp(0)
                    } else {
                        amp(m) + amp(-m)
                    }
                })
                .collect();
            s.mode_amplitudes.push(row);
        } else {
            s.mode_amplitudes.push(Vec::new());
        }
        s.boundary_deviation.push((u.values()[0] - Complex64::from_polar(1.0, t)).norm());
        Ok(())
    }
}

/// Evolves `u0` from `config.t0` to `config.t_end`, recording every
/// `record_every` steps and at the final step. Returns the series and the
/// last finite field.
pub fn run_to_end(config: &SimConfig, u0: &ComplexField) -> Result<(DiagnosticSeries, ComplexField)> {
    config.validate()?;
    if u0.grid() != &config.grid {
        return Err(Error::GridMismatch("initial field is not on the configured grid".into()));
    }
    let mut stepper = Stepper::new(config.grid, config.splitting);
    let mut rec = Recorder::new(config);
    let mut u = u0.clone().with_time(config.t0);
    rec.record(&u)?;
    let n = config.steps();
    let mut values = u.values().to_vec();
    for i in 1..=n {
        match stepper.advance(&mut values, config.dt) {
            Ok(()) => {}
            Err(Error::NonFinite(_)) => {
                rec.series.halted_at = Some(config.t0 + (i - 1) as f64 * config.dt);
                return Ok((rec.series, u));
            }
            Err(e) => return Err(e),
        }
        if i % config.record_every == 0 || i == n {
            u = ComplexField::new(config.grid, config.t0 + i as f64 * config.dt, values.clone())?;
            rec.record(&u)?;
        }
    }
    let u = ComplexField::new(config.grid, config.t0 + n as f64 * config.dt, values)?;
    Ok((rec.series, u))
}

pub fn run(config: &SimConfig, u0: &ComplexField) -> Result<DiagnosticSeries> {
    run_to_end(config, u0).map(|(s, _)| s)
}

/// `|k| √(2 - k²)` inside the band `0 < |k| < √2`, zero outside.
pub fn mi_theory_rate(k: f64) -> f64 {
    let d = 2.0 - k * k;
    if d > 0.0 {
        k.abs() * d.sqrt()
    } else {
        0.0
    }
}

/// Smallest growth rate a seeded run is long enough to measure.
const MIN_RESOLVED_RATE: f64 = 1e-3;

fn in_band(k: f64) -> bool {
    k > 0.0 && mi_theory_rate(k) > MIN_RESOLVED_RATE
}

/// Least-squares exponential growth rate of a seeded mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub k: f64,
    pub rate: f64,
    pub theory_rate: f64,
    pub out_of_band: bool,
    /// Whether the amplitude passed through `[10 ε, 1e-2]`; if not the whole
    /// run was fitted.
    pub window_found: bool,
    pub fit_start: f64,
    pub fit_end: f64,
    pub fit_points: usize,
}

/// Upper edge of the linear-growth window.
pub const GROWTH_WINDOW_TOP: f64 = 1e-2;

/// Default run for [`mi_growth_rate`]: one wavelength `L = 2π/k`, 64 points,
/// `dt = 0.01`, long enough for the seeded mode to leave the fit window.
pub fn growth_config(k: f64, eps: f64) -> Result<SimConfig> {
    check_range("k", k, "(0, inf)", k > 0.0)?;
    check_range("eps", eps, "(0, 1e-5]", eps > 0.0 && eps <= 1e-5)?;
    let grid = GridSpec::new(2.0 * PI / k, 64)?;
    let sigma = mi_theory_rate(k);
    let t_end = if sigma > MIN_RESOLVED_RATE {
        ((GROWTH_WINDOW_TOP / eps).ln() + 3.0) / sigma
    } else {
        20.0
    };
    let mut c = SimConfig::new(grid, 0.01, 0.0, (t_end / 0.01).ceil() * 0.01);
    c.tracked_modes = vec![1];
    Ok(c)
}

/// Seeds `e^{it0}(1 + ε cos kx)` and fits the log-amplitude slope of mode `k`
/// over the window where it lies in `[10 ε, 1e-2]`. The grid length must be
/// a multiple of `2π/k`.
pub fn mi_growth_rate(k: f64, eps: f64, config: &SimConfig) -> Result<GrowthFit> {
    check_range("eps", eps, "(0, 1e-5]", eps > 0.0 && eps <= 1e-5)?;
    let theory_rate = mi_theory_rate(k);
    if !(k > 0.0) {
        return Ok(GrowthFit {
            k,
            rate: 0.0,
            theory_rate,
            out_of_band: true,
            window_found: false,
            fit_start: config.t0,
            fit_end: config.t0,
            fit_points: 0,
        });
    }
    let grid = config.grid;
    let cells = k * grid.length() / (2.0 * PI);
    let m = cells.round();
    if m < 1.0 || (cells - m).abs() > 1e-9 * cells.max(1.0) {
        return Err(Error::Usage(format!(
            "window length {} is not a multiple of 2π/k for k = {k}",
            grid.length()
        )));
    }
    let mut cfg = config.clone();
    cfg.tracked_modes = vec![m as usize];
    cfg.reference = None;
    let t0 = cfg.t0;
    let u0 = ComplexField::from_fn(grid, t0, |x| Complex64::from_polar(1.0, t0) * (1.0 + eps * (k * x).cos()))?;
    let series = run(&cfg, &u0)?;
    let amp: Vec<f64> = series.mode_amplitudes.iter().map(|r| r[0]).collect();

    let band = in_band(k);
    let (lo, hi) = (10.0 * eps, GROWTH_WINDOW_TOP);
    let window = if band {
        amp.iter().position(|a| *a >= lo).and_then(|start| {
            let len = amp[start..].iter().take_while(|a| **a <= hi).count();
            (len >= 3).then_some(start..start + len)
        })
    } else {
        None
    };
    let window_found = window.is_some();
    let range = window.unwrap_or(0..amp.len());
    let (ts, ys): (Vec<f64>, Vec<f64>) = range
        .clone()
        .filter(|&i| amp[i] > 0.0)
        .map(|i| (series.times[i], amp[i].ln()))
        .unzip();
    let rate = slope(&ts, &ys);
    Ok(GrowthFit {
        k,
        rate,
        theory_rate,
        out_of_band: !band,
        window_found,
        fit_start: ts.first().copied().unwrap_or(t0),
        fit_end: ts.last().copied().unwrap_or(t0),
        fit_points: ts.len(),
    })
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    if x.len() < 2 {
        return 0.0;
    }
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        0.0
    }
}

/// Upper edge of the modulational band.
pub const BAND_EDGE: f64 = SQRT_2;
