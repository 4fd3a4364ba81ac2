//! Default tolerances and run parameters. Bump [`DEFAULTS_VERSION`] whenever
//! a value here changes; it is echoed into every report.

pub const DEFAULTS_VERSION: &str = "2026.10.1";

pub const CONSERVED_REL_TOL: f64 = 1e-4;
pub const CONSERVED_ABS_TOL: f64 = 1e-3;

pub const RESIDUAL_TOL: f64 = 1e-6;
pub const RESIDUAL_DT: f64 = 1e-5;

pub const MI_REL_TOL: f64 = 0.05;
pub const MI_EPS: f64 = 1e-6;
pub const MI_POINTS: usize = 64;
pub const MI_DT: f64 = 0.01;
pub const MI_SWEEP: [f64; 7] = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75];

pub const DECAY_EXPONENT: f64 = -0.5;
pub const DECAY_REL_TOL: f64 = 0.1;
pub const DECAY_TMIN: f64 = 1e2;
pub const DECAY_TMAX: f64 = 1e4;
pub const DECAY_PER_DECADE: usize = 4;
pub const DECAY_POINTS: usize = 8192;
/// Window length in units of the current width of `Q(t)`.
pub const DECAY_WINDOW: f64 = 400.0;

pub const LIMIT_TOL: f64 = 1e-3;
pub const LIMIT_A: f64 = 0.25;
pub const LIMIT_T: f64 = 15.0;
pub const LIMIT_POINTS: usize = 256;
pub const LIMIT_SAMPLES: usize = 15;

pub const CONTROL_DISTANCE_TOL: f64 = 1e-6;
pub const GROWTH_RATIO: f64 = 10.0;

pub const KERNEL_REL_TOL: f64 = 1e-4;
pub const HESSIAN_K: usize = 8;

/// Line-frame window for `boundary_deviation` to count as valid.
pub const BOUNDARY_TOL: f64 = 1e-6;

/// Run presets of `instability perturbed-run`.
pub struct RunPreset {
    pub length: f64,
    pub points: usize,
    pub dt: f64,
    pub t0: f64,
    pub t_end: f64,
    pub splitting: &'static str,
    pub window: bool,
    pub record_every: usize,
}

/// Unperturbed control: wide enough that the algebraic tails stay exact.
pub const CONTROL_RUN: RunPreset = RunPreset {
    length: 3200.0,
    points: 32768,
    dt: 1e-3,
    t0: -1.0,
    t_end: 1.0,
    splitting: "yoshida4",
    window: false,
    record_every: 100,
};

pub const PERTURBED_RUN: RunPreset = RunPreset {
    length: 200.0,
    points: 2048,
    dt: 1e-2,
    t0: -10.0,
    t_end: 10.0,
    splitting: "strang",
    window: true,
    record_every: 50,
};

pub const PERTURBATION_EPS: f64 = 1e-3;
pub const ENVELOPE_WIDTH: f64 = 10.0;
