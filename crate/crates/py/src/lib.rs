//! Python bindings: `import breather_lab_py`.

use breather_lab::analytic::{self, sample};
use breather_lab::evolve::{self as sim, SimConfig, Splitting};
use breather_lab::functionals::{self, Lyapunov, Quadrature};
use breather_lab::variation::{self, assemble_hessian, windowed_sample, Equation};
use breather_lab::{BreatherKind, BreatherSpec, Complex64, ComplexField, Error, GridSpec};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NonFinite(_) | Error::NoConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for breather_lab::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// Exact solution of the focusing NLS on the Stokes background.
#[pyclass(name = "Breather", frozen, from_py_object)]
#[derive(Clone)]
struct PyBreather {
    spec: BreatherSpec,
}

#[pymethods]
impl PyBreather {
    /// `kind` is one of stokes, peregrine, km, akhmediev, soliton.
    #[new]
    #[pyo3(signature = (kind, a = None))]
    fn new(kind: &str, a: Option<f64>) -> PyResult<Self> {
        let kind: BreatherKind = kind.parse().py()?;
        let a = match (kind, a) {
            (BreatherKind::KuznetsovMa | BreatherKind::Akhmediev, None) => {
                return Err(PyValueError::new_err(format!("`{kind}` needs parameter `a`")));
            }
            (_, a) => a.unwrap_or(0.0),
        };
        Ok(Self {
            spec: BreatherSpec::new(kind, a).py()?,
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.spec.kind.name()
    }

    #[getter]
    fn a(&self) -> f64 {
        self.spec.a
    }

    /// Natural period: `2π/α` in x for Akhmediev, in t for KM, else None.
    fn period(&self) -> PyResult<Option<f64>> {
        Ok(match self.spec.kind {
            BreatherKind::Akhmediev => Some(self.spec.akhmediev_params().py()?.period()),
            BreatherKind::KuznetsovMa => Some(analytic::km_period(self.spec.a).py()?),
            _ => None,
        })
    }

    fn __call__(&self, t: f64, x: f64) -> PyResult<Complex64> {
        analytic::eval(&self.spec, t, x).py()
    }

    /// Grid nodes and values at time `t`. `length` defaults to one period for Akhmediev.
    #[pyo3(signature = (t, points, length = None, perturbation = false))]
    fn sample(&self, t: f64, points: usize, length: Option<f64>, perturbation: bool) -> PyResult<(Vec<f64>, Vec<Complex64>)> {
        let grid = self.grid(length, points)?;
        let u = sample(&self.spec, &grid, t, perturbation).py()?;
        Ok((grid.nodes(), u.into_values()))
    }

    /// M, P, E, F and the matched Lyapunov value at time `t`.
    #[pyo3(signature = (t, points, length = None))]
    fn functionals<'py>(&self, py: Python<'py>, t: f64, points: usize, length: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
        let grid = self.grid(length, points)?;
        let u = sample(&self.spec, &grid, t, false).py()?;
        let r = functionals::report(&u, &Quadrature::for_kind(self.spec.kind)).py()?;
        let d = PyDict::new(py);
        d.set_item("M", r.mass)?;
        d.set_item("P", r.momentum)?;
        d.set_item("E", r.energy)?;
        d.set_item("F", r.f)?;
        d.set_item("frame", r.frame.to_string())?;
        if !matches!(self.spec.kind, BreatherKind::Stokes | BreatherKind::Soliton) {
            let l = Lyapunov::for_spec(&self.spec).py()?;
            d.set_item("lyapunov", l.evaluate(&u).py()?)?;
            d.set_item("lyapunov_coefficient", l.coefficient())?;
        }
        Ok(d)
    }

    /// Residual of `equation` (pde, ec-p, ec-km, ec-a; default: the matching
    /// elliptic equation). `dt` is the time step of the pde check.
    #[pyo3(signature = (t, points, length = None, equation = None, dt = 1e-5))]
    fn residual<'py>(
        &self,
        py: Python<'py>,
        t: f64,
        points: usize,
        length: Option<f64>,
        equation: Option<&str>,
        dt: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let grid = self.grid(length, points)?;
        let equation: Equation = match equation {
            Some(e) => e.parse().py()?,
            None => Equation::for_kind(self.spec.kind).py()?,
        };
        let r = match equation {
            Equation::NlsPde => variation::pde_residual(&self.spec, &grid, t, dt),
            e => variation::ode_residual_with(e, &self.spec, &grid, t),
        }
        .py()?;
        let d = PyDict::new(py);
        d.set_item("equation", r.equation.name())?;
        d.set_item("sup", r.sup_residual)?;
        d.set_item("l2", r.l2_residual)?;
        d.set_item("trusted_half_width", r.trusted_half_width)?;
        Ok(d)
    }

    /// Second variation of the matched Lyapunov functional on `2(2K+1)`
    /// Fourier directions of the windowed profile.
    #[pyo3(signature = (t, points, k, length = None))]
    fn hessian<'py>(&self, py: Python<'py>, t: f64, points: usize, k: usize, length: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
        let grid = self.grid(length, points)?;
        let b = windowed_sample(&self.spec, &grid, t).py()?;
        let functional = Lyapunov::for_spec(&self.spec).py()?;
        let h = py.detach(|| assemble_hessian(&functional, &b, k)).py()?;
        let d = PyDict::new(py);
        d.set_item("matrix", h.matrix.clone())?;
        d.set_item("eigenvalues", h.eigenvalues.clone())?;
        d.set_item("min_eigenvalue", h.min_eigenvalue)?;
        d.set_item("spectral_norm", h.spectral_norm)?;
        d.set_item("asymmetry", h.asymmetry)?;
        d.set_item("kernel_residual", h.max_kernel_residual())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        match self.spec.kind {
            BreatherKind::KuznetsovMa | BreatherKind::Akhmediev => format!("Breather('{}', a={})", self.kind(), self.spec.a),
            _ => format!("Breather('{}')", self.kind()),
        }
    }
}

impl PyBreather {
    fn grid(&self, length: Option<f64>, points: usize) -> PyResult<GridSpec> {
        let length = match (length, self.spec.kind) {
            (Some(l), _) => l,
            (None, BreatherKind::Akhmediev) => self.spec.akhmediev_params().py()?.period(),
            (None, _) => return Err(PyValueError::new_err("`length` is required on the line")),
        };
        GridSpec::new(length, points).py()
    }
}

/// Linear growth rate `k √(2 - k²)` of the Stokes wave, 0 outside the band.
#[pyfunction]
fn mi_theory_rate(k: f64) -> f64 {
    sim::mi_theory_rate(k)
}

/// Measured growth rate of mode `k` seeded at amplitude `eps`.
#[pyfunction]
#[pyo3(signature = (k, eps = 1e-6))]
fn mi_growth_rate<'py>(py: Python<'py>, k: f64, eps: f64) -> PyResult<Bound<'py, PyDict>> {
    let cfg = sim::growth_config(k, eps).py()?;
    let fit = py.detach(|| sim::mi_growth_rate(k, eps, &cfg)).py()?;
    let d = PyDict::new(py);
    d.set_item("k", fit.k)?;
    d.set_item("rate", fit.rate)?;
    d.set_item("theory_rate", fit.theory_rate)?;
    d.set_item("out_of_band", fit.out_of_band)?;
    d.set_item("window_found", fit.window_found)?;
    Ok(d)
}

/// Split-step evolution of `values` sampled on `[-length/2, length/2)`.
/// Returns the final field and the recorded diagnostics.
#[pyfunction]
#[pyo3(signature = (values, length, t0, t_end, dt, splitting = "strang", record_every = 10, reference = None))]
#[allow(clippy::too_many_arguments)]
fn evolve<'py>(
    py: Python<'py>,
    values: Vec<Complex64>,
    length: f64,
    t0: f64,
    t_end: f64,
    dt: f64,
    splitting: &str,
    record_every: usize,
    reference: Option<PyBreather>,
) -> PyResult<(Vec<Complex64>, Bound<'py, PyDict>)> {
    let grid = GridSpec::new(length, values.len()).py()?;
    let u0 = ComplexField::new(grid, t0, values).py()?;
    let mut cfg = SimConfig::new(grid, dt, t0, t_end);
    cfg.splitting = splitting.parse::<Splitting>().py()?;
    cfg.record_every = record_every;
    cfg.reference = reference.map(|r| r.spec);
    cfg.validate().py()?;
    let (series, u) = py.detach(|| sim::run_to_end(&cfg, &u0)).py()?;
    let d = PyDict::new(py);
    d.set_item("t", series.times)?;
    d.set_item("M", series.mass)?;
    d.set_item("E", series.energy)?;
    d.set_item("hs_norm", series.hs_norm_of_perturbation)?;
    d.set_item("orbital_distance", series.orbital_distance)?;
    d.set_item("halted_at", series.halted_at)?;
    Ok((u.into_values(), d))
}

#[pymodule]
fn breather_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", breather_lab::VERSION)?;
    m.add_class::<PyBreather>()?;
    m.add_function(wrap_pyfunction!(mi_theory_rate, m)?)?;
    m.add_function(wrap_pyfunction!(mi_growth_rate, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    Ok(())
}
