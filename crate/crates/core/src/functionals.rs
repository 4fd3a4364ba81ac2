//! Conserved quantities `M`, `P`, `E`, `F`, the Lyapunov combinations built
//! from them, and the energy-space metric.
//!
//! All densities are formed from spectral derivatives of the sampled field.
//! On the line the integrals close with a far-field tail model per
//! functional; on a period they are plain trapezoid sums.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::analytic::{AkhmedievParams, BreatherKind, BreatherSpec, KmParams};
use crate::error::{Error, Result};
use crate::spectral::{derivatives_of, integrate_line_samples, ComplexField, Tail};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Line,
    Periodic,
}

impl Frame {
    /// Periodic for the Akhmediev breather, line for everything else.
    pub fn of_kind(kind: BreatherKind) -> Self {
        match kind {
            BreatherKind::Akhmediev => Frame::Periodic,
            _ => Frame::Line,
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frame::Line => "line",
            Frame::Periodic => "periodic",
        })
    }
}

/// How the four integrals are closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    frame: Frame,
    mass: Tail,
    momentum: Tail,
    energy: Tail,
    f: Tail,
}

impl Quadrature {
    /// Trapezoid sum over one period.
    pub const PERIODIC: Self = Self::uniform(Frame::Periodic);

    /// Whole line, integrands decaying exponentially inside the window.
    pub const LINE_EXPONENTIAL: Self = Self::uniform(Frame::Line);

    /// Whole line with the algebraic far fields of a rational perturbation
    /// `w ~ x^{-2}`: the mass density decays like `x^{-2}`, the momentum
    /// density like `x^{-3}`, the energy density like `x^{-4}` and the `F`
    /// density like `x^{-6}`.
    pub const LINE_ALGEBRAIC: Self = Self {
        frame: Frame::Line,
        mass: Tail::Algebraic(2.0),
        momentum: Tail::Algebraic(3.0),
        energy: Tail::Algebraic(4.0),
        f: Tail::Algebraic(6.0),
    };

    const fn uniform(frame: Frame) -> Self {
        Self {
            frame,
            mass: Tail::None,
            momentum: Tail::None,
            energy: Tail::None,
            f: Tail::None,
        }
    }

    /// The natural closure for a solution of the given kind.
    pub fn for_kind(kind: BreatherKind) -> Self {
        match kind {
            BreatherKind::Peregrine => Self::LINE_ALGEBRAIC,
            BreatherKind::Akhmediev => Self::PERIODIC,
            BreatherKind::Stokes | BreatherKind::KuznetsovMa | BreatherKind::Soliton => {
                Self::LINE_EXPONENTIAL
            }
        }
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    fn integrate(&self, f: &ComplexField, density: Vec<f64>, tail: Tail) -> Result<f64> {
        match self.frame {
            Frame::Periodic => Ok(density.iter().sum::<f64>() * f.grid().dx()),
            Frame::Line => {
                let values: Vec<Complex64> = density.into_iter().map(Complex64::from).collect();
                Ok(integrate_line_samples(&values, f.grid(), tail)?.re)
            }
        }
    }
}

/// Values of the four conserved functionals for one field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    #[serde(rename = "M")]
    pub mass: f64,
    #[serde(rename = "P")]
    pub momentum: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub frame: Frame,
    pub t: f64,
}

/// Pointwise ingredients shared by all densities.
struct Local<'a> {
    u: &'a [Complex64],
    ux: Vec<Complex64>,
    uxx: Vec<Complex64>,
}

impl<'a> Local<'a> {
    fn new(field: &'a ComplexField, need_second: bool) -> Self {
        let orders: &[u32] = if need_second { &[1, 2] } else { &[1] };
        let mut d = derivatives_of(field.grid(), field.values(), orders, None);
        let uxx = if need_second { d.pop().unwrap_or_default() } else { Vec::new() };
        let ux = d.pop().unwrap_or_default();
        Self {
            u: field.values(),
            ux,
            uxx,
        }
    }

    fn mass(&self) -> Vec<f64> {
        self.u.iter().map(|u| u.norm_sqr() - 1.0).collect()
    }

    fn momentum(&self, background: &[Complex64]) -> Vec<f64> {
        self.u
            .iter()
            .zip(background)
            .zip(&self.ux)
            .map(|((u, b), ux)| ((u.conj() - b.conj()) * ux).im)
            .collect()
    }

    fn energy(&self) -> Vec<f64> {
        self.u
            .iter()
            .zip(&self.ux)
            .map(|(u, ux)| {
                let r = u.norm_sqr() - 1.0;
                ux.norm_sqr() - 0.5 * r * r
            })
            .collect()
    }

    fn f(&self) -> Vec<f64> {
        self.u
            .iter()
            .zip(&self.ux)
            .zip(&self.uxx)
            .map(|((u, ux), uxx)| {
                let r = u.norm_sqr() - 1.0;
                // (|u|²)_x = 2 Re(ū u_x)
                let rx = 2.0 * (u.conj() * ux).re;
                uxx.norm_sqr() - 3.0 * r * ux.norm_sqr() - 0.5 * rx * rx + 0.5 * r * r * r
            })
            .collect()
    }
}

fn stokes_at(u: &ComplexField) -> Vec<Complex64> {
    vec![Complex64::from_polar(1.0, u.t()); u.grid().points()]
}

pub fn mass(u: &ComplexField, quad: &Quadrature) -> Result<f64> {
    let density = u.values().iter().map(|v| v.norm_sqr() - 1.0).collect();
    quad.integrate(u, density, quad.mass)
}

/// Momentum relative to the Stokes wave `e^{it}` at the field's own time.
pub fn momentum(u: &ComplexField, quad: &Quadrature) -> Result<f64> {
    momentum_about(u, &ComplexField::new(*u.grid(), u.t(), stokes_at(u))?, quad)
}

/// `Im ∫ (ū - b̄) u_x` for an explicit background `b`, e.g. a boosted Stokes wave.
pub fn momentum_about(u: &ComplexField, background: &ComplexField, quad: &Quadrature) -> Result<f64> {
    u.ensure_same_grid(background)?;
    let local = Local::new(u, false);
    quad.integrate(u, local.momentum(background.values()), quad.momentum)
}

pub fn energy(u: &ComplexField, quad: &Quadrature) -> Result<f64> {
    quad.integrate(u, Local::new(u, false).energy(), quad.energy)
}

pub fn functional_f(u: &ComplexField, quad: &Quadrature) -> Result<f64> {
    quad.integrate(u, Local::new(u, true).f(), quad.f)
}

/// All four functionals from one set of derivatives.
pub fn report(u: &ComplexField, quad: &Quadrature) -> Result<FunctionalReport> {
    let local = Local::new(u, true);
    Ok(FunctionalReport {
        mass: quad.integrate(u, local.mass(), quad.mass)?,
        momentum: quad.integrate(u, local.momentum(&stokes_at(u)), quad.momentum)?,
        energy: quad.integrate(u, local.energy(), quad.energy)?,
        f: quad.integrate(u, local.f(), quad.f)?,
        frame: quad.frame,
        t: u.t(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LyapunovKind {
    Peregrine,
    #[serde(rename = "km")]
    KuznetsovMa,
    Akhmediev,
}

impl LyapunovKind {
    pub fn frame(self) -> Frame {
        match self {
            LyapunovKind::Akhmediev => Frame::Periodic,
            _ => Frame::Line,
        }
    }
}

impl TryFrom<BreatherKind> for LyapunovKind {
    type Error = Error;

    fn try_from(kind: BreatherKind) -> Result<Self> {
        match kind {
            BreatherKind::Peregrine => Ok(LyapunovKind::Peregrine),
            BreatherKind::KuznetsovMa => Ok(LyapunovKind::KuznetsovMa),
            BreatherKind::Akhmediev => Ok(LyapunovKind::Akhmediev),
            other => Err(Error::Usage(format!("no Lyapunov functional is attached to `{other}`"))),
        }
    }
}

/// `F + c E` with `c = 0` (Peregrine), `β²` (Kuznetsov-Ma) or `-α²` (Akhmediev).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lyapunov {
    kind: LyapunovKind,
    coefficient: f64,
    quad: Quadrature,
}

impl Lyapunov {
    pub fn new(kind: LyapunovKind, a: f64) -> Result<Self> {
        let (coefficient, quad) = match kind {
            LyapunovKind::Peregrine => (0.0, Quadrature::LINE_ALGEBRAIC),
            LyapunovKind::KuznetsovMa => (KmParams::new(a)?.beta.powi(2), Quadrature::LINE_EXPONENTIAL),
            LyapunovKind::Akhmediev => (-AkhmedievParams::new(a)?.alpha.powi(2), Quadrature::PERIODIC),
        };
        Ok(Self {
            kind,
            coefficient,
            quad,
        })
    }

    pub fn for_spec(spec: &BreatherSpec) -> Result<Self> {
        Self::new(LyapunovKind::try_from(spec.kind)?, spec.a)
    }

    pub fn kind(&self) -> LyapunovKind {
        self.kind
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    pub fn evaluate(&self, u: &ComplexField) -> Result<f64> {
        let local = Local::new(u, true);
        let f = self.quad.integrate(u, local.f(), self.quad.f)?;
        if self.coefficient == 0.0 {
            return Ok(f);
        }
        let e = self.quad.integrate(u, local.energy(), self.quad.energy)?;
        Ok(f + self.coefficient * e)
    }
}

/// Evaluates the Lyapunov functional of `kind`; the field must be sampled in
/// the frame that functional lives in.
pub fn lyapunov(u: &ComplexField, frame: Frame, kind: LyapunovKind, a: f64) -> Result<f64> {
    if frame != kind.frame() {
        return Err(Error::Usage(format!(
            "the {kind:?} functional is defined in the {} frame, got {frame}",
            kind.frame()
        )));
    }
    Lyapunov::new(kind, a)?.evaluate(u)
}

/// `‖u1-u2‖_∞ + ‖(u1-u2)_x‖_2 + ‖|u1|²-|u2|²‖_2` with L² norms by trapezoid sums.
pub fn energy_space_distance(u1: &ComplexField, u2: &ComplexField) -> Result<f64> {
    let diff = u1.zip_with(u2, |a, b| a - b)?;
    let dx = u1.grid().dx();
    let dxdiff = derivatives_of(u1.grid(), diff.values(), &[1], None).pop().unwrap_or_default();
    let grad = (dxdiff.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx).sqrt();
    let modulus = (u1
        .values()
        .iter()
        .zip(u2.values())
        .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).powi(2))
        .sum::<f64>()
        * dx)
        .sqrt();
    Ok(diff.sup_norm() + grad + modulus)
}
