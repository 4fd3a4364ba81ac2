use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::{background, taper_about, trusted_half_width, windowed_sample, DERIVATIVE_FLOOR};
use crate::analytic::{sample, AkhmedievParams, BreatherKind, BreatherSpec, KmParams};
use crate::error::{check_range, Error, Result};
use crate::functionals::Frame;
use crate::spectral::{derivatives_of, ComplexField, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Equation {
    /// `i u_t + u_xx + |u|² u = 0`
    #[serde(rename = "NLS_PDE")]
    NlsPde,
    /// Fourth-order elliptic equation with no second-order correction.
    #[serde(rename = "Ec_P")]
    EcP,
    /// Fourth-order equation with `-β² (B_xx + (|B|²-1) B)` added.
    #[serde(rename = "Ec_KM")]
    EcKm,
    /// Fourth-order equation with `+α² (B_xx + (|B|²-1) B)` added.
    #[serde(rename = "Ec_A")]
    EcA,
}

impl Equation {
    /// The elliptic equation satisfied by a breather of the given kind.
    pub fn for_kind(kind: BreatherKind) -> Result<Self> {
        match kind {
            BreatherKind::Peregrine => Ok(Equation::EcP),
            BreatherKind::KuznetsovMa => Ok(Equation::EcKm),
            BreatherKind::Akhmediev => Ok(Equation::EcA),
            other => Err(Error::Usage(format!("no elliptic equation is attached to `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Equation::NlsPde => "NLS_PDE",
            Equation::EcP => "Ec_P",
            Equation::EcKm => "Ec_KM",
            Equation::EcA => "Ec_A",
        }
    }

    /// Coefficient `λ` of `B_xx + (|B|²-1) B`, using the family parameter `a`.
    fn lambda(self, a: f64) -> Result<f64> {
        match self {
            Equation::NlsPde => Err(Error::Usage("the evolution equation has no elliptic form".into())),
            Equation::EcP => Ok(0.0),
            Equation::EcKm => Ok(-KmParams::new(a)?.beta.powi(2)),
            Equation::EcA => Ok(AkhmedievParams::new(a)?.alpha.powi(2)),
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "pde" | "nls" | "nls-pde" => Ok(Equation::NlsPde),
            "ec-p" | "ecp" => Ok(Equation::EcP),
            "ec-km" | "eckm" => Ok(Equation::EcKm),
            "ec-a" | "eca" => Ok(Equation::EcA),
            other => Err(Error::Usage(format!("unknown equation `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub sup_residual: f64,
    pub l2_residual: f64,
    pub resolution: GridSpec,
    pub equation: Equation,
    pub t: f64,
    /// Line frame only: norms are taken over `|x| <= trusted_half_width`.
    pub trusted_half_width: Option<f64>,
}

fn summarize(
    residual: &[Complex64],
    grid: &GridSpec,
    frame: Frame,
    equation: Equation,
    t: f64,
) -> ResidualReport {
    let trusted = match frame {
        Frame::Line => Some(trusted_half_width(grid)),
        Frame::Periodic => None,
    };
    let keep = |x: f64| trusted.is_none_or(|h| x.abs() <= h);
    let (mut sup, mut sq) = (0.0f64, 0.0);
    for (j, r) in residual.iter().enumerate() {
        if keep(grid.node(j)) {
            sup = sup.max(r.norm());
            sq += r.norm_sqr();
        }
    }
    ResidualReport {
        sup_residual: sup,
        l2_residual: (sq * grid.dx()).sqrt(),
        resolution: *grid,
        equation,
        t,
        trusted_half_width: trusted,
    }
}

/// Residual of `i u_t + u_xx + |u|² u` with `u_t` from a centered difference
/// of exact samples at `t ± dt` and `u_xx` spectral.
pub fn pde_residual(spec: &BreatherSpec, grid: &GridSpec, t: f64, dt: f64) -> Result<ResidualReport> {
    check_range("dt", dt, "(0, inf)", dt > 0.0)?;
    let frame = Frame::of_kind(spec.kind);
    let prepare = |t: f64| -> Result<ComplexField> {
        let u = sample(spec, grid, t, false)?;
        match frame {
            Frame::Periodic => Ok(u),
            Frame::Line => taper_about(&u, &background(spec, grid, t)?),
        }
    };
    let (u, up, um) = (prepare(t)?, prepare(t + dt)?, prepare(t - dt)?);
    let uxx = derivatives_of(grid, u.values(), &[2], None).pop().unwrap_or_default();
    let i = Complex64::new(0.0, 1.0);
    let residual: Vec<Complex64> = (0..grid.points())
        .map(|j| {
            let ut = (up.values()[j] - um.values()[j]) / (2.0 * dt);
            let v = u.values()[j];
            i * ut + uxx[j] + v * v.norm_sqr()
        })
        .collect();
    Ok(summarize(&residual, grid, frame, Equation::NlsPde, t))
}

/// Residual of the elliptic equation attached to `spec.kind`.
pub fn ode_residual(spec: &BreatherSpec, grid: &GridSpec, t: f64) -> Result<ResidualReport> {
    ode_residual_with(Equation::for_kind(spec.kind)?, spec, grid, t)
}

/// Residual of an explicitly chosen elliptic equation; `λ` is computed from
/// `spec.a`, so a mismatched pair serves as a negative control.
pub fn ode_residual_with(equation: Equation, spec: &BreatherSpec, grid: &GridSpec, t: f64) -> Result<ResidualReport> {
    Equation::for_kind(spec.kind)?;
    let lambda = equation.lambda(spec.a)?;
    let frame = Frame::of_kind(spec.kind);
    let b = windowed_sample(spec, grid, t)?;
    let floor = match frame {
        Frame::Periodic => Some(DERIVATIVE_FLOOR),
        Frame::Line => None,
    };
    let d = derivatives_of(grid, b.values(), &[1, 2, 4], floor);
    let (bx, bxx, b4) = (&d[0], &d[1], &d[2]);
    let residual: Vec<Complex64> = b
        .values()
        .iter()
        .enumerate()
        .map(|(j, &b)| {
            let (bx, bxx) = (bx[j], bxx[j]);
            let r = b.norm_sqr();
            let g = b4[j]
                + 3.0 * bx * bx * b.conj()
                + (4.0 * r - 3.0) * bxx
                + b * b * bxx.conj()
                + 2.0 * bx.norm_sqr() * b
                + 1.5 * (r - 1.0).powi(2) * b;
            g + lambda * (bxx + (r - 1.0) * b)
        })
        .collect();
    Ok(summarize(&residual, grid, frame, equation, t))
}
