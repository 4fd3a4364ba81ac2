//! Residuals of the evolution and elliptic equations, finite-difference
//! variations of the Lyapunov functionals, Hessian restrictions and orbital
//! distances.
//!
//! Line-frame fields are truncated to a window whose edges do not match
//! smoothly. Before differentiating, the perturbation is multiplied by a
//! plateau `χ` (1 on `|x| <= L/4`, 0 beyond `0.45 L`) and pointwise
//! quantities are reported on the plateau only.

mod fd;
mod hessian;
mod orbital;
mod residual;

pub use fd::{first_variation, second_variation, test_directions, variation_scale, DEFAULT_EPS};
pub use hessian::{assemble_hessian, hessian_basis, HessianRestriction};
pub use orbital::{orbital_distance, orbital_distance_to, OrbitalFit};
pub use residual::{ode_residual, ode_residual_with, pde_residual, Equation, ResidualReport};

use num_complex::Complex64;

use crate::analytic::{sample, BreatherKind, BreatherSpec};
use crate::error::Result;
use crate::functionals::Frame;
use crate::spectral::{plateau, ComplexField, GridSpec};

pub const TAPER_INNER: f64 = 0.25;
pub const TAPER_OUTER: f64 = 0.45;

/// Relative cut applied to Fourier coefficients before fourth derivatives
/// on a period.
pub const DERIVATIVE_FLOOR: f64 = 1e-14;

/// Background the breather relaxes to: the (transformed) Stokes wave, or
/// zero for the soliton.
pub fn background(spec: &BreatherSpec, grid: &GridSpec, t: f64) -> Result<ComplexField> {
    if spec.kind.has_background() {
        let stokes = BreatherSpec {
            kind: BreatherKind::Stokes,
            ..*spec
        };
        sample(&stokes, grid, t, false)
    } else {
        Ok(ComplexField::zeros(*grid, t))
    }
}

/// Sample of `spec` prepared for spectral differentiation: unchanged on a
/// period, `b + χ (u - b)` on the line.
pub fn windowed_sample(spec: &BreatherSpec, grid: &GridSpec, t: f64) -> Result<ComplexField> {
    let u = sample(spec, grid, t, false)?;
    match Frame::of_kind(spec.kind) {
        Frame::Periodic => Ok(u),
        Frame::Line => taper_about(&u, &background(spec, grid, t)?),
    }
}

pub(crate) fn taper_about(u: &ComplexField, background: &ComplexField) -> Result<ComplexField> {
    let chi = plateau(u.grid(), TAPER_INNER, TAPER_OUTER);
    let values: Vec<Complex64> = u
        .values()
        .iter()
        .zip(background.values())
        .zip(&chi)
        .map(|((u, b), c)| b + (u - b) * *c)
        .collect();
    ComplexField::new(*u.grid(), u.t(), values)
}

/// Half-width of the region on which line-frame results are trusted.
pub fn trusted_half_width(grid: &GridSpec) -> f64 {
    TAPER_INNER * grid.length()
}
