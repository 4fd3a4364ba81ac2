use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{check_range, Result};
use crate::functionals::{Frame, Lyapunov};
use crate::spectral::{sobolev_norm, ComplexField, GridSpec};

pub const DEFAULT_EPS: f64 = 1e-4;

fn at(functional: &Lyapunov, b: &ComplexField, steps: &[(f64, &ComplexField)]) -> Result<f64> {
    let mut values = b.values().to_vec();
    for (h, z) in steps {
        for (v, zv) in values.iter_mut().zip(z.values()) {
            *v += zv * *h;
        }
    }
    functional.evaluate(&ComplexField::new(*b.grid(), b.t(), values)?)
}

fn centered(functional: &Lyapunov, b: &ComplexField, z: &ComplexField, h: f64) -> Result<f64> {
    Ok((at(functional, b, &[(h, z)])? - at(functional, b, &[(-h, z)])?) / (2.0 * h))
}

/// `ℱ'[B](z)` by a centered difference with one Richardson step:
/// `(4 D(ε/2) - D(ε)) / 3`.
pub fn first_variation(functional: &Lyapunov, b: &ComplexField, z: &ComplexField, eps: f64) -> Result<f64> {
    check_range("eps", eps, "(0, inf)", eps > 0.0)?;
    b.ensure_same_grid(z)?;
    let coarse = centered(functional, b, z, eps)?;
    let fine = centered(functional, b, z, 0.5 * eps)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Mixed difference with independent steps; symmetric in `(z1, z2)` only when
/// `h1 == h2`.
pub(crate) fn mixed(
    functional: &Lyapunov,
    b: &ComplexField,
    (z1, h1): (&ComplexField, f64),
    (z2, h2): (&ComplexField, f64),
) -> Result<f64> {
    let pp = at(functional, b, &[(h1, z1), (h2, z2)])?;
    let pm = at(functional, b, &[(h1, z1), (-h2, z2)])?;
    let mp = at(functional, b, &[(-h1, z1), (h2, z2)])?;
    let mm = at(functional, b, &[(-h1, z1), (-h2, z2)])?;
    Ok((pp - pm - mp + mm) / (8.0 * h1 * h2))
}

/// Quadratic part of `ℱ` at `B` as a symmetric bilinear form, normalized so
/// that `ℱ[B + εz] - ℱ[B] - ε ℱ'[B](z) = ε² second_variation(z, z) + O(ε³)`.
pub fn second_variation(
    functional: &Lyapunov,
    b: &ComplexField,
    z1: &ComplexField,
    z2: &ComplexField,
    eps: f64,
) -> Result<f64> {
    check_range("eps", eps, "(0, inf)", eps > 0.0)?;
    b.ensure_same_grid(z1)?;
    b.ensure_same_grid(z2)?;
    mixed(functional, b, (z1, eps), (z2, eps))
}

/// `1 + ‖z‖²_{H²}`, the size against which a first variation is compared.
pub fn variation_scale(z: &ComplexField) -> f64 {
    1.0 + sobolev_norm(z, 2.0).powi(2)
}

/// Five fixed perturbation directions. On the line they are Gaussian-type
/// bumps well inside the window; on a period they are trigonometric.
pub fn test_directions(grid: &GridSpec, frame: Frame) -> Result<Vec<ComplexField>> {
    let c = Complex64::new;
    let fs: Vec<Box<dyn Fn(f64) -> Complex64>> = match frame {
        Frame::Line => vec![
            Box::new(|x: f64| c((-x * x).exp(), 0.0)),
            Box::new(|x: f64| c(0.0, x * (-0.5 * x * x).exp())),
            Box::new(|x: f64| c(1.0, 1.0) * (3.0 * x).cos() * (-(x - 2.0).powi(2) / 4.0).exp()),
            Box::new(|x: f64| Complex64::from_polar(1.0 / x.cosh().powi(2), x)),
            Box::new(|x: f64| c(0.5, -0.3) * (x * x - 1.0) * (-x * x / 8.0).exp()),
        ],
        Frame::Periodic => {
            let kappa = 2.0 * PI / grid.length();
            vec![
                Box::new(move |x: f64| c((kappa * x).cos(), 0.0)),
                Box::new(move |x: f64| c(0.0, (2.0 * kappa * x).sin())),
                Box::new(move |x: f64| c(1.0, 1.0) * (3.0 * kappa * x + 0.3).cos()),
                Box::new(move |x: f64| Complex64::from_polar(1.0, kappa * x)),
                Box::new(move |x: f64| c(0.5, -0.3) * ((kappa * x).cos().exp() - 1.0)),
            ]
        }
    };
    fs.into_iter().map(|f| ComplexField::from_fn(*grid, 0.0, f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{sample, BreatherSpec};
    use crate::functionals::LyapunovKind;
    use crate::variation::windowed_sample;

    fn line() -> GridSpec {
        GridSpec::new(100.0, 1024).unwrap()
    }

    #[test]
    fn peregrine_is_critical() {
        let g = line();
        let f = Lyapunov::new(LyapunovKind::Peregrine, 0.0).unwrap();
        let b = windowed_sample(&BreatherSpec::peregrine(), &g, 0.0).unwrap();
        for z in test_directions(&g, Frame::Line).unwrap() {
            let d = first_variation(&f, &b, &z, DEFAULT_EPS).unwrap();
            assert!(d.abs() < 1e-5 * variation_scale(&z), "{d:e}");
        }
    }

    #[test]
    fn stokes_is_critical_for_f() {
        let g = line();
        let f = Lyapunov::new(LyapunovKind::Peregrine, 0.0).unwrap();
        let b = sample(&BreatherSpec::stokes(), &g, 0.0, false).unwrap();
        for z in test_directions(&g, Frame::Line).unwrap() {
            assert!(first_variation(&f, &b, &z, DEFAULT_EPS).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn non_critical_point_is_detected() {
        // KM profile at a = 0.8 against the functional for a = 1
        let g = line();
        let f = Lyapunov::new(LyapunovKind::KuznetsovMa, 1.0).unwrap();
        let b = windowed_sample(&BreatherSpec::kuznetsov_ma(0.8).unwrap(), &g, 0.0).unwrap();
        let z = &test_directions(&g, Frame::Line).unwrap()[0];
        assert!(first_variation(&f, &b, z, DEFAULT_EPS).unwrap().abs() > 1e-2);
    }

    #[test]
    fn second_variation_is_bilinear_and_symmetric() {
        let g = line();
        let f = Lyapunov::new(LyapunovKind::Peregrine, 0.0).unwrap();
        let b = windowed_sample(&BreatherSpec::peregrine(), &g, 0.5).unwrap();
        let zs = test_directions(&g, Frame::Line).unwrap();
        let z2 = zs[0].map(|v| 2.0 * v).unwrap();
        let one = second_variation(&f, &b, &zs[0], &zs[0], DEFAULT_EPS).unwrap();
        let two = second_variation(&f, &b, &z2, &zs[0], DEFAULT_EPS).unwrap();
        assert!(((two - 2.0 * one) / one).abs() < 1e-4);
        let ab = second_variation(&f, &b, &zs[1], &zs[2], DEFAULT_EPS).unwrap();
        let ba = second_variation(&f, &b, &zs[2], &zs[1], DEFAULT_EPS).unwrap();
        assert_eq!(ab, ba);
    }

    #[test]
    fn quadratic_form_at_stokes_matches_closed_form() {
        // At u = 1 the quadratic part of F is ∫ |w_xx|² - 2 ((Re w)_x)².
        let g = line();
        let f = Lyapunov::new(LyapunovKind::Peregrine, 0.0).unwrap();
        let b = sample(&BreatherSpec::stokes(), &g, 0.0, false).unwrap();
        let z = ComplexField::from_fn(g, 0.0, |x| Complex64::new(0.7, 0.2) * (-x * x / 18.0).exp()).unwrap();
        let d = crate::spectral::derivatives_of(&g, z.values(), &[1, 2], None);
        let direct: f64 = (0..g.points())
            .map(|j| d[1][j].norm_sqr() - 2.0 * d[0][j].re.powi(2))
            .sum::<f64>()
            * g.dx();
        let sv = second_variation(&f, &b, &z, &z, DEFAULT_EPS).unwrap();
        assert!(((sv - direct) / direct).abs() < 1e-6, "{sv} {direct}");
    }
}
