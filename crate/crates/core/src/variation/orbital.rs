use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{sample, BreatherSpec};
use crate::error::{check_range, Result};
use crate::functionals::Frame;
use crate::spectral::{spectrum, ComplexField, RustFftTransform, Transform};

/// Minimizer of `‖u - e^{iφ} U(· - y)‖_{H^s}` over the shift `y` (and the
/// phase `φ` on a period; `φ = 0` on the line).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitalFit {
    pub distance: f64,
    pub best_shift: f64,
    pub best_phase: f64,
}

const NEWTON_STEPS: usize = 8;

/// Orbital distance from `u` to the orbit of `reference` sampled at `u.t()`.
pub fn orbital_distance(u: &ComplexField, reference: &BreatherSpec, s: f64, frame: Frame) -> Result<OrbitalFit> {
    let r = sample(reference, u.grid(), u.t(), false)?;
    orbital_distance_to(u, &r, s, frame)
}

/// As [`orbital_distance`] for an already sampled reference.
pub fn orbital_distance_to(u: &ComplexField, reference: &ComplexField, s: f64, frame: Frame) -> Result<OrbitalFit> {
    check_range("s", s, "[0, inf)", s >= 0.0)?;
    u.ensure_same_grid(reference)?;
    let grid = *u.grid();
    let n = grid.points();
    let k = grid.wavenumbers();
    let weight: Vec<f64> = k.iter().map(|k| (1.0 + k * k).powf(s)).collect();
    let (a, b) = (spectrum(u), spectrum(reference));
    let l = grid.length();

    // c(y) = ⟨u, U(· - y)⟩_{H^s} = L Σ w_m a_m conj(b_m) e^{i k_m y}
    let g: Vec<Complex64> = (0..n).map(|m| a[m] * b[m].conj() * weight[m] * l).collect();
    let mut corr = g.clone();
    RustFftTransform::new(n).inverse(&mut corr);
    corr.iter_mut().for_each(|c| *c *= n as f64);

    let objective = |c: Complex64| match frame {
        Frame::Line => c.re,
        Frame::Periodic => c.norm(),
    };
    let (best, _) = corr
        .iter()
        .enumerate()
        .map(|(j, c)| (j, objective(*c)))
        .fold((0, f64::NEG_INFINITY), |acc, (j, v)| if v > acc.1 { (j, v) } else { acc });

    // parabolic refinement on the three samples around the best grid shift
    let at = |j: i64| objective(corr[j.rem_euclid(n as i64) as usize]);
    let jb = best as i64;
    let (fm, f0, fp) = (at(jb - 1), at(jb), at(jb + 1));
    let curvature = fm - 2.0 * f0 + fp;
    let offset = if curvature < 0.0 {
        (0.5 * (fm - fp) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    let signed = if best >= n / 2 { jb - n as i64 } else { jb };
    let mut y = (signed as f64 + offset) * grid.dx();

    let c_at = |y: f64, order: u32| -> Complex64 {
        g.iter()
            .zip(&k)
            .map(|(g, k)| g * Complex64::new(0.0, *k).powu(order) * Complex64::from_polar(1.0, k * y))
            .sum()
    };
    let value = |y: f64| objective(c_at(y, 0));
    for _ in 0..NEWTON_STEPS {
        let (c0, c1, c2) = (c_at(y, 0), c_at(y, 1), c_at(y, 2));
        let (d1, d2) = match frame {
            Frame::Line => (c1.re, c2.re),
            Frame::Periodic => (
                2.0 * (c0.conj() * c1).re,
                2.0 * c1.norm_sqr() + 2.0 * (c0.conj() * c2).re,
            ),
        };
        if d2 >= 0.0 {
            break;
        }
        let step = (-d1 / d2).clamp(-grid.dx(), grid.dx());
        if value(y + step) < value(y) {
            break;
        }
        y += step;
        if step.abs() < 1e-14 * grid.dx() {
            break;
        }
    }

    let phase = match frame {
        Frame::Line => 0.0,
        Frame::Periodic => c_at(y, 0).arg(),
    };
    let rot = Complex64::from_polar(1.0, phase);
    let dist2: f64 = (0..n)
        .map(|m| {
            let shifted = b[m] * rot * Complex64::from_polar(1.0, -k[m] * y);
            (a[m] - shifted).norm_sqr() * weight[m]
        })
        .sum::<f64>()
        * l;
    Ok(OrbitalFit {
        distance: dist2.max(0.0).sqrt(),
        best_shift: y,
        best_phase: phase,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::SymmetryParams;
    use crate::spectral::{sobolev_norm, GridSpec};

    fn grid() -> GridSpec {
        GridSpec::new(100.0, 1024).unwrap()
    }

    #[test]
    fn reference_itself() {
        let g = grid();
        let p = BreatherSpec::peregrine();
        let u = sample(&p, &g, 0.2, false).unwrap();
        let fit = orbital_distance(&u, &p, 1.0, Frame::Line).unwrap();
        assert!(fit.distance < 1e-10);
        assert!(fit.best_shift.abs() < 1e-8);
    }

    #[test]
    fn recovers_sub_grid_shift() {
        let g = grid();
        let km = BreatherSpec::kuznetsov_ma(0.8).unwrap();
        let shift = 3.7 * g.dx();
        let moved = km
            .with_symmetry(SymmetryParams {
                x0: shift,
                ..SymmetryParams::IDENTITY
            })
            .unwrap();
        let u = sample(&moved, &g, 0.3, false).unwrap();
        let fit = orbital_distance(&u, &km, 1.0, Frame::Line).unwrap();
        assert!(((fit.best_shift - shift) / g.dx()).abs() < 0.1, "{fit:?}");
        assert!(fit.distance < 1e-3);
    }

    #[test]
    fn periodic_frame_recovers_phase() {
        let a = 0.3;
        let spec = BreatherSpec::akhmediev(a).unwrap();
        let g = GridSpec::new(spec.akhmediev_params().unwrap().period(), 128).unwrap();
        let moved = spec
            .with_symmetry(SymmetryParams {
                x0: 0.4,
                phase: 0.9,
                ..SymmetryParams::IDENTITY
            })
            .unwrap();
        let u = sample(&moved, &g, 0.5, false).unwrap();
        let fit = orbital_distance(&u, &spec, 1.0, Frame::Periodic).unwrap();
        assert!(fit.distance < 1e-8, "{fit:?}");
        assert!((fit.best_shift - 0.4).abs() < 1e-8);
        assert!((fit.best_phase - 0.9).abs() < 1e-8);
    }

    #[test]
    fn stokes_against_peregrine_is_the_perturbation_norm() {
        let g = GridSpec::new(2000.0, 8192).unwrap();
        let t = 10.0;
        let s = sample(&BreatherSpec::stokes(), &g, t, false).unwrap();
        let fit = orbital_distance(&s, &BreatherSpec::peregrine(), 1.0, Frame::Line).unwrap();
        let q = sobolev_norm(&sample(&BreatherSpec::peregrine(), &g, t, true).unwrap(), 1.0);
        assert!(((fit.distance - q) / q).abs() < 1e-10);
    }

    #[test]
    fn same_shift_of_both_leaves_distance_unchanged() {
        let g = grid();
        let km = BreatherSpec::kuznetsov_ma(0.7).unwrap();
        let u = sample(&km, &g, 0.1, false).unwrap();
        let other = sample(&BreatherSpec::kuznetsov_ma(0.75).unwrap(), &g, 0.1, false).unwrap();
        let base = orbital_distance_to(&u, &other, 1.0, Frame::Line).unwrap();
        let moved = orbital_distance_to(&u.roll(11), &other.roll(11), 1.0, Frame::Line).unwrap();
        assert!((base.distance - moved.distance).abs() < 1e-8);
    }
}
