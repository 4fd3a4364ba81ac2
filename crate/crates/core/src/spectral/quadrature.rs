use num_complex::Complex64;

use super::{ComplexField, GridSpec};
use crate::error::{check_range, Result};

/// Far-field model used to close a whole-line integral beyond the window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// Integrand decays exponentially; the window already contains it.
    None,
    /// Integrand behaves like `c / |x|^p` with `p > 1` at both ends.
    Algebraic(f64),
}

impl Tail {
    fn check(self) -> Result<()> {
        match self {
            Tail::None => Ok(()),
            Tail::Algebraic(p) => check_range("tail_exponent", p, "(1, inf)", p > 1.0),
        }
    }

    /// `∫_{|x_end|}^∞ c x^{-p} dx` with `c` fitted so that `c |x_end|^{-p} = f_end`.
    fn beyond(self, f_end: Complex64, x_end: f64) -> Complex64 {
        match self {
            Tail::None => Complex64::new(0.0, 0.0),
            Tail::Algebraic(p) => f_end * (x_end.abs() / (p - 1.0)),
        }
    }
}

/// Trapezoid rule over one period: `Σ_j f_j Δx`.
pub fn integrate_periodic(f: &ComplexField) -> Complex64 {
    f.values().iter().sum::<Complex64>() * f.grid().dx()
}

/// Whole-line integral of `f` sampled at `points + 1` equispaced nodes on
/// `[-L/2, L/2]`: composite trapezoid plus the algebraic tail on each side.
pub fn integrate_line(
    f: impl Fn(f64) -> Complex64,
    tail: Tail,
    length: f64,
    points: usize,
) -> Result<Complex64> {
    tail.check()?;
    check_range("length", length, "(0, inf)", length > 0.0)?;
    check_range("points", points as f64, "[2, inf)", points >= 2)?;
    let h = length / points as f64;
    let half = 0.5 * length;
    let (left, right) = (f(-half), f(half));
    let interior: Complex64 = (1..points).map(|j| f(-half + j as f64 * h)).sum();
    let trapezoid = (interior + 0.5 * (left + right)) * h;
    Ok(trapezoid + tail.beyond(left, -half) + tail.beyond(right, half))
}

/// Whole-line integral from grid samples. The trapezoid runs from the first
/// to the last node; tails attach at those nodes.
pub fn integrate_line_samples(values: &[Complex64], grid: &GridSpec, tail: Tail) -> Result<Complex64> {
    tail.check()?;
    let n = grid.points();
    if values.len() != n {
        return Err(crate::Error::GridMismatch(format!(
            "{} samples for a grid of {n} points",
            values.len()
        )));
    }
    let (first, last) = (values[0], values[n - 1]);
    let sum: Complex64 = values.iter().sum();
    let trapezoid = (sum - 0.5 * (first + last)) * grid.dx();
    Ok(trapezoid + tail.beyond(first, grid.node(0)) + tail.beyond(last, grid.node(n - 1)))
}

/// Local decay exponent `p` of `|f| ~ |x|^{-p}` read off the right half of
/// the window between `x = L/4` and the last node.
pub fn estimate_tail_exponent(values: &[f64], grid: &GridSpec) -> Option<f64> {
    let n = grid.points();
    let (j1, j2) = (3 * n / 4, n - 1);
    let (x1, x2) = (grid.node(j1), grid.node(j2));
    let (f1, f2) = (values[j1].abs(), values[j2].abs());
    if f1 > 0.0 && f2 > 0.0 && x1 > 0.0 {
        Some(-(f2 / f1).ln() / (x2 / x1).ln())
    } else {
        None
    }
}
