//! Periodic grids, Fourier differentiation, Sobolev norms and quadrature.

mod diff;
mod fft;
mod quadrature;
mod window;

pub(crate) use diff::derivatives_of;
pub use diff::{derivative, derivative_with_floor, sobolev_inner, sobolev_norm, spectrum};
pub use fft::{RustFftTransform, Transform};
pub use quadrature::{
    estimate_tail_exponent, integrate_line, integrate_line_samples, integrate_periodic, Tail,
};
pub use window::{plateau, smooth_step};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic grid on `[-L/2, L/2)` with `N` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    length: f64,
    points: usize,
}

impl GridSpec {
    /// `points` must be a power of two no smaller than 8.
    pub fn new(length: f64, points: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length must be positive, got {length}")));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "point count must be a power of two >= 8, got {points}"
            )));
        }
        Ok(Self { length, points })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn dx(&self) -> f64 {
        self.length / self.points as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.node(j)).collect()
    }

    /// Signed mode index of FFT bin `j`: `0, 1, …, N/2-1, -N/2, …, -1`.
    pub fn mode_index(&self, j: usize) -> i64 {
        let n = self.points as i64;
        let j = j as i64;
        if j < n / 2 {
            j
        } else {
            j - n
        }
    }

    /// Bin holding signed mode `m`, if it is representable.
    pub fn bin_of_mode(&self, m: i64) -> Option<usize> {
        let n = self.points as i64;
        if m >= -n / 2 && m < n / 2 {
            Some(m.rem_euclid(n) as usize)
        } else {
            None
        }
    }

    /// Wavenumbers `2πm/L` in FFT bin order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.points)
            .map(|j| 2.0 * PI * self.mode_index(j) as f64 / self.length)
            .collect()
    }

    pub fn nyquist_bin(&self) -> usize {
        self.points / 2
    }

    pub fn max_wavenumber(&self) -> f64 {
        PI * self.points as f64 / self.length
    }
}

/// Complex samples of a field on a grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: GridSpec,
    t: f64,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: GridSpec, t: f64, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.points() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.points()
            )));
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite("field samples"));
        }
        Ok(Self { grid, t, values })
    }

    pub fn from_fn(grid: GridSpec, t: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::new(grid, t, values)
    }

    pub fn zeros(grid: GridSpec, t: f64) -> Self {
        Self {
            grid,
            t,
            values: vec![Complex64::new(0.0, 0.0); grid.points()],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    /// Pointwise map keeping grid and time.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::new(self.grid, self.t, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(
        &self,
        other: &ComplexField,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.grid, self.t, values)
    }

    /// `self + scale * other`.
    pub fn axpy(&self, scale: f64, other: &ComplexField) -> Result<Self> {
        self.zip_with(other, |a, b| a + b * scale)
    }

    pub fn ensure_same_grid(&self, other: &ComplexField) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "(L={}, N={}) vs (L={}, N={})",
                self.grid.length(),
                self.grid.points(),
                other.grid.length(),
                other.grid.points()
            )))
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Circular shift by `cells` grid points: `out[j] = self[j - cells]`.
    pub fn roll(&self, cells: i64) -> Self {
        let n = self.values.len() as i64;
        let values = (0..n)
            .map(|j| self.values[(j - cells).rem_euclid(n) as usize])
            .collect();
        Self {
            grid: self.grid,
            t: self.t,
            values,
        }
    }
}
