use num_complex::Complex64;

use super::fft::{RustFftTransform, Transform};
use super::{ComplexField, GridSpec};
use crate::error::{Error, Result};

/// Normalized discrete Fourier coefficients `c_m = (1/N) Σ_j f_j e^{-2πi mj/N}`
/// in FFT bin order.
pub fn spectrum(f: &ComplexField) -> Vec<Complex64> {
    let n = f.grid().points();
    let mut buf = f.values().to_vec();
    RustFftTransform::new(n).forward(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

fn multiplier(grid: &GridSpec, bin: usize, k: f64, order: u32) -> Complex64 {
    if order % 2 == 1 && bin == grid.nyquist_bin() {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, k).powu(order)
}

/// Spectral derivatives of several orders sharing one forward transform.
///
/// Coefficients whose modulus is below `floor * max|c_m|` are dropped before
/// differentiation when `floor` is given.
pub(crate) fn derivatives_of(
    grid: &GridSpec,
    values: &[Complex64],
    orders: &[u32],
    floor: Option<f64>,
) -> Vec<Vec<Complex64>> {
    let n = grid.points();
    let fft = RustFftTransform::new(n);
    let mut hat = values.to_vec();
    fft.forward(&mut hat);
    if let Some(floor) = floor {
        let max = hat.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = floor * max;
        hat.iter_mut().filter(|c| c.norm() < cut).for_each(|c| *c = Complex64::new(0.0, 0.0));
    }
    let k = grid.wavenumbers();
    orders
        .iter()
        .map(|&order| {
            let mut buf: Vec<Complex64> = hat
                .iter()
                .enumerate()
                .map(|(bin, &c)| c * multiplier(grid, bin, k[bin], order))
                .collect();
            fft.inverse(&mut buf);
            buf
        })
        .collect()
}

/// Spectral derivative: mode `m` is multiplied by `(i k_m)^order`, with the
/// Nyquist mode zeroed for odd orders.
pub fn derivative(f: &ComplexField, order: u32) -> Result<ComplexField> {
    if order == 0 {
        return Err(Error::Usage("derivative order must be >= 1".into()));
    }
    let mut out = derivatives_of(f.grid(), f.values(), &[order], None);
    ComplexField::new(*f.grid(), f.t(), out.pop().unwrap_or_default())
}

/// As [`derivative`], after discarding Fourier coefficients below
/// `floor * max|c_m|`. Used for high orders where rounding noise in the top
/// modes would otherwise be amplified by `k^order`.
pub fn derivative_with_floor(f: &ComplexField, order: u32, floor: f64) -> Result<ComplexField> {
    if order == 0 {
        return Err(Error::Usage("derivative order must be >= 1".into()));
    }
    let mut out = derivatives_of(f.grid(), f.values(), &[order], Some(floor));
    ComplexField::new(*f.grid(), f.t(), out.pop().unwrap_or_default())
}

/// `H^s` inner product `L Σ_m (1+k_m²)^s a_m conj(b_m)`.
pub fn sobolev_inner(a: &ComplexField, b: &ComplexField, s: f64) -> Result<Complex64> {
    a.ensure_same_grid(b)?;
    let (ah, bh) = (spectrum(a), spectrum(b));
    let k = a.grid().wavenumbers();
    let sum: Complex64 = ah
        .iter()
        .zip(&bh)
        .zip(&k)
        .map(|((x, y), k)| x * y.conj() * (1.0 + k * k).powf(s))
        .sum();
    Ok(sum * a.grid().length())
}

/// `H^s` norm `(L Σ_m (1+k_m²)^s |c_m|²)^{1/2}`; for `s = 0` this is the
/// discrete L² norm.
pub fn sobolev_norm(f: &ComplexField, s: f64) -> f64 {
    let k = f.grid().wavenumbers();
    let sum: f64 = spectrum(f)
        .iter()
        .zip(&k)
        .map(|(c, k)| c.norm_sqr() * (1.0 + k * k).powf(s))
        .sum();
    (sum * f.grid().length()).sqrt()
}
