//! Seeded perturbation fields.
//!
//! Samples come from ChaCha8 seeded with a `u64`, so a given seed produces the
//! same field on every platform.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Result};
use crate::spectral::{ComplexField, GridSpec, RustFftTransform, Transform};

/// Band-limited complex noise with a Gaussian envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub seed: u64,
    /// Fourier modes with `|k| > k_max` are removed.
    pub k_max: f64,
    /// Envelope `exp(-(x/width)²)`; `None` leaves the noise unwindowed.
    pub envelope_width: Option<f64>,
}

impl NoiseSpec {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            k_max: 2.0,
            envelope_width: None,
        }
    }

    pub fn with_envelope(mut self, width: f64) -> Self {
        self.envelope_width = Some(width);
        self
    }

    /// Samples the field, scaled so that `max |n(x)| = 1` before the envelope.
    pub fn sample(&self, grid: &GridSpec) -> Result<ComplexField> {
        check_range("k_max", self.k_max, "(0, inf)", self.k_max > 0.0)?;
        if let Some(w) = self.envelope_width {
            check_range("envelope_width", w, "(0, inf)", w > 0.0)?;
        }
        let n = grid.points();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut buf: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        let fft = RustFftTransform::new(n);
        fft.forward(&mut buf);
        for (c, k) in buf.iter_mut().zip(grid.wavenumbers()) {
            if k.abs() > self.k_max {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        fft.inverse(&mut buf);
        let max = buf.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max > 0.0 {
            buf.iter_mut().for_each(|c| *c /= max);
        }
        if let Some(w) = self.envelope_width {
            for (c, x) in buf.iter_mut().zip(grid.nodes()) {
                *c *= (-(x / w).powi(2)).exp();
            }
        }
        ComplexField::new(*grid, 0.0, buf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(100.0, 512).unwrap()
    }

    #[test]
    fn same_seed_same_field() {
        let a = NoiseSpec::new(7).sample(&grid()).unwrap();
        let b = NoiseSpec::new(7).sample(&grid()).unwrap();
        assert_eq!(a, b);
        let c = NoiseSpec::new(8).sample(&grid()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unit_sup_norm_and_band_limit() {
        let g = grid();
        let f = NoiseSpec::new(1).sample(&g).unwrap();
        assert!((f.sup_norm() - 1.0).abs() < 1e-12);
        let spec = crate::spectral::spectrum(&f);
        for (c, k) in spec.iter().zip(g.wavenumbers()) {
            if k.abs() > 2.0 {
                assert!(c.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn envelope_localizes() {
        let g = grid();
        let f = NoiseSpec::new(3).with_envelope(5.0).sample(&g).unwrap();
        assert!(f.values()[0].norm() < 1e-20);
    }
}
