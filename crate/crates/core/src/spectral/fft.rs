use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::{Arc, Mutex, OnceLock};

/// Forward/inverse discrete Fourier transform on power-of-two lengths.
///
/// `forward` is unnormalized, `inverse` divides by the length, so
/// `inverse(forward(x)) == x`.
pub trait Transform: Send + Sync {
    fn len(&self) -> usize;
    fn forward(&self, buf: &mut [Complex64]);
    fn inverse(&self, buf: &mut [Complex64]);
}

/// [`Transform`] backed by `rustfft`. Plans come from a process-wide,
/// mutex-guarded planner; executing a plan needs no lock.
#[derive(Clone)]
pub struct RustFftTransform {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

impl RustFftTransform {
    pub fn new(len: usize) -> Self {
        let mut p = planner().lock().unwrap_or_else(|e| e.into_inner());
        Self {
            forward: p.plan_fft_forward(len),
            inverse: p.plan_fft_inverse(len),
        }
    }
}

impl Transform for RustFftTransform {
    fn len(&self) -> usize {
        self.forward.len()
    }

    fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let scale = 1.0 / buf.len() as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
}
