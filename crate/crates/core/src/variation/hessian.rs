use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::fd::{mixed, second_variation};
use super::{TAPER_INNER, TAPER_OUTER};
use crate::error::{Error, Result};
use crate::functionals::{Frame, Lyapunov};
use crate::linalg::{symmetric_eigen, SquareMatrix};
use crate::spectral::{derivatives_of, plateau, sobolev_norm, ComplexField, GridSpec};

/// Step used for every Hessian entry.
const HESSIAN_EPS: f64 = 1e-3;

/// Second variation restricted to `2(2K+1)` real directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HessianRestriction {
    pub basis_size: usize,
    pub dimension: usize,
    /// Symmetrized matrix, row-major.
    pub matrix: Vec<Vec<f64>>,
    /// `‖A - Aᵀ‖_F / ‖A‖_F` before symmetrization.
    pub asymmetry: f64,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    /// Largest eigenvalue modulus.
    pub spectral_norm: f64,
    /// `second_variation(∂x B / ‖∂x B‖, φ_j)` for every basis direction `φ_j`.
    pub kernel_residuals: Vec<f64>,
    pub jacobi_sweeps: usize,
}

impl HessianRestriction {
    pub fn max_kernel_residual(&self) -> f64 {
        self.kernel_residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Matrix as CSV rows without a header.
    pub fn matrix_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.matrix {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Unit-L² directions `e^{i k_m x} χ` and `i e^{i k_m x} χ`, `|m| <= K`,
/// ordered `m = -K..=K` with the real direction first. On a period `χ = 1`.
pub fn hessian_basis(grid: &GridSpec, k: usize, frame: Frame) -> Result<Vec<ComplexField>> {
    if 2 * k + 1 > grid.points() / 2 {
        return Err(Error::Usage(format!(
            "K = {k} needs more than {} grid points",
            grid.points()
        )));
    }
    let chi = match frame {
        Frame::Line => plateau(grid, TAPER_INNER, TAPER_OUTER),
        Frame::Periodic => vec![1.0; grid.points()],
    };
    let nodes = grid.nodes();
    let mut basis = Vec::with_capacity(2 * (2 * k + 1));
    for m in -(k as i64)..=(k as i64) {
        let km = 2.0 * PI * m as f64 / grid.length();
        let values: Vec<Complex64> = nodes
            .iter()
            .zip(&chi)
            .map(|(x, c)| Complex64::from_polar(*c, km * x))
            .collect();
        let f = ComplexField::new(*grid, 0.0, values)?;
        let norm = sobolev_norm(&f, 0.0);
        let f = f.map(|v| v / norm)?;
        let g = f.map(|v| v * Complex64::new(0.0, 1.0))?;
        basis.push(f);
        basis.push(g);
    }
    Ok(basis)
}

/// Assembles the restriction of the second variation of `functional` at `b`
/// to [`hessian_basis`], in parallel over entries.
///
/// Each entry `(i, j)` uses steps `ε` along `φ_i` and `ε/2` along `φ_j`, so
/// the raw matrix is not symmetric by construction and its asymmetry
/// measures the discretization error. The reported matrix is symmetrized.
pub fn assemble_hessian(functional: &Lyapunov, b: &ComplexField, k: usize) -> Result<HessianRestriction> {
    let frame = functional.quadrature().frame();
    let basis = hessian_basis(b.grid(), k, frame)?;
    let n = basis.len();
    let h = HESSIAN_EPS;

    let entries: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            mixed(functional, b, (&basis[i], h), (&basis[j], 0.5 * h))
        })
        .collect::<Result<_>>()?;
    let mut matrix = SquareMatrix::zeros(n);
    for (idx, v) in entries.into_iter().enumerate() {
        matrix.set(idx / n, idx % n, v);
    }
    let asymmetry = matrix.asymmetry();
    matrix.symmetrize();

    let eig = symmetric_eigen(&matrix)?;
    let spectral_norm = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let bx = derivatives_of(b.grid(), b.values(), &[1], None).pop().unwrap_or_default();
    let bx = ComplexField::new(*b.grid(), b.t(), bx)?;
    let norm = sobolev_norm(&bx, 0.0);
    let kernel_residuals = if norm > 1e-12 {
        let unit = bx.map(|v| v / norm)?;
        basis
            .par_iter()
            .map(|phi| second_variation(functional, b, &unit, phi, h))
            .collect::<Result<_>>()?
    } else {
        vec![0.0; n]
    };

    Ok(HessianRestriction {
        basis_size: k,
        dimension: n,
        matrix: matrix.rows(),
        asymmetry,
        min_eigenvalue: eig.values.first().copied().unwrap_or(0.0),
        eigenvalues: eig.values,
        spectral_norm,
        kernel_residuals,
        jacobi_sweeps: eig.sweeps,
    })
}
