//! Numerical laboratory for the focusing cubic NLS `i u_t + u_xx + |u|^2 u = 0`
//! on a Stokes-wave background `e^{it}`.
//!
//! The crate evaluates the Peregrine, Kuznetsov-Ma and Akhmediev breathers in
//! closed form, evolves fields with split-step Fourier integrators, computes the
//! conserved functionals `M`, `P`, `E`, `F`, and checks the elliptic equations,
//! first and second variations and orbital distances of each breather.
//!
//! Module map:
//!
//! - [`analytic`]: closed-form solutions and the NLS symmetry group.
//! - [`spectral`]: periodic grids, Fourier differentiation, Sobolev norms, quadrature.
//! - [`functionals`]: mass, momentum, energy, `F`, Lyapunov combinations, energy-space metric.
//! - [`variation`]: PDE/ODE residuals, finite-difference variations, Hessian restriction,
//!   orbital distance.
//! - [`evolve`]: Strang and fourth-order split-step time stepping with diagnostics.
//! - [`linalg`]: cyclic Jacobi eigensolver for symmetric matrices.
//! - [`noise`]: seeded, reproducible perturbation fields.

pub mod analytic;
pub mod error;
pub mod evolve;
pub mod functionals;
pub mod linalg;
pub mod noise;
pub mod spectral;
pub mod variation;

pub use analytic::{BreatherKind, BreatherSpec, SymmetryParams};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use spectral::{ComplexField, GridSpec};

/// Version string echoed into run metadata.
pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));
