//! Dense symmetric eigenproblems by the cyclic Jacobi method.

use crate::error::{Error, Result};

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        (0..n).for_each(|i| m.set(i, i, 1.0));
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Usage("matrix rows must all have length n".into()));
        }
        Ok(Self {
            n,
            data: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `‖A - Aᵀ‖_F / ‖A‖_F` (0 for the zero matrix).
    pub fn asymmetry(&self) -> f64 {
        let norm = self.frobenius();
        if norm == 0.0 {
            return 0.0;
        }
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let d = self.get(i, j) - self.get(j, i);
                s += d * d;
            }
        }
        s.sqrt() / norm
    }

    /// Replaces `A` with `(A + Aᵀ)/2`.
    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let m = 0.5 * (self.get(i, j) + self.get(j, i));
                self.set(i, j, m);
                self.set(j, i, m);
            }
        }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).powi(2);
                }
            }
        }
        s.sqrt()
    }
}

/// Eigenvalues in ascending order; column `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: SquareMatrix,
    pub sweeps: usize,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.vectors.dim()).map(|i| self.vectors.get(i, k)).collect()
    }
}

pub const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi: sweeps of plane rotations over all `(p, q)` pairs until the
/// off-diagonal mass is below `1e-14 ‖A‖_F`. Only the upper triangle is read.
pub fn symmetric_eigen(a: &SquareMatrix) -> Result<SymmetricEigen> {
    let n = a.dim();
    let mut m = a.clone();
    for i in 0..n {
        for j in 0..i {
            m.set(i, j, m.get(j, i));
        }
    }
    let mut v = SquareMatrix::identity(n);
    let tol = 1e-14 * m.frobenius().max(f64::MIN_POSITIVE);

    let mut sweeps = 0;
    while m.off_diagonal_norm() > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                what: "cyclic Jacobi",
                iterations: sweeps,
                residual: m.off_diagonal_norm(),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let (app, aqq) = (m.get(p, p), m.get(q, q));
                // rotation angle with tan(2θ) = 2 a_pq / (a_qq - a_pp), smaller root
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m.get(k, p), m.get(k, q));
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let (mpk, mqk) = (m.get(p, k), m.get(q, k));
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                for k in 0..n {
                    let (vkp, vkq) = (v.get(k, p), v.get(k, q));
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).total_cmp(&m.get(j, j)));
    let values = order.iter().map(|&i| m.get(i, i)).collect();
    let mut vectors = SquareMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, col, v.get(r, src));
        }
    }
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}
