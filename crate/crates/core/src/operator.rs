//! Dense complex matrices for operator compressions, and the largest
//! singular value by power iteration.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};

/// Power iterations allowed before giving up.
pub const MAX_ITERATIONS: usize = 10_000;
/// Default relative tolerance of [`TruncatedOperator::operator_norm`].
pub const DEFAULT_NORM_TOL: f64 = 1e-10;
/// Number of repeated squarings of A*A before iterating.
const SQUARINGS: usize = 12;

/// N×N complex matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedOperator<T> {
    dimension: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> TruncatedOperator<T> {
    pub fn zeros(dimension: usize) -> Self {
        Self {
            dimension,
            entries: vec![Complex::new(T::zero(), T::zero()); dimension * dimension],
        }
    }

    pub fn identity(dimension: usize) -> Self {
        let mut m = Self::zeros(dimension);
        for i in 0..dimension {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    pub fn from_diagonal(diagonal: &[T]) -> Self {
        let mut m = Self::zeros(diagonal.len());
        for (i, &d) in diagonal.iter().enumerate() {
            m.set(i, i, Complex::new(d, T::zero()));
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex<T>>(dimension: usize, mut f: F) -> Self {
        let mut entries = Vec::with_capacity(dimension * dimension);
        for row in 0..dimension {
            for col in 0..dimension {
                entries.push(f(row, col));
            }
        }
        Self { dimension, entries }
    }

    pub fn from_rows(dimension: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if entries.len() != dimension * dimension {
            return Err(Error::DimensionMismatch {
                left: dimension * dimension,
                right: entries.len(),
            });
        }
        Ok(Self { dimension, entries })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dimension + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.entries[row * self.dimension + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dimension, |r, c| self.get(c, r).conj())
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                left: self.dimension,
                right: other.dimension,
            });
        }
        let n = self.dimension;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.entries[idx] = out.entries[idx] + a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                left: self.dimension,
                right: x.len(),
            });
        }
        Ok(self.apply_unchecked(x))
    }

    fn apply_unchecked(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        self.entries
            .chunks(self.dimension.max(1))
            .take(self.dimension)
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| {
                        acc + a * b
                    })
            })
            .collect()
    }

    pub fn frobenius_norm(&self) -> T {
        let mut acc = CompensatedSum::new();
        for e in &self.entries {
            acc.add(e.norm_sqr());
        }
        acc.value().sqrt()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                left: self.dimension,
                right: other.dimension,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm())))
    }

    /// Leading N×N block.
    pub fn principal_block(&self, n: usize) -> Self {
        let n = n.min(self.dimension);
        Self::from_fn(n, |r, c| self.get(r, c))
    }

    fn scale(&mut self, s: T) {
        for e in &mut self.entries {
            *e = *e * s;
        }
    }

    /// Largest singular value.
    ///
    /// Power iteration on the Hermitian matrix M = A*A, run on
    /// (M/‖M‖_F)^(2^12) so that clustered leading eigenvalues separate,
    /// starting from the normalized all-ones vector. Stops once the
    /// eigen-residual ‖Mx − ρx‖ drops below `tol`·ρ; tolerances below the
    /// working precision are raised to 64 ε.
    pub fn operator_norm(&self, tol: T) -> Result<T> {
        if !(tol > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "tol",
                value: tol.to_f64_lossy(),
                reason: "tolerance must be positive",
            });
        }
        let n = self.dimension;
        if n == 0 {
            return Ok(T::zero());
        }
        let tol = tol.max(T::epsilon() * T::lit(64.0));
        let gram = self.adjoint().product(self)?;
        let scale = gram.frobenius_norm();
        if !scale.is_finite() {
            return Err(Error::NonFiniteMatrix);
        }
        if scale == T::zero() {
            return Ok(T::zero());
        }
        let mut boosted = gram.clone();
        boosted.scale(scale.recip());
        for _ in 0..SQUARINGS {
            boosted = boosted.product(&boosted)?;
            let f = boosted.frobenius_norm();
            if f == T::zero() {
                break;
            }
            boosted.scale(f.recip());
        }

        let start = T::from_usize_lossy(n).sqrt().recip();
        let mut x = vec![Complex::new(start, T::zero()); n];
        let mut gap = T::infinity();
        for _ in 0..MAX_ITERATIONS {
            let mut y = boosted.apply_unchecked(&x);
            let mut ny = vec_norm(&y);
            if ny == T::zero() {
                // start vector orthogonal to the dominant space
                y = basis_vector(n, argmax_diagonal(&gram));
                ny = T::one();
            }
            for (xi, yi) in x.iter_mut().zip(&y) {
                *xi = *yi / ny;
            }
            let mx = gram.apply_unchecked(&x);
            let rho = x
                .iter()
                .zip(&mx)
                .fold(T::zero(), |acc, (a, b)| acc + (a.conj() * b).re);
            if rho <= T::zero() {
                return Ok(T::zero());
            }
            let residual = vec_norm(
                &mx.iter()
                    .zip(&x)
                    .map(|(m, xi)| m - xi * rho)
                    .collect::<Vec<_>>(),
            );
            gap = residual / rho;
            if gap <= tol {
                return Ok(rho.sqrt());
            }
        }
        Err(Error::NotConverged {
            iterations: MAX_ITERATIONS,
            gap: gap.to_f64_lossy(),
        })
    }

    /// One line per row: `re,im` pairs for each column, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self
            .entries
            .chunks(self.dimension.max(1))
            .take(self.dimension)
        {
            let flat: Vec<T> = row.iter().flat_map(|z| [z.re, z.im]).collect();
            out.push_str(&crate::report::csv_line(&flat));
        }
        out
    }
}

fn vec_norm<T: Real>(x: &[Complex<T>]) -> T {
    x.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

fn basis_vector<T: Real>(n: usize, k: usize) -> Vec<Complex<T>> {
    let mut v = vec![Complex::new(T::zero(), T::zero()); n];
    v[k] = Complex::new(T::one(), T::zero());
    v
}

fn argmax_diagonal<T: Real>(m: &TruncatedOperator<T>) -> usize {
    (0..m.dimension())
        .max_by(|&a, &b| {
            m.get(a, a)
                .re
                .partial_cmp(&m.get(b, b).re)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0)
}
