//! Closed-form geometry of the unit disk: Möbius involutions, Bergman
//! kernels, the Bergman metric and hyperbolic disks.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{cplx, Real};

/// Default hyperbolic radius used wherever a fixed `δ` is needed.
pub const DEFAULT_DELTA: f64 = 0.25;

/// Points with modulus at or beyond `1 - BOUNDARY_MARGIN` are rejected.
pub const BOUNDARY_MARGIN: f64 = 1e-14;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskPoint<T> {
    re: T,
    im: T,
}

impl<T: Real> DiskPoint<T> {
    pub fn new(re: T, im: T) -> Result<Self> {
        let modulus = re.hypot(im);
        if !(modulus < T::one() - T::lit(BOUNDARY_MARGIN)) {
            return Err(Error::OutsideDisk {
                re: re.to_f64_lossy(),
                im: im.to_f64_lossy(),
            });
        }
        Ok(Self { re, im })
    }

    pub fn from_complex(z: Complex<T>) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn from_polar(radius: T, angle: T) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        Self::new(radius * c, radius * s)
    }

    pub fn origin() -> Self {
        Self {
            re: T::zero(),
            im: T::zero(),
        }
    }

    /// Real point `x`; panics outside `(-1, 1)`. Meant for literals in tests
    /// and examples.
    pub fn real(x: T) -> Self {
        Self::new(x, T::zero()).expect("real point inside the disk")
    }

    #[inline]
    pub fn re(&self) -> T {
        self.re
    }

    #[inline]
    pub fn im(&self) -> T {
        self.im
    }

    #[inline]
    pub fn z(&self) -> Complex<T> {
        cplx(self.re, self.im)
    }

    #[inline]
    pub fn modulus(&self) -> T {
        self.re.hypot(self.im)
    }

    #[inline]
    pub fn modulus_sqr(&self) -> T {
        self.re * self.re + self.im * self.im
    }
}

/// φ_w(z) = (w − z)/(1 − w̄z).
pub fn mobius<T: Real>(w: DiskPoint<T>, z: DiskPoint<T>) -> Complex<T> {
    mobius_raw(w.z(), z.z())
}

#[inline]
pub(crate) fn mobius_raw<T: Real>(w: Complex<T>, z: Complex<T>) -> Complex<T> {
    (w - z) / (Complex::new(T::one(), T::zero()) - w.conj() * z)
}

/// φ_w′(z) = −(1 − |w|²)/(1 − w̄z)².
pub fn mobius_derivative<T: Real>(w: DiskPoint<T>, z: DiskPoint<T>) -> Complex<T> {
    let d = Complex::new(T::one(), T::zero()) - w.z().conj() * z.z();
    -(Complex::new(T::one() - w.modulus_sqr(), T::zero())) / (d * d)
}

/// Bergman reproducing kernel K_z(w) = 1/(1 − z̄w)².
pub fn bergman_kernel<T: Real>(z: DiskPoint<T>, w: DiskPoint<T>) -> Complex<T> {
    kernel_raw(z.z(), w.z())
}

#[inline]
pub(crate) fn kernel_raw<T: Real>(z: Complex<T>, w: Complex<T>) -> Complex<T> {
    let d = Complex::new(T::one(), T::zero()) - z.conj() * w;
    (d * d).inv()
}

/// K_z(z) = (1 − |z|²)⁻².
#[inline]
pub fn kernel_diagonal<T: Real>(z: DiskPoint<T>) -> T {
    let c = T::one() - z.modulus_sqr();
    (c * c).recip()
}

/// Normalized kernel k_z(w) = (1 − |z|²)/(1 − z̄w)².
pub fn normalized_kernel<T: Real>(z: DiskPoint<T>, w: DiskPoint<T>) -> Complex<T> {
    bergman_kernel(z, w) * (T::one() - z.modulus_sqr())
}

/// 1 − |φ_z(w)|², evaluated as (1 − |z|²)(1 − |w|²)/|1 − z̄w|² so that it
/// keeps full relative accuracy next to the boundary.
#[inline]
pub fn mobius_complement<T: Real>(z: DiskPoint<T>, w: DiskPoint<T>) -> T {
    mobius_complement_raw(z.z(), w.z())
}

#[inline]
pub(crate) fn mobius_complement_raw<T: Real>(z: Complex<T>, w: Complex<T>) -> T {
    let d = Complex::new(T::one(), T::zero()) - z.conj() * w;
    (T::one() - z.norm_sqr()) * (T::one() - w.norm_sqr()) / d.norm_sqr()
}

/// Pseudo-hyperbolic distance |φ_z(w)|.
pub fn pseudo_hyperbolic<T: Real>(z: DiskPoint<T>, w: DiskPoint<T>) -> T {
    let d = Complex::new(T::one(), T::zero()) - z.z().conj() * w.z();
    (z.z() - w.z()).norm() / d.norm()
}

/// Bergman metric B(z, w) = ½ log[(1 + ρ)/(1 − ρ)] with ρ = |φ_z(w)|.
pub fn bergman_metric<T: Real>(z: DiskPoint<T>, w: DiskPoint<T>) -> T {
    let rho = pseudo_hyperbolic(z, w);
    let complement = mobius_complement(z, w);
    // (1 + ρ)/(1 − ρ) = (1 + ρ)²/(1 − ρ²)
    rho.ln_1p() - T::lit(0.5) * complement.ln()
}

/// Euclidean description of the Bergman ball D(z, δ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicDisk<T> {
    pub center: Complex<T>,
    pub radius: T,
    pub hyperbolic_center: DiskPoint<T>,
    pub hyperbolic_radius: T,
}

impl<T: Real> HyperbolicDisk<T> {
    /// Normalized area λ(D(z, δ)) = R².
    pub fn measure(&self) -> T {
        self.radius * self.radius
    }

    pub fn boundary_point(&self, angle: T) -> Complex<T> {
        let (s, c) = angle.sin_cos();
        self.center + cplx(c, s) * self.radius
    }

    pub fn contains(&self, w: Complex<T>) -> bool {
        (w - self.center).norm() < self.radius
    }
}

/// D(z, δ) = {w : B(z, w) < δ}, a Euclidean disk with center
/// (1 − s²)z/(1 − s²|z|²) and radius (1 − |z|²)s/(1 − s²|z|²), s = tanh δ.
pub fn hyperbolic_disk<T: Real>(z: DiskPoint<T>, delta: T) -> Result<HyperbolicDisk<T>> {
    if !(delta > T::zero()) || !delta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta.to_f64_lossy(),
            reason: "hyperbolic radius must be positive and finite",
        });
    }
    let s = delta.tanh();
    let s2 = s * s;
    let m2 = z.modulus_sqr();
    let denom = T::one() - s2 * m2;
    let center = z.z() * ((T::one() - s2) / denom);
    let radius = (T::one() - m2) * s / denom;
    let max_admissible = max_admissible_modulus(delta);
    if !(radius > T::zero()) || !(center.norm() + radius < T::one()) || z.modulus() > max_admissible
    {
        return Err(Error::PointTooCloseToBoundary {
            modulus: z.modulus().to_f64_lossy(),
            max_admissible: max_admissible.to_f64_lossy(),
        });
    }
    Ok(HyperbolicDisk {
        center,
        radius,
        hyperbolic_center: z,
        hyperbolic_radius: delta,
    })
}

/// Largest |z| for which D(z, δ) stays within `1 - BOUNDARY_MARGIN` of the
/// origin. Uses |C| + R = (|z| + s)/(1 + s|z|).
pub fn max_admissible_modulus<T: Real>(delta: T) -> T {
    let s = delta.tanh();
    let edge = T::one() - T::lit(BOUNDARY_MARGIN);
    ((edge - s) / (T::one() - s * edge)).max(T::zero())
}
