//! Product rules for the normalized area measure dλ = r dr dθ / π on the
//! unit disk: Gauss–Legendre in t = r² crossed with the trapezoid rule in θ.
//!
//! With t = r² the measure becomes dt dθ / 2π, so the radial weights sum to
//! one and the angular weights are 1/M. A rule with `n` radial and `M`
//! angular nodes integrates z^a z̄^b exactly when a = b ≤ 2n − 1, and
//! returns zero (up to rounding) whenever 0 < |a − b| < M.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{cplx, is_finite, CompensatedComplexSum, CompensatedSum, Real};

pub const DEFAULT_RADIAL: usize = 64;
pub const DEFAULT_ANGULAR: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RuleKind {
    /// Plain Gauss–Legendre in t.
    GaussLegendre,
    /// Gauss–Legendre in x with 1 − t = (1 − x)^power, clustering nodes
    /// at the boundary circle.
    Graded { power: u32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadratureRule<T> {
    kind: RuleKind,
    radial_nodes: Vec<T>,
    radial_weights: Vec<T>,
    angular_count: usize,
    #[serde(skip)]
    unit_roots: Vec<Complex<T>>,
}

/// Gauss–Legendre nodes and weights on [0, 1], ascending.
pub fn gauss_legendre_unit<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::from_usize_lossy(n);
    let half = T::lit(0.5);
    let tol = T::epsilon() * T::lit(4.0);
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root
        let k = T::from_usize_lossy(i + 1);
        let mut x = (T::PI() * (k - T::lit(0.25)) / (nf + half)).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= tol {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        // x is the i-th largest root on [-1, 1]; map to [0, 1]
        nodes[n - 1 - i] = (T::one() + x) * half;
        weights[n - 1 - i] = w * half;
        nodes[i] = (T::one() - x) * half;
        weights[i] = w * half;
    }
    (nodes, weights)
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p_prev = T::one();
    let mut p = x;
    if n == 0 {
        return (T::one(), T::zero());
    }
    for k in 1..n {
        let kf = T::from_usize_lossy(k);
        let next = ((kf + kf + T::one()) * x * p - kf * p_prev) / (kf + T::one());
        p_prev = p;
        p = next;
    }
    let nf = T::from_usize_lossy(n);
    let d = nf * (x * p - p_prev) / (x * x - T::one());
    (p, d)
}

impl<T: Real> QuadratureRule<T> {
    /// Gauss–Legendre in r² × uniform angles.
    pub fn new(n_radial: usize, n_angular: usize) -> Result<Self> {
        check_counts(n_radial, n_angular)?;
        let (t, w) = gauss_legendre_unit::<T>(n_radial);
        Ok(Self::assemble(RuleKind::GaussLegendre, t, w, n_angular))
    }

    /// Boundary-graded variant: 1 − t = (1 − x)^power with Gauss–Legendre in
    /// x. Integrands carrying a factor (1 − |z|²)^(−α), α < 1, become smooth
    /// in x once power·(1 − α) − 1 is a nonnegative integer, and are
    /// integrated to high order otherwise.
    pub fn graded(n_radial: usize, n_angular: usize, power: u32) -> Result<Self> {
        check_counts(n_radial, n_angular)?;
        if power == 0 {
            return Err(Error::InvalidParameter {
                name: "power",
                value: 0.0,
                reason: "grading power must be at least 1",
            });
        }
        let (x, wx) = gauss_legendre_unit::<T>(n_radial);
        let k = T::from_usize_lossy(power as usize);
        let mut t = Vec::with_capacity(n_radial);
        let mut w = Vec::with_capacity(n_radial);
        for (&xi, &wi) in x.iter().zip(&wx) {
            let y = T::one() - xi;
            t.push(T::one() - y.powi(power as i32));
            w.push(wi * k * y.powi(power as i32 - 1));
        }
        Ok(Self::assemble(RuleKind::Graded { power }, t, w, n_angular))
    }

    /// The (64, 256) rule.
    pub fn default_rule() -> Self {
        Self::new(DEFAULT_RADIAL, DEFAULT_ANGULAR).expect("default counts are valid")
    }

    fn assemble(kind: RuleKind, t: Vec<T>, weights: Vec<T>, n_angular: usize) -> Self {
        // Graded nodes can round onto the unit circle; pull them back to the
        // point margin. The weight carried by such nodes is below 1e-13.
        let r_max = T::one() - T::lit(crate::geometry::BOUNDARY_MARGIN);
        let radial_nodes = t.into_iter().map(|t| t.sqrt().min(r_max)).collect();
        let m = T::from_usize_lossy(n_angular);
        let unit_roots = (0..n_angular)
            .map(|j| {
                let theta = T::TAU() * T::from_usize_lossy(j) / m;
                let (s, c) = theta.sin_cos();
                cplx(c, s)
            })
            .collect();
        Self {
            kind,
            radial_nodes,
            radial_weights: weights,
            angular_count: n_angular,
            unit_roots,
        }
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    /// Radii r_i of the node circles, ascending.
    pub fn radial_nodes(&self) -> &[T] {
        &self.radial_nodes
    }

    /// Weights of the node circles; they sum to one.
    pub fn radial_weights(&self) -> &[T] {
        &self.radial_weights
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn node_count(&self) -> usize {
        self.radial_nodes.len() * self.angular_count
    }

    /// (node, weight) pairs in the fixed summation order: circles from the
    /// center outwards, angles counter-clockwise from θ = 0.
    pub fn nodes(&self) -> impl Iterator<Item = (Complex<T>, T)> + '_ {
        let inv_m = T::from_usize_lossy(self.angular_count).recip();
        self.radial_nodes
            .iter()
            .zip(&self.radial_weights)
            .flat_map(move |(&r, &w)| {
                let wn = w * inv_m;
                self.unit_roots.iter().map(move |&u| (u * r, wn))
            })
    }

    /// ∫ f dλ over the unit disk.
    pub fn integrate<F>(&self, f: F) -> Result<Complex<T>>
    where
        F: Fn(Complex<T>) -> Complex<T>,
    {
        let mut acc = CompensatedComplexSum::new();
        for (z, w) in self.nodes() {
            let v = f(z);
            if !is_finite(v) {
                return Err(non_finite(z));
            }
            acc.add(v * w);
        }
        Ok(acc.value())
    }

    /// ∫ f dλ for a real integrand.
    pub fn integrate_real<F>(&self, f: F) -> Result<T>
    where
        F: Fn(Complex<T>) -> T,
    {
        let mut acc = CompensatedSum::new();
        for (z, w) in self.nodes() {
            let v = f(z);
            if !v.is_finite() {
                return Err(non_finite(z));
            }
            acc.add(v * w);
        }
        Ok(acc.value())
    }

    /// (node, weight) pairs for integrands whose angular profile on the
    /// circle of radius r peaks like |1 − p̄ r e^(iθ)|^(−2) toward arg p, with
    /// half-width d = (1 − |p| r)/√(|p| r). The angular offset φ from arg p
    /// is sampled as φ = ±d sinh(Aσ), A = asinh(π/d), with Gauss–Legendre in
    /// σ ∈ [0, 1] on each side; ⌈M/2⌉ nodes per side. With p = 0 this is
    /// [`Self::nodes`].
    pub fn peaked_nodes(&self, peak: Complex<T>) -> Vec<(Complex<T>, T)> {
        let m = peak.norm();
        if m == T::zero() {
            return self.nodes().collect();
        }
        let half = self.angular_count.div_ceil(2);
        let (sigma, omega) = gauss_legendre_unit::<T>(half);
        let theta0 = peak.arg();
        let pi = T::PI();
        let inv_tau = T::TAU().recip();
        let mut out = Vec::with_capacity(self.radial_nodes.len() * 2 * half);
        for (&r, &w) in self.radial_nodes.iter().zip(&self.radial_weights) {
            let mr = m * r;
            let d = (T::one() - mr) / mr.sqrt();
            let amp = (pi / d).asinh();
            for side in [-T::one(), T::one()] {
                for (&sg, &om) in sigma.iter().zip(&omega) {
                    let x = amp * sg;
                    let phi = side * d * x.sinh();
                    let (sn, cs) = (theta0 + phi).sin_cos();
                    let weight = w * d * amp * x.cosh() * om * inv_tau;
                    out.push((cplx(cs * r, sn * r), weight));
                }
            }
        }
        out
    }

    /// [`Self::integrate_real`] on [`Self::peaked_nodes`].
    pub fn integrate_real_peaked<F>(&self, peak: Complex<T>, f: F) -> Result<T>
    where
        F: Fn(Complex<T>) -> T,
    {
        if !(peak.norm() < T::one()) {
            return Err(Error::OutsideDisk {
                re: peak.re.to_f64_lossy(),
                im: peak.im.to_f64_lossy(),
            });
        }
        let mut acc = CompensatedSum::new();
        for (z, w) in self.peaked_nodes(peak) {
            let v = f(z);
            if !v.is_finite() {
                return Err(non_finite(z));
            }
            acc.add(v * w);
        }
        Ok(acc.value())
    }

    /// ∫ f dλ over the Euclidean disk |z − center| < radius, still against
    /// the normalized measure, so f = 1 gives radius².
    pub fn integrate_subdisk<F>(&self, center: Complex<T>, radius: T, f: F) -> Result<Complex<T>>
    where
        F: Fn(Complex<T>) -> Complex<T>,
    {
        check_subdisk(center, radius)?;
        let scale = radius * radius;
        self.integrate(|z| f(center + z * radius))
            .map(|v| v * scale)
            .map_err(|e| shift_location(e, center, radius))
    }

    pub fn integrate_subdisk_real<F>(&self, center: Complex<T>, radius: T, f: F) -> Result<T>
    where
        F: Fn(Complex<T>) -> T,
    {
        check_subdisk(center, radius)?;
        let scale = radius * radius;
        self.integrate_real(|z| f(center + z * radius))
            .map(|v| v * scale)
            .map_err(|e| shift_location(e, center, radius))
    }
}

/// Shorthand for [`QuadratureRule::new`].
pub fn build_rule<T: Real>(n_radial: usize, n_angular: usize) -> Result<QuadratureRule<T>> {
    QuadratureRule::new(n_radial, n_angular)
}

fn check_counts(n_radial: usize, n_angular: usize) -> Result<()> {
    if n_radial == 0 {
        return Err(Error::InvalidParameter {
            name: "n_radial",
            value: 0.0,
            reason: "need at least one radial node",
        });
    }
    if n_angular == 0 {
        return Err(Error::InvalidParameter {
            name: "n_angular",
            value: 0.0,
            reason: "need at least one angular node",
        });
    }
    Ok(())
}

fn check_subdisk<T: Real>(center: Complex<T>, radius: T) -> Result<()> {
    if !(radius > T::zero()) || !(center.norm() + radius < T::one()) || !is_finite(center) {
        return Err(Error::SubdiskOutside {
            center_re: center.re.to_f64_lossy(),
            center_im: center.im.to_f64_lossy(),
            radius: radius.to_f64_lossy(),
        });
    }
    Ok(())
}

fn non_finite<T: Real>(z: Complex<T>) -> Error {
    Error::NonFinite {
        re: z.re.to_f64_lossy(),
        im: z.im.to_f64_lossy(),
    }
}

fn shift_location<T: Real>(e: Error, center: Complex<T>, radius: T) -> Error {
    match e {
        Error::NonFinite { re, im } => Error::NonFinite {
            re: center.re.to_f64_lossy() + radius.to_f64_lossy() * re,
            im: center.im.to_f64_lossy() + radius.to_f64_lossy() * im,
        },
        other => other,
    }
}
