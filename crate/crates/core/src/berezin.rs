//! Berezin transforms and the Sarason product |f|²~(w) · |g|²~(w).

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{kernel_raw, mobius_raw, DiskPoint};
use crate::quadrature::QuadratureRule;
use crate::scalar::Real;
use crate::symbols::{Symbol, SymbolPair};

/// Default number of dyadic radii 1 − 2^(−j) in a schedule.
pub const DEFAULT_LEVELS: usize = 12;
/// Default number of angles per radius.
pub const DEFAULT_ANGLES: usize = 64;
/// Threshold below which the last boundary maxima count as a zero limit.
pub const LIMIT_THRESHOLD: f64 = 1e-3;

/// ũ(w) = ∫ u(z) |k_w(z)|² dλ(z).
pub fn berezin_transform<T, F>(
    u: F,
    w: DiskPoint<T>,
    rule: &QuadratureRule<T>,
) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
{
    let wz = w.z();
    let scale = (T::one() - w.modulus_sqr()).powi(2);
    rule.integrate(|z| u(z) * (kernel_raw(wz, z).norm_sqr() * scale))
}

/// |f|²~(w) computed as ‖f ∘ φ_w‖²₂.
pub fn berezin_mod_squared<T: Real>(
    s: &Symbol<T>,
    w: DiskPoint<T>,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    if s.is_zero() {
        return Ok(T::zero());
    }
    let wz = w.z();
    rule.integrate_real_peaked(wz, |z| s.eval_at(mobius_raw(wz, z)).norm_sqr())
}

/// |f|²~(w) computed as ∫ |f|² |k_w|² dλ, the cross-check route.
pub fn berezin_mod_squared_weighted<T: Real>(
    s: &Symbol<T>,
    w: DiskPoint<T>,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    let wz = w.z();
    let scale = (T::one() - w.modulus_sqr()).powi(2);
    rule.integrate_real_peaked(wz, |z| {
        s.eval_at(z).norm_sqr() * kernel_raw(wz, z).norm_sqr() * scale
    })
}

/// |f|²~(w) · |g|²~(w).
pub fn sarason_quantity<T: Real>(
    pair: &SymbolPair<T>,
    w: DiskPoint<T>,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    Ok(berezin_mod_squared(&pair.f, w, rule)? * berezin_mod_squared(&pair.g, w, rule)?)
}

/// Polar grid standing in for sup over the disk and for |w| → 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusSchedule<T> {
    radii: Vec<T>,
    angular_samples: usize,
}

impl<T: Real> RadiusSchedule<T> {
    pub fn new(radii: Vec<T>, angular_samples: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidSchedule("no radii".into()));
        }
        if angular_samples == 0 {
            return Err(Error::InvalidSchedule("need at least one angle".into()));
        }
        if radii.windows(2).any(|p| !(p[0] < p[1])) {
            return Err(Error::InvalidSchedule(
                "radii must be strictly increasing".into(),
            ));
        }
        if !(radii[0] > T::zero()) {
            return Err(Error::InvalidSchedule("radii must be positive".into()));
        }
        let last = *radii.last().expect("nonempty");
        if !(last <= T::one() - T::lit(1e-6)) {
            return Err(Error::InvalidSchedule(format!(
                "last radius {last} exceeds 1 - 1e-6"
            )));
        }
        Ok(Self {
            radii,
            angular_samples,
        })
    }

    /// Radii 1 − 2^(−j), j = 1..=levels.
    pub fn dyadic(levels: usize, angular_samples: usize) -> Result<Self> {
        let radii = (1..=levels)
            .map(|j| T::one() - T::lit(0.5).powi(j as i32))
            .collect();
        Self::new(radii, angular_samples)
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn angular_samples(&self) -> usize {
        self.angular_samples
    }

    /// Grid points, radius-major, angles counter-clockwise from 0.
    pub fn points(&self) -> Vec<DiskPoint<T>> {
        let m = T::from_usize_lossy(self.angular_samples);
        self.radii
            .iter()
            .flat_map(|&r| {
                (0..self.angular_samples).map(move |k| {
                    let theta = T::TAU() * T::from_usize_lossy(k) / m;
                    DiskPoint::from_polar(r, theta).expect("schedule radii are inside the disk")
                })
            })
            .collect()
    }
}

impl<T: Real> Default for RadiusSchedule<T> {
    fn default() -> Self {
        Self::dyadic(DEFAULT_LEVELS, DEFAULT_ANGLES).expect("default schedule is valid")
    }
}

/// Evaluates `f` on every point in parallel, keeping grid order, and reports
/// the first failing point in that order.
pub(crate) fn map_grid<T, R, F>(points: &[DiskPoint<T>], f: F) -> Result<Vec<R>>
where
    T: Real,
    R: Send,
    F: Fn(DiskPoint<T>) -> Result<R> + Sync + Send,
{
    let results: Vec<Result<R>> = points.par_iter().map(|&w| f(w)).collect();
    results
        .into_iter()
        .zip(points)
        .map(|(r, w)| r.map_err(|e| e.at_point(w.re().to_f64_lossy(), w.im().to_f64_lossy())))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SarasonRow<T> {
    pub w: DiskPoint<T>,
    pub bf: T,
    pub bg: T,
    pub product: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendPoint<T> {
    pub radius: T,
    pub max_product: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SarasonReport<T> {
    pub grid: Vec<SarasonRow<T>>,
    /// Max of the product column.
    pub sup_estimate: T,
    /// Square root of `sup_estimate`, i.e. sup ‖f∘φ_w‖₂‖g∘φ_w‖₂ on the grid.
    pub sup_sqrt: T,
    pub boundary_trend: Vec<TrendPoint<T>>,
    pub limit_threshold: T,
    pub limit_zero: bool,
}

impl<T: Real> SarasonReport<T> {
    /// CSV with columns re_w, im_w, bf, bg, product.
    pub fn grid_csv(&self) -> String {
        let mut out = String::from("re_w,im_w,bf,bg,product\n");
        for r in &self.grid {
            out.push_str(&crate::report::csv_line(&[
                r.w.re(),
                r.w.im(),
                r.bf,
                r.bg,
                r.product,
            ]));
        }
        out
    }

    pub fn trend_csv(&self) -> String {
        let mut out = String::from("radius,max_product\n");
        for p in &self.boundary_trend {
            out.push_str(&crate::report::csv_line(&[p.radius, p.max_product]));
        }
        out
    }

    /// sup over the grid points with |w| > r of sqrt(bf · bg).
    pub fn tail_sup_sqrt(&self, r: T) -> Result<T> {
        let mut best: Option<T> = None;
        for row in self.grid.iter().filter(|row| row.w.modulus() > r) {
            let v = (row.bf * row.bg).sqrt();
            best = Some(best.map_or(v, |b: T| b.max(v)));
        }
        best.ok_or(Error::EmptyGrid(r.to_f64_lossy()))
    }
}

/// Finite proxy for lim_{|w|→1} = 0: the last three per-radius maxima are
/// each below `threshold` and nonincreasing.
pub fn boundary_limit_is_zero<T: Real>(trend: &[TrendPoint<T>], threshold: T) -> bool {
    if trend.len() < 3 {
        return false;
    }
    let tail = &trend[trend.len() - 3..];
    tail.iter().all(|p| p.max_product < threshold)
        && tail
            .windows(2)
            .all(|p| p[1].max_product <= p[0].max_product)
}

/// Evaluates the Sarason product on the schedule grid.
pub fn sarason_sup<T: Real>(
    pair: &SymbolPair<T>,
    schedule: &RadiusSchedule<T>,
    rule: &QuadratureRule<T>,
) -> Result<SarasonReport<T>> {
    let points = schedule.points();
    let grid = map_grid(&points, |w| {
        let bf = berezin_mod_squared(&pair.f, w, rule)?;
        let bg = berezin_mod_squared(&pair.g, w, rule)?;
        Ok(SarasonRow {
            w,
            bf,
            bg,
            product: bf * bg,
        })
    })?;
    let sup_estimate = grid.iter().fold(T::zero(), |m, r| m.max(r.product));
    let boundary_trend: Vec<TrendPoint<T>> = schedule
        .radii()
        .iter()
        .zip(grid.chunks(schedule.angular_samples()))
        .map(|(&radius, rows)| TrendPoint {
            radius,
            max_product: rows.iter().fold(T::zero(), |m, r| m.max(r.product)),
        })
        .collect();
    let limit_threshold = T::lit(LIMIT_THRESHOLD);
    let limit_zero = boundary_limit_is_zero(&boundary_trend, limit_threshold);
    Ok(SarasonReport {
        grid,
        sup_estimate,
        sup_sqrt: sup_estimate.sqrt(),
        boundary_trend,
        limit_threshold,
        limit_zero,
    })
}
