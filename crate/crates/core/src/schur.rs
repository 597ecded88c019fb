//! Numerical checks of the Schur-test apparatus: the operator S with its
//! growth bound, the change-of-variable identity for S, the projection
//! identity P(ḡK_z) = conj(g(z)) K_z, the Schur ratios for the test function
//! ψ² = K_v(v)^ε, and the Luecking averaging function k(w).
//!
//! Constants are never asserted; reports carry empirical maxima whose
//! boundedness and refinement stability are what the tests check.

use num_complex::Complex;
use serde::Serialize;

use crate::berezin::{map_grid, sarason_sup, RadiusSchedule, SarasonReport};
use crate::error::{Error, Result};
use crate::geometry::{
    hyperbolic_disk, kernel_diagonal, kernel_raw, max_admissible_modulus, mobius_raw, DiskPoint,
};
use crate::quadrature::QuadratureRule;
use crate::scalar::Real;
use crate::symbols::{Symbol, SymbolPair};

pub const DEFAULT_EPSILON: f64 = 0.125;

/// Boundary-graded rule for the weakly singular integrands of this module.
pub fn default_schur_rule<T: Real>() -> QuadratureRule<T> {
    QuadratureRule::graded(64, 256, 8).expect("valid counts")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchurParameters<T> {
    /// ε in ψ(v)² = K_v(v)^ε.
    pub epsilon: T,
    /// Lebesgue exponent p > 1.
    pub p: T,
    /// Bergman-ball radius δ for the Luecking function.
    pub delta: T,
    /// Tail radius r; 0 means the full disk.
    pub r_cut: T,
}

impl<T: Real> SchurParameters<T> {
    /// Requires p > 1, 0 < ε < 1/(2p′), 0 < δ < 1/2, 0 ≤ r_cut < 1.
    pub fn new(epsilon: T, p: T, delta: T, r_cut: T) -> Result<Self> {
        let invalid = |name, value: T, reason| Error::InvalidParameter {
            name,
            value: value.to_f64_lossy(),
            reason,
        };
        if !(p > T::one()) || !p.is_finite() {
            return Err(invalid(
                "p",
                p,
                "exponent must be finite and greater than 1",
            ));
        }
        let p_conj = p / (p - T::one());
        if !(epsilon > T::zero()) || !(epsilon < (T::lit(2.0) * p_conj).recip()) {
            return Err(invalid("epsilon", epsilon, "need 0 < epsilon < 1/(2p')"));
        }
        if !(delta > T::zero()) || !(delta < T::lit(0.5)) {
            return Err(invalid("delta", delta, "need 0 < delta < 1/2"));
        }
        if !(r_cut >= T::zero()) || !(r_cut < T::one()) {
            return Err(invalid("r_cut", r_cut, "need 0 <= r_cut < 1"));
        }
        Ok(Self {
            epsilon,
            p,
            delta,
            r_cut,
        })
    }

    /// p = 2, δ = 1/4, full disk.
    pub fn with_epsilon(epsilon: T) -> Result<Self> {
        Self::new(
            epsilon,
            T::lit(2.0),
            T::lit(crate::geometry::DEFAULT_DELTA),
            T::zero(),
        )
    }

    pub fn with_r_cut(self, r_cut: T) -> Result<Self> {
        Self::new(self.epsilon, self.p, self.delta, r_cut)
    }

    /// p′ with 1/p + 1/p′ = 1.
    pub fn conjugate_exponent(&self) -> T {
        self.p / (self.p - T::one())
    }
}

impl<T: Real> Default for SchurParameters<T> {
    fn default() -> Self {
        Self::with_epsilon(T::lit(DEFAULT_EPSILON)).expect("defaults are valid")
    }
}

/// Density of the measure μ_z behind the S operator:
/// (1 − |z|²)⁻¹ (1 − |v|²)⁻¹ (1 − |φ_z(v)|²)^(1−2ε)
/// = (1 − |z|²)^(−2ε) (1 − |v|²)^(−2ε) |1 − z̄v|^(−2(1−2ε)).
#[inline]
fn s_density<T: Real>(z: Complex<T>, v: Complex<T>, epsilon: T) -> T {
    let two_eps = epsilon + epsilon;
    let one = T::one();
    let d = Complex::new(one, T::zero()) - z.conj() * v;
    ((one - z.norm_sqr()) * (one - v.norm_sqr())).powf(-two_eps) * d.norm_sqr().powf(two_eps - one)
}

/// (S f)(z) for f given through its modulus. Angular nodes cluster toward
/// arg z, where the kernel peaks.
pub fn s_operator_with<T, F>(
    modulus: F,
    z: DiskPoint<T>,
    params: &SchurParameters<T>,
    rule: &QuadratureRule<T>,
) -> Result<T>
where
    T: Real,
    F: Fn(Complex<T>) -> T,
{
    let zc = z.z();
    rule.integrate_real_peaked(zc, |v| {
        let m = modulus(v);
        if m == T::zero() {
            T::zero()
        } else {
            m * s_density(zc, v, params.epsilon)
        }
    })
}

/// (S f)(z) = ∫ |f(v)| (1−|z|²)⁻¹ (1−|v|²)⁻¹ (1−|φ_z(v)|²)^(1−2ε) dλ(v).
pub fn s_operator<T: Real>(
    s: &Symbol<T>,
    z: DiskPoint<T>,
    params: &SchurParameters<T>,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    if s.is_zero() {
        return Ok(T::zero());
    }
    s_operator_with(|v| s.eval_at(v).norm(), z, params, rule)
}

/// S f(z) / (K_z(z)^ε ‖f‖_p).
pub fn lemma1_ratio<T: Real>(
    s: &Symbol<T>,
    z: DiskPoint<T>,
    params: &SchurParameters<T>,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    if s.is_zero() {
        return Err(Error::InvalidSymbol(
            "growth ratio is undefined for the zero symbol".into(),
        ));
    }
    let norm = s.lp_norm(params.p, rule)?;
    let sf = s_operator(s, z, params, rule)?;
    Ok(sf / (kernel_diagonal(z).powf(params.epsilon) * norm))
}

/// I(u) = ∫ |f(v)| |K_v(u)| K_v(v)^ε dλ(v).
pub fn kernel_weighted_integral<T: Real>(
    s: &Symbol<T>,
    u: DiskPoint<T>,
    params: &SchurParameters<T>,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    if s.is_zero() {
        return Ok(T::zero());
    }
    let uz = u.z();
    let two_eps = params.epsilon + params.epsilon;
    rule.integrate_real_peaked(uz, |v| {
        let m = s.eval_at(v).norm();
        if m == T::zero() {
            return T::zero();
        }
        m * kernel_raw(v, uz).norm() * (T::one() - v.norm_sqr()).powf(-two_eps)
    })
}

/// Both sides of I(u) = S(f ∘ φ_u)(u).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Remark1Check<T> {
    /// Direct integral I(u).
    pub lhs: T,
    /// S applied to f ∘ φ_u, evaluated at u.
    pub rhs: T,
}

impl<T: Real> Remark1Check<T> {
    pub fn relative_error(&self) -> T {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == T::zero() {
            T::zero()
        } else {
            (self.lhs - self.rhs).abs() / scale
        }
    }
}

pub fn remark1_check<T: Real>(
    s: &Symbol<T>,
    u: DiskPoint<T>,
    params: &SchurParameters<T>,
    rule: &QuadratureRule<T>,
) -> Result<Remark1Check<T>> {
    let lhs = kernel_weighted_integral(s, u, params, rule)?;
    let rhs = if s.is_zero() {
        T::zero()
    } else {
        let uz = u.z();
        s_operator_with(|x| s.eval_at(mobius_raw(uz, x)).norm(), u, params, rule)?
    };
    Ok(Remark1Check { lhs, rhs })
}

/// Both sides of P(ḡ K_z)(u) = conj(g(z)) K_z(u).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectionCheck<T> {
    /// ∫ conj(g(w)) K_z(w) K_w(u) dλ(w) by quadrature.
    pub lhs: Complex<T>,
    pub rhs: Complex<T>,
}

impl<T: Real> ProjectionCheck<T> {
    pub fn error(&self) -> T {
        (self.lhs - self.rhs).norm()
    }
}

pub fn projection_identity<T: Real>(
    g: &Symbol<T>,
    z: DiskPoint<T>,
    u: DiskPoint<T>,
    rule: &QuadratureRule<T>,
) -> Result<ProjectionCheck<T>> {
    let (zc, uc) = (z.z(), u.z());
    let lhs = rule.integrate(|w| g.eval_at(w).conj() * kernel_raw(zc, w) * kernel_raw(w, uc))?;
    let rhs = g.eval(z).conj() * kernel_raw(zc, uc);
    Ok(ProjectionCheck { lhs, rhs })
}

/// ∫ |T_f T_ḡ K_u(v)| ψ(v)² dλ(v) / ψ(u)² with ψ(v)² = K_v(v)^ε, i.e.
/// |g(u)| I_f(u) / K_u(u)^ε. With r_cut > 0 the kernel carries the
/// indicator of |u| > r_cut and the ratio vanishes inside.
pub fn schur_ratio<T: Real>(
    pair: &SymbolPair<T>,
    u: DiskPoint<T>,
    params: &SchurParameters<T>,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    if params.r_cut > T::zero() && u.modulus() <= params.r_cut {
        return Ok(T::zero());
    }
    let gu = pair.g.eval(u).norm();
    if gu == T::zero() {
        return Ok(T::zero());
    }
    let integral = kernel_weighted_integral(&pair.f, u, params, rule)?;
    Ok(gu * integral / kernel_diagonal(u).powf(params.epsilon))
}

/// The second Schur inequality: the same ratio with f and g exchanged.
pub fn schur_dual_ratio<T: Real>(
    pair: &SymbolPair<T>,
    v: DiskPoint<T>,
    params: &SchurParameters<T>,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    schur_ratio(&pair.swapped(), v, params, rule)
}

/// c₁(r) = sup_{|u|>r} ‖f∘φ_u‖₂ ‖g∘φ_u‖₂ over the schedule grid.
pub fn tail_constant<T: Real>(
    pair: &SymbolPair<T>,
    r: T,
    schedule: &RadiusSchedule<T>,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    let last = *schedule.radii().last().expect("schedules are nonempty");
    if !(r < last) {
        return Err(Error::EmptyGrid(r.to_f64_lossy()));
    }
    sarason_sup(pair, schedule, rule)?.tail_sup_sqrt(r)
}

/// c₁ at each of `radii`, from one Berezin sweep.
pub fn tail_constant_curve<T: Real>(report: &SarasonReport<T>, radii: &[T]) -> Result<Vec<(T, T)>> {
    radii
        .iter()
        .map(|&r| Ok((r, report.tail_sup_sqrt(r)?)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LueckingValue<T> {
    /// μ(D(w, δ)).
    pub mu: T,
    /// λ(D(w, δ)) = R².
    pub lambda: T,
    /// k(w) = μ/λ.
    pub k: T,
    /// k(w) (1 − |w|²)^(2ε) / K_z(z)^ε.
    pub bound_ratio: T,
}

/// Luecking averaging function of μ_z on D(w, δ).
pub fn luecking_k<T: Real>(
    w: DiskPoint<T>,
    z: DiskPoint<T>,
    params: &SchurParameters<T>,
    rule: &QuadratureRule<T>,
) -> Result<LueckingValue<T>> {
    let disk = hyperbolic_disk(w, params.delta).map_err(|e| match e {
        Error::PointTooCloseToBoundary { .. } => Error::PointTooCloseToBoundary {
            modulus: w.modulus().to_f64_lossy(),
            max_admissible: max_admissible_modulus(params.delta).to_f64_lossy(),
        },
        other => other,
    })?;
    let zc = z.z();
    let mu = rule.integrate_subdisk_real(disk.center, disk.radius, |v| {
        s_density(zc, v, params.epsilon)
    })?;
    let lambda = disk.measure();
    let k = mu / lambda;
    let two_eps = params.epsilon + params.epsilon;
    let bound_ratio =
        k * (T::one() - w.modulus_sqr()).powf(two_eps) / kernel_diagonal(z).powf(params.epsilon);
    Ok(LueckingValue {
        mu,
        lambda,
        k,
        bound_ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioPoint<T> {
    pub w: DiskPoint<T>,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurRatioReport<T> {
    /// Which ratio: "schur", "schur_dual", "lemma1" or "luecking_bound".
    pub ratio: &'static str,
    pub parameters: SchurParameters<T>,
    pub values: Vec<RatioPoint<T>>,
    pub max_ratio: T,
}

impl<T: Real> SchurRatioReport<T> {
    fn from_values(
        ratio: &'static str,
        parameters: SchurParameters<T>,
        values: Vec<RatioPoint<T>>,
    ) -> Self {
        let max_ratio = values.iter().fold(T::zero(), |m, p| m.max(p.value));
        Self {
            ratio,
            parameters,
            values,
            max_ratio,
        }
    }

    /// CSV with columns re_w, im_w, value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re_w,im_w,value\n");
        for p in &self.values {
            out.push_str(&crate::report::csv_line(&[p.w.re(), p.w.im(), p.value]));
        }
        out
    }
}

fn ratio_report<T, F>(
    ratio: &'static str,
    params: &SchurParameters<T>,
    schedule: &RadiusSchedule<T>,
    f: F,
) -> Result<SchurRatioReport<T>>
where
    T: Real,
    F: Fn(DiskPoint<T>) -> Result<T> + Sync + Send,
{
    let points = schedule.points();
    let values = map_grid(&points, |w| Ok(RatioPoint { w, value: f(w)? }))?;
    Ok(SchurRatioReport::from_values(ratio, *params, values))
}

pub fn schur_ratio_report<T: Real>(
    pair: &SymbolPair<T>,
    params: &SchurParameters<T>,
    schedule: &RadiusSchedule<T>,
    rule: &QuadratureRule<T>,
) -> Result<SchurRatioReport<T>> {
    ratio_report("schur", params, schedule, |u| {
        schur_ratio(pair, u, params, rule)
    })
}

pub fn schur_dual_report<T: Real>(
    pair: &SymbolPair<T>,
    params: &SchurParameters<T>,
    schedule: &RadiusSchedule<T>,
    rule: &QuadratureRule<T>,
) -> Result<SchurRatioReport<T>> {
    ratio_report("schur_dual", params, schedule, |v| {
        schur_dual_ratio(pair, v, params, rule)
    })
}

pub fn lemma1_report<T: Real>(
    s: &Symbol<T>,
    params: &SchurParameters<T>,
    schedule: &RadiusSchedule<T>,
    rule: &QuadratureRule<T>,
) -> Result<SchurRatioReport<T>> {
    let norm = s.lp_norm(params.p, rule)?;
    if s.is_zero() || norm == T::zero() {
        return Err(Error::InvalidSymbol(
            "growth ratio is undefined for the zero symbol".into(),
        ));
    }
    ratio_report("lemma1", params, schedule, |z| {
        Ok(s_operator(s, z, params, rule)? / (kernel_diagonal(z).powf(params.epsilon) * norm))
    })
}

/// Bound ratio of the Luecking function for fixed z over the schedule grid.
pub fn luecking_report<T: Real>(
    z: DiskPoint<T>,
    params: &SchurParameters<T>,
    schedule: &RadiusSchedule<T>,
    rule: &QuadratureRule<T>,
) -> Result<SchurRatioReport<T>> {
    ratio_report("luecking_bound", params, schedule, |w| {
        Ok(luecking_k(w, z, params, rule)?.bound_ratio)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = Symbol<f64>;
    type P = DiskPoint<f64>;

    fn params(eps: f64) -> SchurParameters<f64> {
        SchurParameters::with_epsilon(eps).unwrap()
    }

    #[test]
    fn parameter_gate() {
        assert!(SchurParameters::new(0.25, 2.0, 0.25, 0.0).is_err());
        assert!(SchurParameters::new(0.249, 2.0, 0.25, 0.0).is_ok());
        assert!(SchurParameters::new(0.0, 2.0, 0.25, 0.0).is_err());
        // p = 4: p′ = 4/3, bound 3/8
        assert!(SchurParameters::new(0.37, 4.0, 0.25, 0.0).is_ok());
        assert!(SchurParameters::new(0.38, 4.0, 0.25, 0.0).is_err());
        assert!(SchurParameters::new(0.1, 1.0, 0.25, 0.0).is_err());
        assert!(SchurParameters::new(0.1, 2.0, 0.5, 0.0).is_err());
        assert!(SchurParameters::new(0.1, 2.0, 0.0, 0.0).is_err());
        assert!(SchurParameters::new(0.1, 2.0, 0.25, 1.0).is_err());
        assert!(SchurParameters::new(0.1, 2.0, 0.25, -0.1).is_err());
        let d = SchurParameters::<f64>::default();
        assert_eq!((d.epsilon, d.p, d.delta, d.r_cut), (0.125, 2.0, 0.25, 0.0));
        assert_eq!(d.conjugate_exponent(), 2.0);
    }

    #[test]
    fn s_operator_examples() {
        let rule = default_schur_rule();
        let p = params(0.125);
        assert_eq!(
            s_operator(&S::zero(), P::real(0.3), &p, &rule).unwrap(),
            0.0
        );
        let v = s_operator(&S::one(), P::origin(), &p, &rule).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-10, "{v}");
        // self-convergence at z = 0.5
        let fine = QuadratureRule::graded(128, 512, 8).unwrap();
        let a = s_operator(&S::one(), P::real(0.5), &p, &rule).unwrap();
        let b = s_operator(&S::one(), P::real(0.5), &p, &fine).unwrap();
        assert!((a - b).abs() < 1e-4 * b);
    }

    #[test]
    fn lemma1_examples() {
        let rule = default_schur_rule();
        let p = params(0.125);
        let v = lemma1_ratio(&S::one(), P::origin(), &p, &rule).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-10);
        assert!(lemma1_ratio(&S::zero(), P::origin(), &p, &rule).is_err());
    }

    #[test]
    fn remark1_examples() {
        let rule = default_schur_rule();
        let p = params(0.125);
        let zero = remark1_check(&S::zero(), P::real(0.4), &p, &rule).unwrap();
        assert_eq!((zero.lhs, zero.rhs), (0.0, 0.0));
        let one = remark1_check(&S::one(), P::origin(), &p, &rule).unwrap();
        assert!((one.lhs - 4.0 / 3.0).abs() < 1e-10 && (one.rhs - 4.0 / 3.0).abs() < 1e-10);
        let z = remark1_check(&S::monomial(1).unwrap(), P::real(0.4), &p, &rule).unwrap();
        assert!(z.relative_error() < 1e-4, "{z:?}");
    }

    #[test]
    fn projection_examples() {
        let rule = QuadratureRule::default_rule();
        let z = P::new(0.3, -0.2).unwrap();
        let u = P::new(-0.5, 0.4).unwrap();
        let one = projection_identity(&S::one(), z, u, &rule).unwrap();
        assert!(one.error() < 1e-10);
        let zz = projection_identity(&S::monomial(1).unwrap(), P::origin(), u, &rule).unwrap();
        assert!(zz.lhs.norm() < 1e-12 && zz.rhs.norm() == 0.0);
        let z2 = projection_identity(&S::monomial(2).unwrap(), P::real(0.5), P::real(0.3), &rule)
            .unwrap();
        assert!(z2.error() < 1e-8);
    }

    #[test]
    fn schur_ratio_examples() {
        let rule = default_schur_rule();
        let p = params(0.125);
        let u = P::new(0.2, 0.6).unwrap();
        let g0 = SymbolPair::new(S::one(), S::zero());
        assert_eq!(schur_ratio(&g0, u, &p, &rule).unwrap(), 0.0);
        assert_eq!(
            schur_dual_ratio(&SymbolPair::new(S::zero(), S::one()), u, &p, &rule).unwrap(),
            0.0
        );
        let ones = SymbolPair::new(S::one(), S::one());
        let v = schur_ratio(&ones, P::origin(), &p, &rule).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-10);
        let d = schur_dual_ratio(&ones, P::origin(), &p, &rule).unwrap();
        assert!((d - 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn dual_ratio_is_the_swapped_ratio() {
        let rule = QuadratureRule::graded(24, 64, 8).unwrap();
        let p = params(0.1);
        let pair = SymbolPair::new(
            S::monomial(2).unwrap(),
            S::kernel(P::new(0.1, 0.3).unwrap()),
        );
        for u in [P::real(0.2), P::new(-0.4, 0.5).unwrap()] {
            let a = schur_dual_ratio(&pair, u, &p, &rule).unwrap();
            let b = schur_ratio(&pair.swapped(), u, &p, &rule).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn tail_mode_vanishes_inside_cut() {
        let rule = QuadratureRule::graded(24, 64, 8).unwrap();
        let p = params(0.125).with_r_cut(0.5).unwrap();
        let ones = SymbolPair::new(S::one(), S::one());
        assert_eq!(schur_ratio(&ones, P::real(0.4), &p, &rule).unwrap(), 0.0);
        assert!(schur_ratio(&ones, P::real(0.6), &p, &rule).unwrap() > 0.0);
    }

    #[test]
    fn tail_constant_examples() {
        let rule = QuadratureRule::new(32, 64).unwrap();
        let schedule = RadiusSchedule::dyadic(6, 8).unwrap();
        let ones = SymbolPair::new(S::one(), S::one());
        for r in [0.0, 0.6, 0.9] {
            assert!((tail_constant(&ones, r, &schedule, &rule).unwrap() - 1.0).abs() < 1e-13);
        }
        let zero = SymbolPair::new(S::monomial(1).unwrap(), S::zero());
        assert_eq!(tail_constant(&zero, 0.5, &schedule, &rule).unwrap(), 0.0);
        assert!(matches!(
            tail_constant(&ones, 0.99, &schedule, &rule),
            Err(Error::EmptyGrid(_))
        ));
    }

    #[test]
    fn tail_constant_for_shift_pair_does_not_decay() {
        let rule = QuadratureRule::default_rule();
        let schedule = RadiusSchedule::<f64>::default();
        let z = S::monomial(1).unwrap();
        let report = sarason_sup(&SymbolPair::new(z.clone(), z), &schedule, &rule).unwrap();
        let radii: Vec<f64> = schedule.radii()[..11].to_vec();
        let curve = tail_constant_curve(&report, &radii).unwrap();
        assert!(curve.windows(2).all(|p| p[1].1 <= p[0].1));
        assert!(curve.last().unwrap().1 > 0.999);
    }

    #[test]
    fn luecking_at_origin_matches_closed_form() {
        // μ(D(0)) = ∫_{|v|<s} (1 − |v|²)^(−2ε) dλ = (1 − (1 − s²)^(1−2ε))/(1 − 2ε)
        let rule = QuadratureRule::new(32, 32).unwrap();
        let p = params(0.125);
        let value = luecking_k(P::origin(), P::origin(), &p, &rule).unwrap();
        let s = 0.25f64.tanh();
        let mu = (1.0 - (1.0 - s * s).powf(0.75)) / 0.75;
        assert!((value.mu - mu).abs() < 1e-14);
        assert!((value.k - mu / (s * s)).abs() < 1e-13);
        assert!((value.bound_ratio - value.k).abs() < 1e-15);
    }

    #[test]
    fn luecking_shrinking_disk_limit() {
        let rule = QuadratureRule::new(16, 32).unwrap();
        let z = P::new(0.3, 0.1).unwrap();
        let w = P::new(-0.2, 0.5).unwrap();
        let eps = 0.125;
        let density = s_density(z.z(), w.z(), eps);
        let mut errors = Vec::new();
        for delta in [0.1, 0.05, 0.025] {
            let p = SchurParameters::new(eps, 2.0, delta, 0.0).unwrap();
            let k = luecking_k(w, z, &p, &rule).unwrap().k;
            errors.push((k - density).abs() / density);
        }
        assert!(errors.windows(2).all(|e| e[1] < e[0]), "{errors:?}");
        assert!(errors[2] < 1e-3);
    }

    #[test]
    fn luecking_rejects_boundary_points() {
        let rule = QuadratureRule::new(8, 8).unwrap();
        let p = SchurParameters::new(0.125, 2.0, 0.45, 0.0).unwrap();
        let w = P::real(1.0 - 2e-14);
        match luecking_k(w, P::origin(), &p, &rule) {
            Err(Error::PointTooCloseToBoundary { max_admissible, .. }) => {
                assert!(max_admissible < 1.0 - 2e-14)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_take_the_max() {
        let rule = QuadratureRule::graded(16, 32, 8).unwrap();
        let schedule = RadiusSchedule::new(vec![0.2, 0.5], 4).unwrap();
        let r = lemma1_report(&S::one(), &params(0.125), &schedule, &rule).unwrap();
        assert_eq!(r.values.len(), 8);
        let max = r.values.iter().map(|p| p.value).fold(0.0, f64::max);
        assert_eq!(r.max_ratio, max);
        assert!(r.to_csv().starts_with("re_w,im_w,value\n"));
        assert!(lemma1_report(&S::zero(), &params(0.125), &schedule, &rule).is_err());
    }
}
