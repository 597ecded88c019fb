//! Compressions of T_f, T_ḡ and T_f T_ḡ to span{e_0, …, e_{N−1}},
//! e_n(z) = √(n+1) zⁿ, together with the kernel-action identity and the
//! Hilbert–Schmidt norm of the cut-off operator S_r.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::berezin::berezin_mod_squared;
use crate::error::{Error, Result};
use crate::geometry::{bergman_kernel, kernel_diagonal, DiskPoint};
use crate::operator::TruncatedOperator;
use crate::quadrature::{gauss_legendre_unit, QuadratureRule};
use crate::scalar::{CompensatedComplexSum, CompensatedSum, Real};
use crate::symbols::{Symbol, SymbolPair};

/// Closed-form matrix of T_f for a polynomial f = Σ a_k z^k:
/// entry (n, m) = a_{n−m} √((m+1)/(n+1)) for 0 ≤ n − m ≤ deg f.
pub fn toeplitz_matrix<T: Real>(s: &Symbol<T>, dimension: usize) -> Result<TruncatedOperator<T>> {
    let Symbol::Polynomial(coeffs) = s else {
        return Err(Error::InvalidSymbol(
            "closed-form Toeplitz matrices need a polynomial symbol".into(),
        ));
    };
    let degree = coeffs.len() - 1;
    if degree >= dimension {
        return Err(Error::InvalidParameter {
            name: "dimension",
            value: dimension as f64,
            reason: "truncation must exceed the polynomial degree",
        });
    }
    Ok(TruncatedOperator::from_fn(dimension, |n, m| {
        if n < m || n - m > degree {
            return Complex::new(T::zero(), T::zero());
        }
        let ratio = T::from_usize_lossy(m + 1) / T::from_usize_lossy(n + 1);
        coeffs[n - m] * ratio.sqrt()
    }))
}

/// Matrix of the compression of multiplication by `f`:
/// entry (n, m) = ∫ f e_m ē_n dλ.
pub fn quadrature_matrix_with<T, F>(
    f: F,
    dimension: usize,
    rule: &QuadratureRule<T>,
) -> Result<TruncatedOperator<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
{
    let nodes: Vec<(Complex<T>, T)> = rule.nodes().collect();
    let mut weighted = Vec::with_capacity(nodes.len());
    for &(z, w) in &nodes {
        let v = f(z);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite {
                re: z.re.to_f64_lossy(),
                im: z.im.to_f64_lossy(),
            });
        }
        weighted.push(v * w);
    }
    // powers[q * N + k] = e_k(z_q)
    let mut powers = Vec::with_capacity(nodes.len() * dimension);
    for &(z, _) in &nodes {
        let mut p = Complex::new(T::one(), T::zero());
        for k in 0..dimension {
            powers.push(p * T::from_usize_lossy(k + 1).sqrt());
            p = p * z;
        }
    }
    let rows: Vec<Vec<Complex<T>>> = (0..dimension)
        .into_par_iter()
        .map(|n| {
            (0..dimension)
                .map(|m| {
                    let mut acc = CompensatedComplexSum::new();
                    for (q, &fw) in weighted.iter().enumerate() {
                        let base = q * dimension;
                        acc.add(fw * powers[base + m] * powers[base + n].conj());
                    }
                    acc.value()
                })
                .collect()
        })
        .collect();
    TruncatedOperator::from_rows(dimension, rows.into_iter().flatten().collect())
}

/// Quadrature matrix of T_f for any symbol variant.
pub fn quadrature_matrix<T: Real>(
    s: &Symbol<T>,
    dimension: usize,
    rule: &QuadratureRule<T>,
) -> Result<TruncatedOperator<T>> {
    quadrature_matrix_with(|z| s.eval_at(z), dimension, rule)
}

/// Matrix of T_f from the Taylor coefficients of f:
/// entry (n, m) = a_{n−m} √((m+1)/(n+1)) for n ≥ m.
pub fn series_matrix<T: Real>(s: &Symbol<T>, dimension: usize) -> TruncatedOperator<T> {
    let coeffs = s.taylor_coefficients(dimension);
    TruncatedOperator::from_fn(dimension, |n, m| {
        if n < m {
            return Complex::new(T::zero(), T::zero());
        }
        let ratio = T::from_usize_lossy(m + 1) / T::from_usize_lossy(n + 1);
        coeffs[n - m] * ratio.sqrt()
    })
}

/// T_f for an analytic symbol, exact for every variant.
pub fn analytic_matrix<T: Real>(s: &Symbol<T>, dimension: usize) -> Result<TruncatedOperator<T>> {
    if dimension == 0 {
        return Err(Error::InvalidParameter {
            name: "dimension",
            value: 0.0,
            reason: "truncation must be positive",
        });
    }
    Ok(series_matrix(s, dimension))
}

/// T_ḡ, the adjoint of the compression of T_g.
pub fn coanalytic_matrix<T: Real>(s: &Symbol<T>, dimension: usize) -> Result<TruncatedOperator<T>> {
    Ok(analytic_matrix(s, dimension)?.adjoint())
}

/// (T_f)_N (T_ḡ)_N.
pub fn product_matrix<T: Real>(
    pair: &SymbolPair<T>,
    dimension: usize,
) -> Result<TruncatedOperator<T>> {
    analytic_matrix(&pair.f, dimension)?.product(&coanalytic_matrix(&pair.g, dimension)?)
}

/// Coefficients of K_z in the basis e_n: c_n = z̄ⁿ √(n+1), n < N.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelVector<T> {
    pub point: DiskPoint<T>,
    pub coefficients: Vec<Complex<T>>,
    /// Omitted mass Σ_{n≥N} (n+1)|z|^{2n} relative to ‖K_z‖² = K_z(z).
    pub relative_tail: T,
}

impl<T: Real> KernelVector<T> {
    pub fn new(point: DiskPoint<T>, dimension: usize) -> Self {
        let zc = point.z().conj();
        let mut p = Complex::new(T::one(), T::zero());
        let mut coefficients = Vec::with_capacity(dimension);
        for n in 0..dimension {
            coefficients.push(p * T::from_usize_lossy(n + 1).sqrt());
            p = p * zc;
        }
        // Σ_{n≥N} (n+1)ρⁿ = ρ^N (N + 1 − Nρ)/(1 − ρ)²
        let rho = point.modulus_sqr();
        let nf = T::from_usize_lossy(dimension);
        let relative_tail = rho.powi(dimension as i32) * (nf + T::one() - nf * rho);
        Self {
            point,
            coefficients,
            relative_tail,
        }
    }

    /// Like [`KernelVector::new`] but rejects truncations whose omitted
    /// mass exceeds `tol` relative to K_z(z).
    pub fn new_checked(point: DiskPoint<T>, dimension: usize, tol: T) -> Result<Self> {
        let v = Self::new(point, dimension);
        if v.relative_tail > tol {
            return Err(Error::InvalidParameter {
                name: "dimension",
                value: dimension as f64,
                reason: "kernel truncation tail exceeds the tolerance",
            });
        }
        Ok(v)
    }

    pub fn norm_sqr(&self) -> T {
        self.coefficients
            .iter()
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }
}

/// Σ c_n e_n(w).
pub fn synthesize<T: Real>(coefficients: &[Complex<T>], w: Complex<T>) -> Complex<T> {
    let mut acc = CompensatedComplexSum::new();
    let mut p = Complex::new(T::one(), T::zero());
    for (n, &c) in coefficients.iter().enumerate() {
        acc.add(c * p * T::from_usize_lossy(n + 1).sqrt());
        p = p * w;
    }
    acc.value()
}

/// Both sides of (T_f T_ḡ K_z)(w) = f(w) conj(g(z)) K_z(w).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelAction<T> {
    /// Truncated product applied to the truncated kernel, evaluated at w.
    pub lhs: Complex<T>,
    /// Closed form.
    pub rhs: Complex<T>,
}

impl<T: Real> KernelAction<T> {
    pub fn error(&self) -> T {
        (self.lhs - self.rhs).norm()
    }
}

pub fn kernel_action<T: Real>(
    pair: &SymbolPair<T>,
    z: DiskPoint<T>,
    w: DiskPoint<T>,
    dimension: usize,
) -> Result<KernelAction<T>> {
    let product = product_matrix(pair, dimension)?;
    kernel_action_from(&product, pair, z, w)
}

fn kernel_action_from<T: Real>(
    product: &TruncatedOperator<T>,
    pair: &SymbolPair<T>,
    z: DiskPoint<T>,
    w: DiskPoint<T>,
) -> Result<KernelAction<T>> {
    let kz = KernelVector::new(z, product.dimension());
    let image = product.apply(&kz.coefficients)?;
    let lhs = synthesize(&image, w.z());
    let rhs = pair.f.eval(w) * pair.g.eval(z).conj() * bergman_kernel(z, w);
    Ok(KernelAction { lhs, rhs })
}

/// Squared Hilbert–Schmidt norm of S_r, the integral operator with kernel
/// χ_{|u|≤r}(u) (T_f T_ḡ K_u)(v) = χ f(v) conj(g(u)) K_u(v). Integrating
/// out v with ∫ |f|² |K_u|² dλ = K_u(u) |f|²~(u) leaves
/// ∫_{|u|≤r} |g(u)|² K_u(u) |f|²~(u) dλ(u). The rule's node counts set the
/// outer grid; the rule itself computes each inner Berezin transform.
pub fn hs_tail_norm_squared<T: Real>(
    pair: &SymbolPair<T>,
    r: T,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    if !(r >= T::zero()) || !(r < T::one() - T::lit(1e-6)) {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r.to_f64_lossy(),
            reason: "cut-off radius must lie in [0, 1 - 1e-6)",
        });
    }
    if r == T::zero() || pair.g.is_zero() || pair.f.is_zero() {
        return Ok(T::zero());
    }
    // Outer integral in s = −ln(1 − |u|²) ∈ [0, L], which turns the
    // (1 − |u|²)^(−2) growth of K_u(u) near |u| = r into a smooth e^s.
    let (sigma, omega) = gauss_legendre_unit::<T>(rule.radial_nodes().len());
    let span = -(-r * r).ln_1p();
    let m = rule.angular_count();
    let inv_m = T::from_usize_lossy(m).recip();
    let mut nodes: Vec<(Complex<T>, T)> = Vec::with_capacity(sigma.len() * m);
    for (&sg, &om) in sigma.iter().zip(&omega) {
        let decay = (-(span * sg)).exp();
        let radius = (T::one() - decay).sqrt();
        let weight = span * om * decay * inv_m;
        for j in 0..m {
            let theta = T::TAU() * T::from_usize_lossy(j) * inv_m;
            nodes.push((Complex::from_polar(radius, theta), weight));
        }
    }
    let values: Vec<Result<T>> = nodes
        .par_iter()
        .map(|&(u, _)| {
            let gu = pair.g.eval_at(u).norm_sqr();
            if gu == T::zero() {
                return Ok(T::zero());
            }
            let point = DiskPoint::from_complex(u)?;
            Ok(gu * kernel_diagonal(point) * berezin_mod_squared(&pair.f, point, rule)?)
        })
        .collect();
    let mut acc = CompensatedSum::new();
    for (v, &(u, w)) in values.into_iter().zip(&nodes) {
        let v = v.map_err(|e| e.at_point(u.re.to_f64_lossy(), u.im.to_f64_lossy()))?;
        acc.add(v * w);
    }
    Ok(acc.value())
}

/// Hilbert–Schmidt norm of S_r.
pub fn hs_tail_norm<T: Real>(pair: &SymbolPair<T>, r: T, rule: &QuadratureRule<T>) -> Result<T> {
    hs_tail_norm_squared(pair, r, rule).map(|v| v.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = Symbol<f64>;
    type P = DiskPoint<f64>;
    type M = TruncatedOperator<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn poly(c: &[(f64, f64)]) -> S {
        S::polynomial(c.iter().map(|&(a, b)| Complex::new(a, b)).collect()).unwrap()
    }

    #[test]
    fn constant_symbol_gives_identity() {
        let m = toeplitz_matrix(&S::one(), 6).unwrap();
        assert_eq!(m, M::identity(6));
        let q = quadrature_matrix(&S::one(), 6, &QuadratureRule::default_rule()).unwrap();
        assert!(q.max_abs_diff(&M::identity(6)).unwrap() < 1e-13);
    }

    #[test]
    fn shift_matrices_match_quadrature_oracle() {
        let rule = QuadratureRule::new(16, 64).unwrap();
        let z = S::monomial(1).unwrap();
        let m = toeplitz_matrix(&z, 3).unwrap();
        assert!((m.get(1, 0) - c(0.5f64.sqrt(), 0.0)).norm() < 1e-16);
        assert!((m.get(2, 1) - c((2.0f64 / 3.0).sqrt(), 0.0)).norm() < 1e-16);
        assert!(
            m.max_abs_diff(&quadrature_matrix(&z, 3, &rule).unwrap())
                .unwrap()
                < 1e-12
        );

        let z2 = S::monomial(2).unwrap();
        // at N = 4 the second subdiagonal holds two entries; N = 5 adds √(3/5)
        let expect = [1.0f64 / 3.0, 2.0 / 4.0, 3.0 / 5.0];
        for n in [4usize, 5] {
            let m = toeplitz_matrix(&z2, n).unwrap();
            for (k, e) in expect.iter().take(n - 2).enumerate() {
                assert!((m.get(k + 2, k) - c(e.sqrt(), 0.0)).norm() < 1e-16);
            }
            assert!(
                m.max_abs_diff(&quadrature_matrix(&z2, n, &rule).unwrap())
                    .unwrap()
                    < 1e-12
            );
        }
    }

    #[test]
    fn band_structure_is_exact() {
        let p = poly(&[(0.0, 0.0), (1.0, 2.0), (0.5, 0.0), (0.0, -1.0)]);
        let m = toeplitz_matrix(&p, 10).unwrap();
        for n in 0..10 {
            for k in 0..10 {
                let inside = n >= k && n - k <= 3;
                if !inside || n == k {
                    assert_eq!(m.get(n, k), c(0.0, 0.0), "({n},{k})");
                }
            }
        }
    }

    #[test]
    fn closed_form_rejects_bad_inputs() {
        let a = P::new(0.3, 0.0).unwrap();
        assert!(toeplitz_matrix(&S::kernel(a), 4).is_err());
        assert!(toeplitz_matrix(&S::monomial(4).unwrap(), 4).is_err());
    }

    #[test]
    fn kernel_symbol_matrix_matches_series() {
        // K_a(z) = Σ (k+1) ā^k z^k
        let a = P::new(0.4, 0.0).unwrap();
        let q = quadrature_matrix(&S::kernel(a), 8, &QuadratureRule::default_rule()).unwrap();
        let abar = a.z().conj();
        let expect = M::from_fn(8, |n, m| {
            if n < m {
                return c(0.0, 0.0);
            }
            let k = n - m;
            abar.powu(k as u32) * ((k + 1) as f64) * ((m + 1) as f64 / (n + 1) as f64).sqrt()
        });
        assert!(q.max_abs_diff(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn adjoint_matches_conjugate_symbol() {
        let rule = QuadratureRule::default_rule();
        let g = poly(&[(0.2, -0.3), (1.0, 0.5), (0.0, 0.0), (-0.4, 0.1)]);
        let conj = quadrature_matrix_with(|z| g.eval_at(z).conj(), 12, &rule).unwrap();
        let closed = toeplitz_matrix(&g, 12).unwrap().adjoint();
        assert!(conj.max_abs_diff(&closed).unwrap() < 1e-12);
    }

    #[test]
    fn product_examples() {
        let z = S::monomial(1).unwrap();
        let tz = toeplitz_matrix(&z, 8).unwrap();
        assert_eq!(M::identity(8).product(&tz).unwrap(), tz);
        let a = tz.product(&tz.adjoint()).unwrap();
        let b = tz.adjoint().product(&tz).unwrap();
        let diff = M::from_fn(8, |r, col| a.get(r, col) - b.get(r, col));
        assert!(diff.operator_norm(1e-10).unwrap() > 0.1);

        let pair = SymbolPair::new(z.clone(), z);
        let norms: Vec<f64> = [8, 16, 32]
            .iter()
            .map(|&n| {
                product_matrix(&pair, n)
                    .unwrap()
                    .operator_norm(1e-10)
                    .unwrap()
            })
            .collect();
        assert!(norms.windows(2).all(|p| p[1] > p[0]), "{norms:?}");
        assert!(norms.iter().all(|&v| v <= 1.0));
    }

    #[test]
    fn shift_norm_closed_form() {
        for &n in &[8usize, 16, 32, 64] {
            let tz = toeplitz_matrix(&S::monomial(1).unwrap(), n).unwrap();
            let expect = ((n - 1) as f64 / n as f64).sqrt();
            assert!((tz.operator_norm(1e-10).unwrap() - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn kernel_vector_norm_and_tail() {
        let z = P::new(0.3, -0.4).unwrap();
        let v = KernelVector::new(z, 40);
        let full = kernel_diagonal(z);
        assert!(((full - v.norm_sqr()) / full - v.relative_tail).abs() < 1e-14);
        assert!(KernelVector::new_checked(z, 10, 1e-8).is_err());
        assert!(KernelVector::new_checked(z, 40, 1e-8).is_ok());
    }

    #[test]
    fn kernel_action_examples() {
        let z = P::new(0.2, 0.5).unwrap();
        let w = P::new(-0.3, 0.1).unwrap();
        let ones = SymbolPair::new(S::one(), S::one());
        let act = kernel_action(&ones, z, w, 48).unwrap();
        assert!((act.rhs - bergman_kernel(z, w)).norm() < 1e-15);
        assert!(act.error() < 1e-12);

        let pair = SymbolPair::new(S::monomial(1).unwrap(), S::one());
        let act = kernel_action(&pair, P::origin(), w, 8).unwrap();
        assert!((act.lhs - w.z()).norm() < 1e-15);
        assert!((act.rhs - w.z()).norm() < 1e-15);

        let zz = SymbolPair::new(S::monomial(1).unwrap(), S::monomial(1).unwrap());
        let act = kernel_action(&zz, P::real(0.5), P::real(0.3), 64).unwrap();
        assert!(act.error() < 1e-10);
    }

    #[test]
    fn kernel_action_for_kernel_symbol() {
        let pair = SymbolPair::new(
            S::kernel(P::new(0.3, 0.2).unwrap()),
            S::monomial(2).unwrap(),
        );
        let act = kernel_action(&pair, P::real(0.4), P::new(0.0, -0.5).unwrap(), 48).unwrap();
        assert!(act.error() < 1e-9 * act.rhs.norm(), "{:?}", act);
    }

    #[test]
    fn series_matrix_matches_quadrature() {
        let rule = QuadratureRule::default_rule();
        let k = S::kernel(P::new(0.3, -0.5).unwrap());
        let a = quadrature_matrix(&k, 16, &rule).unwrap();
        assert!(a.max_abs_diff(&series_matrix(&k, 16)).unwrap() < 1e-11);
        let b = S::binomial(Complex::new(0.0, 1.0), 0.5).unwrap();
        let fine = QuadratureRule::graded(128, 1024, 4).unwrap();
        let q = quadrature_matrix(&b, 8, &fine).unwrap();
        assert!(q.max_abs_diff(&series_matrix(&b, 8)).unwrap() < 1e-3);
        let p = poly(&[(0.5, 0.0), (0.0, 2.0), (1.0, 1.0)]);
        assert_eq!(series_matrix(&p, 6), toeplitz_matrix(&p, 6).unwrap());
        assert!(analytic_matrix(&p, 0).is_err());
    }

    #[test]
    fn hs_norm_of_constants() {
        // ∫_{|u|≤r} (1 − |u|²)⁻² dλ = r²/(1 − r²)
        let rule = QuadratureRule::new(32, 16).unwrap();
        let ones = SymbolPair::new(S::one(), S::one());
        for &r in &[0.3, 0.5, 0.7, 0.9, 0.99, 1.0 - 2f64.powi(-12)] {
            let got = hs_tail_norm_squared(&ones, r, &rule).unwrap();
            let expect = r * r / (1.0 - r * r);
            assert!(
                (got - expect).abs() < 1e-8 * expect,
                "r={r}: {got} vs {expect}"
            );
        }
        let zero = SymbolPair::new(S::one(), S::zero());
        assert_eq!(hs_tail_norm(&zero, 0.5, &rule).unwrap(), 0.0);
        assert!(hs_tail_norm(&ones, 1.0, &rule).is_err());
    }

    #[test]
    fn hs_norm_grows_for_shift_pair() {
        let rule = QuadratureRule::new(24, 48).unwrap();
        let z = S::monomial(1).unwrap();
        let pair = SymbolPair::new(z.clone(), z);
        let values: Vec<f64> = [0.3, 0.6, 0.9, 0.99]
            .iter()
            .map(|&r| hs_tail_norm(&pair, r, &rule).unwrap())
            .collect();
        assert!(values.windows(2).all(|p| p[1] > p[0]), "{values:?}");
        assert!(values[3] > 3.0 * values[2]);
    }
}
