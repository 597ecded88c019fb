//! Analytic symbols f, g of the Bergman space: polynomials, finite
//! combinations of reproducing kernels, and binomial powers (1 − η̄z)^(−β).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{kernel_raw, mobius, DiskPoint};
use crate::quadrature::QuadratureRule;
use crate::scalar::{cplx, Real};

/// Largest admitted polynomial degree.
pub const MAX_DEGREE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTerm<T> {
    pub weight: Complex<T>,
    pub pole: DiskPoint<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Symbol<T> {
    /// Σ a_k z^k with trailing zeros trimmed; the zero polynomial is `[0]`.
    Polynomial(Vec<Complex<T>>),
    /// Σ c_j K_{a_j}.
    KernelCombo(Vec<KernelTerm<T>>),
    /// (1 − η̄z)^(−β) on the principal branch, |η| = 1, β < 1.
    BinomialPower { eta: Complex<T>, beta: T },
}

impl<T: Real> Symbol<T> {
    pub fn polynomial(coeffs: Vec<Complex<T>>) -> Result<Self> {
        let mut coeffs = coeffs;
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidSymbol(
                "non-finite polynomial coefficient".into(),
            ));
        }
        while coeffs.len() > 1
            && coeffs
                .last()
                .is_some_and(|c| c.re == T::zero() && c.im == T::zero())
        {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::new(T::zero(), T::zero()));
        }
        if coeffs.len() - 1 > MAX_DEGREE {
            return Err(Error::InvalidSymbol(format!(
                "polynomial degree {} exceeds the cap {MAX_DEGREE}",
                coeffs.len() - 1
            )));
        }
        Ok(Symbol::Polynomial(coeffs))
    }

    /// Polynomial from real coefficients.
    pub fn real_polynomial(coeffs: &[T]) -> Result<Self> {
        Self::polynomial(coeffs.iter().map(|&a| cplx(a, T::zero())).collect())
    }

    pub fn zero() -> Self {
        Symbol::Polynomial(vec![Complex::new(T::zero(), T::zero())])
    }

    pub fn one() -> Self {
        Symbol::Polynomial(vec![Complex::new(T::one(), T::zero())])
    }

    /// z^k.
    pub fn monomial(k: usize) -> Result<Self> {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); k + 1];
        coeffs[k] = Complex::new(T::one(), T::zero());
        Self::polynomial(coeffs)
    }

    pub fn kernel_combo(terms: Vec<KernelTerm<T>>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidSymbol(
                "kernel combination needs at least one term".into(),
            ));
        }
        if terms
            .iter()
            .any(|t| !t.weight.re.is_finite() || !t.weight.im.is_finite())
        {
            return Err(Error::InvalidSymbol("non-finite kernel weight".into()));
        }
        Ok(Symbol::KernelCombo(terms))
    }

    /// The single reproducing kernel K_a.
    pub fn kernel(pole: DiskPoint<T>) -> Self {
        Symbol::KernelCombo(vec![KernelTerm {
            weight: Complex::new(T::one(), T::zero()),
            pole,
        }])
    }

    pub fn binomial(eta: Complex<T>, beta: T) -> Result<Self> {
        let eta = unimodular(eta)?;
        if !beta.is_finite() || !(beta < T::one()) {
            return Err(Error::InvalidSymbol(format!(
                "binomial exponent {beta} must be finite and below 1 for square integrability"
            )));
        }
        Ok(Symbol::BinomialPower { eta, beta })
    }

    /// Taylor polynomial of (1 − η̄z)^(−β) up to `degree`:
    /// coefficients (β)_k / k! · η̄^k.
    pub fn binomial_taylor(eta: Complex<T>, beta: T, degree: usize) -> Result<Self> {
        let eta = unimodular(eta)?;
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut a = T::one();
        let mut rot = Complex::new(T::one(), T::zero());
        for k in 0..=degree {
            coeffs.push(rot * a);
            let kf = T::from_usize_lossy(k);
            a = a * (beta + kf) / (kf + T::one());
            rot = rot * eta.conj();
        }
        Self::polynomial(coeffs)
    }

    /// First `count` Taylor coefficients at the origin.
    pub fn taylor_coefficients(&self, count: usize) -> Vec<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        match self {
            Symbol::Polynomial(c) => (0..count)
                .map(|k| c.get(k).copied().unwrap_or(zero))
                .collect(),
            Symbol::KernelCombo(terms) => (0..count)
                .map(|k| {
                    let kf = T::from_usize_lossy(k + 1);
                    terms.iter().fold(zero, |acc, t| {
                        acc + t.weight * t.pole.z().conj().powu(k as u32) * kf
                    })
                })
                .collect(),
            Symbol::BinomialPower { eta, beta } => {
                let mut out = Vec::with_capacity(count);
                let mut a = T::one();
                let mut rot = Complex::new(T::one(), T::zero());
                for k in 0..count {
                    out.push(rot * a);
                    let kf = T::from_usize_lossy(k);
                    a = a * (*beta + kf) / (kf + T::one());
                    rot = rot * eta.conj();
                }
                out
            }
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            Symbol::Polynomial(c) => Some(c.len() - 1),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Symbol::Polynomial(c) => c.len() == 1 && c[0].re == T::zero() && c[0].im == T::zero(),
            Symbol::KernelCombo(terms) => terms
                .iter()
                .all(|t| t.weight.re == T::zero() && t.weight.im == T::zero()),
            Symbol::BinomialPower { .. } => false,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Symbol::Polynomial(c) => c.len() == 1 && c[0].re == T::one() && c[0].im == T::zero(),
            Symbol::BinomialPower { beta, .. } => *beta == T::zero(),
            Symbol::KernelCombo(_) => false,
        }
    }

    pub fn eval(&self, z: DiskPoint<T>) -> Complex<T> {
        self.eval_at(z.z())
    }

    /// Evaluation at a raw complex argument, which the caller guarantees to
    /// lie in the open disk (quadrature nodes, Möbius images).
    pub fn eval_at(&self, z: Complex<T>) -> Complex<T> {
        match self {
            Symbol::Polynomial(coeffs) => coeffs
                .iter()
                .rev()
                .fold(Complex::new(T::zero(), T::zero()), |acc, &a| acc * z + a),
            Symbol::KernelCombo(terms) => terms
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, t| {
                    acc + t.weight * kernel_raw(t.pole.z(), z)
                }),
            Symbol::BinomialPower { eta, beta } => {
                if *beta == T::zero() {
                    return Complex::new(T::one(), T::zero());
                }
                let base = Complex::new(T::one(), T::zero()) - eta.conj() * z;
                (base.ln() * (-*beta)).exp()
            }
        }
    }

    /// f(φ_w(z)).
    pub fn compose_with_mobius(&self, w: DiskPoint<T>, z: DiskPoint<T>) -> Complex<T> {
        self.eval_at(mobius(w, z))
    }

    /// ‖f‖₂ in L²(dλ). Closed form Σ|a_k|²/(k + 1) for polynomials,
    /// quadrature otherwise.
    pub fn l2_norm(&self, rule: &QuadratureRule<T>) -> Result<T> {
        match self {
            Symbol::Polynomial(coeffs) => Ok(polynomial_norm_sqr(coeffs).sqrt()),
            _ => rule
                .integrate_real(|z| self.eval_at(z).norm_sqr())
                .map(|v| v.sqrt()),
        }
    }

    /// ‖f‖_p in L^p(dλ).
    pub fn lp_norm(&self, p: T, rule: &QuadratureRule<T>) -> Result<T> {
        if p == T::lit(2.0) {
            return self.l2_norm(rule);
        }
        rule.integrate_real(|z| self.eval_at(z).norm().powf(p))
            .map(|v| v.powf(p.recip()))
    }

    pub fn to_spec(&self) -> SymbolSpec {
        let pair = |z: Complex<T>| [z.re.to_f64_lossy(), z.im.to_f64_lossy()];
        match self {
            Symbol::Polynomial(c) => SymbolSpec::Poly {
                coeffs: c.iter().map(|&a| pair(a)).collect(),
            },
            Symbol::KernelCombo(terms) => SymbolSpec::KernelCombo {
                terms: terms
                    .iter()
                    .map(|t| KernelTermSpec {
                        w: pair(t.weight),
                        a: pair(t.pole.z()),
                    })
                    .collect(),
            },
            Symbol::BinomialPower { eta, beta } => SymbolSpec::Binomial {
                eta: pair(*eta),
                beta: beta.to_f64_lossy(),
            },
        }
    }

    pub fn from_spec(spec: &SymbolSpec) -> Result<Self> {
        let c = |p: &[f64; 2]| cplx(T::lit(p[0]), T::lit(p[1]));
        match spec {
            SymbolSpec::Poly { coeffs } => Self::polynomial(coeffs.iter().map(c).collect()),
            SymbolSpec::KernelCombo { terms } => {
                let terms = terms
                    .iter()
                    .map(|t| {
                        Ok(KernelTerm {
                            weight: c(&t.w),
                            pole: DiskPoint::new(T::lit(t.a[0]), T::lit(t.a[1]))?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::kernel_combo(terms)
            }
            SymbolSpec::Binomial { eta, beta } => Self::binomial(c(eta), T::lit(*beta)),
        }
    }
}

fn unimodular<T: Real>(eta: Complex<T>) -> Result<Complex<T>> {
    let m = eta.norm();
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(8.0));
    if !m.is_finite() || (m - T::one()).abs() > tol {
        return Err(Error::InvalidSymbol(format!(
            "pole direction must be unimodular, |eta| = {m}"
        )));
    }
    Ok(eta / m)
}

fn polynomial_norm_sqr<T: Real>(coeffs: &[Complex<T>]) -> T {
    coeffs.iter().enumerate().fold(T::zero(), |acc, (k, a)| {
        acc + a.norm_sqr() / T::from_usize_lossy(k + 1)
    })
}

/// The pair (f, g) of the product T_f T_ḡ.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPair<T> {
    pub f: Symbol<T>,
    pub g: Symbol<T>,
}

impl<T: Real> SymbolPair<T> {
    pub fn new(f: Symbol<T>, g: Symbol<T>) -> Self {
        Self { f, g }
    }

    /// (g, f): the pair of the adjoint product T_g T_f̄.
    pub fn swapped(&self) -> Self {
        Self {
            f: self.g.clone(),
            g: self.f.clone(),
        }
    }
}

/// JSON form of a symbol, as read from scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    Poly { coeffs: Vec<[f64; 2]> },
    KernelCombo { terms: Vec<KernelTermSpec> },
    Binomial { eta: [f64; 2], beta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelTermSpec {
    /// weight
    pub w: [f64; 2],
    /// pole
    pub a: [f64; 2],
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type S = Symbol<f64>;
    type P = DiskPoint<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn evaluation_examples() {
        let z = S::real_polynomial(&[0.0, 1.0]).unwrap();
        assert!((z.eval(P::real(0.3)) - c(0.3, 0.0)).norm() < 1e-16);

        let a = P::new(0.2, -0.5).unwrap();
        let w = P::new(-0.4, 0.1).unwrap();
        let k = S::kernel(a).eval(w);
        let d = c(1.0, 0.0) - a.z().conj() * w.z();
        assert!((k - (d * d).inv()).norm() < 1e-15);

        let b = S::binomial(c(1.0, 0.0), 0.5).unwrap();
        assert!((b.eval(P::origin()) - c(1.0, 0.0)).norm() < 1e-16);
        // (1 − 0.75)^(−1/2) = 2
        assert!((b.eval(P::real(0.75)) - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn binomial_uses_principal_branch() {
        let b = S::binomial(c(0.0, 1.0), -0.5).unwrap();
        let z = P::new(0.3, 0.9).unwrap();
        let v = b.eval(z);
        let base = c(1.0, 0.0) - c(0.0, -1.0) * z.z();
        assert!(base.re > 0.0);
        assert!((v * v - base).norm() < 1e-14);
        assert!(v.re > 0.0);
    }

    #[test]
    fn validation() {
        assert!(S::binomial(c(1.0, 0.0), 1.0).is_err());
        assert!(S::binomial(c(0.5, 0.0), 0.5).is_err());
        assert!(S::binomial(c(0.6, 0.8), 0.999).is_ok());
        assert!(S::polynomial(vec![c(1.0, 0.0); 66]).is_err());
        assert!(S::polynomial(vec![c(1.0, 0.0); 65]).is_ok());
        assert!(S::kernel_combo(vec![]).is_err());
        assert!(S::polynomial(vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = S::polynomial(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(p.degree(), Some(0));
        assert!(p.is_one());
        assert!(S::polynomial(vec![]).unwrap().is_zero());
    }

    #[test]
    fn polynomial_norms() {
        let rule = QuadratureRule::<f64>::default_rule();
        assert!((S::one().l2_norm(&rule).unwrap() - 1.0).abs() < 1e-16);
        let z = S::monomial(1).unwrap();
        assert!((z.l2_norm(&rule).unwrap() - 0.5f64.sqrt()).abs() < 1e-16);
    }

    #[test]
    fn polynomial_norm_matches_quadrature() {
        let rule = QuadratureRule::<f64>::new(16, 64).unwrap();
        let p = S::polynomial(vec![
            c(0.3, -1.0),
            c(2.0, 0.5),
            c(0.0, 0.0),
            c(-0.7, 0.1),
            c(0.2, 0.2),
        ])
        .unwrap();
        let closed = p.l2_norm(&rule).unwrap();
        let quad = rule
            .integrate_real(|z| p.eval_at(z).norm_sqr())
            .unwrap()
            .sqrt();
        assert!((closed - quad).abs() < 1e-12);
    }

    #[test]
    fn kernel_norm_is_reproducing_value() {
        // ⟨K_a, K_a⟩ = K_a(a) = (1 − |a|²)⁻²
        let rule = QuadratureRule::<f64>::default_rule();
        for &m in &[0.0, 0.4, 0.7] {
            let a = P::new(m * 0.8, -m * 0.6).unwrap();
            let norm = S::kernel(a).l2_norm(&rule).unwrap();
            let expect = 1.0 / (1.0 - m * m);
            assert!(
                (norm - expect).abs() < 1e-10 * expect,
                "{m}: {norm} vs {expect}"
            );
        }
    }

    #[test]
    fn binomial_norm_against_gamma_closed_form() {
        // ‖(1 − z)^(−β)‖² = ₂F₁(β, β; 2; 1) = Γ(2 − 2β)/Γ(2 − β)²
        use statrs::function::gamma::gamma;
        // The boundary singularity at z = 1 limits the angular rule, so the
        // check is on the error level and on its decrease under refinement.
        let coarse = QuadratureRule::<f64>::graded(64, 256, 4).unwrap();
        let fine = QuadratureRule::<f64>::graded(128, 1024, 4).unwrap();
        for &(beta, tol) in &[(-0.5, 1e-4), (0.25, 1e-3)] {
            let s = S::binomial(c(1.0, 0.0), beta).unwrap();
            let expect = (gamma(2.0 - 2.0 * beta) / gamma(2.0 - beta).powi(2)).sqrt();
            let e_coarse = (s.l2_norm(&coarse).unwrap() - expect).abs();
            let e_fine = (s.l2_norm(&fine).unwrap() - expect).abs();
            assert!(e_fine < tol * expect, "beta {beta}: error {e_fine}");
            assert!(e_fine < e_coarse, "beta {beta}: {e_fine} vs {e_coarse}");
        }
    }

    #[test]
    fn taylor_coefficients_match_series() {
        let a = P::new(0.3, -0.4).unwrap();
        let k = S::kernel(a).taylor_coefficients(4);
        for (n, c) in k.iter().enumerate() {
            let expect = a.z().conj().powu(n as u32) * (n as f64 + 1.0);
            assert!((c - expect).norm() < 1e-15);
        }
        let b = S::binomial(c(1.0, 0.0), 0.5)
            .unwrap()
            .taylor_coefficients(3);
        assert_eq!(b, vec![c(1.0, 0.0), c(0.5, 0.0), c(0.375, 0.0)]);
        let p = S::monomial(1).unwrap().taylor_coefficients(3);
        assert_eq!(p, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        // partial sums reproduce the function inside the disk
        let z = c(0.2, 0.1);
        let f = S::binomial(c(0.6, 0.8), -0.3).unwrap();
        let sum = f
            .taylor_coefficients(60)
            .iter()
            .rev()
            .fold(c(0.0, 0.0), |acc, &a| acc * z + a);
        assert!((sum - f.eval_at(z)).norm() < 1e-14);
    }

    #[test]
    fn taylor_polynomial_coefficients() {
        let p = S::binomial_taylor(c(1.0, 0.0), -0.5, 3).unwrap();
        let Symbol::Polynomial(a) = p else {
            unreachable!()
        };
        let expect = [1.0, -0.5, -0.125, -0.0625];
        for (x, e) in a.iter().zip(expect) {
            assert!((x - c(e, 0.0)).norm() < 1e-16);
        }
        let q = S::binomial_taylor(c(0.0, 1.0), 1.0, 2).unwrap();
        let Symbol::Polynomial(a) = q else {
            unreachable!()
        };
        assert!((a[1] - c(0.0, -1.0)).norm() < 1e-16);
        assert!((a[2] - c(-1.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn mobius_composition_examples() {
        let z = S::monomial(1).unwrap();
        let w = P::new(0.3, 0.1).unwrap();
        let u = P::new(-0.2, 0.5).unwrap();
        assert!((z.compose_with_mobius(w, P::origin()) - w.z()).norm() < 1e-16);
        assert!((z.compose_with_mobius(P::origin(), u) + u.z()).norm() < 1e-16);
        let a = P::new(0.4, 0.0).unwrap();
        let k = S::kernel(a).compose_with_mobius(w, u);
        let d = c(1.0, 0.0) - a.z().conj() * mobius(w, u);
        assert!((k - (d * d).inv()).norm() < 1e-14);
    }

    #[test]
    fn spec_round_trip_and_json_shape() {
        let json = r#"{"type":"kernel_combo","terms":[{"w":[1.0,0.5],"a":[0.2,-0.3]}]}"#;
        let spec: SymbolSpec = serde_json::from_str(json).unwrap();
        let s = S::from_spec(&spec).unwrap();
        assert_eq!(s.to_spec(), spec);
        let json = r#"{"type":"binomial","eta":[1.0,0.0],"beta":0.5}"#;
        let s = S::from_spec(&serde_json::from_str(json).unwrap()).unwrap();
        assert!(matches!(s, Symbol::BinomialPower { .. }));
        let json = r#"{"type":"poly","coeffs":[[0,0],[1,0]]}"#;
        let s = S::from_spec(&serde_json::from_str(json).unwrap()).unwrap();
        assert_eq!(s.degree(), Some(1));
        assert!(serde_json::from_str::<SymbolSpec>(r#"{"type":"poly","coefs":[]}"#).is_err());
        let bad = r#"{"type":"kernel_combo","terms":[{"w":[1,0],"a":[1.0,0.0]}]}"#;
        assert!(S::from_spec(&serde_json::from_str(bad).unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn binomial_bounded_on_subdisks(r in 0.0..0.95f64, t in 0.0..6.0f64, beta in 0.01..0.99f64) {
            let s = S::binomial(c(1.0, 0.0), beta).unwrap();
            let v = s.eval(P::from_polar(r, t).unwrap()).norm();
            prop_assert!(v <= (1.0 - r).powf(-beta) * (1.0 + 1e-12));
        }

        #[test]
        fn kernel_combo_is_linear_in_weights(
            c1 in -2.0..2.0f64, c2 in -2.0..2.0f64, r in 0.0..0.9f64, t in 0.0..6.0f64
        ) {
            let a = P::new(0.3, 0.4).unwrap();
            let b = P::new(-0.6, 0.1).unwrap();
            let z = P::from_polar(r, t).unwrap();
            let combo = S::kernel_combo(vec![
                KernelTerm { weight: c(c1, 0.0), pole: a },
                KernelTerm { weight: c(0.0, c2), pole: b },
            ]).unwrap();
            let expect = S::kernel(a).eval(z) * c1 + S::kernel(b).eval(z) * c(0.0, c2);
            prop_assert!((combo.eval(z) - expect).norm() <= 1e-12 * (1.0 + expect.norm()));
        }
    }
}
