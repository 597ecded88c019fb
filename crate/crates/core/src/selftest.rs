//! Fast invariant checks run by `bergman selftest`.

use num_complex::Complex;
use serde::Serialize;

use crate::berezin::{berezin_mod_squared, berezin_mod_squared_weighted, berezin_transform};
use crate::geometry::{bergman_metric, hyperbolic_disk, mobius, mobius_derivative, DiskPoint};
use crate::quadrature::QuadratureRule;
use crate::schur::{projection_identity, remark1_check, SchurParameters};
use crate::symbols::{Symbol, SymbolPair};
use crate::toeplitz::{hs_tail_norm_squared, kernel_action, quadrature_matrix, toeplitz_matrix};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed error.
    pub worst: f64,
    pub tolerance: f64,
}

/// Points on a golden-angle spiral with moduli up to `max_modulus`.
fn spiral(count: usize, max_modulus: f64) -> Vec<DiskPoint<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let r = max_modulus * ((k as f64 + 0.5) / count as f64).sqrt();
            DiskPoint::from_polar(r, golden * k as f64).expect("inside the disk")
        })
        .collect()
}

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn test_polynomials() -> Vec<Symbol<f64>> {
    (0..4)
        .map(|d| {
            let coeffs = (0..=2 * d)
                .map(|k| c(1.0 / (k as f64 + 1.0), 0.3 * k as f64 - 0.5))
                .collect();
            Symbol::polynomial(coeffs).expect("valid polynomial")
        })
        .collect()
}

fn check(name: &'static str, tolerance: f64, errors: impl IntoIterator<Item = f64>) -> CheckResult {
    let worst = errors.into_iter().fold(
        0.0,
        |m: f64, e| if e.is_nan() { f64::NAN } else { m.max(e) },
    );
    CheckResult {
        name,
        passed: worst <= tolerance,
        worst,
        tolerance,
    }
}

fn geometry_checks() -> Vec<CheckResult> {
    let pts = spiral(64, 0.95);
    let pairs: Vec<_> = pts
        .iter()
        .zip(pts.iter().rev())
        .map(|(&a, &b)| (a, b))
        .collect();
    let involution = pairs.iter().map(|&(w, z)| {
        let back = mobius(
            w,
            DiskPoint::from_complex(mobius(w, z)).expect("image inside"),
        );
        (back - z.z()).norm()
    });
    let jacobian = pairs.iter().map(|&(w, z)| {
        // |φ_w'(z)| = (1 − |φ_w(z)|²)/(1 − |z|²)
        let lhs = mobius_derivative(w, z).norm();
        let rhs = (1.0 - mobius(w, z).norm_sqr()) / (1.0 - z.modulus_sqr());
        (lhs - rhs).abs() / rhs
    });
    let symmetry = pairs
        .iter()
        .map(|&(w, z)| (bergman_metric(w, z) - bergman_metric(z, w)).abs());
    let disks = spiral(16, 0.9).into_iter().flat_map(|z| {
        let d = hyperbolic_disk(z, 0.25).expect("admissible");
        (0..16).map(move |k| {
            let b =
                DiskPoint::from_complex(d.boundary_point(k as f64 * std::f64::consts::TAU / 16.0))
                    .expect("inside");
            (bergman_metric(z, b) - 0.25).abs()
        })
    });
    vec![
        check("mobius_involution", 1e-12, involution),
        check("mobius_jacobian", 1e-12, jacobian),
        check("metric_symmetry", 1e-12, symmetry),
        check("hyperbolic_disk_boundary", 1e-10, disks),
    ]
}

fn quadrature_checks(rule: &QuadratureRule<f64>) -> Vec<CheckResult> {
    let mut errors = Vec::new();
    for a in 0..=12u32 {
        for b in 0..=12u32 {
            let v = rule
                .integrate(|z| z.powu(a) * z.conj().powu(b))
                .expect("finite");
            let exact = if a == b { 1.0 / (a as f64 + 1.0) } else { 0.0 };
            errors.push((v - exact).norm());
        }
    }
    vec![check("monomial_exactness", 1e-12, errors)]
}

fn berezin_checks(rule: &QuadratureRule<f64>) -> Vec<CheckResult> {
    let grid = spiral(24, 0.9);
    let polys = test_polynomials();
    let routes = polys.iter().flat_map(|f| {
        grid.iter().map(move |&w| {
            let a = berezin_mod_squared(f, w, rule).expect("finite");
            let b = berezin_mod_squared_weighted(f, w, rule).expect("finite");
            (a - b).abs() / a.abs().max(f64::MIN_POSITIVE)
        })
    });
    let routes = check("berezin_two_routes", 1e-8, routes.collect::<Vec<_>>());
    let reproducing = polys.iter().flat_map(|f| {
        grid.iter().map(move |&w| {
            let v = berezin_transform(|z| f.eval_at(z), w, rule).expect("finite");
            (v - f.eval(w)).norm()
        })
    });
    vec![
        routes,
        check("berezin_reproducing", 1e-8, reproducing.collect::<Vec<_>>()),
    ]
}

fn toeplitz_checks(rule: &QuadratureRule<f64>) -> Vec<CheckResult> {
    let polys = test_polynomials();
    let closed = polys.iter().map(|f| {
        let a = toeplitz_matrix(f, 16).expect("degree below N");
        let b = quadrature_matrix(f, 16, rule).expect("finite");
        a.max_abs_diff(&b).expect("same dimension")
    });
    let pts = spiral(10, 0.7);
    let actions = pts
        .iter()
        .zip(pts.iter().rev())
        .enumerate()
        .map(|(i, (&z, &w))| {
            let pair = SymbolPair::new(polys[i % 4].clone(), polys[(i + 1) % 4].clone());
            kernel_action(&pair, z, w, 64).expect("valid").error()
        });
    let projection = polys
        .iter()
        .zip(pts.iter().zip(pts.iter().skip(3)))
        .map(|(g, (&z, &u))| projection_identity(g, z, u, rule).expect("finite").error());
    let hs_rule = QuadratureRule::new(32, 16).expect("valid counts");
    let ones = SymbolPair::new(Symbol::one(), Symbol::one());
    let hs = [0.3, 0.5, 0.7, 0.9].map(|r: f64| {
        let v = hs_tail_norm_squared(&ones, r, &hs_rule).expect("finite");
        let exact = r * r / (1.0 - r * r);
        (v - exact).abs() / exact
    });
    vec![
        check("toeplitz_closed_form", 1e-12, closed.collect::<Vec<_>>()),
        check("kernel_action", 1e-8, actions.collect::<Vec<_>>()),
        check("projection_identity", 1e-8, projection.collect::<Vec<_>>()),
        check("hs_constants", 1e-8, hs),
    ]
}

fn schur_checks() -> Vec<CheckResult> {
    let rule = crate::schur::default_schur_rule();
    let params = SchurParameters::default();
    let polys = test_polynomials();
    let errors = spiral(8, 0.9)
        .into_iter()
        .zip(polys.iter().cycle())
        .map(|(u, f)| {
            remark1_check(f, u, &params, &rule)
                .expect("finite")
                .relative_error()
        });
    vec![check(
        "remark1_two_routes",
        1e-4,
        errors.collect::<Vec<_>>(),
    )]
}

/// Runs every check with the default rule.
pub fn run_selftest() -> Vec<CheckResult> {
    let rule = QuadratureRule::default_rule();
    let mut out = geometry_checks();
    out.extend(quadrature_checks(&rule));
    out.extend(berezin_checks(&rule));
    out.extend(toeplitz_checks(&rule));
    out.extend(schur_checks());
    out
}
