use conewave_core::kernel::{mass, omega_hat_real, omega_physical};
use conewave_core::quadrature::{gauss_jacobi, gauss_legendre};
use conewave_core::region::{classify_exponents, necessary_band, ExponentPoint, Region};
use conewave_core::specialfn::{bessel_j, gamma_fn};
use conewave_core::{BesselOrder, KernelSpec, RadialQuadrature};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bessel_three_term_recurrence(nu in 0.5f64..3.0, rho in 0.1f64..200.0) {
        let j = |v: f64| bessel_j(BesselOrder::new(v).unwrap(), rho).unwrap();
        let lhs = j(nu - 1.0) + j(nu + 1.0);
        let rhs = 2.0 * nu / rho * j(nu);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn gamma_recurrence(x in 0.05f64..20.0) {
        let a = gamma_fn(x + 1.0).unwrap();
        let b = x * gamma_fn(x).unwrap();
        prop_assert!(((a - b) / a).abs() < 1e-13);
    }

    #[test]
    fn multiplier_bounded_by_mass(alpha in 0.05f64..0.95, xi in 0.0f64..50.0) {
        let spec = KernelSpec::real(alpha, 1).unwrap();
        let m = omega_hat_real(xi, &spec).unwrap();
        prop_assert!(m.abs() <= mass(&spec) * (1.0 + 1e-12));
    }

    #[test]
    fn classification_is_symmetric_under_duality(n in 1u32..=3, t in 0.0f64..1.0, s in 0.0f64..1.0) {
        let alpha = (0.02 + 0.96 * t) * n as f64;
        let a = alpha / n as f64;
        let inv_p = a + (1.0 - a) * s;
        prop_assume!(inv_p > a + 1e-6 && inv_p < 1.0 - 1e-6);
        let (lo, hi) = necessary_band(alpha, n);
        let critical = n as f64 / (n as f64 + 1.0);
        let edges = [lo, hi, 0.5, 0.5 + a];
        prop_assume!(edges.iter().all(|e| (inv_p - e).abs() > 1e-9 && (1.0 + a - inv_p - e).abs() > 1e-9));
        prop_assume!((alpha - critical).abs() > 1e-9);
        let pt = ExponentPoint::on_scaling_line(inv_p, alpha, n).unwrap();
        prop_assert_eq!(classify_exponents(&pt), classify_exponents(&pt.dual()));
    }

    #[test]
    fn off_line_points_are_scaling_violations(alpha in 0.05f64..0.95, inv_p in 0.5f64..0.99, shift in 1e-6f64..0.3) {
        let inv_q = inv_p - alpha + shift;
        prop_assume!(inv_q > 0.0 && inv_q < 1.0);
        let pt = ExponentPoint::new(inv_p, inv_q, alpha, 1).unwrap();
        prop_assert_eq!(classify_exponents(&pt), Region::ScalingViolated);
    }
}

#[test]
fn gauss_jacobi_integrates_polynomials_against_its_weight() {
    // int_{-1}^{1} (1-x)^a (1+x)^b x^2 dx with a = b = -0.3
    let rule = gauss_jacobi(12, -0.3, -0.3).unwrap();
    let got = rule.integrate(|x| x * x);
    let beta = |p: f64, q: f64| gamma_fn(p).unwrap() * gamma_fn(q).unwrap() / gamma_fn(p + q).unwrap();
    // substitute x = 2u - 1: 2^{a+b+1} int_0^1 u^b (1-u)^a (2u-1)^2 du
    let (a, b) = (-0.3, -0.3);
    let scale = 2f64.powf(a + b + 1.0);
    let want = scale * (4.0 * beta(b + 3.0, a + 1.0) - 4.0 * beta(b + 2.0, a + 1.0) + beta(b + 1.0, a + 1.0));
    assert!((got - want).abs() < 1e-13, "{got} vs {want}");

    let gl = gauss_legendre(8).unwrap();
    assert!((gl.integrate(|x| x.powi(14)) - 2.0 / 15.0).abs() < 1e-14);
}

#[test]
fn physical_kernel_mass_matches_multiplier_at_origin() {
    for alpha in [0.3, 0.5, 0.7] {
        let spec = KernelSpec::real(alpha, 1).unwrap();
        let lambda = spec.lambda().re;
        let rule = gauss_jacobi(40, -lambda, -lambda).unwrap();
        let g = omega_physical(0.0, &spec).unwrap();
        let total = g * rule.integrate(|_| 1.0);
        assert!((total - mass(&spec)).abs() < 1e-13, "alpha={alpha}: {total}");
    }
}

#[test]
fn radial_rule_integrates_powers_exactly_in_the_limit() {
    // int_{0.01}^{10} r^{beta - 1} dr = (10^beta - 0.01^beta) / beta
    let q = RadialQuadrature::log_uniform(0.01, 10.0, 2001).unwrap();
    let beta = 0.8;
    let got: f64 = q.weights(beta).iter().sum();
    let want = (10f64.powf(beta) - 0.01f64.powf(beta)) / beta;
    assert!(((got - want) / want).abs() < 1e-5);
    assert_eq!(q.refined().len(), 4001);
}
