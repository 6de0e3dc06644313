//! Gamma and Bessel-J of real order.
//!
//! `bessel_j` sums the ascending power series up to `max(12, 2|nu|)` and
//! switches to the Hankel asymptotic expansion beyond. Near the switch the
//! two agree to better than 1e-9 (see the `switch_band_agreement` test).
//! The split `J = main + remainder` uses the leading Hankel term
//! `sqrt(2/(pi rho)) cos(rho - pi nu / 2 - pi / 4)` as the main term.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Lower edge of the Hankel-expansion branch.
pub fn series_limit(nu: f64) -> f64 {
    libm::fmax(12.0, 2.0 * libm::fabs(nu))
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == libm::floor(x)
}

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x == libm::floor(x) {
        return 0.0;
    }
    // reduce to [-1, 1], sin(pi x) has period 2
    let r = x - 2.0 * libm::round(x / 2.0);
    if r > 0.5 {
        libm::sin(PI * (1.0 - r))
    } else if r < -0.5 {
        -libm::sin(PI * (1.0 + r))
    } else {
        libm::sin(PI * r)
    }
}

// Lanczos sum for x >= 0.5, returns Gamma(x). Small positive integers are
// returned as exact factorials.
fn lanczos_gamma(x: f64) -> f64 {
    if x == libm::floor(x) && x <= 23.0 {
        return (2..x as u32).fold(1.0, |acc, k| acc * k as f64);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    // split the power so large arguments do not overflow before exp(-t)
    let half = libm::pow(t, 0.5 * (x + 0.5));
    SQRT_2PI * half * (half * libm::exp(-t)) * a
}

/// Gamma function on the real line.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(domain("x", x, "a real number"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x < 0.5 {
        Ok(PI / (sin_pi(x) * lanczos_gamma(1.0 - x)))
    } else {
        Ok(lanczos_gamma(x))
    }
}

/// `1 / Gamma(x)`, continued as an entire function: exactly zero at the poles.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 0.5 {
        sin_pi(x) * lanczos_gamma(1.0 - x) / PI
    } else {
        1.0 / lanczos_gamma(x)
    }
}

fn lanczos_gamma_complex(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    let t = z + (LANCZOS_G + 0.5);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += *c / (z + i as f64);
    }
    SQRT_2PI * (t.ln() * (z + 0.5) - t).exp() * a
}

/// `1 / Gamma(z)` for complex `z`; zero at the nonpositive integers.
pub fn reciprocal_gamma_complex(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(reciprocal_gamma(z.re), 0.0);
    }
    if z.re < 0.5 {
        (z * PI).sin() * lanczos_gamma_complex(1.0 - z) / PI
    } else {
        1.0 / lanczos_gamma_complex(z)
    }
}

/// Real Bessel order `nu >= -1/2`.
///
/// The endpoint `-1/2` is admitted so the closed form
/// `J_{-1/2}(rho) = sqrt(2/(pi rho)) cos(rho)` can be checked directly.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu >= -0.5 {
            Ok(Self(nu))
        } else {
            Err(domain("nu", nu, "nu >= -1/2"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn check_rho(rho: f64, strict: bool) -> Result<()> {
    let ok = if strict { rho > 0.0 } else { rho >= 0.0 };
    if ok && rho.is_finite() {
        Ok(())
    } else if strict {
        Err(domain("rho", rho, "rho > 0"))
    } else {
        Err(domain("rho", rho, "rho >= 0"))
    }
}

/// Ascending series `sum_k (-1)^k (rho/2)^{2k+nu} / (k! Gamma(k+nu+1))`.
/// Valid for any order with `nu + 1` not a nonpositive integer.
pub(crate) fn bessel_series(nu: f64, rho: f64) -> f64 {
    let half = 0.5 * rho;
    let mut term = libm::pow(half, nu) * reciprocal_gamma(nu + 1.0);
    let mut sum = term;
    let q = -half * half;
    let mut k = 1.0;
    loop {
        term *= q / (k * (nu + k));
        sum += term;
        if libm::fabs(term) <= 1e-17 * libm::fabs(sum) || k > 500.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

/// Hankel expansion amplitudes `(P, Q)` with
/// `J_nu(rho) = sqrt(2/(pi rho)) (P cos w - Q sin w)`, `w = rho - pi nu/2 - pi/4`.
fn hankel_pq(nu: f64, rho: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    // term_k = a_k(nu) / rho^k, alternating into P (even k) and Q (odd k)
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (8.0 * kf * rho);
        let size = libm::fabs(term);
        if size == 0.0 {
            break;
        }
        if size > last && odd * odd > mu {
            // asymptotic series started diverging; truncate at smallest term
            break;
        }
        // sign pattern: P = a0 - a2/rho^2 + a4/rho^4 ..., Q = a1/rho - a3/rho^3 ...
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if size < 1e-17 {
            break;
        }
        last = size;
    }
    (p, q)
}

fn hankel_phase(nu: f64, rho: f64) -> f64 {
    rho - 0.5 * PI * nu - 0.25 * PI
}

/// Bessel function of the first kind `J_nu(rho)` for `nu > -1/2`, `rho >= 0`.
///
/// At `rho = 0` with `nu < 0` the function diverges and `+inf` is returned.
pub fn bessel_j(nu: BesselOrder, rho: f64) -> Result<f64> {
    check_rho(rho, false)?;
    let nu = nu.value();
    if rho == 0.0 {
        return Ok(if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    if rho <= series_limit(nu) {
        Ok(bessel_series(nu, rho))
    } else {
        Ok(bessel_asymptotic(nu, rho))
    }
}

pub(crate) fn bessel_asymptotic(nu: f64, rho: f64) -> f64 {
    let (p, q) = hankel_pq(nu, rho);
    let w = hankel_phase(nu, rho);
    libm::sqrt(2.0 / (PI * rho)) * (p * libm::cos(w) - q * libm::sin(w))
}

/// Leading Hankel term `(2/(pi rho))^{1/2} cos(rho - pi nu/2 - pi/4)`.
pub fn bessel_main_term(nu: BesselOrder, rho: f64) -> Result<f64> {
    check_rho(rho, true)?;
    let w = hankel_phase(nu.value(), rho);
    Ok(libm::sqrt(2.0 / (PI * rho)) * libm::cos(w))
}

/// Remainder `e(rho) = J_nu(rho) - main term`.
pub fn bessel_remainder(nu: BesselOrder, rho: f64) -> Result<f64> {
    check_rho(rho, true)?;
    Ok(bessel_j(nu, rho)? - bessel_main_term(nu, rho)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(nu: f64) -> BesselOrder {
        BesselOrder::new(nu).unwrap()
    }

    #[test]
    fn gamma_known_values() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        // mpmath, 40 digits
        let table = [
            (0.05, 19.470_085_311_255_511_756),
            (0.3, 2.991_568_987_687_590_744_6),
            (1.7, 0.908_638_732_853_290_441_56),
            (7.25, 1_155.381_013_919_989_687_2),
            (29.5, 1.634_812_519_827_426_644_4e30),
        ];
        for (x, want) in table {
            let got = gamma_fn(x).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "Gamma({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn gamma_half_from_reflection() {
        // Gamma(1/2)^2 = pi / sin(pi/2)
        let oracle = PI.sqrt();
        assert!((gamma_fn(0.5).unwrap() - oracle).abs() < 1e-14);
        let prod = gamma_fn(0.6).unwrap() * gamma_fn(0.4).unwrap();
        let want = PI / (0.4 * PI).sin();
        assert!((prod - want).abs() / want < 1e-13);
    }

    #[test]
    fn gamma_poles() {
        assert_eq!(gamma_fn(0.0), Err(Error::GammaPole(0.0)));
        assert_eq!(gamma_fn(-3.0), Err(Error::GammaPole(-3.0)));
        assert!(gamma_fn(-2.5).unwrap().is_finite());
    }

    #[test]
    fn reciprocal_gamma_zeros_and_values() {
        assert_eq!(reciprocal_gamma(1.0), 1.0);
        assert_eq!(reciprocal_gamma(0.0), 0.0);
        assert_eq!(reciprocal_gamma(-1.0), 0.0);
        assert_eq!(reciprocal_gamma(-7.0), 0.0);
        let x = -1.3;
        assert!((reciprocal_gamma(x) * gamma_fn(x).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn complex_reciprocal_gamma_matches_real_axis_and_conjugation() {
        let z = Complex64::new(0.4, 1e-9);
        let g = reciprocal_gamma_complex(z);
        assert!((g.re - reciprocal_gamma(0.4)).abs() < 1e-8);
        let z = Complex64::new(-0.7, 1.3);
        let a = reciprocal_gamma_complex(z);
        let b = reciprocal_gamma_complex(z.conj());
        assert!((a - b.conj()).norm() < 1e-14);
        // Gamma(z+1) = z Gamma(z)  =>  1/Gamma(z) = z / Gamma(z+1)
        let lhs = reciprocal_gamma_complex(z);
        let rhs = z * reciprocal_gamma_complex(z + 1.0);
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm().max(1.0));
    }

    #[test]
    fn bessel_against_mpmath() {
        let table = [
            (0.0, 1.0, 0.765_197_686_557_966_551_45),
            (0.0, 5.0, -0.177_596_771_314_338_304_35),
            (0.0, 11.9, 0.025_049_441_699_589_645_08),
            (0.0, 12.1, 0.069_666_773_606_807_311_849),
            (0.0, 30.0, -0.086_367_983_581_040_211_336),
            (0.0, 1000.0, 0.024_786_686_152_420_174_561),
            (-0.4, 0.5, 1.049_730_446_604_541_270_5),
            (-0.4, 7.0, 0.256_450_576_046_488_192_76),
            (-0.4, 13.0, 0.213_064_073_735_437_551_24),
            (-0.1, 2.0 * PI, 0.253_571_464_475_436_881_59),
            (1.0, 3.0, 0.339_058_958_525_936_458_93),
            (1.0, 12.5, -0.165_483_804_614_759_718_46),
            (1.0, 100.0, -0.077_145_352_014_112_158_033),
            (1.5, 20.0, -0.064_662_866_592_310_355_005),
            (-0.275, 0.01, 3.406_777_543_759_290_766_8),
            (0.25, 15.0, 0.065_084_575_573_504_809_282),
            (0.75, 999.5, 0.002_041_848_075_397_595_398_1),
        ];
        for (nu, rho, want) in table {
            let got = bessel_j(order(nu), rho).unwrap();
            assert!((got - want).abs() < 1e-10, "J_{nu}({rho}) = {got}, want {want}");
        }
    }

    #[test]
    fn bessel_trivial_points() {
        assert_eq!(bessel_j(order(0.0), 0.0).unwrap(), 1.0);
        assert!(bessel_j(order(0.5), PI).unwrap().abs() < 1e-15);
        assert!(bessel_j(order(-0.5), PI / 2.0).unwrap().abs() < 1e-15);
        assert!(bessel_j(order(0.0), -1.0).is_err());
        assert!(BesselOrder::new(-0.5).is_ok());
        assert!(BesselOrder::new(-0.51).is_err());
    }

    #[test]
    fn half_integer_closed_forms() {
        for i in 1..2000 {
            let rho = 0.01 + i as f64 * 0.5;
            let s = (2.0 / (PI * rho)).sqrt();
            let jp = bessel_j(order(0.5), rho).unwrap();
            let jm = bessel_j(order(-0.5), rho).unwrap();
            assert!((jp - s * rho.sin()).abs() < 1e-12, "rho {rho}");
            assert!((jm - s * rho.cos()).abs() < 1e-12, "rho {rho}");
        }
    }

    #[test]
    fn switch_band_agreement() {
        for nu in [-0.45, -0.3, 0.0, 0.2, 0.5, 1.0, 1.5, 2.5] {
            let mut rho = 12.0;
            while rho <= 16.0 {
                let a = bessel_series(nu, rho);
                let b = bessel_asymptotic(nu, rho);
                assert!((a - b).abs() < 1e-9, "nu {nu} rho {rho}: {a} vs {b}");
                rho += 0.05;
            }
        }
    }

    #[test]
    fn small_argument_limit() {
        for nu in [-0.4, -0.1, 0.0, 0.5, 1.0, 1.3] {
            for rho in [1e-4, 5e-4, 9e-4] {
                let want = (rho / 2.0_f64).powf(nu) * reciprocal_gamma(nu + 1.0);
                let got = bessel_j(order(nu), rho).unwrap();
                assert!(((got - want) / want).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn main_term_identities() {
        for rho in [0.1, 1.0, 3.3, 25.0, 400.0] {
            let m = bessel_main_term(order(0.5), rho).unwrap();
            let s = (2.0 / (PI * rho)).sqrt() * rho.sin();
            assert!((m - s).abs() < 1e-14);
        }
        // phase pi/2 makes the cosine vanish: rho = pi/2 + pi*nu/2 + pi/4
        let nu = 0.3;
        let rho = PI / 2.0 + PI * nu / 2.0 + PI / 4.0;
        assert!(bessel_main_term(order(nu), rho).unwrap().abs() < 1e-15);
        let want = (2.0 / (10.0 * PI)).sqrt() * (10.0 - PI / 4.0).cos();
        assert!((bessel_main_term(order(0.0), 10.0).unwrap() - want).abs() < 1e-15);
        assert!(bessel_main_term(order(0.0), 0.0).is_err());
    }

    #[test]
    fn remainder_vanishes_for_half_orders() {
        for i in 1..500 {
            let rho = i as f64 * 0.37;
            assert!(bessel_remainder(order(0.5), rho).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn remainder_decay_constants() {
        for nu in [-0.4, -0.1, 0.0, 0.5, 1.0] {
            let nu = order(nu);
            let mut small = 0.0_f64;
            let mut large = 0.0_f64;
            for i in 1..=4000 {
                let rho = i as f64 / 4000.0;
                small = small.max(bessel_remainder(nu, rho).unwrap().abs() * rho.sqrt());
                let rho = 1.0 + i as f64 * (999.0 / 4000.0);
                large = large.max(bessel_remainder(nu, rho).unwrap().abs() * rho.powf(1.5));
            }
            assert!(small.is_finite() && small < 2.0, "{small}");
            assert!(large.is_finite() && large < 2.0, "{large}");
        }
    }

    #[test]
    fn three_term_recurrence() {
        for nu in [0.6, 0.9, 1.0, 1.7, 2.4] {
            for rho in [0.3, 2.0, 9.0, 12.5, 40.0, 700.0] {
                let a = bessel_j(order(nu - 1.0), rho).unwrap();
                let b = bessel_j(order(nu + 1.0), rho).unwrap();
                let c = bessel_j(order(nu), rho).unwrap();
                assert!((a + b - 2.0 * nu / rho * c).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn sin_pi_exact_zeros() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(-2.0), 0.0);
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-1.25) - (-1.25 * PI).sin()).abs() < 1e-15);
    }
}
