//! Gauss–Jacobi rules and the log-uniform radial rule used for the
//! dilation variable `r`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specialfn::gamma_fn;

/// Nodes and weights of a one-dimensional rule, nodes increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Affine map of a rule on `[-1, 1]` to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Rule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        Rule {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| half * w).collect(),
        }
    }
}

// Recurrence coefficients of the monic Jacobi polynomials for weight
// (1-x)^a (1+x)^b: returns (alpha_j, beta_j) with beta_0 unused.
fn jacobi_coefficients(j: usize, a: f64, b: f64) -> (f64, f64) {
    let jf = j as f64;
    let ab = a + b;
    let s = 2.0 * jf + ab;
    let alpha = if j == 0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
    let beta = match j {
        0 => 0.0,
        // (1 + a + b) cancels analytically; keeps a + b = -1 well defined
        1 => 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab)),
        _ => 4.0 * jf * (jf + a) * (jf + b) * (jf + ab) / (s * s * (s + 1.0) * (s - 1.0)),
    };
    (alpha, beta)
}

/// Gauss–Jacobi rule for `int_{-1}^{1} f(x) (1-x)^a (1+x)^b dx`, `a, b > -1`.
///
/// Nodes come from Newton iteration on the orthonormal three-term recurrence,
/// started from Szegő's asymptotic node estimates; weights are Christoffel
/// numbers `1 / sum_j p_j(x)^2`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Rule> {
    if n == 0 {
        return Err(Error::Quadrature("need at least one node"));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::Quadrature("Jacobi exponents must exceed -1"));
    }
    let mu0 = libm::pow(2.0, a + b + 1.0) * gamma_fn(a + 1.0)? * gamma_fn(b + 1.0)? / gamma_fn(a + b + 2.0)?;
    let coeffs: Vec<(f64, f64)> = (0..=n).map(|j| jacobi_coefficients(j, a, b)).collect();
    let p0 = 1.0 / libm::sqrt(mu0);

    // returns (p_n, p_n', sum_{j<n} p_j^2) for the orthonormal family
    let eval = |x: f64| -> (f64, f64, f64) {
        let mut p_prev = 0.0;
        let mut d_prev = 0.0;
        let mut p = p0;
        let mut d = 0.0;
        let mut sum = 0.0;
        for j in 0..n {
            sum += p * p;
            let (al, be) = coeffs[j];
            let sb = libm::sqrt(be);
            let sb_next = libm::sqrt(coeffs[j + 1].1);
            let p_next = ((x - al) * p - sb * p_prev) / sb_next;
            let d_next = ((x - al) * d + p - sb * d_prev) / sb_next;
            p_prev = p;
            d_prev = d;
            p = p_next;
            d = d_next;
        }
        (p, d, sum)
    };

    let nf = n as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for k in 1..=n {
        let theta = (k as f64 + 0.5 * a - 0.25) * PI / (nf + 0.5 * (a + b + 1.0));
        let mut x = libm::cos(theta);
        for _ in 0..100 {
            let (p, d, _) = eval(x);
            let step = p / d;
            x -= step;
            x = x.clamp(-1.0 + 1e-300, 1.0 - 1e-300);
            if libm::fabs(step) < 1e-15 {
                break;
            }
        }
        let (_, _, sum) = eval(x);
        nodes.push(x);
        weights.push(1.0 / sum);
    }
    // Szegő ordering runs from +1 down
    nodes.reverse();
    weights.reverse();
    for w in nodes.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::Quadrature("Gauss-Jacobi Newton iteration lost a node"));
        }
    }
    Ok(Rule { nodes, weights })
}

pub fn gauss_legendre(n: usize) -> Result<Rule> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Log-uniform rule for the dilation variable `r > 0`.
///
/// `nodes[j] = r_min (r_max / r_min)^{j / (M - 1)}` and `log_weights` is the
/// trapezoid rule in `ln r`, so that
/// `int_{r_min}^{r_max} g(r) r^{beta - 1} dr ~ sum_j log_weights[j] r_j^beta g(r_j)`.
/// The kernel depends on `|r|`, so callers account for `-r` by symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialQuadrature {
    r_min: f64,
    r_max: f64,
    nodes: Vec<f64>,
    log_weights: Vec<f64>,
}

impl RadialQuadrature {
    pub fn log_uniform(r_min: f64, r_max: f64, count: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::Quadrature("need 0 < r_min < r_max < inf"));
        }
        if count < 2 {
            return Err(Error::Quadrature("need at least two radial nodes"));
        }
        let span = libm::log(r_max / r_min);
        let h = span / (count - 1) as f64;
        let nodes: Vec<f64> =
            (0..count).map(|j| if j == count - 1 { r_max } else { r_min * libm::exp(h * j as f64) }).collect();
        let log_weights = (0..count).map(|j| if j == 0 || j == count - 1 { 0.5 * h } else { h }).collect();
        Ok(Self { r_min, r_max, nodes, log_weights })
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for the measure `r^{beta - 1} dr` on `(r_min, r_max)`.
    pub fn weights(&self, beta: f64) -> Vec<f64> {
        self.nodes.iter().zip(&self.log_weights).map(|(&r, &w)| w * libm::pow(r, beta)).collect()
    }

    /// Same range with `2M - 1` nodes (every other node shared).
    pub fn refined(&self) -> Self {
        Self::log_uniform(self.r_min, self.r_max, 2 * self.len() - 1).expect("refining a valid rule stays valid")
    }

    /// Spacing of the nodes in `ln r`.
    pub fn log_step(&self) -> f64 {
        libm::log(self.r_max / self.r_min) / (self.len() - 1) as f64
    }

    /// New range at (at least) the current node density in `ln r`.
    pub fn with_range(&self, r_min: f64, r_max: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(Error::Quadrature("need 0 < r_min < r_max < inf"));
        }
        let count = libm::ceil(libm::log(r_max / r_min) / self.log_step() - 1e-9) as usize + 1;
        Self::log_uniform(r_min, r_max, count)
    }

    /// Same density, `r_min` halved and `r_max` doubled.
    pub fn extended(&self) -> Self {
        self.with_range(0.5 * self.r_min, 2.0 * self.r_max).expect("extending a valid rule stays valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::gamma_fn;

    fn beta_fn(x: f64, y: f64) -> f64 {
        gamma_fn(x).unwrap() * gamma_fn(y).unwrap() / gamma_fn(x + y).unwrap()
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let rule = gauss_legendre(8).unwrap();
        for k in 0..16u32 {
            let got = rule.integrate(|x| x.powi(k as i32));
            let want = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((got - want).abs() < 1e-14, "k {k}: {got}");
        }
    }

    #[test]
    fn jacobi_moments() {
        // int (1-x)^a (1+x)^b x^0 = 2^{a+b+1} B(a+1, b+1)
        for (a, b) in [(-0.4, -0.4), (-0.7, 0.2), (0.5, -0.5), (-0.5, -0.5), (-0.95, -0.95)] {
            for n in [1, 5, 40, 300] {
                let rule = gauss_jacobi(n, a, b).unwrap();
                let m0 = rule.integrate(|_| 1.0);
                let want = 2f64.powf(a + b + 1.0) * beta_fn(a + 1.0, b + 1.0);
                assert!((m0 - want).abs() < 1e-12 * want, "a {a} b {b} n {n}");
                // x^2 moment exact once 2n - 1 >= 2
                if n >= 2 {
                    let m2 = rule.integrate(|x| x * x);
                    let direct = gauss_jacobi(n + 7, a, b).unwrap().integrate(|x| x * x);
                    assert!((m2 - direct).abs() < 1e-12 * direct.abs(), "a {a} b {b} n {n}: {m2} vs {direct}");
                }
            }
        }
    }

    #[test]
    fn jacobi_symmetric_cosine_moment() {
        // int (1-x^2)^{-1/2} cos(w x) dx = pi J_0(w)
        let rule = gauss_jacobi(60, -0.5, -0.5).unwrap();
        let w = 20.0;
        let got = rule.integrate(|x| (w * x).cos());
        let j0 = crate::specialfn::bessel_j(crate::BesselOrder::new(0.0).unwrap(), w).unwrap();
        assert!((got - PI * j0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gauss_jacobi(0, 0.0, 0.0).is_err());
        assert!(gauss_jacobi(3, -1.0, 0.0).is_err());
        assert!(RadialQuadrature::log_uniform(3.0, 1.5, 10).is_err());
        assert!(RadialQuadrature::log_uniform(0.0, 0.9, 10).is_err());
        assert!(RadialQuadrature::log_uniform(0.5, 3.0, 1).is_err());
    }

    #[test]
    fn radial_rule_integrates_powers() {
        let q = RadialQuadrature::log_uniform(0.01, 10.0, 400).unwrap();
        assert!(q.nodes().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(q.nodes()[0], 0.01);
        assert_eq!(*q.nodes().last().unwrap(), 10.0);
        // int r^{beta-1} dr = (b^beta - a^beta)/beta
        for beta in [0.6, 0.8, 1.2] {
            let got: f64 = q.weights(beta).iter().sum();
            let want = (10f64.powf(beta) - 0.01f64.powf(beta)) / beta;
            assert!((got - want).abs() / want < 1e-4);
        }
        let r = q.refined();
        assert_eq!(r.len(), 799);
        assert!((r.nodes()[2] - q.nodes()[1]).abs() < 1e-14);
        let e = q.extended();
        assert_eq!(e.r_min(), 0.005);
        assert_eq!(e.r_max(), 20.0);
    }
}
