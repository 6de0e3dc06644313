//! Admissibility of the weighted fractional-integration inequality
//!
//! `|| |x|^{-gamma} int f(u) |u|^{-delta} |x-u|^{a-N} du ||_q <= C ||f||_p`.

use alloc::vec::Vec;

use crate::error::{Error, Result};

const SCALING_TOL: f64 = 1e-12;

/// One of the conditions under which the inequality holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `1 < p <= q < infinity`.
    ExponentRange,
    /// `0 < a < N`.
    KernelOrder,
    /// `gamma < N/q`.
    OutputWeight,
    /// `delta < N (p-1)/p`.
    InputWeight,
    /// `gamma + delta >= 0`.
    WeightSum,
    /// `a/N = 1/p - 1/q + (gamma + delta)/N`.
    Scaling,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinWeissParams {
    pub dim: u32,
    pub a: f64,
    pub gamma_w: f64,
    pub delta_w: f64,
    pub p: f64,
    pub q: f64,
}

impl SteinWeissParams {
    /// Every violated constraint, in declaration order.
    pub fn violations(&self) -> Vec<Constraint> {
        let n = self.dim as f64;
        let mut out = Vec::new();
        if !(self.p > 1.0 && self.p <= self.q && self.q.is_finite()) {
            out.push(Constraint::ExponentRange);
        }
        if !(self.a > 0.0 && self.a < n) {
            out.push(Constraint::KernelOrder);
        }
        if !(self.gamma_w < n / self.q - SCALING_TOL) {
            out.push(Constraint::OutputWeight);
        }
        if !(self.delta_w < n * (self.p - 1.0) / self.p - SCALING_TOL) {
            out.push(Constraint::InputWeight);
        }
        if !(self.gamma_w + self.delta_w >= -SCALING_TOL) {
            out.push(Constraint::WeightSum);
        }
        let lhs = self.a / n;
        let rhs = 1.0 / self.p - 1.0 / self.q + (self.gamma_w + self.delta_w) / n;
        if !(libm::fabs(lhs - rhs) <= SCALING_TOL * libm::fmax(1.0, libm::fabs(lhs))) {
            out.push(Constraint::Scaling);
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Inadmissible(v))
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.violations().is_empty()
    }

    /// `a` forced by the scaling relation for given `(N, gamma, delta, p, q)`.
    pub fn scaling_order(dim: u32, gamma_w: f64, delta_w: f64, p: f64, q: f64) -> f64 {
        let n = dim as f64;
        n * (1.0 / p - 1.0 / q) + gamma_w + delta_w
    }

    /// One-dimensional instance used to close the `S S^*` argument for `I_alpha`:
    /// `1/q = 1/2 - alpha/n`, `p = q'`, `gamma = delta = 1/2 - ((n+1)/(2n)) alpha`,
    /// `a = 2 (alpha/n + gamma)`.
    pub fn from_crucial_estimate(alpha: f64, n: u32) -> Result<Self> {
        let nf = n as f64;
        let inv_q = 0.5 - alpha / nf;
        if !(inv_q > 0.0) || !(alpha > 0.0) {
            return Err(crate::error::domain("alpha", alpha, "0 < alpha < n/2"));
        }
        let q = 1.0 / inv_q;
        let p = q / (q - 1.0);
        let g = 0.5 - (nf + 1.0) / (2.0 * nf) * alpha;
        Ok(Self { dim: 1, a: 2.0 * (alpha / nf + g), gamma_w: g, delta_w: g, p, q })
    }

    /// The kernel order as printed next to the closing step, `2 (alpha/n - gamma)`.
    /// It disagrees with the scaling relation unless `gamma = 0`.
    pub fn printed_kernel_order(alpha: f64, n: u32) -> f64 {
        let nf = n as f64;
        let g = 0.5 - (nf + 1.0) / (2.0 * nf) * alpha;
        2.0 * (alpha / nf - g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn params(a: f64, gamma_w: f64, delta_w: f64, p: f64, q: f64) -> SteinWeissParams {
        SteinWeissParams { dim: 1, a, gamma_w, delta_w, p, q }
    }

    #[test]
    fn hls_specialization_is_admissible() {
        let sw = params(0.5, 0.0, 0.0, 4.0 / 3.0, 4.0);
        assert!(sw.check().is_ok());
    }

    #[test]
    fn gamma_at_n_over_q_rejected() {
        let q = 4.0;
        let p = 4.0 / 3.0;
        let g = 0.25;
        let a = SteinWeissParams::scaling_order(1, g, 0.0, p, q);
        let sw = params(a, g, 0.0, p, q);
        assert_eq!(sw.check(), Err(Error::Inadmissible(vec![Constraint::OutputWeight])));
    }

    #[test]
    fn crucial_estimate_instance() {
        // n = 1 degenerates: gamma = 1/q exactly and a = N
        let sw = SteinWeissParams::from_crucial_estimate(0.4, 1).unwrap();
        assert!((sw.q - 10.0).abs() < 1e-12);
        assert!((sw.gamma_w - 0.1).abs() < 1e-15);
        assert!((sw.a - 1.0).abs() < 1e-15);
        let v = sw.violations();
        assert!(v.contains(&Constraint::OutputWeight));
        assert!(v.contains(&Constraint::KernelOrder));
        assert!(!v.contains(&Constraint::Scaling));
        // n = 2, alpha = 1/2 is admissible with a = 3/4
        let sw = SteinWeissParams::from_crucial_estimate(0.5, 2).unwrap();
        assert!(sw.check().is_ok(), "{:?}", sw.violations());
        assert!((sw.a - 0.75).abs() < 1e-15);
        // the printed order 2(alpha/n - gamma) breaks the scaling relation
        let printed = SteinWeissParams::printed_kernel_order(0.5, 2);
        let broken = SteinWeissParams { a: printed, ..sw };
        assert_eq!(broken.violations(), vec![Constraint::Scaling]);
    }
}
