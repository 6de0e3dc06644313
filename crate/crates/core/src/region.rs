//! Exponent-region classification for `I_alpha : L^p(R^{n+1}) -> L^q(R^{n+1})`.
//!
//! With `a = alpha / n`:
//!
//! * scaling line: `a = 1/p - 1/q`
//! * necessary band: `(n-1)/(2n) + ((n+1)/(2n)) a < 1/p < (n+1)/(2n) + ((n-1)/(2n)) a`
//! * region I (known for `alpha >= n/(n+1)`): the whole necessary band
//! * region II (`alpha <= n/(n+1)`): `1/2 < 1/p < 1/2 + a`
//!
//! Equalities are decided with an absolute tolerance of `1e-12`.

use crate::error::{domain, Result};

pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPoint {
    pub inv_p: f64,
    pub inv_q: f64,
    pub alpha: f64,
    pub n: u32,
}

impl ExponentPoint {
    pub fn new(inv_p: f64, inv_q: f64, alpha: f64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(domain("n", 0.0, "n >= 1"));
        }
        if !(inv_p > 0.0 && inv_p < 1.0) {
            return Err(domain("1/p", inv_p, "0 < 1/p < 1"));
        }
        if !(inv_q > 0.0 && inv_q < 1.0) {
            return Err(domain("1/q", inv_q, "0 < 1/q < 1"));
        }
        if !(alpha > 0.0 && alpha < n as f64) {
            return Err(domain("alpha", alpha, "0 < alpha < n"));
        }
        Ok(Self { inv_p, inv_q, alpha, n })
    }

    /// Point on the scaling line: `1/q = 1/p - alpha/n`.
    pub fn on_scaling_line(inv_p: f64, alpha: f64, n: u32) -> Result<Self> {
        Self::new(inv_p, inv_p - alpha / n as f64, alpha, n)
    }

    /// Bounds of the necessary band for `1/p`.
    pub fn necessary_band(&self) -> (f64, f64) {
        necessary_band(self.alpha, self.n)
    }

    /// Bounds of region II for `1/p`.
    pub fn region_two_band(&self) -> (f64, f64) {
        (0.5, 0.5 + self.alpha / self.n as f64)
    }

    /// Dual point `(1 - 1/q, 1 - 1/p)`.
    pub fn dual(&self) -> Self {
        Self { inv_p: 1.0 - self.inv_q, inv_q: 1.0 - self.inv_p, alpha: self.alpha, n: self.n }
    }
}

pub fn necessary_band(alpha: f64, n: u32) -> (f64, f64) {
    let nf = n as f64;
    let a = alpha / nf;
    let lower = (nf - 1.0) / (2.0 * nf) + (nf + 1.0) / (2.0 * nf) * a;
    let upper = (nf + 1.0) / (2.0 * nf) + (nf - 1.0) / (2.0 * nf) * a;
    (lower, upper)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `alpha/n != 1/p - 1/q`.
    ScalingViolated,
    /// On the scaling line but outside the necessary band.
    OutsideNecessary,
    /// Necessary band with `alpha >= n/(n+1)`.
    RegionI,
    /// `alpha <= n/(n+1)` and `1/2 < 1/p < 1/2 + alpha/n`.
    RegionII,
    /// Inside the necessary band, covered by neither result.
    OpenGap,
    /// One of the defining inequalities holds with equality.
    Boundary,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::ScalingViolated => "ScalingViolated",
            Region::OutsideNecessary => "OutsideNecessary",
            Region::RegionI => "RegionI",
            Region::RegionII => "RegionII",
            Region::OpenGap => "OpenGap",
            Region::Boundary => "Boundary",
        }
    }
}

impl core::fmt::Display for Region {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

fn near(a: f64, b: f64) -> bool {
    libm::fabs(a - b) <= BOUNDARY_TOL
}

pub fn classify_exponents(pt: &ExponentPoint) -> Region {
    let nf = pt.n as f64;
    if !near(pt.alpha / nf, pt.inv_p - pt.inv_q) {
        return Region::ScalingViolated;
    }
    let (lower, upper) = pt.necessary_band();
    if near(pt.inv_p, lower) || near(pt.inv_p, upper) {
        return Region::Boundary;
    }
    if pt.inv_p < lower || pt.inv_p > upper {
        return Region::OutsideNecessary;
    }
    let critical = nf / (nf + 1.0);
    if pt.alpha >= critical || near(pt.alpha, critical) {
        return Region::RegionI;
    }
    let (lo2, hi2) = pt.region_two_band();
    if near(pt.inv_p, lo2) || near(pt.inv_p, hi2) {
        return Region::Boundary;
    }
    if pt.inv_p > lo2 && pt.inv_p < hi2 {
        Region::RegionII
    } else {
        Region::OpenGap
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn classify(inv_p: f64, inv_q: f64, alpha: f64, n: u32) -> Region {
        classify_exponents(&ExponentPoint::new(inv_p, inv_q, alpha, n).unwrap())
    }

    #[test]
    fn worked_examples() {
        assert_eq!(classify(0.7, 0.2, 1.0, 2), Region::RegionI);
        assert_eq!(classify(0.7, 0.3, 0.4, 1), Region::RegionII);
        assert_eq!(classify(0.95, 0.55, 0.4, 1), Region::OpenGap);
    }

    #[test]
    fn band_values() {
        let (lo, hi) = necessary_band(1.0, 2);
        assert!((lo - 0.625).abs() < 1e-15 && (hi - 0.875).abs() < 1e-15);
        let (lo, hi) = necessary_band(0.4, 1);
        assert!((lo - 0.4).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn off_line_and_outside() {
        assert_eq!(classify(0.7, 0.35, 0.4, 1), Region::ScalingViolated);
        // n = 2, alpha = 1: band (0.625, 0.875)
        assert_eq!(classify(0.6, 0.1, 1.0, 2), Region::OutsideNecessary);
        assert_eq!(classify(0.625, 0.125, 1.0, 2), Region::Boundary);
        // region II edges for n = 1, alpha = 0.4
        assert_eq!(classify(0.5, 0.1, 0.4, 1), Region::Boundary);
        assert_eq!(classify(0.9, 0.5, 0.4, 1), Region::Boundary);
        // alpha = n/(n+1): region I takes precedence
        let pt = ExponentPoint::on_scaling_line(0.7, 2.0 / 3.0, 2).unwrap();
        assert_eq!(classify_exponents(&pt), Region::RegionI);
    }

    #[test]
    fn range_errors() {
        assert!(ExponentPoint::new(0.0, 0.1, 0.4, 1).is_err());
        assert!(ExponentPoint::new(0.5, 1.0, 0.4, 1).is_err());
        assert!(ExponentPoint::new(0.5, 0.1, 1.0, 1).is_err());
        assert!(ExponentPoint::new(0.5, 0.1, 0.4, 0).is_err());
    }

    proptest! {
        #[test]
        fn region_two_is_self_dual(inv_p in 0.01f64..0.99, alpha in 0.01f64..3.0, n in 1u32..4) {
            prop_assume!(alpha < n as f64);
            let inv_q = inv_p - alpha / n as f64;
            prop_assume!(inv_q > 0.0 && inv_q < 1.0);
            let pt = ExponentPoint::new(inv_p, inv_q, alpha, n).unwrap();
            let dual = pt.dual();
            let a = classify_exponents(&pt) == Region::RegionII;
            let b = classify_exponents(&dual) == Region::RegionII;
            prop_assert_eq!(a, b);
        }

        #[test]
        fn classification_is_total(inv_p in 0.001f64..0.999, inv_q in 0.001f64..0.999, alpha in 0.001f64..2.9, n in 1u32..4) {
            prop_assume!(alpha < n as f64);
            let pt = ExponentPoint::new(inv_p, inv_q, alpha, n).unwrap();
            let region = classify_exponents(&pt);
            if region == Region::RegionII {
                prop_assert!(alpha <= n as f64 / (n as f64 + 1.0));
            }
        }
    }
}
