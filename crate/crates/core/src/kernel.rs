//! The kernel family `Omega^lambda(alpha)` on `R^n`.
//!
//! With `c = (n+1)/(2n)`:
//!
//! * `lambda(alpha) = (n+1)/2 (1 - alpha/n) + i v`
//! * `gamma(alpha, v) = pi^{-lambda} / Gamma(1 - lambda)`
//! * physical form `gamma (1 - |x|^2)^{-lambda}` on the unit ball, valid for
//!   `0 < Re lambda < 1`
//! * spectral form `|xi|^{-nu} J_nu(2 pi |xi|)` with `nu = c alpha - 1/2`
//!
//! Dilations are mass preserving: `Omega_r(x) = r^{-n} Omega(x / r)`, so the
//! multiplier of `Omega_r` is `Omega_hat(r xi)`.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::specialfn::{
    bessel_j, bessel_main_term, bessel_remainder, reciprocal_gamma, reciprocal_gamma_complex, BesselOrder,
};

/// `lambda(alpha) = (n+1)/2 (1 - alpha/n) + i v`.
pub fn lambda_of(alpha: f64, n: u32, v: f64) -> Result<Complex64> {
    if n == 0 {
        return Err(domain("n", 0.0, "n >= 1"));
    }
    let nf = n as f64;
    if !(alpha > 0.0 && alpha < nf) {
        return Err(domain("alpha", alpha, "0 < alpha < n"));
    }
    if !v.is_finite() {
        return Err(domain("v", v, "finite"));
    }
    Ok(Complex64::new(0.5 * (nf + 1.0) * (1.0 - alpha / nf), v))
}

/// Kernel parameters `(alpha, n, v)`; derived quantities are recomputed on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    alpha: f64,
    n: u32,
    v: f64,
}

impl KernelSpec {
    pub fn new(alpha: f64, n: u32, v: f64) -> Result<Self> {
        lambda_of(alpha, n, v)?;
        Ok(Self { alpha, n, v })
    }

    /// Real-line member `v = 0`.
    pub fn real(alpha: f64, n: u32) -> Result<Self> {
        Self::new(alpha, n, 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn lambda(&self) -> Complex64 {
        let nf = self.n as f64;
        Complex64::new(0.5 * (nf + 1.0) * (1.0 - self.alpha / nf), self.v)
    }

    /// `(n+1)/(2n)`.
    pub fn cone_factor(&self) -> f64 {
        let nf = self.n as f64;
        (nf + 1.0) / (2.0 * nf)
    }

    /// Decay exponent of the multiplier, `((n+1)/(2n)) alpha`.
    pub fn decay_exponent(&self) -> f64 {
        self.cone_factor() * self.alpha
    }

    /// `n/2 - Re lambda = ((n+1)/(2n)) alpha - 1/2`, always `> -1/2`.
    pub fn bessel_order(&self) -> BesselOrder {
        // alpha > 0 keeps this strictly above -1/2
        BesselOrder::new(self.decay_exponent() - 0.5).expect("alpha > 0 gives nu > -1/2")
    }

    /// Exponent of the radial weight `|r|^{((n+1)/n) alpha - 1}` of the operator.
    pub fn radial_weight_exponent(&self) -> f64 {
        2.0 * self.decay_exponent() - 1.0
    }

    /// `gamma(alpha, v) = pi^{-lambda} / Gamma(1 - lambda)`.
    pub fn gamma_const(&self) -> Complex64 {
        gamma_const(self)
    }

    /// True when the physical form (compactly supported function) is valid.
    pub fn has_physical_form(&self) -> bool {
        let re = self.lambda().re;
        self.v == 0.0 && re > 0.0 && re < 1.0
    }

    fn require_real(&self) -> Result<()> {
        if self.v != 0.0 {
            Err(Error::UnsupportedImaginaryOffset(self.v))
        } else {
            Ok(())
        }
    }
}

/// `gamma(alpha, v) = pi^{-lambda} / Gamma(1 - lambda)`; vanishes at `lambda in {1, 2, ...}`.
pub fn gamma_const(spec: &KernelSpec) -> Complex64 {
    let lambda = spec.lambda();
    let pi_pow = (-lambda * libm::log(PI)).exp();
    if spec.v == 0.0 {
        Complex64::new(pi_pow.re * reciprocal_gamma(1.0 - lambda.re), 0.0)
    } else {
        pi_pow * reciprocal_gamma_complex(1.0 - lambda)
    }
}

/// Physical kernel `gamma (1 - |x|^2)^{-lambda}` inside the unit ball, 0 outside.
pub fn omega_physical(x_norm: f64, spec: &KernelSpec) -> Result<f64> {
    spec.require_real()?;
    let lambda = spec.lambda().re;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::PhysicalKernelInvalid(lambda));
    }
    if !(x_norm >= 0.0) {
        return Err(domain("|x|", x_norm, "|x| >= 0"));
    }
    if x_norm >= 1.0 {
        return Ok(0.0);
    }
    let g = gamma_const(spec).re;
    Ok(g * libm::pow(1.0 - x_norm * x_norm, -lambda))
}

/// Multiplier `|xi|^{-nu} J_nu(2 pi |xi|)`, with the limit `pi^nu / Gamma(nu + 1)` at 0.
pub fn omega_hat(xi_norm: f64, spec: &KernelSpec) -> Result<Complex64> {
    spec.require_real()?;
    Ok(Complex64::new(omega_hat_real(xi_norm, spec)?, 0.0))
}

/// Real-valued `omega_hat` for the `v = 0` member; the hot path of the grid code.
pub fn omega_hat_real(xi_norm: f64, spec: &KernelSpec) -> Result<f64> {
    spec.require_real()?;
    if !(xi_norm >= 0.0) || !xi_norm.is_finite() {
        return Err(domain("|xi|", xi_norm, "finite |xi| >= 0"));
    }
    let nu = spec.bessel_order();
    if xi_norm == 0.0 {
        return Ok(mass(spec));
    }
    let j = bessel_j(nu, 2.0 * PI * xi_norm)?;
    Ok(libm::pow(xi_norm, -nu.value()) * j)
}

/// Total mass `Omega_hat(0) = pi^nu / Gamma(nu + 1)`.
pub fn mass(spec: &KernelSpec) -> f64 {
    let nu = spec.bessel_order().value();
    libm::pow(PI, nu) * reciprocal_gamma(nu + 1.0)
}

/// Multiplier of the adjoint kernel `Omega~(x) = conj(Omega(-x))`, i.e. `conj(omega_hat)`.
pub fn omega_hat_adjoint(xi_norm: f64, spec: &KernelSpec) -> Result<Complex64> {
    Ok(omega_hat(xi_norm, spec)?.conj())
}

/// Multiplier of the mass-preserving dilate `Omega_r`: `omega_hat(r |xi|)`.
pub fn omega_hat_dilated(xi_norm: f64, r: f64, spec: &KernelSpec) -> Result<Complex64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain("r", r, "r > 0"));
    }
    omega_hat(r * xi_norm, spec)
}

/// Main/remainder split of the multiplier at `|xi| > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierSplit {
    /// Oscillatory main part `(1/pi) |xi|^{-c alpha} cos(2 pi |xi| - (pi/2) c alpha)`.
    pub main: Complex64,
    /// Remainder `|xi|^{-c alpha + 1/2} e(2 pi |xi|)`.
    pub error: Complex64,
}

pub fn multiplier_split(xi_norm: f64, spec: &KernelSpec) -> Result<MultiplierSplit> {
    spec.require_real()?;
    if !(xi_norm > 0.0) || !xi_norm.is_finite() {
        return Err(domain("|xi|", xi_norm, "finite |xi| > 0"));
    }
    let nu = spec.bessel_order();
    let rho = 2.0 * PI * xi_norm;
    let scale = libm::pow(xi_norm, -nu.value());
    let main = scale * bessel_main_term(nu, rho)?;
    let error = scale * bessel_remainder(nu, rho)?;
    Ok(MultiplierSplit { main: Complex64::new(main, 0.0), error: Complex64::new(error, 0.0) })
}
