//! `|f * Omega_r * Omega~_s|_q` against
//! `r^{-c alpha} |r - s|^{-((n-1)/n) alpha} s^{-c alpha} |f|_{q'}`.

use conewave_core::kernel::{omega_hat, omega_hat_adjoint};
use conewave_core::KernelSpec;

use super::lp_norm;
use crate::error::{Error, Result};
use crate::fields::Field;

/// Ratio of the two sides. `r = s` is refused for `n > 1`, where the right
/// side is infinite; for `n = 1` the separation factor is identically 1.
pub fn crucial_estimate_ratio(spec: &KernelSpec, q: f64, r: f64, s: f64, f: &Field) -> Result<f64> {
    for v in [r, s] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Dilation(v));
        }
    }
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::NormExponent(q));
    }
    let n = spec.n() as f64;
    let sep_exp = (n - 1.0) / n * spec.alpha();
    if r == s && sep_exp != 0.0 {
        return Err(conewave_core::Error::Degenerate("r = s makes the right side infinite").into());
    }
    let out = f.apply_radial_multiplier(|xi| Ok(omega_hat(r * xi, spec)? * omega_hat_adjoint(s * xi, spec)?))?;
    let c = spec.decay_exponent();
    let sep = if sep_exp == 0.0 { 1.0 } else { (r - s).abs().powf(-sep_exp) };
    let rhs = r.powf(-c) * sep * s.powf(-c) * lp_norm(f, q / (q - 1.0))?;
    Ok(lp_norm(&out, q)? / rhs)
}
