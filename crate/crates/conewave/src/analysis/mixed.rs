//! `( int r^{alpha s} |f * Omega_r|_q^s dr/r )^{1/s}` over a radial rule.

use conewave_core::{KernelSpec, RadialQuadrature};
use rayon::prelude::*;
use serde::Serialize;

use super::lp_norm;
use crate::error::{Error, Result};
use crate::fields::{convolve_omega, Field};

#[derive(Debug, Clone, PartialEq)]
pub struct MixedNormSpec {
    q: f64,
    s: f64,
    quad: RadialQuadrature,
}

impl MixedNormSpec {
    /// Requires `s >= q >= 1`.
    pub fn new(q: f64, s: f64, quad: RadialQuadrature) -> Result<Self> {
        if !(q >= 1.0 && s >= q && s.is_finite()) {
            return Err(Error::Config(format!("mixed norm needs s >= q >= 1, got q = {q}, s = {s}")));
        }
        Ok(Self { q, s, quad })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn quadrature(&self) -> &RadialQuadrature {
        &self.quad
    }

    fn with_quadrature(&self, quad: RadialQuadrature) -> Self {
        Self { quad, ..self.clone() }
    }
}

pub fn mixed_norm(f: &Field, spec: &KernelSpec, mn: &MixedNormSpec) -> Result<f64> {
    let norms = mn
        .quad
        .nodes()
        .par_iter()
        .map(|&r| lp_norm(&convolve_omega(f, spec, r)?, mn.q))
        .collect::<Result<Vec<f64>>>()?;
    let w = mn.quad.weights(spec.alpha() * mn.s);
    let total: f64 = w.iter().zip(&norms).map(|(w, v)| w * v.powf(mn.s)).sum();
    Ok(total.powf(1.0 / mn.s))
}

/// Mixed norm at `M` and `2M - 1` nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedNormReport {
    pub value: f64,
    pub refined_value: f64,
    pub relative_change: f64,
    pub tolerance: f64,
    pub resolved: bool,
}

pub fn mixed_norm_checked(f: &Field, spec: &KernelSpec, mn: &MixedNormSpec, tolerance: f64) -> Result<MixedNormReport> {
    let value = mixed_norm(f, spec, mn)?;
    let refined_value = mixed_norm(f, spec, &mn.with_quadrature(mn.quad.refined()))?;
    let relative_change = if refined_value == 0.0 { 0.0 } else { ((value - refined_value) / refined_value).abs() };
    Ok(MixedNormReport { value, refined_value, relative_change, tolerance, resolved: relative_change <= tolerance })
}
