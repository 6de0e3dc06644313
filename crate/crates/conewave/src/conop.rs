//! The fractional integral `I_alpha` on `R^{n+1}`:
//!
//! `I f(x, t) = int int f(x - u, t - r) Omega_|r|(u) |r|^{beta - 1} du dr`,
//! `beta = ((n+1)/n) alpha`, with `Omega_r` the mass-preserving dilate.
//!
//! Three routes share one radial rule on `r_min <= |r| <= r_max`:
//!
//! * slices: per node, convolve every time slice in `x`, then shift in `t`
//!   by `+-r_j` through a phase factor, and accumulate in node order;
//! * multiplier: tabulate `m(xi, tau) = sum_j w_j Omega_hat(r_j |xi|) 2 cos(2 pi r_j tau)`
//!   once and apply it on the full spacetime transform;
//! * cone-direct: the same outer rule, with the inner `du` integral taken from
//!   the physical kernel after `u = r s`, using Gauss–Jacobi nodes for
//!   `(1 - |s|^2)^{-lambda}` and translations applied as phases.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use conewave_core::kernel::{mass, omega_hat_real};
use conewave_core::quadrature::{gauss_jacobi, Rule};
use conewave_core::{KernelSpec, RadialQuadrature};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::fft;
use crate::fields::{key_lookup, relative_l2, Axis, Domain, Grid, Sampled, SpacetimeField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorPath {
    Slices,
    Multiplier,
    ConeDirect,
}

impl OperatorPath {
    pub fn label(self) -> &'static str {
        match self {
            OperatorPath::Slices => "slices",
            OperatorPath::Multiplier => "multiplier",
            OperatorPath::ConeDirect => "cone-direct",
        }
    }
}

impl fmt::Display for OperatorPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for OperatorPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "slices" => Ok(OperatorPath::Slices),
            "multiplier" => Ok(OperatorPath::Multiplier),
            "cone-direct" => Ok(OperatorPath::ConeDirect),
            other => Err(Error::Config(format!("unknown operator path {other:?}"))),
        }
    }
}

/// `r_min = 4 dt`, `r_max = L_t / 4`, 128 log-uniform nodes.
pub fn default_quadrature(time: Axis) -> Result<RadialQuadrature> {
    Ok(RadialQuadrature::log_uniform(4.0 * time.spacing(), 0.25 * time.extent(), 128)?)
}

/// Weights `w_j` for `|r|^{beta - 1} dr` on one sign of `r`.
fn radial_weights(spec: &KernelSpec, quad: &RadialQuadrature) -> Vec<f64> {
    quad.weights(2.0 * spec.cone_factor() * spec.alpha())
}

struct SpatialFrequencies {
    unique: Vec<f64>,
    slots: Vec<u32>,
}

impl SpatialFrequencies {
    fn of(space: Grid) -> Self {
        let (keys, slots) = key_lookup(&space.radial_keys());
        let l = space.extent();
        Self { unique: keys.iter().map(|&k| (k as f64).sqrt() / l).collect(), slots }
    }

    fn max(&self) -> f64 {
        self.unique.last().copied().unwrap_or(0.0)
    }
}

fn check_grid(f: &SpacetimeField, space: Grid, time: Axis) -> Result<()> {
    if f.space() != space || f.time() != time {
        return Err(Error::Shape("field and multiplier live on different grids".into()));
    }
    Ok(())
}

/// A real, `tau`-even spacetime multiplier table.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeMultiplier {
    space: Grid,
    time: Axis,
    values: Vec<f64>,
}

impl SpacetimeMultiplier {
    /// `m(xi, tau)` of the kernel-multiplier route.
    pub fn from_kernel(space: Grid, time: Axis, spec: &KernelSpec, quad: &RadialQuadrature) -> Result<Self> {
        let freqs = SpatialFrequencies::of(space);
        let w = radial_weights(spec, quad);
        let radial = quad
            .nodes()
            .par_iter()
            .zip(&w)
            .map(|(&r, &wj)| {
                freqs
                    .unique
                    .iter()
                    .map(|&xi| Ok(wj * omega_hat_real(r * xi, spec)?))
                    .collect::<conewave_core::Result<Vec<f64>>>()
            })
            .collect::<conewave_core::Result<Vec<_>>>()?;
        Ok(Self::assemble(space, time, &freqs, quad.nodes(), &radial))
    }

    /// `m(xi, tau)` with the inner integral taken from the physical cone kernel.
    pub fn from_cone(space: Grid, time: Axis, spec: &KernelSpec, quad: &RadialQuadrature) -> Result<Self> {
        if !spec.has_physical_form() {
            return Err(conewave_core::Error::PhysicalKernelInvalid(spec.lambda().re).into());
        }
        let freqs = SpatialFrequencies::of(space);
        let w = radial_weights(spec, quad);
        let g = spec.gamma_const().re;
        let lambda = spec.lambda().re;
        let xi_max = freqs.max();
        let n = space.n();
        if n > 2 {
            return Err(Error::Unsupported("cone-direct quadrature is implemented for n <= 2".into()));
        }
        // Gauss–Jacobi rules shared between nodes with the same size
        let mut sizes: Vec<usize> = quad.nodes().iter().map(|&r| jacobi_size(2.0 * PI * r * xi_max)).collect();
        sizes.sort_unstable();
        sizes.dedup();
        let (a, b) = if n == 1 { (-lambda, -lambda) } else { (-lambda, 0.0) };
        let rules: HashMap<usize, Rule> =
            sizes.par_iter().map(|&k| Ok((k, gauss_jacobi(k, a, b)?))).collect::<conewave_core::Result<_>>()?;
        let radial: Vec<Vec<f64>> = quad
            .nodes()
            .par_iter()
            .zip(&w)
            .map(|(&r, &wj)| {
                let omega = 2.0 * PI * r * xi_max;
                let rule = &rules[&jacobi_size(omega)];
                freqs.unique.iter().map(|&xi| wj * g * cone_inner(n, rule, r * xi, lambda, omega)).collect()
            })
            .collect();
        Ok(Self::assemble(space, time, &freqs, quad.nodes(), &radial))
    }

    // m[k_tau][u] = sum_j 2 cos(2 pi r_j tau_k) radial[j][u], summed in node order
    fn assemble(space: Grid, time: Axis, freqs: &SpatialFrequencies, nodes: &[f64], radial: &[Vec<f64>]) -> Self {
        let nt = time.points();
        let rows: Vec<Vec<f64>> = (0..nt)
            .into_par_iter()
            .map(|k| {
                let tau = time.frequency(k);
                let mut row = vec![0.0; freqs.unique.len()];
                for (r, a) in nodes.iter().zip(radial) {
                    let c = 2.0 * (2.0 * PI * r * tau).cos();
                    for (m, v) in row.iter_mut().zip(a) {
                        *m += c * v;
                    }
                }
                row
            })
            .collect();
        let slab = space.len();
        let mut values = vec![0.0; nt * slab];
        values.par_chunks_mut(slab).zip(rows.par_iter()).for_each(|(dst, row)| {
            for (d, &s) in dst.iter_mut().zip(&freqs.slots) {
                *d = row[s as usize];
            }
        });
        Self { space, time, values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The table as a spectral-domain field (for export).
    pub fn as_field(&self) -> SpacetimeField {
        let samples = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        SpacetimeField::new(self.space, self.time, samples, Domain::Spectral).expect("table matches its grid")
    }

    pub fn apply(&self, f: &SpacetimeField) -> Result<SpacetimeField> {
        check_grid(f, self.space, self.time)?;
        let mut s = f.fourier_transform()?;
        s.samples_mut().par_iter_mut().zip(self.values.par_iter()).for_each(|(v, &m)| *v *= m);
        s.inverse_fourier_transform()
    }
}

fn jacobi_size(omega: f64) -> usize {
    let k = (0.5 * omega + 2.0 * omega.cbrt() + 16.0).ceil() as usize;
    k.div_ceil(16) * 16
}

// int_{|s|<1} (1 - |s|^2)^{-lambda} cos(2 pi rho s_1) ds
fn cone_inner(n: u32, rule: &Rule, rho: f64, lambda: f64, omega: f64) -> f64 {
    if n == 1 {
        return rule.integrate(|s| (2.0 * PI * rho * s).cos());
    }
    // t = |s|^2 on [0, 1], trapezoid in the angle
    let angles = ((omega + 3.0 * omega.cbrt() + 24.0).ceil() as usize).div_ceil(8) * 8;
    let cosines: Vec<f64> = (0..angles).map(|m| (2.0 * PI * m as f64 / angles as f64).cos()).collect();
    let ring = |x: f64| {
        let radius = (0.5 * (1.0 + x)).max(0.0).sqrt();
        let z = 2.0 * PI * rho * radius;
        cosines.iter().map(|c| (z * c).cos()).sum::<f64>() * 2.0 * PI / angles as f64
    };
    2f64.powf(lambda - 2.0) * rule.integrate(ring)
}

/// Fourier transform of the physical kernel at `|xi|` by the cone-direct
/// Gauss–Jacobi rule (`n <= 2`, `0 < lambda < 1`).
pub fn kernel_transform(spec: &KernelSpec, xi: f64) -> Result<f64> {
    if !spec.has_physical_form() {
        return Err(conewave_core::Error::PhysicalKernelInvalid(spec.lambda().re).into());
    }
    let n = spec.n();
    if n > 2 {
        return Err(Error::Unsupported("cone-direct quadrature is implemented for n <= 2".into()));
    }
    let lambda = spec.lambda().re;
    let omega = 2.0 * PI * xi.abs();
    let (a, b) = if n == 1 { (-lambda, -lambda) } else { (-lambda, 0.0) };
    let rule = gauss_jacobi(jacobi_size(omega), a, b)?;
    Ok(spec.gamma_const().re * cone_inner(n, &rule, xi.abs(), lambda, omega))
}

pub fn apply_multiplier(f: &SpacetimeField, spec: &KernelSpec, quad: &RadialQuadrature) -> Result<SpacetimeField> {
    SpacetimeMultiplier::from_kernel(f.space(), f.time(), spec, quad)?.apply(f)
}

pub fn apply_cone_direct(f: &SpacetimeField, spec: &KernelSpec, quad: &RadialQuadrature) -> Result<SpacetimeField> {
    SpacetimeMultiplier::from_cone(f.space(), f.time(), spec, quad)?.apply(f)
}

/// Slice-by-slice route; node contributions are formed in parallel batches and
/// added in node order, so the result does not depend on the thread count.
pub fn apply_slices(f: &SpacetimeField, spec: &KernelSpec, quad: &RadialQuadrature) -> Result<SpacetimeField> {
    f.require(Domain::Physical)?;
    let dims = f.dims();
    let spacing = f.spacing();
    let space_axes: Vec<usize> = (1..dims.len()).collect();
    let freqs = SpatialFrequencies::of(f.space());
    let slab = f.space().len();
    let time = f.time();
    let w = radial_weights(spec, quad);

    let mut fx = f.samples().to_vec();
    fft::forward(&mut fx, &dims, &spacing, &space_axes);

    let mut acc = vec![Complex64::new(0.0, 0.0); fx.len()];
    let batch = rayon::current_num_threads().max(1);
    let nodes: Vec<(f64, f64)> = quad.nodes().iter().copied().zip(w).collect();
    for chunk in nodes.chunks(batch) {
        let parts = chunk
            .par_iter()
            .map(|&(r, wj)| -> Result<Vec<Complex64>> {
                let table = freqs
                    .unique
                    .iter()
                    .map(|&xi| omega_hat_real(r * xi, spec))
                    .collect::<conewave_core::Result<Vec<f64>>>()?;
                let mut h = fx.clone();
                h.par_chunks_mut(slab).for_each(|row| {
                    for (v, &s) in row.iter_mut().zip(&freqs.slots) {
                        *v *= table[s as usize];
                    }
                });
                fft::inverse(&mut h, &dims, &spacing, &space_axes);
                fft::forward(&mut h, &dims, &spacing, &[0]);
                h.par_chunks_mut(slab).enumerate().for_each(|(k, row)| {
                    let c = wj * 2.0 * (2.0 * PI * r * time.frequency(k)).cos();
                    row.iter_mut().for_each(|v| *v *= c);
                });
                fft::inverse(&mut h, &dims, &spacing, &[0]);
                Ok(h)
            })
            .collect::<Result<Vec<_>>>()?;
        for part in parts {
            acc.par_iter_mut().zip(part.par_iter()).for_each(|(a, p)| *a += p);
        }
    }
    Ok(f.with_samples(acc, Domain::Physical))
}

pub fn apply(
    path: OperatorPath,
    f: &SpacetimeField,
    spec: &KernelSpec,
    quad: &RadialQuadrature,
) -> Result<SpacetimeField> {
    match path {
        OperatorPath::Slices => apply_slices(f, spec, quad),
        OperatorPath::Multiplier => apply_multiplier(f, spec, quad),
        OperatorPath::ConeDirect => apply_cone_direct(f, spec, quad),
    }
}

/// Sensitivity of an operator application to the radial truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationReport {
    pub r_min: f64,
    pub r_max: f64,
    pub nodes: usize,
    /// `|part of I f from |r| < r_min|_2 / |I f|_2`, to leading order in `r_min`.
    pub r_min_tail_estimate: f64,
    /// Relative `L^2` change when `r_min` is halved.
    pub r_min_change: f64,
    /// Relative `L^2` change when `r_max` is doubled.
    pub r_max_change: f64,
    /// Relative `L^2` change under `M -> 2M - 1` nodes.
    pub refinement_change: f64,
    pub tolerance: f64,
    pub warnings: Vec<String>,
}

impl TruncationReport {
    pub fn resolved(&self) -> bool {
        self.warnings.is_empty()
    }
}

pub fn truncation_diagnostics(
    path: OperatorPath,
    f: &SpacetimeField,
    spec: &KernelSpec,
    quad: &RadialQuadrature,
    tolerance: f64,
) -> Result<TruncationReport> {
    let base = apply(path, f, spec, quad)?;
    let change =
        |q: RadialQuadrature| -> Result<f64> { Ok(relative_l2(apply(path, f, spec, &q)?.samples(), base.samples())) };
    let r_min_change = change(quad.with_range(0.5 * quad.r_min(), quad.r_max())?)?;
    let r_max_change = change(quad.with_range(quad.r_min(), 2.0 * quad.r_max())?)?;
    let refinement_change = change(quad.refined())?;

    let beta = 2.0 * spec.cone_factor() * spec.alpha();
    let l2 = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let out_norm = l2(base.samples());
    let r_min_tail_estimate = if out_norm == 0.0 {
        0.0
    } else {
        2.0 * mass(spec).abs() * quad.r_min().powf(beta) / beta * l2(f.samples()) / out_norm
    };

    let mut warnings = Vec::new();
    for (what, v) in [
        ("halving r_min", r_min_change),
        ("doubling r_max", r_max_change),
        ("doubling the node count", refinement_change),
    ] {
        if v > tolerance {
            warnings.push(format!("{what} changes the output by {v:.3e} (tolerance {tolerance:.1e})"));
        }
    }
    Ok(TruncationReport {
        r_min: quad.r_min(),
        r_max: quad.r_max(),
        nodes: quad.len(),
        r_min_tail_estimate,
        r_min_change,
        r_max_change,
        refinement_change,
        tolerance,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n_t: usize) -> (Grid, Axis, RadialQuadrature) {
        let space = Grid::new(1, 128, 32.0).unwrap();
        let time = Axis::new(n_t, 32.0).unwrap();
        let quad = RadialQuadrature::log_uniform(0.5, 8.0, 48).unwrap();
        (space, time, quad)
    }

    fn gaussian(space: Grid, time: Axis) -> SpacetimeField {
        SpacetimeField::from_real_fn(space, time, |x, t| (-PI * (x[0] * x[0] + t * t)).exp())
    }

    #[test]
    fn zero_maps_to_zero() {
        let (space, time, quad) = setup(64);
        let spec = KernelSpec::real(0.6, 1).unwrap();
        let z = SpacetimeField::zeros(space, time);
        for path in [OperatorPath::Slices, OperatorPath::Multiplier, OperatorPath::ConeDirect] {
            let out = apply(path, &z, &spec, &quad).unwrap();
            assert!(out.samples().iter().all(|v| v.norm() == 0.0));
        }
    }

    #[test]
    fn table_is_real_and_even_in_tau() {
        let (space, time, quad) = setup(64);
        let spec = KernelSpec::real(0.4, 1).unwrap();
        let m = SpacetimeMultiplier::from_kernel(space, time, &spec, &quad).unwrap();
        let slab = space.len();
        for k in 1..32 {
            let a = &m.values()[k * slab..(k + 1) * slab];
            let b = &m.values()[(64 - k) * slab..(65 - k) * slab];
            assert_eq!(a, b);
        }
    }

    #[test]
    fn paths_agree() {
        let (space, time, quad) = setup(64);
        let f = gaussian(space, time);
        let spec = KernelSpec::real(0.6, 1).unwrap();
        let s = apply_slices(&f, &spec, &quad).unwrap();
        let m = apply_multiplier(&f, &spec, &quad).unwrap();
        let c = apply_cone_direct(&f, &spec, &quad).unwrap();
        assert!(relative_l2(s.samples(), m.samples()) < 1e-12);
        assert!(relative_l2(c.samples(), s.samples()) < 1e-8);
        assert!(s.relative_imaginary() < 1e-12);
    }

    #[test]
    fn cone_direct_two_dimensions() {
        let space = Grid::new(2, 32, 16.0).unwrap();
        let time = Axis::new(32, 16.0).unwrap();
        let quad = RadialQuadrature::log_uniform(0.5, 4.0, 16).unwrap();
        let spec = KernelSpec::real(1.2, 2).unwrap();
        let f = SpacetimeField::from_real_fn(space, time, |x, t| (-PI * (x[0] * x[0] + x[1] * x[1] + t * t)).exp());
        let m = apply_multiplier(&f, &spec, &quad).unwrap();
        let c = apply_cone_direct(&f, &spec, &quad).unwrap();
        assert!(relative_l2(c.samples(), m.samples()) < 1e-8);
    }

    #[test]
    fn cone_direct_refuses_distributional_kernels() {
        let space = Grid::new(2, 16, 8.0).unwrap();
        let time = Axis::new(16, 8.0).unwrap();
        let quad = RadialQuadrature::log_uniform(0.5, 2.0, 8).unwrap();
        let spec = KernelSpec::real(0.5, 2).unwrap();
        let f = SpacetimeField::zeros(space, time);
        assert!(matches!(
            apply_cone_direct(&f, &spec, &quad),
            Err(Error::Core(conewave_core::Error::PhysicalKernelInvalid(_)))
        ));
    }

    #[test]
    fn delta_input_lands_on_the_cone() {
        // a spacetime delta spreads over |x| < |t| only
        let (space, time, quad) = setup(128);
        let spec = KernelSpec::real(0.6, 1).unwrap();
        let mut f = SpacetimeField::zeros(space, time);
        let center = 64 * space.len() + 64;
        f.samples_mut()[center] = Complex64::new(1.0, 0.0);
        let out = apply_multiplier(&f, &spec, &quad).unwrap();
        let peak = out.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut outside = 0.0_f64;
        for (idx, v) in out.samples().iter().enumerate() {
            let t = time.coordinate(idx / space.len());
            let x = space.axis().coordinate(idx % space.len());
            if x.abs() > t.abs() + 3.0 {
                outside = outside.max(v.norm());
            }
        }
        assert!(outside < 0.05 * peak, "{outside} vs {peak}");
    }

    #[test]
    fn path_names_round_trip() {
        for p in [OperatorPath::Slices, OperatorPath::Multiplier, OperatorPath::ConeDirect] {
            assert_eq!(p.label().parse::<OperatorPath>().unwrap(), p);
        }
        assert!("direct".parse::<OperatorPath>().is_err());
    }
}
