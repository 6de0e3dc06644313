//! Sampled functions on `R^n` and `R^{n+1}`.
//!
//! Every axis is a periodic grid `x_i = -L/2 + i L/N`, `i = 0..N`, with `N` a
//! power of two. Spectral samples are stored in FFT order at frequencies
//! `k/L` and approximate the continuum transform `int f(x) e^{-2 pi i x xi} dx`.
//! Spacetime arrays put `t` on the outermost axis.

mod dilate;
pub(crate) mod fft;
pub mod io;

use conewave_core::kernel::omega_hat_real;
use conewave_core::KernelSpec;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dilate::{dilate_field, dilate_spacetime, ALIAS_TOL};

/// One periodic axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    points: usize,
    extent: f64,
}

impl Axis {
    pub fn new(points: usize, extent: f64) -> Result<Self> {
        if points < 2 || !points.is_power_of_two() {
            return Err(Error::Shape(format!("axis length {points} is not a power of two >= 2")));
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(Error::Shape(format!("axis extent {extent} must be positive")));
        }
        Ok(Self { points, extent })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn spacing(&self) -> f64 {
        self.extent / self.points as f64
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 * self.extent + i as f64 * self.spacing()
    }

    /// Frequency of FFT slot `k`.
    pub fn frequency(&self, k: usize) -> f64 {
        fft::signed_index(k, self.points) as f64 / self.extent
    }

    pub fn nyquist(&self) -> f64 {
        self.points as f64 / (2.0 * self.extent)
    }

    /// Same extent, twice the points.
    pub fn refined(&self) -> Self {
        Self { points: 2 * self.points, extent: self.extent }
    }
}

/// Cube `[-L/2, L/2)^n` with `N` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: u32,
    axis: Axis,
}

impl Grid {
    pub fn new(n: u32, points: usize, extent: f64) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::Shape(format!("dimension {n} not in 1..=3")));
        }
        Ok(Self { n, axis: Axis::new(points, extent)? })
    }

    /// Default resolution per dimension: `(4096, 64)`, `(256, 32)`, `(64, 16)`.
    pub fn default_for(n: u32) -> Result<Self> {
        match n {
            1 => Self::new(1, 4096, 64.0),
            2 => Self::new(2, 256, 32.0),
            3 => Self::new(3, 64, 16.0),
            _ => Err(Error::Shape(format!("dimension {n} not in 1..=3"))),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn points(&self) -> usize {
        self.axis.points
    }

    pub fn extent(&self) -> f64 {
        self.axis.extent
    }

    pub fn spacing(&self) -> f64 {
        self.axis.spacing()
    }

    pub fn frequency_spacing(&self) -> f64 {
        1.0 / self.axis.extent
    }

    pub fn nyquist(&self) -> f64 {
        self.axis.nyquist()
    }

    pub fn len(&self) -> usize {
        self.points().pow(self.n)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.n as i32)
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![self.points(); self.n as usize]
    }

    pub fn refined(&self) -> Self {
        Self { n: self.n, axis: self.axis.refined() }
    }

    /// Squared integer wavenumber `|k|^2` of every spectral slot, FFT order.
    pub(crate) fn radial_keys(&self) -> Vec<u64> {
        let n = self.points();
        let mut keys = vec![0u64; self.len()];
        keys.iter_mut().enumerate().for_each(|(idx, key)| {
            let mut rest = idx;
            let mut sum = 0u64;
            for _ in 0..self.n {
                let k = fft::signed_index(rest % n, n);
                sum += (k * k) as u64;
                rest /= n;
            }
            *key = sum;
        });
        keys
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Physical,
    Spectral,
}

/// Anything stored as samples on a product of periodic axes.
pub trait Sampled {
    fn samples(&self) -> &[Complex64];
    fn domain(&self) -> Domain;
    /// Axes, outermost first.
    fn axes(&self) -> Vec<Axis>;

    fn dims(&self) -> Vec<usize> {
        self.axes().iter().map(|a| a.points()).collect()
    }

    /// Physical cell volume.
    fn cell_volume(&self) -> f64 {
        self.axes().iter().map(|a| a.spacing()).product()
    }

    fn require(&self, domain: Domain) -> Result<()> {
        if self.domain() == domain {
            Ok(())
        } else {
            Err(Error::DomainMismatch { expected: domain, found: self.domain() })
        }
    }

    /// Largest `|Im f|` relative to the largest `|f|`.
    fn relative_imaginary(&self) -> f64 {
        let (mut im, mut all) = (0.0_f64, 0.0_f64);
        for v in self.samples() {
            im = im.max(v.im.abs());
            all = all.max(v.norm());
        }
        if all == 0.0 {
            0.0
        } else {
            im / all
        }
    }
}

/// Unique keys in ascending order and, per sample, the slot of its key.
pub(crate) fn key_lookup(keys: &[u64]) -> (Vec<u64>, Vec<u32>) {
    let mut unique = keys.to_vec();
    unique.sort_unstable();
    unique.dedup();
    let slots = keys.iter().map(|k| unique.binary_search(k).expect("key present") as u32).collect();
    (unique, slots)
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Shape(format!("expected {expected} samples, got {got}")))
    }
}

fn coordinates(axes: &[Axis], mut idx: usize, out: &mut [f64]) {
    for a in (0..axes.len()).rev() {
        let n = axes[a].points();
        out[a] = axes[a].coordinate(idx % n);
        idx /= n;
    }
}

/// A sampled function on the grid cube of `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    samples: Vec<Complex64>,
    domain: Domain,
}

impl Sampled for Field {
    fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    fn domain(&self) -> Domain {
        self.domain
    }

    fn axes(&self) -> Vec<Axis> {
        vec![self.grid.axis; self.grid.n as usize]
    }
}

impl Field {
    pub fn new(grid: Grid, samples: Vec<Complex64>, domain: Domain) -> Result<Self> {
        check_len(grid.len(), samples.len())?;
        Ok(Self { grid, samples, domain })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, samples: vec![Complex64::new(0.0, 0.0); grid.len()], domain: Domain::Physical }
    }

    /// Physical samples of `f(x)`; `x` has `n` coordinates.
    pub fn from_fn<F>(grid: Grid, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let axes = vec![grid.axis; grid.n as usize];
        let samples = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let mut x = [0.0; 3];
                coordinates(&axes, idx, &mut x[..axes.len()]);
                f(&x[..axes.len()])
            })
            .collect();
        Self { grid, samples, domain: Domain::Physical }
    }

    pub fn from_real_fn<F>(grid: Grid, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    fn spacing(&self) -> Vec<f64> {
        vec![self.grid.spacing(); self.grid.n as usize]
    }

    fn all_axes(&self) -> Vec<usize> {
        (0..self.grid.n as usize).collect()
    }

    pub fn fourier_transform(&self) -> Result<Field> {
        self.require(Domain::Physical)?;
        let mut out = self.samples.clone();
        fft::forward(&mut out, &self.grid.dims(), &self.spacing(), &self.all_axes());
        Ok(Self { grid: self.grid, samples: out, domain: Domain::Spectral })
    }

    pub fn inverse_fourier_transform(&self) -> Result<Field> {
        self.require(Domain::Spectral)?;
        let mut out = self.samples.clone();
        fft::inverse(&mut out, &self.grid.dims(), &self.spacing(), &self.all_axes());
        Ok(Self { grid: self.grid, samples: out, domain: Domain::Physical })
    }

    /// `|xi|` at every spectral slot.
    pub fn frequency_norms(&self) -> Vec<f64> {
        let l = self.grid.extent();
        self.grid.radial_keys().iter().map(|&k| (k as f64).sqrt() / l).collect()
    }

    /// Applies a radial multiplier `m(|xi|)`; physical in, physical out.
    pub fn apply_radial_multiplier<M>(&self, m: M) -> Result<Field>
    where
        M: Fn(f64) -> conewave_core::Result<Complex64> + Sync,
    {
        let mut spec = self.fourier_transform()?;
        let (unique, slots) = key_lookup(&self.grid.radial_keys());
        let l = self.grid.extent();
        let table = unique.par_iter().map(|&k| m((k as f64).sqrt() / l)).collect::<conewave_core::Result<Vec<_>>>()?;
        spec.samples.par_iter_mut().zip(slots.par_iter()).for_each(|(v, &s)| *v *= table[s as usize]);
        spec.inverse_fourier_transform()
    }

    pub fn scaled(&self, c: f64) -> Field {
        Self { grid: self.grid, samples: self.samples.iter().map(|v| v * c).collect(), domain: self.domain }
    }

    /// `a self + b other`.
    pub fn combine(&self, a: f64, other: &Field, b: f64) -> Result<Field> {
        if self.grid != other.grid || self.domain != other.domain {
            return Err(Error::Shape("fields live on different grids".into()));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(x, y)| x * a + y * b).collect();
        Ok(Self { grid: self.grid, samples, domain: self.domain })
    }

    /// Real parts along the first axis through the grid center (1-D slice).
    pub fn center_slice(&self) -> Vec<(f64, Complex64)> {
        let n = self.grid.points();
        let stride = n.pow(self.grid.n - 1);
        let center = (0..self.grid.n - 1).fold(0, |acc, _| acc * n + n / 2);
        (0..n).map(|i| (self.grid.axis.coordinate(i), self.samples[i * stride + center])).collect()
    }
}

/// `f * Omega_r`, computed as the inverse transform of `f_hat(xi) Omega_hat(r |xi|)`.
pub fn convolve_omega(f: &Field, spec: &KernelSpec, r: f64) -> Result<Field> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Dilation(r));
    }
    f.require(Domain::Physical)?;
    f.apply_radial_multiplier(|xi| Ok(Complex64::new(omega_hat_real(r * xi, spec)?, 0.0)))
}

/// A sampled function on `R^{n+1}`, time outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeField {
    space: Grid,
    time: Axis,
    samples: Vec<Complex64>,
    domain: Domain,
}

impl Sampled for SpacetimeField {
    fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    fn domain(&self) -> Domain {
        self.domain
    }

    fn axes(&self) -> Vec<Axis> {
        let mut v = vec![self.time];
        v.extend(std::iter::repeat_n(self.space.axis, self.space.n as usize));
        v
    }
}

impl SpacetimeField {
    pub fn new(space: Grid, time: Axis, samples: Vec<Complex64>, domain: Domain) -> Result<Self> {
        check_len(space.len() * time.points(), samples.len())?;
        Ok(Self { space, time, samples, domain })
    }

    pub fn zeros(space: Grid, time: Axis) -> Self {
        Self {
            space,
            time,
            samples: vec![Complex64::new(0.0, 0.0); space.len() * time.points()],
            domain: Domain::Physical,
        }
    }

    /// Physical samples of `f(x, t)`.
    pub fn from_fn<F>(space: Grid, time: Axis, f: F) -> Self
    where
        F: Fn(&[f64], f64) -> Complex64 + Sync,
    {
        let mut axes = vec![time];
        axes.extend(std::iter::repeat_n(space.axis, space.n as usize));
        let samples = (0..space.len() * time.points())
            .into_par_iter()
            .map(|idx| {
                let mut c = [0.0; 4];
                let d = axes.len();
                coordinates(&axes, idx, &mut c[..d]);
                f(&c[1..d], c[0])
            })
            .collect();
        Self { space, time, samples, domain: Domain::Physical }
    }

    pub fn from_real_fn<F>(space: Grid, time: Axis, f: F) -> Self
    where
        F: Fn(&[f64], f64) -> f64 + Sync,
    {
        Self::from_fn(space, time, |x, t| Complex64::new(f(x, t), 0.0))
    }

    pub fn space(&self) -> Grid {
        self.space
    }

    pub fn time(&self) -> Axis {
        self.time
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub(crate) fn spacing(&self) -> Vec<f64> {
        self.axes().iter().map(|a| a.spacing()).collect()
    }

    pub fn fourier_transform(&self) -> Result<SpacetimeField> {
        self.require(Domain::Physical)?;
        let mut out = self.samples.clone();
        let axes: Vec<usize> = (0..=self.space.n as usize).collect();
        fft::forward(&mut out, &self.dims(), &self.spacing(), &axes);
        Ok(self.with_samples(out, Domain::Spectral))
    }

    pub fn inverse_fourier_transform(&self) -> Result<SpacetimeField> {
        self.require(Domain::Spectral)?;
        let mut out = self.samples.clone();
        let axes: Vec<usize> = (0..=self.space.n as usize).collect();
        fft::inverse(&mut out, &self.dims(), &self.spacing(), &axes);
        Ok(self.with_samples(out, Domain::Physical))
    }

    pub(crate) fn with_samples(&self, samples: Vec<Complex64>, domain: Domain) -> SpacetimeField {
        Self { space: self.space, time: self.time, samples, domain }
    }

    pub fn scaled(&self, c: f64) -> SpacetimeField {
        self.with_samples(self.samples.iter().map(|v| v * c).collect(), self.domain)
    }

    /// `a self + b other`.
    pub fn combine(&self, a: f64, other: &SpacetimeField, b: f64) -> Result<SpacetimeField> {
        if self.space != other.space || self.time != other.time || self.domain != other.domain {
            return Err(Error::Shape("fields live on different grids".into()));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(x, y)| x * a + y * b).collect();
        Ok(self.with_samples(samples, self.domain))
    }

    /// Values along `x_1` at `t = 0` and the other spatial coordinates 0.
    pub fn center_slice(&self) -> Vec<(f64, Complex64)> {
        let n = self.space.points();
        let stride = n.pow(self.space.n - 1);
        let center_x = (0..self.space.n - 1).fold(0, |acc, _| acc * n + n / 2);
        let t0 = self.time.points() / 2 * self.space.len();
        (0..n).map(|i| (self.space.axis.coordinate(i), self.samples[t0 + i * stride + center_x])).collect()
    }
}

/// Relative `l^2` distance `|a - b| / |b|` between sample vectors.
pub fn relative_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}
