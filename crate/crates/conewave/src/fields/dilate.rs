//! `f -> f(./delta)` on a periodic grid.
//!
//! `delta = 2^-m` remaps physical indices, `delta = 2^m` remaps spectral
//! indices, and other factors evaluate the band-limited interpolant through a
//! direct transform at the dilated frequencies. Every path first checks that
//! the dilated function still fits: spectral energy beyond `delta` times the
//! Nyquist frequency when shrinking, physical energy outside `L / (2 delta)`
//! when stretching.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::fft::{self, signed_index, strides};
use super::{Axis, Domain, Field, Sampled, SpacetimeField};
use crate::error::{Error, Result};

/// Largest tolerated fraction of the energy lost by a dilation.
pub const ALIAS_TOL: f64 = 1e-10;

pub fn dilate_field(f: &Field, delta: f64) -> Result<Field> {
    f.require(Domain::Physical)?;
    let samples = dilate(f.samples(), &f.axes(), delta)?;
    Field::new(f.grid(), samples, Domain::Physical)
}

/// Isotropic dilation in `(x, t)`.
pub fn dilate_spacetime(f: &SpacetimeField, delta: f64) -> Result<SpacetimeField> {
    f.require(Domain::Physical)?;
    let samples = dilate(f.samples(), &f.axes(), delta)?;
    Ok(f.with_samples(samples, Domain::Physical))
}

fn dilate(data: &[Complex64], axes: &[Axis], delta: f64) -> Result<Vec<Complex64>> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Dilation(delta));
    }
    if delta == 1.0 {
        return Ok(data.to_vec());
    }
    let dims: Vec<usize> = axes.iter().map(|a| a.points()).collect();
    let spacing: Vec<f64> = axes.iter().map(|a| a.spacing()).collect();
    let all: Vec<usize> = (0..axes.len()).collect();
    let mut spectrum = data.to_vec();
    fft::forward(&mut spectrum, &dims, &spacing, &all);

    let leaked = if delta < 1.0 {
        leaked_fraction(&spectrum, &dims, |a, k| {
            signed_index(k, dims[a]).unsigned_abs() as f64 > delta * (dims[a] / 2) as f64
        })
    } else {
        leaked_fraction(data, &dims, |a, i| axes[a].coordinate(i).abs() > 0.5 * axes[a].extent() / delta)
    };
    if leaked > ALIAS_TOL {
        return Err(Error::Aliasing { delta, leaked });
    }

    let m = delta.log2().round();
    if m.exp2() == delta {
        let factor = (1u64 << m.abs() as u32) as i64;
        if m < 0.0 {
            let maps: Vec<Vec<Option<usize>>> = dims
                .iter()
                .map(|&n| {
                    let c = (n / 2) as i64;
                    (0..n as i64)
                        .map(|i| {
                            let j = c + (i - c) * factor;
                            (0..n as i64).contains(&j).then_some(j as usize)
                        })
                        .collect()
                })
                .collect();
            return Ok(remap(data, &dims, &maps));
        }
        let maps: Vec<Vec<Option<usize>>> = dims
            .iter()
            .map(|&n| {
                (0..n)
                    .map(|k| {
                        let j = signed_index(k, n) * factor;
                        let half = (n / 2) as i64;
                        (-half..half).contains(&j).then_some(j.rem_euclid(n as i64) as usize)
                    })
                    .collect()
            })
            .collect();
        let scale = delta.powi(axes.len() as i32);
        let mut out = remap(&spectrum, &dims, &maps);
        out.iter_mut().for_each(|v| *v *= scale);
        fft::inverse(&mut out, &dims, &spacing, &all);
        return Ok(out);
    }

    let mut out = data.to_vec();
    for (a, axis) in axes.iter().enumerate() {
        out = dilated_transform_axis(&out, &dims, a, axis, delta);
    }
    fft::inverse(&mut out, &dims, &spacing, &all);
    Ok(out)
}

fn leaked_fraction<P>(data: &[Complex64], dims: &[usize], outside: P) -> f64
where
    P: Fn(usize, usize) -> bool + Sync,
{
    let st = strides(dims);
    let (leak, total) = data
        .par_iter()
        .enumerate()
        .map(|(idx, v)| {
            let e = v.norm_sqr();
            let out = (0..dims.len()).any(|a| outside(a, (idx / st[a]) % dims[a]));
            (if out { e } else { 0.0 }, e)
        })
        .reduce(|| (0.0, 0.0), |x, y| (x.0 + y.0, x.1 + y.1));
    if total == 0.0 {
        0.0
    } else {
        leak / total
    }
}

fn remap(data: &[Complex64], dims: &[usize], maps: &[Vec<Option<usize>>]) -> Vec<Complex64> {
    let st = strides(dims);
    (0..data.len())
        .into_par_iter()
        .map(|idx| {
            let mut src = 0;
            for a in 0..dims.len() {
                match maps[a][(idx / st[a]) % dims[a]] {
                    Some(j) => src += j * st[a],
                    None => return Complex64::new(0.0, 0.0),
                }
            }
            data[src]
        })
        .collect()
}

// Along axis `a`: out[k] = delta * h * sum_i in[i] e^{-2 pi i x_i delta xi_k}.
fn dilated_transform_axis(data: &[Complex64], dims: &[usize], a: usize, axis: &Axis, delta: f64) -> Vec<Complex64> {
    let n = dims[a];
    let stride: usize = dims[a + 1..].iter().product();
    let lines = data.len() / n;
    let line_start = |l: usize| (l / stride) * n * stride + l % stride;
    let mut gathered = vec![Complex64::new(0.0, 0.0); data.len()];
    for l in 0..lines {
        let s = line_start(l);
        for i in 0..n {
            gathered[l * n + i] = data[s + i * stride];
        }
    }
    let h = axis.spacing();
    // transposed result: row k holds slot k of every line
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let eta = delta * axis.frequency(k);
            if eta.abs() > axis.nyquist() {
                // the sampled transform is periodic; the true one is negligible here
                return vec![Complex64::new(0.0, 0.0); lines];
            }
            let phase: Vec<Complex64> =
                (0..n).map(|i| Complex64::from_polar(delta * h, -2.0 * PI * axis.coordinate(i) * eta)).collect();
            (0..lines).map(|l| gathered[l * n..(l + 1) * n].iter().zip(&phase).map(|(x, p)| x * p).sum()).collect()
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for (k, row) in rows.iter().enumerate() {
        for (l, v) in row.iter().enumerate() {
            out[line_start(l) + k * stride] = *v;
        }
    }
    out
}
