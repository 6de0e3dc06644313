//! N-dimensional FFT passes over row-major arrays, plus the continuum
//! normalization that turns a DFT into samples of `int f(x) e^{-2 pi i x xi} dx`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

type Plans = Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>;

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Plans> = OnceLock::new();
    let plans = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (len, direction == FftDirection::Forward);
    let mut guard = plans.lock().expect("fft plan cache poisoned");
    guard.entry(key).or_insert_with(|| FftPlanner::new().plan_fft(len, direction)).clone()
}

/// Unnormalized in-place DFT along one axis.
pub(crate) fn dft_axis(data: &mut [Complex64], dims: &[usize], axis: usize, direction: FftDirection) {
    let len = dims[axis];
    let stride: usize = dims[axis + 1..].iter().product();
    let fft = plan(len, direction);
    let scratch_len = fft.get_inplace_scratch_len();
    let zero = Complex64::new(0.0, 0.0);
    if stride == 1 {
        data.par_chunks_mut(len)
            .for_each_init(|| vec![zero; scratch_len], |scratch, line| fft.process_with_scratch(line, scratch));
        return;
    }
    // gather a few columns at a time to keep the strided reads cache friendly
    const BATCH: usize = 16;
    data.par_chunks_mut(len * stride).for_each(|chunk| {
        let mut lines = vec![zero; len * BATCH];
        let mut scratch = vec![zero; scratch_len];
        let mut inner = 0;
        while inner < stride {
            let width = BATCH.min(stride - inner);
            for i in 0..len {
                let row = &chunk[i * stride + inner..i * stride + inner + width];
                for (b, v) in row.iter().enumerate() {
                    lines[b * len + i] = *v;
                }
            }
            for b in 0..width {
                fft.process_with_scratch(&mut lines[b * len..(b + 1) * len], &mut scratch);
            }
            for i in 0..len {
                let row = &mut chunk[i * stride + inner..i * stride + inner + width];
                for (b, v) in row.iter_mut().enumerate() {
                    *v = lines[b * len + i];
                }
            }
            inner += width;
        }
    });
}

/// Multiplies every sample by `(-1)^{sum of indices along the chosen axes}`.
pub(crate) fn checkerboard(data: &mut [Complex64], dims: &[usize], axes: &[usize]) {
    let strides = strides(dims);
    data.par_iter_mut().enumerate().for_each(|(idx, v)| {
        let parity: usize = axes.iter().map(|&a| (idx / strides[a]) % dims[a]).sum();
        if parity % 2 == 1 {
            *v = -*v;
        }
    });
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for a in (0..dims.len().saturating_sub(1)).rev() {
        s[a] = s[a + 1] * dims[a + 1];
    }
    s
}

/// Continuum forward transform along `axes`; `spacing[a]` is the sample spacing of axis `a`.
pub(crate) fn forward(data: &mut [Complex64], dims: &[usize], spacing: &[f64], axes: &[usize]) {
    for &a in axes {
        dft_axis(data, dims, a, FftDirection::Forward);
    }
    checkerboard(data, dims, axes);
    let scale: f64 = axes.iter().map(|&a| spacing[a]).product();
    data.par_iter_mut().for_each(|v| *v *= scale);
}

/// Inverse of [`forward`] along the same axes.
pub(crate) fn inverse(data: &mut [Complex64], dims: &[usize], spacing: &[f64], axes: &[usize]) {
    checkerboard(data, dims, axes);
    for &a in axes {
        dft_axis(data, dims, a, FftDirection::Inverse);
    }
    let extent: f64 = axes.iter().map(|&a| spacing[a] * dims[a] as f64).product();
    data.par_iter_mut().for_each(|v| *v /= extent);
}

/// Signed frequency index of FFT slot `k` on an axis of `len` points.
pub(crate) fn signed_index(k: usize, len: usize) -> i64 {
    if k < len / 2 {
        k as i64
    } else {
        k as i64 - len as i64
    }
}
