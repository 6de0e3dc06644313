//! Test-function families: closed-form dilation families on spacetime grids
//! and random compact bumps on the line.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Member;
use crate::fields::{Axis, Field, Grid, SpacetimeField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    Gaussian,
    /// Gaussian envelope times `cos(3 pi x_1)`.
    WavePacket,
    /// Smooth slab around the light cone `|x| = |t|` under a wide Gaussian.
    ConePlate,
}

impl Profile {
    pub const ALL: [Profile; 3] = [Profile::Gaussian, Profile::WavePacket, Profile::ConePlate];

    pub fn label(self) -> &'static str {
        match self {
            Profile::Gaussian => "gaussian",
            Profile::WavePacket => "wave-packet",
            Profile::ConePlate => "cone-plate",
        }
    }

    /// Profile at unit scale.
    pub fn eval(self, x: &[f64], t: f64) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        match self {
            Profile::Gaussian => (-PI * (r2 + t * t)).exp(),
            Profile::WavePacket => (-PI * (r2 + t * t)).exp() * (3.0 * PI * x[0]).cos(),
            Profile::ConePlate => {
                const WIDTH: f64 = 0.3;
                const REACH: f64 = 2.0;
                let soft = |v: f64| (v + 0.04).sqrt();
                let gap = (soft(r2) - soft(t * t)) / WIDTH;
                (-PI * gap * gap).exp() * (-PI * (r2 + t * t) / (REACH * REACH)).exp()
            }
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `z -> profile(z / delta)` sampled for each `delta`.
pub fn dilation_family(profile: Profile, space: Grid, time: Axis, dilations: &[f64]) -> Vec<Member<SpacetimeField>> {
    dilations
        .iter()
        .map(|&d| Member {
            label: format!("{profile}@{d}"),
            scale: d,
            field: SpacetimeField::from_real_fn(space, time, move |x, t| {
                let xs: Vec<f64> = x.iter().map(|v| v / d).collect();
                profile.eval(&xs, t / d)
            }),
        })
        .collect()
}

/// `(1 - s^2)^3` on `|s| < 1`.
pub fn bump(s: f64) -> f64 {
    if s.abs() < 1.0 {
        let v = 1.0 - s * s;
        v * v * v
    } else {
        0.0
    }
}

/// Sums of one to four bumps with random centres in `[-4, 4]`, widths in
/// `[0.25, 2]` and heights in `[0.1, 1]`.
pub fn random_bumps(grid: Grid, count: usize, seed: u64) -> Vec<Member<Field>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let k = rng.gen_range(1..=4);
            let parts: Vec<(f64, f64, f64)> =
                (0..k).map(|_| (rng.gen_range(-4.0..4.0), rng.gen_range(0.25..2.0), rng.gen_range(0.1..1.0))).collect();
            Member {
                label: format!("bumps-{i}"),
                scale: 1.0,
                field: Field::from_real_fn(grid, move |x| {
                    parts.iter().map(|&(c, w, h)| h * bump((x[0] - c) / w)).sum()
                }),
            }
        })
        .collect()
}

/// `eps^{-1/p} bump(u / eps)`, unit `L^p` scale, concentrating at the origin.
pub fn concentrating_bumps(grid: Grid, widths: &[f64], p: f64) -> Vec<Member<Field>> {
    widths
        .iter()
        .map(|&eps| Member {
            label: format!("concentrated@{eps}"),
            scale: eps,
            field: Field::from_real_fn(grid, move |x| eps.powf(-1.0 / p) * bump(x[0] / eps)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::lp_norm;
    use crate::fields::Sampled;

    #[test]
    fn families_are_dilations() {
        let g = Grid::new(1, 256, 16.0).unwrap();
        let t = Axis::new(256, 16.0).unwrap();
        for profile in Profile::ALL {
            let fam = dilation_family(profile, g, t, &[1.0, 2.0]);
            let (a, b) = (lp_norm(&fam[0].field, 2.0).unwrap(), lp_norm(&fam[1].field, 2.0).unwrap());
            // L^2 norm scales as delta^{(n+1)/2}
            assert!((b / a - 2.0).abs() < 1e-6, "{profile}: {}", b / a);
        }
    }

    #[test]
    fn bumps_are_seeded() {
        let g = Grid::new(1, 256, 16.0).unwrap();
        let a = random_bumps(g, 3, 7);
        let b = random_bumps(g, 3, 7);
        let c = random_bumps(g, 3, 8);
        assert_eq!(a[2].field, b[2].field);
        assert_ne!(a[0].field, c[0].field);
        assert!(a.iter().all(|m| m.field.samples().iter().all(|v| v.re >= 0.0)));
    }
}
