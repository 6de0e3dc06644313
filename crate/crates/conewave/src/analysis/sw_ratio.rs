//! Direct quadrature of the one-dimensional weighted fractional integral
//!
//! `g(x) = int f(u) |u|^{-delta} |x - u|^{a-1} du`,
//! `ratio = | |x|^{-gamma} g |_q / |f|_p`.
//!
//! `f` is the piecewise-linear interpolant of the samples' moduli. Inner and
//! outer integrals use Gauss-Legendre panels of width at most `panel_width`;
//! panels within one panel length of a singular point (`u = x`, `u = 0`, or
//! `x = 0` for the outer weight) are split there and graded dyadically over
//! `levels` levels. Past the near region the outer integral runs over
//! `far_doublings` geometric panels and closes with the analytic tail of
//! `C |x|^{a-1}`.
//!
//! Budget per ratio, with `k = nodes_per_panel`, `W` the support width and
//! `w` the panel width: about `k (2W/w + 3 levels + 2 far_doublings)` outer
//! nodes, each costing about `k (W/w + 4 levels)` inner evaluations.

use conewave_core::quadrature::{gauss_legendre, Rule};
use conewave_core::stein_weiss::SteinWeissParams;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lp_norm;
use crate::error::{Error, Result};
use crate::fields::{Domain, Field, Sampled};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteinWeissQuadrature {
    pub nodes_per_panel: usize,
    pub panel_width: f64,
    pub levels: u32,
    pub far_doublings: u32,
}

impl Default for SteinWeissQuadrature {
    fn default() -> Self {
        Self { nodes_per_panel: 12, panel_width: 0.25, levels: 16, far_doublings: 30 }
    }
}

impl SteinWeissQuadrature {
    fn validate(&self) -> Result<()> {
        if self.nodes_per_panel < 2 || !(self.panel_width > 0.0) || self.levels == 0 || self.far_doublings == 0 {
            return Err(Error::Config(format!("invalid Stein-Weiss quadrature {self:?}")));
        }
        Ok(())
    }
}

/// Ratio for admissible parameters; `Inadmissible` otherwise.
pub fn stein_weiss_ratio(params: &SteinWeissParams, f: &Field, quad: &SteinWeissQuadrature) -> Result<f64> {
    params.check()?;
    stein_weiss_ratio_unchecked(params, f, quad)
}

/// Same quadrature with no admissibility check, for probing violations.
/// Returns `+inf` when the outer tail diverges.
pub fn stein_weiss_ratio_unchecked(params: &SteinWeissParams, f: &Field, quad: &SteinWeissQuadrature) -> Result<f64> {
    quad.validate()?;
    f.require(Domain::Physical)?;
    if params.dim != 1 || f.grid().n() != 1 {
        return Err(Error::Unsupported("weighted fractional integral is implemented for N = 1".into()));
    }
    if !(params.p > 1.0 && params.q > 1.0 && params.q.is_finite()) {
        return Err(Error::NormExponent(params.p.min(params.q)));
    }
    let norm_in = lp_norm(f, params.p)?;
    if norm_in == 0.0 {
        return Ok(0.0);
    }
    let interp = Interp::new(f);
    let (lo, hi) = interp.support();
    let rule = gauss_legendre(quad.nodes_per_panel)?;
    let ctx = Ctx { interp: &interp, rule: &rule, params, levels: quad.levels };

    let inner_width = quad.panel_width.min((hi - lo) / 8.0);
    let mut cuts = vec![lo, hi];
    if params.delta_w != 0.0 && lo < 0.0 && 0.0 < hi {
        cuts.push(0.0);
    }
    let base = Base::new(&ctx, uniform_panels(&cuts, inner_width));

    // outer near region [-reach, reach] and geometric far panels
    let reach = 2.0 * lo.abs().max(hi.abs()).max(inner_width);
    let outer_width = quad.panel_width.min(reach / 16.0);
    let mut outer_cuts = vec![-reach, 0.0, reach];
    outer_cuts.extend([lo, hi].into_iter().filter(|v| v.abs() < reach));
    let mut outer = Vec::new();
    for p in uniform_panels(&outer_cuts, outer_width) {
        let sing: &[f64] = &[0.0];
        graded_pieces(p, sing, quad.levels, &mut outer);
    }
    let mut edge = reach;
    for _ in 0..quad.far_doublings {
        outer.push((edge, 2.0 * edge));
        outer.push((-2.0 * edge, -edge));
        edge *= 2.0;
    }
    let nodes: Vec<(f64, f64)> = outer
        .iter()
        .flat_map(|&(a, b)| {
            let m = rule.mapped(a, b);
            m.nodes.into_iter().zip(m.weights)
        })
        .collect();

    let gq = params.gamma_w * params.q;
    let terms = nodes
        .par_iter()
        .map(|&(x, w)| w * x.abs().powf(-gq) * ctx.inner(&base, x).powf(params.q))
        .collect::<Vec<f64>>();
    let mut total: f64 = terms.iter().sum();

    // analytic tail past `edge`, where g ~ C |x|^{a-1}
    let e = (params.a - 1.0 - params.gamma_w) * params.q;
    if e >= -1.0 {
        return Ok(f64::INFINITY);
    }
    for x in [edge, -edge] {
        let c = ctx.inner(&base, x) * edge.powf(1.0 - params.a);
        total += c.powf(params.q) * edge.powf(e + 1.0) / -(e + 1.0);
    }
    Ok(total.powf(1.0 / params.q) / norm_in)
}

struct Interp {
    x0: f64,
    h: f64,
    vals: Vec<f64>,
}

impl Interp {
    fn new(f: &Field) -> Self {
        let axis = f.grid().axis();
        Self { x0: axis.coordinate(0), h: axis.spacing(), vals: f.samples().iter().map(|v| v.norm()).collect() }
    }

    fn eval(&self, u: f64) -> f64 {
        let t = (u - self.x0) / self.h;
        if !(t >= 0.0) {
            return 0.0;
        }
        let i = t.floor() as usize;
        if i + 1 >= self.vals.len() {
            return if i + 1 == self.vals.len() && t == i as f64 { self.vals[i] } else { 0.0 };
        }
        let s = t - i as f64;
        self.vals[i] * (1.0 - s) + self.vals[i + 1] * s
    }

    fn support(&self) -> (f64, f64) {
        let first = self.vals.iter().position(|&v| v != 0.0).unwrap_or(0);
        let last = self.vals.iter().rposition(|&v| v != 0.0).unwrap_or(0);
        let lo = first.saturating_sub(1);
        let hi = (last + 1).min(self.vals.len() - 1);
        (self.x0 + lo as f64 * self.h, self.x0 + hi as f64 * self.h)
    }
}

fn uniform_panels(cuts: &[f64], width: f64) -> Vec<(f64, f64)> {
    let mut c = cuts.to_vec();
    c.sort_by(|a, b| a.total_cmp(b));
    c.dedup();
    let mut out = Vec::new();
    for w in c.windows(2) {
        let len = w[1] - w[0];
        if len <= 0.0 {
            continue;
        }
        let m = (len / width).ceil().max(1.0) as usize;
        for j in 0..m {
            let a = w[0] + len * j as f64 / m as f64;
            let b = if j + 1 == m { w[1] } else { w[0] + len * (j + 1) as f64 / m as f64 };
            out.push((a, b));
        }
    }
    out
}

/// Splits `(a, b)` at singular points inside it and grades each piece toward
/// any end lying within one piece length of a singular point.
fn graded_pieces((a, b): (f64, f64), sing: &[f64], levels: u32, out: &mut Vec<(f64, f64)>) {
    let mut cuts = vec![a, b];
    cuts.extend(sing.iter().copied().filter(|&s| s > a && s < b));
    cuts.sort_by(|x, y| x.total_cmp(y));
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let len = hi - lo;
        let near = |e: f64| sing.iter().any(|&s| (s - e).abs() < len);
        match (near(lo), near(hi)) {
            (false, false) => out.push((lo, hi)),
            (true, false) => toward(lo, hi, levels, out),
            (false, true) => toward(hi, lo, levels, out),
            (true, true) => {
                let mid = 0.5 * (lo + hi);
                toward(lo, mid, levels, out);
                toward(hi, mid, levels, out);
            }
        }
    }
}

/// Geometric panels from `far` down to `s`, halving each level.
fn toward(s: f64, far: f64, levels: u32, out: &mut Vec<(f64, f64)>) {
    let d = far - s;
    let mut scale = 1.0;
    for _ in 0..levels {
        let (p, q) = (s + 0.5 * scale * d, s + scale * d);
        out.push((p.min(q), p.max(q)));
        scale *= 0.5;
    }
    let p = s + scale * d;
    out.push((s.min(p), s.max(p)));
}

struct Ctx<'a> {
    interp: &'a Interp,
    rule: &'a Rule,
    params: &'a SteinWeissParams,
    levels: u32,
}

/// Inner panels with `f(u) |u|^{-delta} w` cached at their nodes.
struct Base {
    panels: Vec<(f64, f64)>,
    nodes: Vec<Vec<(f64, f64)>>,
}

impl Base {
    fn new(ctx: &Ctx, panels: Vec<(f64, f64)>) -> Self {
        let nodes = panels
            .iter()
            .map(|&(a, b)| {
                let m = ctx.rule.mapped(a, b);
                m.nodes.iter().zip(&m.weights).map(|(&u, &w)| (u, w * ctx.source(u))).collect()
            })
            .collect();
        Self { panels, nodes }
    }
}

impl Ctx<'_> {
    fn source(&self, u: f64) -> f64 {
        let f = self.interp.eval(u);
        if f == 0.0 || self.params.delta_w == 0.0 {
            f
        } else {
            f * u.abs().powf(-self.params.delta_w)
        }
    }

    fn inner(&self, base: &Base, x: f64) -> f64 {
        let am1 = self.params.a - 1.0;
        let has_origin = self.params.delta_w != 0.0;
        let mut total = 0.0;
        let mut pieces = Vec::new();
        for (&(a, b), cached) in base.panels.iter().zip(&base.nodes) {
            let len = b - a;
            let close = |s: f64| s > a - len && s < b + len;
            if close(x) || (has_origin && close(0.0)) {
                pieces.clear();
                let sing: &[f64] = if has_origin { &[x, 0.0] } else { &[x] };
                graded_pieces((a, b), sing, self.levels, &mut pieces);
                for &(p, q) in &pieces {
                    let m = self.rule.mapped(p, q);
                    for (&u, &w) in m.nodes.iter().zip(&m.weights) {
                        let d = (x - u).abs();
                        if d > 0.0 {
                            total += w * self.source(u) * d.powf(am1);
                        }
                    }
                }
            } else {
                total += cached.iter().map(|&(u, fw)| fw * (x - u).abs().powf(am1)).sum::<f64>();
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Grid;

    fn hls(p: f64) -> SteinWeissParams {
        let q = 1.0 / (1.0 / p - 0.5);
        SteinWeissParams { dim: 1, a: 0.5, gamma_w: 0.0, delta_w: 0.0, p, q }
    }

    fn bump(c: f64, w: f64) -> impl Fn(&[f64]) -> f64 {
        move |x| {
            let s = (x[0] - c) / w;
            if s.abs() < 1.0 {
                (1.0 - s * s).powi(3)
            } else {
                0.0
            }
        }
    }

    #[test]
    fn inner_integral_of_indicator() {
        // f = 1 on [-1, 1]: g(x) = (|x+1|^a sgn - |x-1|^a sgn) / a with a = 1/2
        let g = Grid::new(1, 1024, 8.0).unwrap();
        let f = Field::from_real_fn(g, |x| if x[0].abs() <= 1.0 { 1.0 } else { 0.0 });
        let params = hls(4.0 / 3.0);
        let interp = Interp::new(&f);
        let rule = gauss_legendre(12).unwrap();
        let ctx = Ctx { interp: &interp, rule: &rule, params: &params, levels: 30 };
        let base = Base::new(&ctx, uniform_panels(&[-1.0, 1.0], 0.25));
        for x in [0.0f64, 0.3, 0.999, 1.5, -4.0] {
            let want = if x.abs() < 1.0 {
                2.0 * ((1.0 + x).sqrt() + (1.0 - x).sqrt())
            } else {
                2.0 * ((x.abs() + 1.0).sqrt() - (x.abs() - 1.0).sqrt())
            };
            let got = ctx.inner(&base, x);
            assert!((got - want).abs() < 1e-6 * want, "{x}: {got} vs {want}");
        }
    }

    #[test]
    fn ratio_is_translation_and_scale_invariant() {
        let g = Grid::new(1, 2048, 32.0).unwrap();
        let params = hls(4.0 / 3.0);
        let quad = SteinWeissQuadrature::default();
        let r0 = stein_weiss_ratio(&params, &Field::from_real_fn(g, bump(0.0, 1.0)), &quad).unwrap();
        let r1 = stein_weiss_ratio(&params, &Field::from_real_fn(g, bump(3.0, 1.0)), &quad).unwrap();
        let r2 = stein_weiss_ratio(&params, &Field::from_real_fn(g, bump(0.0, 2.0)), &quad).unwrap();
        assert!(r0.is_finite() && r0 > 0.0);
        assert!((r1 - r0).abs() < 1e-3 * r0, "{r0} {r1}");
        assert!((r2 - r0).abs() < 1e-3 * r0, "{r0} {r2}");
    }

    #[test]
    fn refuses_inadmissible() {
        let g = Grid::new(1, 256, 16.0).unwrap();
        let f = Field::from_real_fn(g, bump(0.0, 1.0));
        let mut params = hls(4.0 / 3.0);
        params.gamma_w = 0.3;
        assert!(matches!(
            stein_weiss_ratio(&params, &f, &SteinWeissQuadrature::default()),
            Err(Error::Core(conewave_core::Error::Inadmissible(_)))
        ));
        assert!(stein_weiss_ratio_unchecked(&params, &f, &SteinWeissQuadrature::default()).is_ok());
    }
}
