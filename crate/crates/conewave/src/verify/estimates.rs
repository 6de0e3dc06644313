use std::f64::consts::PI;

use conewave_core::specialfn::gamma_fn;
use conewave_core::stein_weiss::{Constraint, SteinWeissParams};
use conewave_core::{KernelSpec, RadialQuadrature};
use rayon::prelude::*;

use crate::analysis::ensembles::{concentrating_bumps, random_bumps};
use crate::analysis::{
    crucial_estimate_ratio, log_slope, lp_norm, mixed_norm_checked, stein_weiss_ratio, stein_weiss_ratio_unchecked,
    MixedNormSpec, RatioStats,
};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::fields::{Field, Grid};
use crate::report::{Outcome, Record};

/// Sharp constant of `| |x|^{-lam} * f |_{p'} <= C |f|_p` with `p = 2N/(2N - lam)`.
pub fn lieb_constant(dim: u32, lam: f64) -> Result<f64> {
    let n = dim as f64;
    Ok(PI.powf(lam / 2.0) * gamma_fn(n / 2.0 - lam / 2.0)? / gamma_fn(n - lam / 2.0)?
        * (gamma_fn(n / 2.0)? / gamma_fn(n)?).powf(-1.0 + lam / n))
}

pub struct TruthRow {
    pub label: &'static str,
    pub params: SteinWeissParams,
    pub expected: Vec<Constraint>,
}

fn sw(dim: u32, a: f64, gamma_w: f64, delta_w: f64, p: f64, q: f64) -> SteinWeissParams {
    SteinWeissParams { dim, a, gamma_w, delta_w, p, q }
}

/// Parameter sets with their violated constraints worked out by hand.
pub fn truth_table() -> Vec<TruthRow> {
    use Constraint::*;
    let row = |label, params, expected: &[Constraint]| TruthRow { label, params, expected: expected.to_vec() };
    vec![
        row("hls", sw(1, 0.5, 0.0, 0.0, 4.0 / 3.0, 4.0), &[]),
        row("p above q", sw(1, 0.5, 0.5, 0.25, 2.0, 4.0 / 3.0), &[ExponentRange]),
        row("zero order", sw(1, 0.0, 0.0, 0.0, 2.0, 2.0), &[KernelOrder]),
        row("output weight at N/q", sw(1, 0.5, 0.25, 0.0, 2.0, 4.0), &[OutputWeight]),
        row("input weight at N/p'", sw(1, 0.75, 0.0, 0.25, 4.0 / 3.0, 4.0), &[InputWeight]),
        row("negative weight sum", sw(1, 0.4, -0.1, 0.0, 4.0 / 3.0, 4.0), &[WeightSum]),
        row("off scaling", sw(1, 0.6, 0.0, 0.0, 4.0 / 3.0, 4.0), &[Scaling]),
        row("closing step n=2 alpha=1/2", sw(1, 0.75, 0.125, 0.125, 4.0 / 3.0, 4.0), &[]),
        row(
            "closing step n=1 alpha=0.4",
            sw(1, 1.0, 0.1, 0.1, 10.0 / 9.0, 10.0),
            &[KernelOrder, OutputWeight, InputWeight],
        ),
        row("printed order n=2 alpha=1/2", sw(1, 0.25, 0.125, 0.125, 4.0 / 3.0, 4.0), &[Scaling]),
        row("three dimensions", sw(3, 1.0, 0.2, 0.3, 2.0, 3.0), &[]),
        row("two-dimensional hls", sw(2, 2.0 / 3.0, 0.0, 0.0, 1.5, 3.0), &[]),
        row("q infinite", sw(1, 0.5, 0.0, 0.0, 2.0, f64::INFINITY), &[ExponentRange, OutputWeight]),
        row("p = 1", sw(1, 0.5, 0.0, 0.0, 1.0, 2.0), &[ExponentRange, InputWeight]),
        row("both weights", sw(1, 0.4, 0.2, 0.2, 2.0, 2.0), &[]),
        row("negative input weight", sw(1, 0.2, 0.3, -0.1, 2.0, 2.0), &[]),
        row("negative order", sw(1, -0.1, 0.2, -0.3, 2.0, 2.0), &[KernelOrder, WeightSum]),
        row(
            "everything wrong",
            sw(1, 2.0, 5.0, 5.0, 0.5, 0.25),
            &[ExponentRange, KernelOrder, OutputWeight, InputWeight, Scaling],
        ),
        row("output weight above N/q", sw(1, 0.5, 0.3, 0.0, 4.0 / 3.0, 4.0), &[OutputWeight, Scaling]),
        row("two-dimensional weights", sw(2, 1.85, 0.4, 0.45, 4.0 / 3.0, 4.0), &[]),
    ]
}

fn hls() -> SteinWeissParams {
    sw(1, 0.5, 0.0, 0.0, 4.0 / 3.0, 4.0)
}

pub(super) fn stein_weiss(cfg: &ExperimentConfig) -> Result<Outcome> {
    let c = &cfg.stein_weiss;
    let tol = &cfg.tolerances;
    let mut out = Outcome::default();

    for row in truth_table() {
        let got = row.params.violations();
        let ok = got == row.expected;
        out.push(Record::new("admissibility", row.label, got.len() as f64, "exact").with_pass(ok));
    }

    let params = hls();
    let grid = Grid::new(1, c.points, c.extent)?;
    let prov = format!("grid N={} L={}, {:?}", c.points, c.extent, c.quadrature);
    let family = random_bumps(grid, c.random_count, cfg.seed);
    let ratios =
        family.par_iter().map(|m| stein_weiss_ratio(&params, &m.field, &c.quadrature)).collect::<Result<Vec<f64>>>()?;
    let labels = family.iter().map(|m| m.label.clone()).collect();
    let half = RatioStats::from_ratios(Vec::new(), Vec::new(), ratios[..ratios.len().div_ceil(2)].to_vec())?;
    let stats = RatioStats::from_ratios(labels, vec![1.0; ratios.len()], ratios)?;
    for (k, s) in [(half.ratios.len(), &half), (stats.ratios.len(), &stats)] {
        out.push(Record::at_most(
            "hls-max-over-median",
            format!("{k} random bump sums"),
            s.max / s.median,
            tol.median_factor,
            prov.clone(),
        ));
    }
    let sharp = lieb_constant(1, 1.0 - params.a)?;
    out.push(Record::at_most("hls-below-sharp-constant", "max ratio", stats.max, sharp * (1.0 + 1e-3), prov.clone()));

    let closing = SteinWeissParams::from_crucial_estimate(0.5, 2)?;
    let r = stein_weiss_ratio(&closing, &family[0].field, &c.quadrature)?;
    out.push(Record::new("closing-step-ratio", "n=2 alpha=0.5", r, prov.clone()));
    out.note(format!(
        "closing-step kernel order uses a = 2 (alpha/n + gamma) = {}; the printed 2 (alpha/n - gamma) = {} breaks scaling",
        closing.a,
        SteinWeissParams::printed_kernel_order(0.5, 2)
    ));
    out.note(
        "for n = 1 the closing-step parameters are degenerate (gamma = 1/q, a = N) and are not probed numerically",
    );

    // gamma pushed past N/q with the kernel order held fixed
    let mut bad = params;
    bad.gamma_w = 1.0 / params.q + c.gamma_excess;
    let conc = Grid::new(1, c.concentration_points, c.extent)?;
    let bumps = concentrating_bumps(conc, &c.concentration_widths, params.p);
    let growth = bumps
        .par_iter()
        .map(|m| stein_weiss_ratio_unchecked(&bad, &m.field, &c.quadrature))
        .collect::<Result<Vec<f64>>>()?;
    let widths: Vec<f64> = bumps.iter().map(|m| m.scale).collect();
    let mut order: Vec<usize> = (0..widths.len()).collect();
    order.sort_by(|&a, &b| widths[b].total_cmp(&widths[a]));
    let increasing = order.windows(2).all(|w| growth[w[1]] > growth[w[0]]);
    let slope = log_slope(&widths, &growth);
    let cprov = format!("grid N={} L={}", c.concentration_points, c.extent);
    out.push(
        Record::new("inadmissible-growth-monotone", format!("gamma={}", bad.gamma_w), slope, cprov.clone())
            .with_pass(increasing && widths.len() > 1),
    );
    let predicted = -(bad.gamma_w - params.gamma_w);
    out.push(Record::at_most(
        "inadmissible-growth-exponent",
        format!("predicted {predicted}"),
        (slope - predicted).abs(),
        0.05,
        cprov,
    ));
    Ok(out)
}

pub(super) fn crucial(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = KernelSpec::real(cfg.kernel.alpha, cfg.kernel.n)?;
    let q = match cfg.crucial.q {
        Some(q) => q,
        None => {
            let inv = 0.5 - cfg.kernel.alpha / cfg.kernel.n as f64;
            if !(inv > 0.0) {
                return Err(Error::Config("crucial estimate needs alpha < n/2 or an explicit q".into()));
            }
            1.0 / inv
        }
    };
    let grid = cfg.space_grid()?;
    let f = Field::from_real_fn(grid, |x| (-PI * x.iter().map(|v| v * v).sum::<f64>()).exp());
    let radii = &cfg.crucial.radii;
    let mut pairs = Vec::new();
    for (i, &r) in radii.iter().enumerate() {
        for &s in &radii[..i] {
            pairs.push((r, s));
        }
    }
    let ratios =
        pairs.par_iter().map(|&(r, s)| crucial_estimate_ratio(&spec, q, r, s, &f)).collect::<Result<Vec<f64>>>()?;
    let prov = format!("grid n={} N={} L={}", grid.n(), grid.points(), grid.extent());
    let mut out = Outcome::default();
    for (&(r, s), &v) in pairs.iter().zip(&ratios) {
        out.push(Record::new("crucial-ratio", format!("r={r} s={s}"), v, prov.clone()));
    }
    if !ratios.is_empty() {
        let stats = RatioStats::from_ratios(Vec::new(), Vec::new(), ratios)?;
        out.push(Record::at_most(
            "crucial-max-over-median",
            format!("q={q}"),
            stats.max / stats.median,
            cfg.tolerances.median_factor,
            prov,
        ));
    }
    if cfg.kernel.n == 1 {
        out.note("n = 1: the separation factor |r - s|^0 is identically 1");
    }
    Ok(out)
}

pub(super) fn mixed(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = KernelSpec::real(cfg.kernel.alpha, cfg.kernel.n)?;
    let m = &cfg.mixed_norm;
    let q = match m.q {
        Some(q) => q,
        None => {
            let inv = 0.5 - cfg.kernel.alpha / cfg.kernel.n as f64;
            if !(inv > 0.0) {
                return Err(Error::Config("mixed norm needs alpha < n/2 or an explicit q".into()));
            }
            1.0 / inv
        }
    };
    let s = m.s.unwrap_or(q);
    let quad = RadialQuadrature::log_uniform(m.r_min, m.r_max, m.nodes)?;
    let mn = MixedNormSpec::new(q, s, quad)?;
    let grid = cfg.space_grid()?;
    let prov = format!(
        "grid n={} N={} L={}, r in [{}, {}] with {} nodes",
        grid.n(),
        grid.points(),
        grid.extent(),
        m.r_min,
        m.r_max,
        m.nodes
    );
    let mut out = Outcome::default();
    let mut values = Vec::new();
    for &d in &m.dilations {
        let f = Field::from_real_fn(grid, |x| (-PI * x.iter().map(|v| v * v).sum::<f64>() / (d * d)).exp());
        let rep = mixed_norm_checked(&f, &spec, &mn, cfg.tolerances.mixed_refinement)?;
        let ratio = rep.value / lp_norm(&f, 2.0)?;
        values.push(ratio);
        out.push(Record::new("mixed-over-l2", format!("delta={d}"), ratio, prov.clone()));
        out.push(Record::at_most(
            "mixed-refinement",
            format!("delta={d}"),
            rep.relative_change,
            cfg.tolerances.mixed_refinement,
            format!("{} vs {} nodes", m.nodes, 2 * m.nodes - 1),
        ));
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    out.push(Record::at_most(
        "mixed-dilation-spread",
        format!("q={q} s={s}"),
        max / min - 1.0,
        cfg.tolerances.mixed_dilation,
        prov,
    ));
    if cfg.kernel.n == 1 {
        out.note("n = 1: |f * Omega_r|_q decays only like r^-alpha, so the dr/r integral grows like log(r_max) and is evaluated on the configured window");
    }
    Ok(out)
}
