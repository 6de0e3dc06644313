use std::f64::consts::PI;

use conewave_core::cases::{case_bound_check, log_samples};
use conewave_core::kernel::{multiplier_split, omega_hat_real};
use conewave_core::specialfn::{bessel_j, bessel_remainder};
use conewave_core::{BesselOrder, KernelSpec};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::conop::kernel_transform;
use crate::error::Result;
use crate::report::{Outcome, Record};

/// `count` uniform points on `(lo, hi]`.
fn uniform(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|k| lo + (hi - lo) * k as f64 / count as f64).collect()
}

/// `max |g(x)| x^p` over the points.
pub fn sup_scaled<G: Fn(f64) -> conewave_core::Result<f64> + Sync>(xs: &[f64], p: f64, g: G) -> Result<f64> {
    let vals = xs.par_iter().map(|&x| Ok(g(x)?.abs() * x.powf(p))).collect::<conewave_core::Result<Vec<f64>>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

fn rel_change(coarse: f64, fine: f64) -> f64 {
    ((fine - coarse) / fine).abs()
}

pub(super) fn bessel(cfg: &ExperimentConfig) -> Result<Outcome> {
    let b = &cfg.bessel;
    let tol = &cfg.tolerances;
    let mut out = Outcome::default();
    let coarse = uniform(1.0, b.rho_max, b.samples);
    let fine = uniform(1.0, b.rho_max, b.samples * b.refinement);
    let prov = |g: usize| format!("uniform rho grid on (1, {}], {g} points", b.rho_max);

    for nu in [-0.5, 0.5] {
        let order = BesselOrder::new(nu)?;
        let e = sup_scaled(&fine, 0.0, |r| bessel_remainder(order, r))?;
        out.push(Record::at_most("remainder-vanishes", format!("nu={nu}"), e, tol.bessel_zero, prov(fine.len())));
    }
    let half = BesselOrder::new(0.5)?;
    let closed = sup_scaled(&fine, 0.0, |r| Ok(bessel_j(half, r)? - (2.0 / (PI * r)).sqrt() * r.sin()))?;
    out.push(Record::at_most("closed-form-j-half", "nu=0.5", closed, tol.bessel_zero, prov(fine.len())));

    for &nu in &b.orders {
        let order = BesselOrder::new(nu)?;
        let c = sup_scaled(&coarse, 1.5, |r| bessel_remainder(order, r))?;
        let f = sup_scaled(&fine, 1.5, |r| bessel_remainder(order, r))?;
        out.push(Record::new("remainder-constant", format!("nu={nu}"), f, prov(fine.len())));
        out.push(Record::at_most(
            "remainder-constant-refinement",
            format!("nu={nu}"),
            rel_change(c, f),
            tol.bessel_refinement,
            format!("{} vs {} points", coarse.len(), fine.len()),
        ));
    }

    // main + remainder = multiplier, and the remainder's extra decay
    let mut specs: Vec<KernelSpec> =
        cfg.ft_identity.alphas.iter().map(|&a| KernelSpec::real(a, 1)).collect::<std::result::Result<_, _>>()?;
    for &a in &cfg.ft_identity.planar_alphas {
        specs.push(KernelSpec::real(a, 2)?);
    }
    let xs = log_samples(1e-2, b.split_xi_max, b.split_samples);
    let high = log_samples(1.0, b.split_xi_max, b.split_samples);
    let high_fine = log_samples(1.0, b.split_xi_max, b.split_samples * b.refinement);
    for spec in &specs {
        let case = format!("n={} alpha={}", spec.n(), spec.alpha());
        let gap = sup_scaled(&xs, 0.0, |x| {
            let s = multiplier_split(x, spec)?;
            Ok((s.main + s.error).re - omega_hat_real(x, spec)?)
        })?;
        out.push(Record::at_most(
            "split-sum",
            case.clone(),
            gap,
            tol.split,
            format!("{} log points on [1e-2, {}]", xs.len(), b.split_xi_max),
        ));
        let p = spec.decay_exponent() + 1.0;
        let c = sup_scaled(&high, p, |x| Ok(multiplier_split(x, spec)?.error.re))?;
        let f = sup_scaled(&high_fine, p, |x| Ok(multiplier_split(x, spec)?.error.re))?;
        out.push(Record::new(
            "split-remainder-constant",
            case.clone(),
            f,
            format!("{} log points on [1, {}]", high_fine.len(), b.split_xi_max),
        ));
        out.push(Record::at_most(
            "split-remainder-refinement",
            case,
            rel_change(c, f),
            tol.bessel_refinement,
            format!("{} vs {} points", high.len(), high_fine.len()),
        ));
    }
    out.note("the remainder vanishes identically for nu = +-1/2, where the Hankel expansion terminates");
    Ok(out)
}

pub(super) fn ft_identity(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ft = &cfg.ft_identity;
    let mut out = Outcome::default();
    let cases = ft.alphas.iter().map(|&a| (a, 1)).chain(ft.planar_alphas.iter().map(|&a| (a, 2)));
    for (alpha, n) in cases {
        let spec = KernelSpec::real(alpha, n)?;
        for &xi in &ft.xis {
            let quad = kernel_transform(&spec, xi)?;
            let exact = omega_hat_real(xi, &spec)?;
            out.push(Record::at_most(
                "fourier-pair",
                format!("n={n} alpha={alpha} xi={xi}"),
                (quad - exact).abs(),
                cfg.tolerances.ft_identity,
                "Gauss-Jacobi rule on the physical kernel",
            ));
        }
    }
    Ok(out)
}

pub(super) fn case_bounds(cfg: &ExperimentConfig) -> Result<Outcome> {
    let c = &cfg.cases;
    let mut out = Outcome::default();
    let coarse = log_samples(c.xi_min, c.xi_max, c.samples);
    let fine = log_samples(c.xi_min, c.xi_max, c.samples * c.densify);
    let triples = |xs: &[f64]| -> Vec<(f64, f64, f64)> {
        c.pairs.iter().flat_map(|&[r, s]| xs.iter().map(move |&x| (x, r, s))).collect()
    };
    for &alpha in &c.alphas {
        let spec = KernelSpec::real(alpha, c.n)?;
        let a = case_bound_check(&spec, &triples(&coarse))?;
        let b = case_bound_check(&spec, &triples(&fine))?;
        let case = format!("n={} alpha={alpha}", c.n);
        let prov = format!("{} log points on [{}, {}] per (r, s) pair", fine.len(), c.xi_min, c.xi_max);
        for (k, name) in ["low", "middle", "high"].into_iter().enumerate() {
            let rec = match b.per_regime[k] {
                Some(v) => Record::new(format!("case-constant-{name}"), case.clone(), v, prov.clone()),
                None => Record::new(format!("case-constant-{name}"), case.clone(), f64::NAN, "regime not sampled")
                    .with_pass(false),
            };
            out.push(rec);
        }
        out.push(Record::at_most(
            "case-constant-drift",
            case,
            rel_change(a.fitted_constant, b.fitted_constant),
            cfg.tolerances.case_drift,
            format!("{} vs {} points per pair", coarse.len(), fine.len()),
        ));
        if b.separation_factor_trivial {
            out.note(format!(
                "alpha={alpha}: for n = 1 the (r - s) exponent is 0, so the bound reduces to |xi|^(-2 alpha)"
            ));
        }
    }
    Ok(out)
}
