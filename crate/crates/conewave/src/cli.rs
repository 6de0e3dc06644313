//! The `conewave` command line.
//!
//! Exit status: 0 when every check passes, 2 when a numerical check fails,
//! 3 for invalid configuration or usage, 1 for IO failures.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use conewave_core::kernel::{mass, multiplier_split, omega_hat_real, omega_physical};
use conewave_core::region::{classify_exponents, ExponentPoint, Region};
use conewave_core::KernelSpec;
use rayon::prelude::*;

use crate::analysis::ensembles::{dilation_family, Profile};
use crate::analysis::{lp_norm, trend_verdict};
use crate::config::ExperimentConfig;
use crate::conop::{self, OperatorPath, SpacetimeMultiplier};
use crate::error::{Error, Result};
use crate::fields::io::{read_field, write_slice_csv, write_spacetime, StoredField};
use crate::fields::{relative_l2, Sampled};
use crate::report::{fmt_float, write_table_csv, ExperimentReport, Outcome, Record};
use crate::verify::{self, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "conewave", version, about = "Light-cone fractional integration experiments")]
pub struct Cli {
    /// TOML experiment configuration; every key is optional.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "CONEWAVE_JOBS")]
    pub jobs: Option<usize>,
    /// Overrides the configured RNG seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the multiplier, its main/remainder split and the physical kernel.
    KernelTable,
    /// Run one verification suite.
    Verify {
        /// bessel, ft-identity, case-bounds, stein-weiss, crucial or mixed-norm
        suite: Suite,
    },
    /// Label exponent points on the scaling line by region.
    ScanRegion,
    /// Apply the operator to a spacetime field file.
    OpApply {
        /// Input field (overrides `operator.input`).
        #[arg(long)]
        input: Option<PathBuf>,
        /// slices, multiplier or cone-direct (overrides `operator.path`).
        #[arg(long)]
        path: Option<OperatorPath>,
        /// Also write the spacetime multiplier table m(xi, tau) to this file.
        #[arg(long)]
        export_multiplier: Option<PathBuf>,
    },
    /// Empirical norm ratios: scaling-line check and boundedness proxy.
    NormTest,
}

impl clap::builder::ValueParserFactory for Suite {
    type Parser = clap::builder::ValueParser;
    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Suite>())
    }
}

impl clap::builder::ValueParserFactory for OperatorPath {
    type Parser = clap::builder::ValueParser;
    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<OperatorPath>())
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => EXIT_IO,
        Error::Aliasing { .. } => EXIT_CHECK_FAILED,
        _ => EXIT_INVALID,
    }
}

/// Parses `args`, runs the command, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let result = execute(&cli);
    eprintln!("finished in {:.2} s", started.elapsed().as_secs_f64());
    match result {
        Ok(report) => {
            if report.passed {
                EXIT_OK
            } else {
                for r in report.records.iter().filter(|r| !r.passed) {
                    eprintln!("FAILED {} [{}]: {}", r.check, r.case, fmt_float(r.measured));
                }
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<ExperimentReport> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output.dir = o.clone();
    }
    let pool = match cli.jobs {
        Some(0) => return Err(Error::Config("--jobs must be at least 1".into())),
        Some(j) => rayon::ThreadPoolBuilder::new().num_threads(j).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    }
    .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::KernelTable => kernel_table(&cfg),
        Command::Verify { suite } => {
            let cfg = cfg.resolved()?;
            let outcome = verify::run_suite(*suite, &cfg)?;
            finish(&format!("verify {suite}"), cfg, outcome, &format!("verify_{}", suite.label().replace('-', "_")))
        }
        Command::ScanRegion => scan_region(&cfg),
        Command::OpApply { input, path, export_multiplier } => {
            if let Some(i) = input {
                cfg.operator.input = Some(i.clone());
            }
            if let Some(p) = path {
                cfg.operator.path = *p;
            }
            op_apply(cfg, export_multiplier.as_deref())
        }
        Command::NormTest => {
            let cfg = cfg.resolved()?;
            let outcome = verify::norm::norm_test(&cfg)?;
            finish("norm-test", cfg, outcome, "norm_test")
        }
    })
}

fn finish(command: &str, cfg: ExperimentConfig, outcome: Outcome, stem: &str) -> Result<ExperimentReport> {
    let dir = cfg.output.dir.clone();
    let report = ExperimentReport::new(command, cfg, outcome);
    report.write(&dir, stem)?;
    Ok(report)
}

fn kernel_table(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let cfg = cfg.resolved()?;
    let spec = KernelSpec::real(cfg.kernel.alpha, cfg.kernel.n)?;
    let t = &cfg.table;
    let dir = cfg.output.dir.clone();
    std::fs::create_dir_all(&dir)?;

    let xis: Vec<f64> = (0..t.xi_points).map(|k| t.xi_max * k as f64 / (t.xi_points - 1) as f64).collect();
    let rows = xis
        .par_iter()
        .map(|&xi| {
            let w = omega_hat_real(xi, &spec)?;
            let (s, e) = if xi > 0.0 {
                let sp = multiplier_split(xi, &spec)?;
                (Some(sp.main.re), Some(sp.error.re))
            } else {
                (None, None)
            };
            Ok((xi, w, s, e))
        })
        .collect::<conewave_core::Result<Vec<_>>>()?;
    let opt = |v: Option<f64>| v.map(fmt_float).unwrap_or_default();
    let text: Vec<Vec<String>> =
        rows.iter().map(|&(xi, w, s, e)| vec![fmt_float(xi), fmt_float(w), opt(s), opt(e)]).collect();
    write_table_csv(&dir.join("kernel_table.csv"), &["xi", "omega_hat", "s_hat", "e_hat"], &text)?;

    let mut out = Outcome::default();
    let gap = rows.iter().filter_map(|&(_, w, s, e)| Some((s? + e? - w).abs())).fold(0.0, f64::max);
    let prov = format!("{} uniform points on [0, {}]", t.xi_points, t.xi_max);
    out.push(Record::at_most(
        "split-sum",
        format!("alpha={} n={}", spec.alpha(), spec.n()),
        gap,
        cfg.tolerances.split,
        prov.clone(),
    ));
    out.push(
        Record::new("multiplier-at-origin", "xi=0", rows[0].1, prov)
            .with_pass((rows[0].1 - mass(&spec)).abs() <= 1e-12),
    );

    let mut physical = Vec::new();
    if spec.has_physical_form() {
        for k in 0..t.x_points {
            let x = k as f64 / t.x_points as f64;
            physical.push(vec![fmt_float(x), fmt_float(omega_physical(x, &spec)?)]);
        }
    } else {
        out.note(format!(
            "lambda = {} is outside (0, 1): no integrable physical kernel, block left empty",
            spec.lambda().re
        ));
    }
    write_table_csv(&dir.join("kernel_physical.csv"), &["x", "omega"], &physical)?;
    let report = ExperimentReport::new("kernel-table", cfg, out);
    report.write(&dir, "kernel_report")?;
    Ok(report)
}

struct ScanRow {
    inv_p: f64,
    inv_q: f64,
    alpha: f64,
    region: Region,
    ratio_max: Option<f64>,
    ratio_spread: Option<f64>,
    verdict: Option<bool>,
}

fn scan_region(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let cfg = cfg.resolved()?;
    let s = &cfg.scan;
    let n = cfg.kernel.n;
    let nf = n as f64;
    let mut rows = Vec::new();
    let mut out = Outcome::default();
    let mut skipped = 0;
    let shifts: Vec<f64> = std::iter::once(0.0).chain(s.off_line.iter().copied()).collect();
    for &alpha in &s.alphas {
        if !(alpha < nf) {
            return Err(Error::Config(format!("scan alpha {alpha} must be below n = {n}")));
        }
        // outputs of the dilation family are shared by every exponent pair at this alpha
        let outputs = if s.empirical { Some(empirical_outputs(&cfg, alpha)?) } else { None };
        for k in 0..s.steps {
            let inv_p = if s.steps == 1 {
                s.inv_p_min
            } else {
                s.inv_p_min + (s.inv_p_max - s.inv_p_min) * k as f64 / (s.steps - 1) as f64
            };
            for &dq in &shifts {
                let inv_q = inv_p - alpha / nf + dq;
                let Ok(pt) = ExponentPoint::new(inv_p, inv_q, alpha, n) else {
                    skipped += 1;
                    continue;
                };
                let region = classify_exponents(&pt);
                let mut row =
                    ScanRow { inv_p, inv_q, alpha, region, ratio_max: None, ratio_spread: None, verdict: None };
                if let Some((scales, pairs)) = &outputs {
                    let ratios: Vec<f64> = pairs
                        .iter()
                        .map(|(f, g)| Ok(lp_norm(g, 1.0 / inv_q)? / lp_norm(f, 1.0 / inv_p)?))
                        .collect::<Result<_>>()?;
                    let v = trend_verdict(scales, &ratios, cfg.tolerances.trend_spread, cfg.tolerances.growth_slope);
                    row.ratio_max = Some(ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max));
                    row.ratio_spread = Some(v.spread);
                    row.verdict = Some(v.passed);
                    let proven = matches!(region, Region::RegionI | Region::RegionII);
                    out.push(
                        Record::new(
                            "scan-verdict",
                            format!("alpha={alpha} 1/p={inv_p} 1/q={inv_q} {region}"),
                            v.spread,
                            "spacetime grid from [spacetime] and [radial]",
                        )
                        .with_pass(!proven || v.passed),
                    );
                }
                rows.push(row);
            }
        }
    }
    if skipped > 0 {
        out.note(format!("{skipped} points with 1/q outside (0, 1) were skipped"));
    }
    let dir = cfg.output.dir.clone();
    std::fs::create_dir_all(&dir)?;
    let opt = |v: Option<f64>| v.map(fmt_float).unwrap_or_default();
    let text: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                fmt_float(r.inv_p),
                fmt_float(r.inv_q),
                fmt_float(r.alpha),
                n.to_string(),
                r.region.to_string(),
                opt(r.ratio_max),
                opt(r.ratio_spread),
                r.verdict.map(|v| if v { "bounded" } else { "unstable" }.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    write_table_csv(
        &dir.join("scan_region.csv"),
        &["inv_p", "inv_q", "alpha", "n", "region", "ratio_max", "ratio_spread", "verdict"],
        &text,
    )?;
    out.note(format!("{} points written to scan_region.csv", rows.len()));
    let report = ExperimentReport::new("scan-region", cfg, out);
    let json = serde_json::to_string_pretty(&report)?;
    std::fs::write(dir.join("scan_region.json"), json + "\n")?;
    Ok(report)
}

type FieldPairs = Vec<(crate::fields::SpacetimeField, crate::fields::SpacetimeField)>;

fn empirical_outputs(cfg: &ExperimentConfig, alpha: f64) -> Result<(Vec<f64>, FieldPairs)> {
    let (space, time) = cfg.spacetime_grid()?;
    let quad = cfg.radial_quadrature(time)?;
    let spec = KernelSpec::real(alpha, cfg.kernel.n)?;
    let table = SpacetimeMultiplier::from_kernel(space, time, &spec, &quad)?;
    let family = dilation_family(Profile::Gaussian, space, time, &cfg.norm_test.dilations);
    let scales = family.iter().map(|m| m.scale).collect();
    let pairs = family
        .into_iter()
        .map(|m| {
            let g = table.apply(&m.field)?;
            Ok((m.field, g))
        })
        .collect::<Result<_>>()?;
    Ok((scales, pairs))
}

fn op_apply(mut cfg: ExperimentConfig, export: Option<&Path>) -> Result<ExperimentReport> {
    let input: PathBuf =
        cfg.operator.input.clone().ok_or_else(|| Error::Config("op-apply needs --input or operator.input".into()))?;
    let f = match read_field(&input)? {
        StoredField::Spacetime(f) => f,
        StoredField::Space(_) => {
            return Err(Error::Config(format!("{} holds a spatial field; op-apply needs N_t and L_t", input.display())))
        }
    };
    if f.domain() != crate::fields::Domain::Physical {
        return Err(Error::Config("op-apply needs a physical-domain input".into()));
    }
    cfg.kernel.n = f.space().n();
    cfg.spacetime.points = Some(f.space().points());
    cfg.spacetime.extent = Some(f.space().extent());
    cfg.spacetime.time_points = Some(f.time().points());
    cfg.spacetime.time_extent = Some(f.time().extent());
    cfg.validate()?;
    let cfg = cfg.resolved()?;
    let spec = KernelSpec::real(cfg.kernel.alpha, cfg.kernel.n)?;
    let quad = cfg.radial_quadrature(f.time())?;
    let path = cfg.operator.path;
    let tol = &cfg.tolerances;

    let g = conop::apply(path, &f, &spec, &quad)?;
    let dir = cfg.output.dir.clone();
    std::fs::create_dir_all(&dir)?;
    write_spacetime(&dir.join(&cfg.operator.output_name), &g)?;
    write_slice_csv(&dir.join("op_apply_slice.csv"), &g.center_slice())?;

    let prov = format!(
        "grid n={} N={} L={} x N_t={} L_t={}, r in [{}, {}] with {} nodes",
        f.space().n(),
        f.space().points(),
        f.space().extent(),
        f.time().points(),
        f.time().extent(),
        quad.r_min(),
        quad.r_max(),
        quad.len()
    );
    let mut out = Outcome::default();
    let other = if path == OperatorPath::Slices { OperatorPath::Multiplier } else { OperatorPath::Slices };
    let reference = conop::apply(other, &f, &spec, &quad)?;
    let limit = if path == OperatorPath::ConeDirect { tol.cone_agreement } else { tol.path_agreement };
    out.push(Record::at_most(
        "cross-path",
        format!("{path} vs {other}"),
        relative_l2(g.samples(), reference.samples()),
        limit,
        prov.clone(),
    ));

    if let Some(target) = export {
        let table = SpacetimeMultiplier::from_kernel(f.space(), f.time(), &spec, &quad)?;
        write_spacetime(target, &table.as_field())?;
        out.note(format!("multiplier table written to {}", target.display()));
    }

    let trunc = conop::truncation_diagnostics(path, &f, &spec, &quad, tol.truncation)?;
    for (name, v) in [
        ("r-min-tail-estimate", trunc.r_min_tail_estimate),
        ("halved-r-min-change", trunc.r_min_change),
        ("doubled-r-max-change", trunc.r_max_change),
        ("node-doubling-change", trunc.refinement_change),
    ] {
        out.push(Record::new(name, path.label(), v, prov.clone()).with_pass(true));
    }
    for w in trunc.warnings {
        out.note(format!("under-resolved radial rule: {w}"));
    }
    out.note(format!("output written to {}", Path::new(&cfg.operator.output_name).display()));
    let report = ExperimentReport::new("op-apply", cfg, out);
    report.write(&dir, "op_apply")?;
    Ok(report)
}
