//! Experiment configuration: one TOML file with a flat section per task.
//! Every field has a default, and reports echo the resolved values.

use std::path::{Path, PathBuf};

use conewave_core::RadialQuadrature;
use serde::{Deserialize, Serialize};

use crate::analysis::ensembles::Profile;
use crate::analysis::SteinWeissQuadrature;
use crate::conop::OperatorPath;
use crate::error::{Error, Result};
use crate::fields::{Axis, Grid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub task: String,
    pub seed: u64,
    pub kernel: KernelSection,
    pub grid: GridSection,
    pub spacetime: SpacetimeSection,
    pub radial: RadialSection,
    pub table: TableSection,
    pub operator: OperatorSection,
    pub scan: ScanSection,
    pub norm_test: NormTestSection,
    pub ft_identity: FtSection,
    pub bessel: BesselSection,
    pub cases: CaseSection,
    pub stein_weiss: SteinWeissSection,
    pub crucial: CrucialSection,
    pub mixed_norm: MixedSection,
    pub tolerances: Tolerances,
    pub output: OutputSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            task: "conewave".into(),
            seed: 1,
            kernel: KernelSection::default(),
            grid: GridSection::default(),
            spacetime: SpacetimeSection::default(),
            radial: RadialSection::default(),
            table: TableSection::default(),
            operator: OperatorSection::default(),
            scan: ScanSection::default(),
            norm_test: NormTestSection::default(),
            ft_identity: FtSection::default(),
            bessel: BesselSection::default(),
            cases: CaseSection::default(),
            stein_weiss: SteinWeissSection::default(),
            crucial: CrucialSection::default(),
            mixed_norm: MixedSection::default(),
            tolerances: Tolerances::default(),
            output: OutputSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelSection {
    pub alpha: f64,
    pub n: u32,
}

impl Default for KernelSection {
    fn default() -> Self {
        Self { alpha: 0.4, n: 1 }
    }
}

/// Spatial grid for field-level tasks; unset values follow the per-dimension defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub points: Option<usize>,
    pub extent: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpacetimeSection {
    pub points: Option<usize>,
    pub extent: Option<f64>,
    pub time_points: Option<usize>,
    pub time_extent: Option<f64>,
}

/// Radial rule for the operator; unset values become `4 dt`, `L_t / 4` and 128.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadialSection {
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TableSection {
    pub xi_max: f64,
    pub xi_points: usize,
    pub x_points: usize,
}

impl Default for TableSection {
    fn default() -> Self {
        Self { xi_max: 10.0, xi_points: 1001, x_points: 201 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OperatorSection {
    pub path: OperatorPath,
    pub input: Option<PathBuf>,
    pub output_name: String,
}

impl Default for OperatorSection {
    fn default() -> Self {
        Self { path: OperatorPath::Slices, input: None, output_name: "output.bin".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSection {
    pub alphas: Vec<f64>,
    pub inv_p_min: f64,
    pub inv_p_max: f64,
    pub steps: usize,
    /// Shifts of `1/q` off the scaling line added at every scanned point.
    pub off_line: Vec<f64>,
    /// Attach dilation-family ratio statistics (n = 1 and 2 only; slow).
    pub empirical: bool,
}

impl Default for ScanSection {
    fn default() -> Self {
        Self { alphas: vec![0.4], inv_p_min: 0.02, inv_p_max: 0.98, steps: 49, off_line: Vec::new(), empirical: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormTestSection {
    /// `(alpha, 1/p)` pairs on the scaling line.
    pub points: Vec<[f64; 2]>,
    pub profiles: Vec<Profile>,
    pub dilations: Vec<f64>,
    /// Also run every family on the grid with twice the points per axis.
    pub refine: bool,
    /// Run the scaling-line check (with `1/q` shifted both ways) at the first point.
    pub scaling_check: bool,
    pub points_per_axis: usize,
    pub extent: f64,
    pub r_min: f64,
    pub nodes: usize,
}

impl Default for NormTestSection {
    fn default() -> Self {
        Self {
            points: vec![[0.4, 0.7], [0.6, 0.8]],
            profiles: Profile::ALL.to_vec(),
            dilations: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            refine: true,
            scaling_check: true,
            points_per_axis: 1024,
            extent: 64.0,
            r_min: 2e-4,
            nodes: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FtSection {
    pub alphas: Vec<f64>,
    pub xis: Vec<f64>,
    /// Extra `n = 2` orders (need `alpha > 2/3` for an integrable kernel).
    pub planar_alphas: Vec<f64>,
}

impl Default for FtSection {
    fn default() -> Self {
        Self {
            alphas: vec![0.3, 0.5, 0.6, 0.8],
            xis: vec![0.0, 0.5, 1.0, 2.0, 5.0, 10.0],
            planar_alphas: vec![1.0, 1.5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BesselSection {
    pub orders: Vec<f64>,
    pub rho_max: f64,
    pub samples: usize,
    pub refinement: usize,
    pub split_samples: usize,
    pub split_xi_max: f64,
}

impl Default for BesselSection {
    fn default() -> Self {
        Self {
            orders: vec![-0.4, -0.1, 0.0, 1.0],
            rho_max: 1e3,
            samples: 10_000,
            refinement: 4,
            split_samples: 10_000,
            split_xi_max: 1e3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CaseSection {
    pub n: u32,
    pub alphas: Vec<f64>,
    /// `(r, s)` with `r > s`.
    pub pairs: Vec<[f64; 2]>,
    pub xi_min: f64,
    pub xi_max: f64,
    pub samples: usize,
    pub densify: usize,
}

impl Default for CaseSection {
    fn default() -> Self {
        Self {
            n: 2,
            alphas: vec![0.3, 0.5, 2.0 / 3.0],
            pairs: vec![[2.0, 1.0], [4.0, 1.0], [1.5, 1.0]],
            xi_min: 1e-4,
            xi_max: 1e4,
            samples: 2000,
            densify: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SteinWeissSection {
    pub random_count: usize,
    pub points: usize,
    pub extent: f64,
    pub concentration_widths: Vec<f64>,
    pub concentration_points: usize,
    /// `gamma = 1/q + gamma_excess` for the inadmissible family.
    pub gamma_excess: f64,
    pub quadrature: SteinWeissQuadrature,
}

impl Default for SteinWeissSection {
    fn default() -> Self {
        Self {
            random_count: 200,
            points: 1024,
            extent: 32.0,
            concentration_widths: vec![1.0, 0.5, 0.25, 0.125, 0.0625],
            concentration_points: 4096,
            gamma_excess: 0.05,
            quadrature: SteinWeissQuadrature::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CrucialSection {
    pub radii: Vec<f64>,
    /// Defaults to `1/q = 1/2 - alpha/n`.
    pub q: Option<f64>,
}

impl Default for CrucialSection {
    fn default() -> Self {
        Self { radii: vec![0.5, 1.0, 2.0, 4.0], q: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MixedSection {
    /// Defaults to `1/q = 1/2 - alpha/n`.
    pub q: Option<f64>,
    /// Defaults to `q`.
    pub s: Option<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub nodes: usize,
    pub dilations: Vec<f64>,
}

impl Default for MixedSection {
    fn default() -> Self {
        Self { q: None, s: None, r_min: 0.01, r_max: 16.0, nodes: 128, dilations: vec![0.25, 0.5, 1.0, 2.0, 4.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub ft_identity: f64,
    pub bessel_zero: f64,
    pub bessel_refinement: f64,
    pub split: f64,
    pub case_drift: f64,
    pub path_agreement: f64,
    pub cone_agreement: f64,
    pub truncation: f64,
    pub scaling_spread: f64,
    pub off_line_shift: f64,
    pub trend_spread: f64,
    pub growth_slope: f64,
    pub mixed_dilation: f64,
    pub mixed_refinement: f64,
    pub median_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ft_identity: 1e-6,
            bessel_zero: 1e-12,
            bessel_refinement: 0.01,
            split: 1e-12,
            case_drift: 0.05,
            path_agreement: 1e-3,
            cone_agreement: 0.02,
            truncation: 1e-2,
            scaling_spread: 0.10,
            off_line_shift: 0.05,
            trend_spread: 2.0,
            growth_slope: 0.05,
            mixed_dilation: 0.10,
            mixed_refinement: 0.02,
            median_factor: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("conewave-out") }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(format!("{name} must be positive and finite, got {v}")))
    }
}

fn nonempty<T>(name: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        Err(bad(format!("{name} must not be empty")))
    } else {
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<()> {
        positive("kernel.alpha", self.kernel.alpha)?;
        if !(1..=3).contains(&self.kernel.n) {
            return Err(bad(format!("kernel.n must be 1, 2 or 3, got {}", self.kernel.n)));
        }
        if self.kernel.alpha >= self.kernel.n as f64 {
            return Err(bad("kernel.alpha must be below n"));
        }
        for (name, v) in [("grid.extent", self.grid.extent), ("spacetime.extent", self.spacetime.extent)] {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        if let Some(v) = self.spacetime.time_extent {
            positive("spacetime.time_extent", v)?;
        }
        for (name, v) in [("radial.r_min", self.radial.r_min), ("radial.r_max", self.radial.r_max)] {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        if matches!(self.radial.nodes, Some(m) if m < 2) {
            return Err(bad("radial.nodes must be at least 2"));
        }
        positive("table.xi_max", self.table.xi_max)?;
        if self.table.xi_points < 2 || self.table.x_points < 2 {
            return Err(bad("table needs at least two points per block"));
        }

        nonempty("scan.alphas", &self.scan.alphas)?;
        for &a in &self.scan.alphas {
            positive("scan.alphas", a)?;
        }
        let s = &self.scan;
        if !(0.0 < s.inv_p_min && s.inv_p_min <= s.inv_p_max && s.inv_p_max < 1.0) || s.steps == 0 {
            return Err(bad("scan range must satisfy 0 < inv_p_min <= inv_p_max < 1 with steps >= 1"));
        }

        let nt = &self.norm_test;
        nonempty("norm_test.points", &nt.points)?;
        for &[a, p] in &nt.points {
            positive("norm_test alpha", a)?;
            if !(p > 0.0 && p < 1.0) {
                return Err(bad(format!("norm_test 1/p must lie in (0, 1), got {p}")));
            }
        }
        nonempty("norm_test.profiles", &nt.profiles)?;
        nonempty("norm_test.dilations", &nt.dilations)?;
        for &d in &nt.dilations {
            positive("norm_test.dilations", d)?;
        }
        positive("norm_test.extent", nt.extent)?;
        positive("norm_test.r_min", nt.r_min)?;
        if nt.nodes < 2 {
            return Err(bad("norm_test.nodes must be at least 2"));
        }

        nonempty("ft_identity.alphas", &self.ft_identity.alphas)?;
        nonempty("ft_identity.xis", &self.ft_identity.xis)?;
        nonempty("bessel.orders", &self.bessel.orders)?;
        if !(self.bessel.rho_max > 1.0) || self.bessel.samples < 2 || self.bessel.refinement < 2 {
            return Err(bad("bessel needs rho_max > 1, samples >= 2 and refinement >= 2"));
        }
        if self.bessel.split_samples == 0 || !(self.bessel.split_xi_max > 0.0) {
            return Err(bad("bessel split block needs samples and a positive xi range"));
        }
        let c = &self.cases;
        nonempty("cases.alphas", &c.alphas)?;
        nonempty("cases.pairs", &c.pairs)?;
        if !(0.0 < c.xi_min && c.xi_min < c.xi_max) || c.samples < 2 || c.densify < 2 {
            return Err(bad("cases needs 0 < xi_min < xi_max, samples >= 2, densify >= 2"));
        }
        for &[r, s] in &c.pairs {
            if !(s > 0.0 && r > s) {
                return Err(bad(format!("cases pair ({r}, {s}) needs r > s > 0")));
            }
        }
        let sw = &self.stein_weiss;
        if sw.random_count == 0 {
            return Err(bad("stein_weiss.random_count must be positive"));
        }
        positive("stein_weiss.extent", sw.extent)?;
        positive("stein_weiss.gamma_excess", sw.gamma_excess)?;
        nonempty("stein_weiss.concentration_widths", &sw.concentration_widths)?;
        nonempty("crucial.radii", &self.crucial.radii)?;
        for &r in &self.crucial.radii {
            positive("crucial.radii", r)?;
        }
        let m = &self.mixed_norm;
        if !(0.0 < m.r_min && m.r_min < 1.0 && 1.0 < m.r_max) || m.nodes < 2 {
            return Err(bad("mixed_norm needs r_min < 1 < r_max and at least two nodes"));
        }
        nonempty("mixed_norm.dilations", &m.dilations)?;

        let t = &self.tolerances;
        for (name, v) in [
            ("ft_identity", t.ft_identity),
            ("bessel_zero", t.bessel_zero),
            ("bessel_refinement", t.bessel_refinement),
            ("split", t.split),
            ("case_drift", t.case_drift),
            ("path_agreement", t.path_agreement),
            ("cone_agreement", t.cone_agreement),
            ("truncation", t.truncation),
            ("scaling_spread", t.scaling_spread),
            ("off_line_shift", t.off_line_shift),
            ("trend_spread", t.trend_spread),
            ("growth_slope", t.growth_slope),
            ("mixed_dilation", t.mixed_dilation),
            ("mixed_refinement", t.mixed_refinement),
            ("median_factor", t.median_factor),
        ] {
            positive(&format!("tolerances.{name}"), v)?;
        }
        Ok(())
    }

    /// Spatial grid, falling back to the per-dimension default.
    pub fn space_grid(&self) -> Result<Grid> {
        let base = Grid::default_for(self.kernel.n)?;
        let g = Grid::new(
            self.kernel.n,
            self.grid.points.unwrap_or(base.points()),
            self.grid.extent.unwrap_or(base.extent()),
        );
        g.map_err(|e| bad(e.to_string()))
    }

    /// Spacetime grid; the time axis copies the spatial one unless set.
    pub fn spacetime_grid(&self) -> Result<(Grid, Axis)> {
        let (points, extent) = spacetime_default(self.kernel.n);
        let p = self.spacetime.points.unwrap_or(points);
        let l = self.spacetime.extent.unwrap_or(extent);
        let space = Grid::new(self.kernel.n, p, l).map_err(|e| bad(e.to_string()))?;
        let time = Axis::new(self.spacetime.time_points.unwrap_or(p), self.spacetime.time_extent.unwrap_or(l))
            .map_err(|e| bad(e.to_string()))?;
        Ok((space, time))
    }

    pub fn radial_quadrature(&self, time: Axis) -> Result<RadialQuadrature> {
        let r_min = self.radial.r_min.unwrap_or(4.0 * time.spacing());
        let r_max = self.radial.r_max.unwrap_or(0.25 * time.extent());
        let nodes = self.radial.nodes.unwrap_or(128);
        RadialQuadrature::log_uniform(r_min, r_max, nodes).map_err(|e| bad(e.to_string()))
    }

    /// Copy with the grid and radial defaults written out.
    pub fn resolved(&self) -> Result<Self> {
        let mut out = self.clone();
        let g = self.space_grid()?;
        out.grid = GridSection { points: Some(g.points()), extent: Some(g.extent()) };
        let (space, time) = self.spacetime_grid()?;
        out.spacetime = SpacetimeSection {
            points: Some(space.points()),
            extent: Some(space.extent()),
            time_points: Some(time.points()),
            time_extent: Some(time.extent()),
        };
        let q = self.radial_quadrature(time)?;
        out.radial = RadialSection { r_min: Some(q.r_min()), r_max: Some(q.r_max()), nodes: Some(q.len()) };
        let inv_q = 0.5 - self.kernel.alpha / self.kernel.n as f64;
        if inv_q > 0.0 {
            out.mixed_norm.q.get_or_insert(1.0 / inv_q);
            out.crucial.q.get_or_insert(1.0 / inv_q);
        }
        let mq = out.mixed_norm.q;
        if out.mixed_norm.s.is_none() {
            out.mixed_norm.s = mq;
        }
        Ok(out)
    }
}

/// `(points per axis, extent)` of the default spacetime grid.
pub fn spacetime_default(n: u32) -> (usize, f64) {
    match n {
        1 => (512, 64.0),
        2 => (64, 16.0),
        _ => (32, 8.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        let text = cfg.to_toml();
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
        let r = cfg.resolved().unwrap();
        assert_eq!(r.spacetime.points, Some(512));
        assert_eq!(r.radial.nodes, Some(128));
        assert!((r.radial.r_min.unwrap() - 0.5).abs() < 1e-15);
        assert!((r.mixed_norm.q.unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(r.mixed_norm.s, r.mixed_norm.q);
    }

    #[test]
    fn partial_files_and_rejections() {
        let cfg = ExperimentConfig::from_toml("seed = 9\n[kernel]\nalpha = 0.6\n").unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.kernel.n, 1);
        assert!(matches!(ExperimentConfig::from_toml("[kernel]\nbeta = 1\n"), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::from_toml("[kernel]\nalpha = -1\n"), Err(Error::Config(_))));
        assert!(matches!(
            ExperimentConfig::from_toml("[scan]\ninv_p_min = 0.9\ninv_p_max = 0.1\n"),
            Err(Error::Config(_))
        ));
        assert!(matches!(ExperimentConfig::from_toml("[operator]\npath = \"sideways\"\n"), Err(Error::Config(_))));
    }
}
