//! Run configuration: TOML file plus flag overrides. Every run is fully
//! determined by one of these (including the master seed), so two runs from
//! the same config produce byte-identical reports.

use std::fmt;
use std::path::PathBuf;

use serde::Deserialize;

use detproc::kernels::{make_kernel, KernelSpec};
use detproc::weights::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Symfun,
    GiambelliOpe,
    FsOpe,
    FsDpp,
    Fredholm,
    Sampling,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Result<Suite, String> {
        match name {
            "symfun" => Ok(Suite::Symfun),
            "giambelli-ope" => Ok(Suite::GiambelliOpe),
            "fs-ope" => Ok(Suite::FsOpe),
            "fs-dpp" => Ok(Suite::FsDpp),
            "fredholm" => Ok(Suite::Fredholm),
            "sampling" => Ok(Suite::Sampling),
            "all" => Ok(Suite::All),
            "" => Err("empty suite name; expected one of symfun, giambelli-ope, fs-ope, \
                       fs-dpp, fredholm, sampling, all"
                .into()),
            other => Err(format!(
                "unknown suite `{other}`; expected one of symfun, giambelli-ope, fs-ope, \
                 fs-dpp, fredholm, sampling, all"
            )),
        }
    }

    /// Suites whose reports involve Monte Carlo sampling.
    pub fn uses_mc(self) -> bool {
        matches!(self, Suite::FsDpp | Suite::Sampling | Suite::All)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Symfun => "symfun",
            Suite::GiambelliOpe => "giambelli-ope",
            Suite::FsOpe => "fs-ope",
            Suite::FsDpp => "fs-dpp",
            Suite::Fredholm => "fredholm",
            Suite::Sampling => "sampling",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Exact-moment and subset-expansion routes.
    pub exact: f64,
    /// Quadrature- and Nyström-backed routes.
    pub quadrature: f64,
    /// Shift/radius invariance of exact ratios.
    pub shift: f64,
    /// Width of Monte Carlo acceptance bands, in standard errors.
    pub sigmas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { exact: 1e-10, quadrature: 1e-8, shift: 1e-12, sigmas: 3.0 }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed; per-sample streams are derived from it.
    pub seed: u64,
    /// Monte Carlo sample count per estimator.
    pub samples: usize,
    /// Output directory for reports.json and summary.csv.
    pub out: PathBuf,
    /// Kernel driving the lattice/window suites.
    pub kernel: KernelSpec,
    /// Reference weights for the ensemble suites.
    pub weights: Vec<Weight>,
    /// Ensemble sizes N for the ensemble suites.
    pub ensemble_sizes: Vec<usize>,
    /// Shift radii R for the ensemble Giambelli grid.
    pub shifts: Vec<f64>,
    /// Regularization radius for lattice functionals.
    pub r: f64,
    /// Window half-width T.
    pub window: f64,
    /// Power-sum truncation order M for series probes.
    pub series_order: usize,
    /// Nyström base order for continuous Fredholm determinants.
    pub fredholm_order: usize,
    /// Node count per axis for ensemble quadrature routes.
    pub quadrature_nodes: usize,
    /// Partition-weight bound for the exact identity grids.
    pub max_weight: u32,
    /// Partitions for the Monte Carlo Giambelli estimators.
    pub partitions: Vec<Vec<u32>>,
    /// Numerator arguments (re, im), matched with `ws`.
    pub zs: Vec<[f64; 2]>,
    /// Denominator arguments (re, im).
    pub ws: Vec<[f64; 2]>,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 7,
            samples: 20_000,
            out: PathBuf::from("reports"),
            kernel: KernelSpec::DiscreteSine { rho: 0.5 },
            weights: vec![Weight::Gaussian, Weight::Uniform01],
            ensemble_sizes: vec![2, 3],
            shifts: vec![1.0, 2.0],
            r: 1.0,
            window: 20.0,
            series_order: 6,
            fredholm_order: 64,
            quadrature_nodes: 64,
            max_weight: 6,
            partitions: vec![vec![2, 2], vec![3, 1], vec![2, 2, 1]],
            zs: vec![[0.3, 2.2], [0.375, 2.54], [0.45, 2.3]],
            ws: vec![[0.3, 2.0], [0.375, 2.7], [0.45, 1.9]],
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Field-path validation of everything the suites rely on.
    pub fn validate(&self, suite: Suite) -> Result<(), String> {
        fn positive(name: &str, v: f64) -> Result<(), String> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(format!("{name}: must be a positive finite number (got {v})"))
            }
        }
        positive("tolerances.exact", self.tolerances.exact)?;
        positive("tolerances.quadrature", self.tolerances.quadrature)?;
        positive("tolerances.shift", self.tolerances.shift)?;
        positive("tolerances.sigmas", self.tolerances.sigmas)?;
        positive("r", self.r)?;
        positive("window", self.window)?;
        if suite.uses_mc() && self.samples < 1000 {
            return Err(format!(
                "samples: Monte Carlo suites need at least 1000 samples (got {})",
                self.samples
            ));
        }
        if matches!(suite, Suite::Sampling | Suite::FsDpp | Suite::All) && self.window < 6.0 {
            return Err(format!(
                "window: lattice suites need a half-width of at least 6 (got {})",
                self.window
            ));
        }
        make_kernel(self.kernel).map_err(|e| format!("kernel: {e}"))?;
        if self.weights.is_empty() {
            return Err("weights: must name at least one weight".into());
        }
        if self.ensemble_sizes.is_empty() {
            return Err("ensemble_sizes: must name at least one size".into());
        }
        for (i, &n) in self.ensemble_sizes.iter().enumerate() {
            if !(1..=4).contains(&n) {
                return Err(format!("ensemble_sizes[{i}]: must lie in 1..=4 (got {n})"));
            }
        }
        for (i, &r) in self.shifts.iter().enumerate() {
            positive(&format!("shifts[{i}]"), r)?;
        }
        if self.shifts.is_empty() {
            return Err("shifts: must name at least one radius".into());
        }
        if !(1..=16).contains(&self.series_order) {
            return Err(format!(
                "series_order: must lie in 1..=16 — higher orders push the series tail \
                 bound below the float noise floor (got {})",
                self.series_order
            ));
        }
        if self.fredholm_order < 8 {
            return Err(format!(
                "fredholm_order: must be at least 8 (got {})",
                self.fredholm_order
            ));
        }
        if self.quadrature_nodes < 8 {
            return Err(format!(
                "quadrature_nodes: must be at least 8 (got {})",
                self.quadrature_nodes
            ));
        }
        if self.max_weight == 0 || self.max_weight > 8 {
            return Err(format!("max_weight: must lie in 1..=8 (got {})", self.max_weight));
        }
        for (i, parts) in self.partitions.iter().enumerate() {
            detproc::symfun::Partition::new(parts.clone())
                .map_err(|e| format!("partitions[{i}]: {e}"))?;
            let w: u32 = parts.iter().sum();
            if w > 6 || parts.is_empty() {
                return Err(format!(
                    "partitions[{i}]: Monte Carlo estimators cover nonempty partitions of \
                     weight ≤ 6 (got {parts:?})"
                ));
            }
        }
        if self.zs.len() < 2 || self.zs.len() != self.ws.len() {
            return Err(format!(
                "zs: need at least two points, matched one-to-one with ws \
                 (got {} and {})",
                self.zs.len(),
                self.ws.len()
            ));
        }
        for (name, pts) in [("zs", &self.zs), ("ws", &self.ws)] {
            for (i, p) in pts.iter().enumerate() {
                if !(p[0].is_finite() && p[1].is_finite()) || p[1] == 0.0 {
                    return Err(format!("{name}[{i}]: must be finite and non-real"));
                }
            }
        }
        Ok(())
    }
}
