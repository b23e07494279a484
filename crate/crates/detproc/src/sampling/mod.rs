//! Exact window sampling for projection DPPs (eigendecomposition + sequential
//! conditionals) and N-point orthogonal polynomial ensembles.
//!
//! Continuous kernels are discretized on quadrature nodes: returned points are
//! grid nodes, and downstream checks treat the discretized process as the
//! object under test, with refinement as the convergence control.

use std::io::Write as IoWrite;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use thiserror::Error;

use crate::kernels::{GroundSpace, IntegrableKernel, KernelSpec, Window};
use crate::quad::gauss_legendre_on;
use crate::weights::Weight;

const EIGEN_SLACK: f64 = 1e-6;
const REORTHOGONALIZE_EVERY: usize = 16;

/// A finite point configuration, strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    points: Vec<f64>,
}

impl Configuration {
    pub fn new(mut points: Vec<f64>) -> Self {
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(
            points.windows(2).all(|p| p[0] < p[1]),
            "configuration points must be distinct"
        );
        Configuration { points }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of points in [lo, hi).
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.points.iter().filter(|&&x| x >= lo && x < hi).count()
    }
}

/// Deterministic RNG addressing: replicas differ by stream index only.
#[derive(Clone, Copy, Debug)]
pub struct SeedSpec {
    pub seed: u64,
    pub stream: u64,
}

impl SeedSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        SeedSpec { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

#[derive(Debug, Error)]
pub enum SamplingError {
    #[error("kernel eigenvalue {0} outside [-1e-6, 1+1e-6]; not a contraction")]
    EigenvalueOutOfRange(f64),
    #[error("orthogonal polynomial ensembles need at least one point")]
    EmptyEnsemble,
    #[error("no samples provided")]
    NoSamples,
}

/// Sampler for χ_w K χ_w with the eigendecomposition done once.
pub struct WindowSampler {
    points: Vec<f64>,
    eigvals: Vec<f64>,
    eigvecs: DMatrix<f64>,
}

impl WindowSampler {
    pub fn new(
        kernel: &IntegrableKernel,
        window: &Window,
        grid: usize,
    ) -> Result<Self, SamplingError> {
        let (points, mat) = match kernel.ground {
            GroundSpace::Integers => {
                let points = window.lattice_sites();
                let mat = kernel.matrix_on(&points);
                (points, mat)
            }
            GroundSpace::Continuous { .. } => {
                let (lo, hi) = window.interval_on(&kernel.ground);
                let rule = gauss_legendre_on(grid.max(2), lo, hi);
                let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
                let mut mat = kernel.matrix_on(&rule.nodes);
                for i in 0..mat.nrows() {
                    for j in 0..mat.ncols() {
                        mat[(i, j)] *= sw[i] * sw[j];
                    }
                }
                (rule.nodes, mat)
            }
        };
        let eig = SymmetricEigen::new(mat);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
        let mut eigvals = Vec::with_capacity(order.len());
        let mut eigvecs = DMatrix::<f64>::zeros(points.len(), order.len());
        for (col, &i) in order.iter().enumerate() {
            let lam = eig.eigenvalues[i];
            if !(-EIGEN_SLACK..=1.0 + EIGEN_SLACK).contains(&lam) {
                return Err(SamplingError::EigenvalueOutOfRange(lam));
            }
            eigvals.push(lam.clamp(0.0, 1.0));
            eigvecs.set_column(col, &eig.eigenvectors.column(i));
        }
        Ok(WindowSampler { points, eigvals, eigvecs })
    }

    /// Discretization sites (lattice sites or quadrature nodes).
    pub fn grid_points(&self) -> &[f64] {
        &self.points
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigvals
    }

    pub fn sample(&self, seeds: &SeedSpec) -> Configuration {
        let mut rng = seeds.rng();
        let selected: Vec<usize> = (0..self.eigvals.len())
            .filter(|&i| rng.random::<f64>() < self.eigvals[i])
            .collect();
        if selected.is_empty() {
            return Configuration::new(Vec::new());
        }
        let v = self.eigvecs.select_columns(selected.iter());
        let idx = sample_projection_indices(&v, &mut rng);
        Configuration::new(idx.into_iter().map(|i| self.points[i]).collect())
    }
}

/// Sequential conditional sampling of a projection DPP given an orthonormal
/// column basis `v` (M×k). Returns k distinct row indices.
fn sample_projection_indices(v: &DMatrix<f64>, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let (m, k) = (v.nrows(), v.ncols());
    let mut diag: Vec<f64> = (0..m).map(|i| v.row(i).norm_squared()).collect();
    let mut used: Vec<DVector<f64>> = Vec::with_capacity(k);
    let mut picked = Vec::with_capacity(k);
    for step in 0..k {
        let total: f64 = pairwise_sum(&diag);
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut s = m - 1;
        for (i, &d) in diag.iter().enumerate() {
            acc += d;
            if target < acc {
                s = i;
                break;
            }
        }
        picked.push(s);
        // Conditional update: split off the direction that evaluates at s.
        let mut g = v * v.row(s).transpose();
        for f in &used {
            g -= f * f[s];
        }
        g /= diag[s].sqrt();
        for i in 0..m {
            diag[i] = (diag[i] - g[i] * g[i]).max(0.0);
        }
        diag[s] = 0.0;
        used.push(g);
        if used.len() % REORTHOGONALIZE_EVERY == 0 && step + 1 < k {
            orthonormalize(&mut used);
            for i in 0..m {
                let drop: f64 = used.iter().map(|f| f[i] * f[i]).sum();
                diag[i] = (v.row(i).norm_squared() - drop).max(0.0);
            }
            for &p in &picked {
                diag[p] = 0.0;
            }
        }
    }
    picked
}

fn orthonormalize(fs: &mut [DVector<f64>]) {
    for j in 0..fs.len() {
        for i in 0..j {
            let proj = fs[i].dot(&fs[j]);
            let fi = fs[i].clone();
            fs[j] -= fi * proj;
        }
        let n = fs[j].norm();
        if n > 0.0 {
            fs[j] /= n;
        }
    }
}

/// One draw of the window-restricted DPP. For repeated draws build a
/// [`WindowSampler`] once and vary the stream index.
pub fn sample_dpp_window(
    kernel: &IntegrableKernel,
    window: &Window,
    grid: usize,
    seeds: &SeedSpec,
) -> Result<Configuration, SamplingError> {
    Ok(WindowSampler::new(kernel, window, grid)?.sample(seeds))
}

/// Sampler for the N-point ensemble with density ∝ ∏(x_i−x_j)² ∏ dω.
pub enum OpeSampler {
    /// Gaussian weight: symmetric tridiagonal model, eigenvalues are exact draws.
    Tridiagonal { n: usize },
    /// Any weight: rank-N Christoffel–Darboux projection on a fine grid.
    Grid(WindowSampler),
}

impl OpeSampler {
    pub fn new(weight: Weight, n: usize) -> Result<Self, SamplingError> {
        if n == 0 {
            return Err(SamplingError::EmptyEnsemble);
        }
        match weight {
            Weight::Gaussian => Ok(OpeSampler::Tridiagonal { n }),
            Weight::Uniform01 => {
                let kernel = crate::kernels::make_kernel(KernelSpec::Cd { weight, n })
                    .expect("CD kernel parameters already validated");
                let grid = (8 * n).max(64);
                let sampler = WindowSampler::new(&kernel, &Window::Symmetric { t: 1.0 }, grid)?;
                Ok(OpeSampler::Grid(sampler))
            }
        }
    }

    pub fn sample(&self, seeds: &SeedSpec) -> Configuration {
        match self {
            OpeSampler::Tridiagonal { n } => sample_hermite_tridiagonal(*n, &mut seeds.rng()),
            OpeSampler::Grid(sampler) => sampler.sample(seeds),
        }
    }
}

fn sample_hermite_tridiagonal(n: usize, rng: &mut ChaCha8Rng) -> Configuration {
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = StandardNormal.sample(rng);
    }
    for k in 1..n {
        // off-diagonal k: χ_{2(n−k)}/√2, i.e. √Gamma(n−k, 1)
        let g = Gamma::new((n - k) as f64, 1.0).unwrap().sample(rng);
        let off = g.sqrt();
        m[(k - 1, k)] = off;
        m[(k, k - 1)] = off;
    }
    let eig = SymmetricEigen::new(m);
    Configuration::new(eig.eigenvalues.iter().copied().collect())
}

/// One draw of the N-point orthogonal polynomial ensemble.
pub fn sample_ope(
    weight: Weight,
    n: usize,
    seeds: &SeedSpec,
) -> Result<Configuration, SamplingError> {
    Ok(OpeSampler::new(weight, n)?.sample(seeds))
}

/// Summation in a fixed balanced tree order: deterministic regardless of how
/// the values were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MeanStderr {
    pub mean: f64,
    pub stderr: f64,
}

/// Sample mean and its standard error, pairwise-summed.
pub fn mean_stderr(xs: &[f64]) -> MeanStderr {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return MeanStderr { mean, stderr: f64::INFINITY };
    }
    let sq: Vec<f64> = xs.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0);
    MeanStderr { mean, stderr: (var / n).sqrt() }
}

#[derive(Clone, Copy, Debug)]
pub struct IntensityBin {
    pub lo: f64,
    pub hi: f64,
    /// Mean observed point count per sample in [lo, hi).
    pub observed: f64,
    pub stderr: f64,
    /// ∫_bin K(x,x) dμ.
    pub expected: f64,
}

/// Binned one-point intensity of the samples against the kernel diagonal.
pub fn empirical_intensity(
    kernel: &IntegrableKernel,
    window: &Window,
    samples: &[Configuration],
    bins: usize,
) -> Result<Vec<IntensityBin>, SamplingError> {
    if samples.is_empty() {
        return Err(SamplingError::NoSamples);
    }
    let bins = bins.max(1);
    let (lo, hi) = match kernel.ground {
        GroundSpace::Integers => {
            let sites = window.lattice_sites();
            (sites[0] - 0.5, sites[sites.len() - 1] + 0.5)
        }
        GroundSpace::Continuous { .. } => window.interval_on(&kernel.ground),
    };
    let width = (hi - lo) / bins as f64;
    let mut out = Vec::with_capacity(bins);
    for b in 0..bins {
        let blo = lo + b as f64 * width;
        let bhi = if b + 1 == bins { hi + 1e-12 } else { lo + (b + 1) as f64 * width };
        let counts: Vec<f64> = samples.iter().map(|s| s.count_in(blo, bhi) as f64).collect();
        let ms = mean_stderr(&counts);
        let expected = match kernel.ground {
            GroundSpace::Integers => window
                .lattice_sites()
                .iter()
                .filter(|&&x| x >= blo && x < bhi)
                .map(|&x| kernel.eval(x, x))
                .sum(),
            GroundSpace::Continuous { .. } => {
                gauss_legendre_on(60, blo, bhi.min(hi)).integrate(|x| kernel.eval(x, x))
            }
        };
        out.push(IntensityBin { lo: blo, hi: bhi, observed: ms.mean, stderr: ms.stderr, expected });
    }
    Ok(out)
}

/// One configuration per line, comma-separated points.
pub fn write_samples_csv<W: IoWrite>(
    mut w: W,
    samples: &[Configuration],
) -> std::io::Result<()> {
    for s in samples {
        let line: Vec<String> = s.points().iter().map(|x| format!("{x:.17e}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::make_kernel;
    use crate::quad::gauss_hermite_prob;
    use approx::assert_relative_eq;
    use std::sync::Arc;

    fn dsine() -> IntegrableKernel {
        make_kernel(KernelSpec::DiscreteSine { rho: 0.5 }).unwrap()
    }

    #[test]
    fn zero_kernel_samples_empty() {
        let zero = IntegrableKernel::from_parts(
            GroundSpace::Integers,
            KernelSpec::DiscreteSine { rho: 0.5 },
            false,
            Arc::new(|_| 0.0),
            Arc::new(|_| 0.0),
            Arc::new(|_| 0.0),
            Arc::new(|_| 0.0),
        );
        let w = Window::Discrete { lo: -4, hi: 4 };
        for stream in 0..20 {
            let c = sample_dpp_window(&zero, &w, 0, &SeedSpec::new(1, stream)).unwrap();
            assert!(c.is_empty());
        }
    }

    #[test]
    fn non_contraction_rejected() {
        use std::f64::consts::PI;
        let doubled = IntegrableKernel::from_parts(
            GroundSpace::Integers,
            KernelSpec::DiscreteSine { rho: 0.5 },
            false,
            Arc::new(|x: f64| 2.0 * (0.5 * PI * x).sin() / PI),
            Arc::new(|x: f64| (0.5 * PI * x).cos()),
            Arc::new(|x: f64| (0.5 * PI * x).cos()),
            Arc::new(|x: f64| -0.5 * PI * (0.5 * PI * x).sin()),
        );
        let err = WindowSampler::new(&doubled, &Window::Discrete { lo: -6, hi: 6 }, 0);
        assert!(matches!(err, Err(SamplingError::EigenvalueOutOfRange(_))));
    }

    #[test]
    fn rank_one_projection_always_one_point() {
        let k = make_kernel(KernelSpec::Cd { weight: Weight::Gaussian, n: 1 }).unwrap();
        let sampler = WindowSampler::new(&k, &Window::Symmetric { t: 12.0 }, 160).unwrap();
        assert!(sampler.eigenvalues()[0] > 1.0 - 1e-10);
        for stream in 0..200 {
            assert_eq!(sampler.sample(&SeedSpec::new(3, stream)).len(), 1);
        }
    }

    #[test]
    fn projection_sample_count_is_rank() {
        let k = make_kernel(KernelSpec::Cd { weight: Weight::Uniform01, n: 4 }).unwrap();
        let sampler = WindowSampler::new(&k, &Window::Symmetric { t: 1.0 }, 80).unwrap();
        let unit = sampler.eigenvalues().iter().filter(|&&l| l > 1.0 - 1e-9).count();
        assert_eq!(unit, 4);
        assert!(sampler.eigenvalues()[4] < 1e-9);
        for stream in 0..100 {
            let c = sampler.sample(&SeedSpec::new(11, stream));
            assert_eq!(c.len(), 4);
            assert!(c.points().iter().all(|&x| (0.0..=1.0).contains(&x)));
        }
    }

    #[test]
    fn reproducible_and_stream_sensitive() {
        let k = dsine();
        let w = Window::Discrete { lo: -10, hi: 10 };
        let sampler = WindowSampler::new(&k, &w, 0).unwrap();
        let a = sampler.sample(&SeedSpec::new(42, 7));
        let b = sampler.sample(&SeedSpec::new(42, 7));
        assert_eq!(a, b);
        let c = sampler.sample(&SeedSpec::new(42, 8));
        assert_ne!(a, c);
    }

    #[test]
    fn discrete_sine_count_and_pair_statistics() {
        let k = dsine();
        let w = Window::Discrete { lo: -10, hi: 10 };
        let sampler = WindowSampler::new(&k, &w, 0).unwrap();
        let n = 40_000usize;
        let mut counts = Vec::with_capacity(n);
        let mut both = Vec::with_capacity(n);
        for stream in 0..n {
            let c = sampler.sample(&SeedSpec::new(2024, stream as u64));
            counts.push(c.len() as f64);
            let has0 = c.points().iter().any(|&x| x == 0.0);
            let has1 = c.points().iter().any(|&x| x == 1.0);
            both.push(if has0 && has1 { 1.0 } else { 0.0 });
        }
        let ms = mean_stderr(&counts);
        let trace = k.trace_on_window(&w, 0);
        assert_relative_eq!(trace, 10.5, epsilon = 1e-12);
        assert!(
            (ms.mean - trace).abs() < 3.0 * ms.stderr,
            "count mean {} vs trace {trace} (stderr {})",
            ms.mean,
            ms.stderr
        );
        // two-point: P(0 and 1 both occupied) = det [[K00, K01], [K10, K11]]
        let k01 = k.eval(0.0, 1.0);
        let want = 0.25 - k01 * k01;
        let ms2 = mean_stderr(&both);
        assert!(
            (ms2.mean - want).abs() < 3.0 * ms2.stderr,
            "pair freq {} vs det {want} (stderr {})",
            ms2.mean,
            ms2.stderr
        );
    }

    #[test]
    fn ope_gaussian_n1_mean_near_zero() {
        let sampler = OpeSampler::new(Weight::Gaussian, 1).unwrap();
        let xs: Vec<f64> = (0..40_000)
            .map(|s| sampler.sample(&SeedSpec::new(5, s)).points()[0])
            .collect();
        let ms = mean_stderr(&xs);
        assert!(ms.mean.abs() < 3.0 * ms.stderr, "mean {} stderr {}", ms.mean, ms.stderr);
        assert_relative_eq!(ms.stderr, 1.0 / (40_000f64).sqrt(), max_relative = 0.05);
    }

    #[test]
    fn ope_gaussian_n2_gap_matches_quadrature() {
        // E[(x₁−x₂)²] under density ∝ (x₁−x₂)² ω(x₁)ω(x₂)
        let rule = gauss_hermite_prob(24);
        let (mut num, mut den) = (0.0, 0.0);
        for (&xi, &wi) in rule.nodes.iter().zip(&rule.weights) {
            for (&xj, &wj) in rule.nodes.iter().zip(&rule.weights) {
                let d2 = (xi - xj) * (xi - xj);
                num += wi * wj * d2 * d2;
                den += wi * wj * d2;
            }
        }
        let oracle = num / den;
        assert_relative_eq!(oracle, 6.0, epsilon = 1e-10);

        let sampler = OpeSampler::new(Weight::Gaussian, 2).unwrap();
        let gaps: Vec<f64> = (0..20_000)
            .map(|s| {
                let p = sampler.sample(&SeedSpec::new(9, s));
                let d = p.points()[1] - p.points()[0];
                d * d
            })
            .collect();
        let ms = mean_stderr(&gaps);
        assert!(
            (ms.mean - oracle).abs() < 3.0 * ms.stderr,
            "gap² mean {} vs oracle {oracle} (stderr {})",
            ms.mean,
            ms.stderr
        );
    }

    #[test]
    fn ope_counts_and_support() {
        for n in [1usize, 3, 5] {
            let sampler = OpeSampler::new(Weight::Uniform01, n).unwrap();
            for stream in 0..50 {
                let c = sampler.sample(&SeedSpec::new(77, stream));
                assert_eq!(c.len(), n);
                assert!(c.points().windows(2).all(|p| p[0] < p[1]));
                assert!(c.points().iter().all(|&x| (0.0..=1.0).contains(&x)));
            }
        }
        assert!(matches!(
            OpeSampler::new(Weight::Gaussian, 0),
            Err(SamplingError::EmptyEnsemble)
        ));
    }

    #[test]
    fn intensity_bins_match_kernel_diagonal() {
        let k = dsine();
        let w = Window::Discrete { lo: -6, hi: 6 };
        let sampler = WindowSampler::new(&k, &w, 0).unwrap();
        let samples: Vec<Configuration> =
            (0..30_000).map(|s| sampler.sample(&SeedSpec::new(31, s))).collect();
        let bins = empirical_intensity(&k, &w, &samples, 13).unwrap();
        assert_eq!(bins.len(), 13);
        let total_expected: f64 = bins.iter().map(|b| b.expected).sum();
        assert_relative_eq!(total_expected, 6.5, epsilon = 1e-12);
        for b in &bins {
            assert!(
                (b.observed - b.expected).abs() < 3.0 * b.stderr,
                "bin [{}, {}): observed {} expected {} stderr {}",
                b.lo,
                b.hi,
                b.observed,
                b.expected,
                b.stderr
            );
        }
        assert!(matches!(
            empirical_intensity(&k, &w, &[], 3),
            Err(SamplingError::NoSamples)
        ));
    }

    #[test]
    fn intensity_integrates_to_particle_number() {
        let k = make_kernel(KernelSpec::Cd { weight: Weight::Gaussian, n: 2 }).unwrap();
        let w = Window::Symmetric { t: 10.0 };
        let sampler = WindowSampler::new(&k, &w, 120).unwrap();
        let samples: Vec<Configuration> =
            (0..500).map(|s| sampler.sample(&SeedSpec::new(8, s))).collect();
        assert!(samples.iter().all(|c| c.len() == 2));
        let bins = empirical_intensity(&k, &w, &samples, 9).unwrap();
        let observed_total: f64 = bins.iter().map(|b| b.observed).sum();
        assert_relative_eq!(observed_total, 2.0, epsilon = 1e-12);
        let expected_total: f64 = bins.iter().map(|b| b.expected).sum();
        assert_relative_eq!(expected_total, 2.0, epsilon = 1e-6);
    }

    #[test]
    fn pairwise_sum_fixed_tree() {
        let xs: Vec<f64> = (1..=7).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 28.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
        let tiny: Vec<f64> = vec![1e-16; 1 << 12];
        assert_relative_eq!(pairwise_sum(&tiny), 4096e-16, max_relative = 1e-12);
    }

    #[test]
    fn csv_round_trip_shape() {
        let samples = vec![
            Configuration::new(vec![0.5, -1.25]),
            Configuration::new(vec![]),
            Configuration::new(vec![3.0]),
        ];
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &samples).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0].split(',').count(), 2);
        assert!(lines[0].starts_with("-1.25"));
        assert_eq!(lines[1], "");
        let back: f64 = lines[2].parse().unwrap();
        assert_eq!(back, 3.0);
    }
}
