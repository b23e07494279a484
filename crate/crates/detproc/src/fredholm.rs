//! Fredholm determinants det(I + χ_w K (g−1)) — the exact oracle for
//! expectations of multiplicative functionals ∏_{x∈X} g(x).

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::kernels::{GroundSpace, IntegrableKernel, Window};
use crate::quad::gauss_legendre_on;

type SymbolFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Multiplicative symbol g with g−1 supported inside `window`.
#[derive(Clone)]
pub struct MultiplicativeSymbol {
    g: SymbolFn,
    pub window: Window,
}

impl MultiplicativeSymbol {
    pub fn new(window: Window, g: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        MultiplicativeSymbol { g: Arc::new(g), window }
    }

    /// g(x), forced to 1 outside the declared window.
    pub fn eval(&self, x: f64) -> Complex64 {
        let inside = match self.window {
            Window::Symmetric { t } => x.abs() <= t,
            Window::Discrete { lo, hi } => x >= lo as f64 && x <= hi as f64,
        };
        if inside {
            (self.g)(x)
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    /// The ratio symbol ∏_i (z_i−x)/(w_i−x) on the window.
    pub fn ratio(
        window: Window,
        zs: &[Complex64],
        ws: &[Complex64],
    ) -> Result<Self, FredholmError> {
        if zs.iter().chain(ws).any(|v| v.im == 0.0) {
            return Err(FredholmError::RealShift);
        }
        let (zs, ws) = (zs.to_vec(), ws.to_vec());
        Ok(MultiplicativeSymbol::new(window, move |x| {
            let mut v = Complex64::new(1.0, 0.0);
            for (z, w) in zs.iter().zip(&ws) {
                v *= (z - x) / (w - x);
            }
            v
        }))
    }
}

#[derive(Debug, Error)]
pub enum FredholmError {
    #[error("shift arguments must be non-real")]
    RealShift,
    #[error("determinant evaluation produced a non-finite value")]
    NonFinite,
    #[error("operation requires a discrete window")]
    DiscreteOnly,
}

#[derive(Clone, Copy, Debug)]
pub struct FredholmResult {
    pub value: Complex64,
    /// |value(order) − value(2·order)| for the continuous Nyström route;
    /// 0 for the exact discrete route.
    pub doubling_err: f64,
}

/// det(I + χ_w K(g−1)): exact finite determinant over lattice sites when
/// the ground space is discrete, symmetrized Nyström discretization on
/// Gauss–Legendre nodes otherwise.
pub fn fredholm_det(
    kernel: &IntegrableKernel,
    sym: &MultiplicativeSymbol,
    order: usize,
) -> Result<FredholmResult, FredholmError> {
    match kernel.ground {
        GroundSpace::Integers => {
            let sites = sym.window.lattice_sites();
            let value = det_on_points(kernel, sym, &sites, None)?;
            Ok(FredholmResult { value, doubling_err: 0.0 })
        }
        GroundSpace::Continuous { .. } => {
            let (lo, hi) = sym.window.interval_on(&kernel.ground);
            let mut vals = [Complex64::new(1.0, 0.0); 2];
            for (slot, n) in [(0usize, order), (1usize, 2 * order)] {
                let rule = gauss_legendre_on(n, lo, hi);
                let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
                vals[slot] = det_on_points(kernel, sym, &rule.nodes, Some(&sw))?;
            }
            Ok(FredholmResult {
                value: vals[1],
                doubling_err: (vals[1] - vals[0]).norm(),
            })
        }
    }
}

fn det_on_points(
    kernel: &IntegrableKernel,
    sym: &MultiplicativeSymbol,
    points: &[f64],
    sqrt_weights: Option<&[f64]>,
) -> Result<Complex64, FredholmError> {
    let n = points.len();
    let gm1: Vec<Complex64> = points.iter().map(|&x| sym.eval(x) - 1.0).collect();
    let kmat = kernel.matrix_on(points);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let scale = sqrt_weights.map_or(1.0, |sw| sw[i] * sw[j]);
            let mut v = gm1[j] * (kmat[(i, j)] * scale);
            if i == j {
                v += 1.0;
            }
            m[(i, j)] = v;
        }
    }
    let det = m.lu().determinant();
    if det.re.is_finite() && det.im.is_finite() {
        Ok(det)
    } else {
        Err(FredholmError::NonFinite)
    }
}

/// E[∏_{x∈X∩window} ∏_i (z_i−x)/(w_i−x)] as a Fredholm determinant.
pub fn expect_ratio(
    kernel: &IntegrableKernel,
    zs: &[Complex64],
    ws: &[Complex64],
    window: Window,
    order: usize,
) -> Result<FredholmResult, FredholmError> {
    let sym = MultiplicativeSymbol::ratio(window, zs, ws)?;
    fredholm_det(kernel, &sym, order)
}

/// Brute-force oracle on a discrete window: det(I + K(g−1)) expanded as
/// Σ_{S ⊆ sites} ∏_{x∈S}(g(x)−1) · det K|_S.
pub fn subset_expansion_det(
    kernel: &IntegrableKernel,
    sym: &MultiplicativeSymbol,
) -> Result<Complex64, FredholmError> {
    if kernel.ground != GroundSpace::Integers {
        return Err(FredholmError::DiscreteOnly);
    }
    let sites = sym.window.lattice_sites();
    let n = sites.len();
    assert!(n <= 20, "subset expansion is exponential; window too large");
    let gm1: Vec<Complex64> = sites.iter().map(|&x| sym.eval(x) - 1.0).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for mask in 0u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let k = subset.len();
        let mut minor = DMatrix::<f64>::zeros(k, k);
        for (a, &i) in subset.iter().enumerate() {
            for (b, &j) in subset.iter().enumerate() {
                minor[(a, b)] = kernel.eval(sites[i], sites[j]);
            }
        }
        let mut term = Complex64::new(minor.lu().determinant(), 0.0);
        for &i in &subset {
            term *= gm1[i];
        }
        total += term;
    }
    Ok(total)
}
