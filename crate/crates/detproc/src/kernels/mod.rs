//! Ground spaces, windows, and the integrable-kernel zoo.
//!
//! Every kernel is carried in the form K(x,y) = (A(x)B(y) − A(y)B(x))/(x−y)
//! with stored derivatives of A and B for the confluent diagonal. Weighted
//! (Christoffel–Darboux) kernels fold √ω into A and B, so the reference
//! measure is always Lebesgue (continuous) or counting (integers).

pub mod orthopoly;
pub mod special;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad::gauss_legendre_on;
use crate::weights::Weight;
use orthopoly::OrthonormalBasis;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GroundSpace {
    /// dμ = dx on (lo, hi); endpoints may be ±∞.
    Continuous { lo: f64, hi: f64 },
    /// Counting measure on ℤ.
    Integers,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    DiscreteSine { rho: f64 },
    Sine,
    Cd { weight: Weight, n: usize },
    Airy,
    Bessel { s: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Window {
    /// [−T, T] (intersected with the ground space).
    Symmetric { t: f64 },
    /// {lo, …, hi} on the integer lattice.
    Discrete { lo: i64, hi: i64 },
}

impl Window {
    /// Lattice sites covered by the window.
    pub fn lattice_sites(&self) -> Vec<f64> {
        let (lo, hi) = match *self {
            Window::Discrete { lo, hi } => (lo, hi),
            Window::Symmetric { t } => (-(t.floor() as i64), t.floor() as i64),
        };
        assert!(lo <= hi, "empty window");
        (lo..=hi).map(|k| k as f64).collect()
    }

    /// Interval covered by the window, clipped to the ground space.
    pub fn interval_on(&self, ground: &GroundSpace) -> (f64, f64) {
        let (glo, ghi) = match *ground {
            GroundSpace::Continuous { lo, hi } => (lo, hi),
            GroundSpace::Integers => (f64::NEG_INFINITY, f64::INFINITY),
        };
        let (lo, hi) = match *self {
            Window::Symmetric { t } => (-t, t),
            Window::Discrete { lo, hi } => (lo as f64, hi as f64),
        };
        (lo.max(glo), hi.min(ghi))
    }
}

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("invalid kernel parameter: {0}")]
    InvalidParameter(String),
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Correlation kernel in integrable (A, B) form.
pub struct IntegrableKernel {
    pub ground: GroundSpace,
    pub spec: KernelSpec,
    /// Rigidity of the associated process, recorded from the literature;
    /// documentation only, never tested here.
    pub rigid: bool,
    a: RealFn,
    b: RealFn,
    da: RealFn,
    db: RealFn,
}

impl IntegrableKernel {
    #[cfg(test)]
    pub(crate) fn from_parts(
        ground: GroundSpace,
        spec: KernelSpec,
        rigid: bool,
        a: RealFn,
        b: RealFn,
        da: RealFn,
        db: RealFn,
    ) -> Self {
        IntegrableKernel { ground, spec, rigid, a, b, da, db }
    }
}

pub fn make_kernel(spec: KernelSpec) -> Result<IntegrableKernel, KernelError> {
    use std::f64::consts::PI;
    match spec {
        KernelSpec::DiscreteSine { rho } => {
            if !(0.0 < rho && rho < 1.0) {
                return Err(KernelError::InvalidParameter(format!(
                    "discrete sine density must lie in (0,1), got {rho}"
                )));
            }
            Ok(IntegrableKernel {
                ground: GroundSpace::Integers,
                spec,
                rigid: true,
                a: Arc::new(move |x| (PI * rho * x).sin() / PI),
                b: Arc::new(move |x| (PI * rho * x).cos()),
                da: Arc::new(move |x| rho * (PI * rho * x).cos()),
                db: Arc::new(move |x| -PI * rho * (PI * rho * x).sin()),
            })
        }
        KernelSpec::Sine => Ok(IntegrableKernel {
            ground: GroundSpace::Continuous {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            },
            spec,
            rigid: true,
            a: Arc::new(|x| (PI * x).sin() / PI),
            b: Arc::new(|x| (PI * x).cos()),
            da: Arc::new(|x| (PI * x).cos()),
            db: Arc::new(|x| -PI * (PI * x).sin()),
        }),
        KernelSpec::Cd { weight, n } => {
            if n == 0 {
                return Err(KernelError::InvalidParameter(
                    "Christoffel-Darboux rank must be at least 1".into(),
                ));
            }
            let basis = Arc::new(OrthonormalBasis::new(weight, n + 1));
            let (lo, hi) = weight.support();
            let bn = basis.sqrt_beta(n);
            // A = √β_N √ω φ_N,  B = √ω φ_{N−1}; the √ω′ pieces of the
            // derivatives enter through (log ω)′/2.
            let mk = |deg: usize, scale: f64, deriv: bool| -> RealFn {
                let basis = basis.clone();
                Arc::new(move |x: f64| {
                    let sw = weight.density(x).sqrt();
                    let (p, d) = basis.eval_with_deriv(deg, x);
                    if deriv {
                        scale * sw * (d[deg] + 0.5 * weight.dlog_density(x) * p[deg])
                    } else {
                        scale * sw * p[deg]
                    }
                })
            };
            Ok(IntegrableKernel {
                ground: GroundSpace::Continuous { lo, hi },
                spec,
                rigid: true,
                a: mk(n, bn, false),
                b: mk(n - 1, 1.0, false),
                da: mk(n, bn, true),
                db: mk(n - 1, 1.0, true),
            })
        }
        KernelSpec::Airy => Ok(IntegrableKernel {
            ground: GroundSpace::Continuous {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            },
            spec,
            rigid: true,
            a: Arc::new(|x| special::airy(x).0),
            b: Arc::new(|x| special::airy(x).1),
            da: Arc::new(|x| special::airy(x).1),
            db: Arc::new(|x| x * special::airy(x).0),
        }),
        KernelSpec::Bessel { s } => {
            if s <= -1.0 {
                return Err(KernelError::InvalidParameter(format!(
                    "Bessel parameter must exceed -1, got {s}"
                )));
            }
            Ok(IntegrableKernel {
                ground: GroundSpace::Continuous {
                    lo: 0.0,
                    hi: f64::INFINITY,
                },
                spec,
                rigid: true,
                a: Arc::new(move |x| special::bessel_j(s, x.sqrt())),
                b: Arc::new(move |x| {
                    let t = x.sqrt();
                    0.5 * t * special::bessel_j_prime(s, t)
                }),
                da: Arc::new(move |x| {
                    let t = x.sqrt();
                    special::bessel_j_prime(s, t) / (2.0 * t)
                }),
                db: Arc::new(move |x| {
                    // from the Bessel equation: B′ = −(1 − s²/x)·J_s(√x)/4
                    -0.25 * (1.0 - s * s / x) * special::bessel_j(s, x.sqrt())
                }),
            })
        }
    }
}

impl IntegrableKernel {
    /// Near-diagonal threshold δ at location x.
    pub fn near_diagonal_threshold(&self, x: f64) -> f64 {
        1e-6 * (1.0 + x.abs())
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mid = 0.5 * (x + y);
        if (x - y).abs() < self.near_diagonal_threshold(mid) {
            (self.da)(mid) * (self.b)(mid) - (self.a)(mid) * (self.db)(mid)
        } else {
            ((self.a)(x) * (self.b)(y) - (self.a)(y) * (self.b)(x)) / (x - y)
        }
    }

    /// Kernel matrix on a point set, evaluating A and B once per point.
    /// Entries closer than the confluence threshold fall back to [`Self::eval`].
    pub fn matrix_on(&self, points: &[f64]) -> nalgebra::DMatrix<f64> {
        let n = points.len();
        let av: Vec<f64> = points.iter().map(|&x| (self.a)(x)).collect();
        let bv: Vec<f64> = points.iter().map(|&x| (self.b)(x)).collect();
        let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let (x, y) = (points[i], points[j]);
                let v = if (x - y).abs() < self.near_diagonal_threshold(0.5 * (x + y)) {
                    self.eval(x, y)
                } else {
                    (av[i] * bv[j] - av[j] * bv[i]) / (x - y)
                };
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    /// ∫_w K(x,x) dμ — the expected point count in the window.
    pub fn trace_on_window(&self, w: &Window, order: usize) -> f64 {
        match self.ground {
            GroundSpace::Integers => w.lattice_sites().iter().map(|&x| self.eval(x, x)).sum(),
            GroundSpace::Continuous { .. } => {
                let (lo, hi) = w.interval_on(&self.ground);
                if lo >= hi {
                    return 0.0;
                }
                gauss_legendre_on(order, lo, hi).integrate(|x| self.eval(x, x))
            }
        }
    }

    /// Evaluation grid for diagnostics: the middle half of the window, so
    /// that truncation error at the edges does not drown the residuals.
    fn diag_grid(&self, w: &Window, m: usize) -> Vec<f64> {
        match self.ground {
            GroundSpace::Integers => {
                let sites = w.lattice_sites();
                let q = sites.len() / 4;
                let inner = &sites[q..sites.len() - q.min(sites.len() - q - 1)];
                let stride = (inner.len() / m).max(1);
                inner.iter().copied().step_by(stride).collect()
            }
            GroundSpace::Continuous { .. } => {
                let (lo, hi) = w.interval_on(&self.ground);
                let (lo, hi) = (lo.max(-1e6), hi.min(1e6));
                let span = hi - lo;
                (0..m)
                    .map(|k| lo + 0.25 * span + 0.5 * span * (k as f64 + 0.5) / m as f64)
                    .collect()
            }
        }
    }

    pub fn diagnostics(&self, w: &Window, order: usize) -> KernelDiagnostics {
        let grid = self.diag_grid(w, 12);

        // (a) idempotence of the projection restricted to the window:
        // exact only when w covers the support, a lower bound otherwise
        let compose: Box<dyn Fn(f64, f64) -> f64> = match self.ground {
            GroundSpace::Integers => {
                let sites = w.lattice_sites();
                Box::new(move |x, y| sites.iter().map(|&t| self.eval(x, t) * self.eval(t, y)).sum())
            }
            GroundSpace::Continuous { .. } => {
                let (lo, hi) = w.interval_on(&self.ground);
                let rule = gauss_legendre_on(order.max(2), lo.max(-1e6), hi.min(1e6));
                Box::new(move |x, y| rule.integrate(|t| self.eval(x, t) * self.eval(t, y)))
            }
        };
        let mut idem: f64 = 0.0;
        for &x in &grid {
            for &y in &grid {
                idem = idem.max((compose(x, y) - self.eval(x, y)).abs());
            }
        }

        // (b) direct integrable form vs confluent midpoint value near the
        // diagonal (offset 10δ keeps the direct branch active)
        let mut form: f64 = 0.0;
        for &x in &grid {
            let d = 10.0 * self.near_diagonal_threshold(x);
            let y = x + d;
            let mid = 0.5 * (x + y);
            let confluent = (self.da)(mid) * (self.b)(mid) - (self.a)(mid) * (self.db)(mid);
            form = form.max((self.eval(x, y) - confluent).abs());
        }

        // (c) truncated ∫ K(x,x)/(1+x²) dμ
        let hs = match self.ground {
            GroundSpace::Integers => w
                .lattice_sites()
                .iter()
                .map(|&x| self.eval(x, x) / (1.0 + x * x))
                .sum(),
            GroundSpace::Continuous { .. } => {
                let (lo, hi) = w.interval_on(&self.ground);
                dyadic_panels(lo, hi)
                    .into_iter()
                    .map(|(a, b)| {
                        gauss_legendre_on(40, a, b).integrate(|x| self.eval(x, x) / (1.0 + x * x))
                    })
                    .sum()
            }
        };

        KernelDiagnostics {
            idempotence_residual: idem,
            integrable_form_residual: form,
            hs_weight_integral: hs,
        }
    }
}

/// Split [lo, hi] into panels that refine geometrically toward 0, so that
/// slowly decaying tails like 1/(1+x²) integrate accurately.
fn dyadic_panels(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![0.0f64];
    let mut t = 1.0;
    let extent = lo.abs().max(hi.abs());
    while t < extent {
        cuts.push(t);
        t *= 2.0;
    }
    cuts.push(extent);
    let mut panels = Vec::new();
    for w in cuts.windows(2) {
        for (a, b) in [(w[0], w[1]), (-w[1], -w[0])] {
            let (a, b) = (a.max(lo), b.min(hi));
            if a < b {
                panels.push((a, b));
            }
        }
    }
    panels
}

#[derive(Clone, Copy, Debug)]
pub struct KernelDiagnostics {
    pub idempotence_residual: f64,
    pub integrable_form_residual: f64,
    pub hs_weight_integral: f64,
}
