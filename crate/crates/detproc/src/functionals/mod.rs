//! Regularized characteristic-polynomial functionals and their power-sum
//! specializations.
//!
//! Everything here is built from g(x) = 1 − u/(x+iR) and the coefficient
//! functions f_k(x) = (x+iR)^{−k}. A specialization assigns complex values
//! p̂_k to the power sums; compensated variants subtract the deterministic
//! window integral ∫ f_k(x) K(x,x) dμ so the series survive T → ∞. All
//! limits are represented at finite truncation T, with the last doubling
//! increment recorded rather than extrapolated away.

use num_complex::Complex64;
use thiserror::Error;

use crate::kernels::{GroundSpace, IntegrableKernel, KernelSpec, Window};
use crate::quad::gauss_legendre_on;
use crate::sampling::Configuration;

const BRANCH_CUT_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FunctionalsError {
    #[error("invalid regularization parameters: {0}")]
    InvalidParams(String),
    #[error("log argument {0} lies on the branch cut (-inf, 0]")]
    BranchCut(Complex64),
    #[error("series tail bound {bound:.3e} exceeds tolerance {tol:.3e} at order {order}")]
    TailAboveTolerance { bound: f64, tol: f64, order: usize },
    #[error("variant requires a shift sequence of length {expected}, got {got}")]
    ShiftLength { expected: usize, got: usize },
    #[error("compensator quadrature produced a non-finite value")]
    NonFiniteCompensator,
}

#[derive(Clone, Copy, Debug)]
pub struct RegularizationParams {
    /// Imaginary offset of the regularized variable x + iR.
    pub r: f64,
    /// Window truncation: points and compensators live on [−T, T].
    pub t: f64,
    /// Series order: power sums p̂_1..p̂_M.
    pub m: usize,
}

impl RegularizationParams {
    pub fn new(r: f64, t: f64, m: usize) -> Result<Self, FunctionalsError> {
        if !(r > 0.0) {
            return Err(FunctionalsError::InvalidParams(format!("R must be positive, got {r}")));
        }
        if !(t > 0.0) {
            return Err(FunctionalsError::InvalidParams(format!("T must be positive, got {t}")));
        }
        if m == 0 {
            return Err(FunctionalsError::InvalidParams("series order M must be ≥ 1".into()));
        }
        Ok(RegularizationParams { r, t, m })
    }
}

/// g(x) = 1 − u/(x+iR). Total; the caller keeps u − iR off the reals if a
/// logarithm is to be taken downstream.
pub fn g_eval(x: f64, u: Complex64, r: f64) -> Complex64 {
    1.0 - u / Complex64::new(x, r)
}

/// f(x) = −log g(x), principal branch. Errors out when g lands within
/// 1e−12 of the cut (−∞, 0]; callers perturb u and retry.
pub fn f_eval(x: f64, u: Complex64, r: f64) -> Result<Complex64, FunctionalsError> {
    let g = g_eval(x, u, r);
    if g.im.abs() < BRANCH_CUT_TOL && g.re < BRANCH_CUT_TOL {
        return Err(FunctionalsError::BranchCut(g));
    }
    Ok(-g.ln())
}

/// f_1..f_m at x: successive powers of 1/(x+iR).
fn f_powers(x: f64, r: f64, m: usize) -> Vec<Complex64> {
    let base = Complex64::new(x, r).inv();
    let mut out = Vec::with_capacity(m);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..m {
        p *= base;
        out.push(p);
    }
    out
}

/// Integrate x ↦ v(x)·K(x,x) over [−T, T] ∩ ground. Discrete ground sums
/// lattice sites; continuous ground uses dyadically refined Gauss panels so
/// the mass near the origin (where f_k varies fastest) is resolved.
fn weighted_diag_integral<F>(
    kernel: &IntegrableKernel,
    t: f64,
    m: usize,
    v: F,
) -> Result<Vec<Complex64>, FunctionalsError>
where
    F: Fn(f64, &mut Vec<Complex64>) -> Result<(), FunctionalsError>,
{
    let mut acc = vec![Complex64::new(0.0, 0.0); m];
    let mut vals = Vec::with_capacity(m);
    let mut push = |x: f64, w: f64, acc: &mut Vec<Complex64>| -> Result<(), FunctionalsError> {
        let k = kernel.eval(x, x);
        vals.clear();
        v(x, &mut vals)?;
        for (a, f) in acc.iter_mut().zip(&vals) {
            *a += f * (k * w);
        }
        Ok(())
    };
    match kernel.ground {
        GroundSpace::Integers => {
            for x in (Window::Symmetric { t }).lattice_sites() {
                push(x, 1.0, &mut acc)?;
            }
        }
        GroundSpace::Continuous { .. } => {
            let (lo, hi) = Window::Symmetric { t }.interval_on(&kernel.ground);
            for (a, b) in geometric_panels(lo, hi) {
                let rule = gauss_legendre_on(24, a, b);
                for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                    push(x, w, &mut acc)?;
                }
            }
        }
    }
    if acc.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(FunctionalsError::NonFiniteCompensator);
    }
    Ok(acc)
}

/// Panel boundaries at 0, ±1, ±2, ±4, … clipped to [lo, hi].
fn geometric_panels(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![lo, hi];
    let big = lo.abs().max(hi.abs());
    let mut c = 1.0;
    while c < big {
        for s in [c, -c] {
            if s > lo && s < hi {
                cuts.push(s);
            }
        }
        c *= 2.0;
    }
    if lo < 0.0 && hi > 0.0 {
        cuts.push(0.0);
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    cuts.windows(2).map(|p| (p[0], p[1])).collect()
}

/// ∫_{−T}^{T} f_k(x) K(x,x) dμ for k = 1..m.
pub fn compensator_integrals(
    kernel: &IntegrableKernel,
    r: f64,
    t: f64,
    m: usize,
) -> Result<Vec<Complex64>, FunctionalsError> {
    weighted_diag_integral(kernel, t, m, |x, out| {
        out.extend(f_powers(x, r, m));
        Ok(())
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Variant {
    /// Plain sums Σ_x f_k(x); no compensation.
    Rho0,
    /// Every order compensated: p̂_k = Σ_x f_k(x) − ∫ f_k K dμ.
    Rho,
    /// Only k = 1 compensated.
    RhoTilde,
    /// p̂_k = rho.p̂_k − a_k for a caller-supplied bounded sequence.
    Shifted(Vec<Complex64>),
}

/// Power-sum values p̂_1..p̂_M together with the provenance needed to
/// reproduce them.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub variant: Variant,
    pub values: Vec<Complex64>,
    /// ∫ f_k K dμ on [−T, T]; zeros when no kernel was supplied.
    pub compensators: Vec<Complex64>,
    pub r: f64,
    pub t: f64,
    pub kernel: Option<KernelSpec>,
    /// The points of X actually used (|x| ≤ T, closed).
    pub points: Vec<f64>,
    /// max_k |c_k(T) − c_k(T/2)|: how settled the compensators are.
    pub last_increment: f64,
}

/// Build the specialization of a configuration. `kernel = None` means the
/// zero kernel: all compensators vanish.
pub fn build_specialization(
    x: &Configuration,
    kernel: Option<&IntegrableKernel>,
    variant: Variant,
    params: &RegularizationParams,
) -> Result<Specialization, FunctionalsError> {
    let (r, t, m) = (params.r, params.t, params.m);
    let points: Vec<f64> =
        x.points().iter().copied().filter(|x| x.abs() <= t).collect();
    let mut sums = vec![Complex64::new(0.0, 0.0); m];
    for &p in &points {
        for (s, f) in sums.iter_mut().zip(f_powers(p, r, m)) {
            *s += f;
        }
    }
    let (comp, comp_half) = match kernel {
        Some(k) => (
            compensator_integrals(k, r, t, m)?,
            compensator_integrals(k, r, t / 2.0, m)?,
        ),
        None => (vec![Complex64::new(0.0, 0.0); m], vec![Complex64::new(0.0, 0.0); m]),
    };
    let last_increment = comp
        .iter()
        .zip(&comp_half)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    let values: Vec<Complex64> = match &variant {
        Variant::Rho0 => sums.clone(),
        Variant::Rho => sums.iter().zip(&comp).map(|(s, c)| s - c).collect(),
        Variant::RhoTilde => sums
            .iter()
            .zip(&comp)
            .enumerate()
            .map(|(k, (s, c))| if k == 0 { s - c } else { *s })
            .collect(),
        Variant::Shifted(a) => {
            if a.len() != m {
                return Err(FunctionalsError::ShiftLength { expected: m, got: a.len() });
            }
            sums.iter().zip(&comp).zip(a).map(|((s, c), ak)| s - c - ak).collect()
        }
    };
    Ok(Specialization {
        variant,
        values,
        compensators: comp,
        r,
        t,
        kernel: kernel.map(|k| k.spec),
        points,
        last_increment,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct SeriesValue {
    pub value: Complex64,
    /// Geometric bound on the dropped tail Σ_{k>M} p̂_k u^k/k.
    pub tail_bound: f64,
    /// For the plain-sum variant: |series − Σ_x f_u(x)| on the same points.
    pub direct_check: Option<f64>,
}

/// S(u) = Σ_{k=1..M} p̂_k uᵏ/k inside the convergence disk |u| < R.
pub fn s_series(
    spec: &Specialization,
    u: Complex64,
    tol: f64,
) -> Result<SeriesValue, FunctionalsError> {
    let m = spec.values.len();
    let mut value = Complex64::new(0.0, 0.0);
    let mut upow = Complex64::new(1.0, 0.0);
    let mut growth = 0.0f64;
    for (k, p) in spec.values.iter().enumerate() {
        upow *= u;
        value += p * upow / (k + 1) as f64;
        growth = growth.max(p.norm() * spec.r.powi(k as i32 + 1));
    }
    let q = u.norm() / spec.r;
    let tail_bound = if q < 1.0 {
        growth * q.powi(m as i32 + 1) / ((m + 1) as f64 * (1.0 - q))
    } else {
        f64::INFINITY
    };
    if tail_bound > tol {
        return Err(FunctionalsError::TailAboveTolerance { bound: tail_bound, tol, order: m });
    }
    let direct_check = match spec.variant {
        Variant::Rho0 => {
            let mut direct = Complex64::new(0.0, 0.0);
            for &x in &spec.points {
                direct += f_eval(x, u, spec.r)?;
            }
            Some((value - direct).norm())
        }
        _ => None,
    };
    Ok(SeriesValue { value, tail_bound, direct_check })
}

/// A finite-T evaluation of a compensated limit, with the compensator and
/// the final doubling increment kept visible.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedValue {
    pub value: Complex64,
    pub t: f64,
    /// The deterministic log-space correction subtracted from Σ log g.
    pub compensator: Complex64,
    /// |value(T) − value(T/2)|.
    pub last_increment: f64,
    /// Imaginary perturbation applied to u after a branch-cut hit; 0 if none.
    pub perturbation: f64,
}

enum CompensatorKind {
    /// ∫ log g_{u+iR}(x) K(x,x) dμ — every order.
    FullLog,
    /// u ∫ f_1(x) K(x,x) dμ — first order only.
    FirstOrder,
}

/// log g_{u+iR}(x) = log((x−u)/(x+iR)), split as ln(x−u) − ln(x+iR).
/// For nonreal u both factors keep a fixed-sign imaginary part, so each
/// principal log stays off the cut and the value is continuous in x — the
/// analytic continuation of −f that the compensator integral requires.
/// (The quotient itself can cross (−∞,0]; taking its principal log directly
/// would insert 2πi jumps under the integral.)
fn log_g_regularized(x: f64, u: Complex64, r: f64) -> Complex64 {
    (Complex64::new(x, 0.0) - u).ln() - Complex64::new(x, r).ln()
}

fn compensated_at(
    x: &Configuration,
    u: Complex64,
    kernel: Option<&IntegrableKernel>,
    r: f64,
    t: f64,
    kind: &CompensatorKind,
) -> Result<(Complex64, Complex64), FunctionalsError> {
    let mut logs = Complex64::new(0.0, 0.0);
    for &p in x.points().iter().filter(|p| p.abs() <= t) {
        logs += log_g_regularized(p, u, r);
    }
    let comp = match kernel {
        None => Complex64::new(0.0, 0.0),
        Some(k) => match kind {
            CompensatorKind::FullLog => {
                let v = weighted_diag_integral(k, t, 1, |p, out| {
                    out.push(log_g_regularized(p, u, r));
                    Ok(())
                })?;
                v[0]
            }
            CompensatorKind::FirstOrder => u * compensator_integrals(k, r, t, 1)?[0],
        },
    };
    Ok((logs, comp))
}

fn psi_impl(
    x: &Configuration,
    u: Complex64,
    kernel: Option<&IntegrableKernel>,
    params: &RegularizationParams,
    kind: CompensatorKind,
) -> Result<CompensatedValue, FunctionalsError> {
    if u.im == 0.0 {
        return Err(FunctionalsError::InvalidParams(format!("u must be non-real, got {u}")));
    }
    let attempt = |u: Complex64| -> Result<(Complex64, Complex64, Complex64), FunctionalsError> {
        let (logs_half, comp_half) =
            compensated_at(x, u, kernel, params.r, params.t / 2.0, &kind)?;
        let (logs, comp) = compensated_at(x, u, kernel, params.r, params.t, &kind)?;
        Ok(((logs - comp).exp(), (logs_half - comp_half).exp(), comp))
    };
    let (value, value_half, comp, perturbation) = match attempt(u) {
        Ok((v, vh, c)) => (v, vh, c, 0.0),
        Err(FunctionalsError::BranchCut(_)) => {
            // measure-zero collision: nudge u away from the cut and note it
            let eps = 1e-10 * (1.0 + u.norm());
            let shift = Complex64::new(0.0, if u.im >= 0.0 { eps } else { -eps });
            let (v, vh, c) = attempt(u + shift)?;
            (v, vh, c, eps)
        }
        Err(e) => return Err(e),
    };
    Ok(CompensatedValue {
        value,
        t: params.t,
        compensator: comp,
        last_increment: (value - value_half).norm(),
        perturbation,
    })
}

/// Ψ_X(u) at truncation T: exp(−∫_{−T}^{T} log g_{u+iR} K dμ) ∏_{|x|≤T} g_{u+iR}(x),
/// computed as a single exponential of log-space sums.
pub fn psi(
    x: &Configuration,
    u: Complex64,
    kernel: Option<&IntegrableKernel>,
    params: &RegularizationParams,
) -> Result<CompensatedValue, FunctionalsError> {
    psi_impl(x, u, kernel, params, CompensatorKind::FullLog)
}

/// Ψ̃_X(u): same product, but the compensator keeps only the first-order
/// term u ∫ f_1 K dμ.
pub fn psi_tilde(
    x: &Configuration,
    u: Complex64,
    kernel: Option<&IntegrableKernel>,
    params: &RegularizationParams,
) -> Result<CompensatedValue, FunctionalsError> {
    psi_impl(x, u, kernel, params, CompensatorKind::FirstOrder)
}

#[derive(Clone, Debug)]
pub struct UTrace {
    pub u: Complex64,
    pub values: Vec<Complex64>,
    pub increments: Vec<f64>,
    /// Increments non-increasing along the schedule (up to noise floor).
    pub cauchy: bool,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub schedule: Vec<f64>,
    pub traces: Vec<UTrace>,
    /// max over the grid of the final increment.
    pub max_increment: f64,
    /// (max final increment) / (min final increment) across the u-grid;
    /// 1 when everything already converged to zero increments.
    pub uniformity_factor: f64,
    pub all_cauchy: bool,
}

/// Evaluate Ψ along an increasing truncation schedule on a grid of u values
/// and report Cauchy behavior; nothing is extrapolated.
pub fn convergence_diagnostic(
    x: &Configuration,
    us: &[Complex64],
    kernel: Option<&IntegrableKernel>,
    params: &RegularizationParams,
    schedule: &[f64],
) -> Result<ConvergenceReport, FunctionalsError> {
    if schedule.windows(2).any(|p| p[0] >= p[1]) || schedule.is_empty() {
        return Err(FunctionalsError::InvalidParams(
            "truncation schedule must be strictly increasing and non-empty".into(),
        ));
    }
    let mut traces = Vec::with_capacity(us.len());
    for &u in us {
        let mut values = Vec::with_capacity(schedule.len());
        for &t in schedule {
            let p = RegularizationParams { t, ..*params };
            values.push(psi(x, u, kernel, &p)?.value);
        }
        let increments: Vec<f64> =
            values.windows(2).map(|p| (p[1] - p[0]).norm()).collect();
        let cauchy = increments
            .windows(2)
            .all(|p| p[1] <= p[0] * 1.05 + 1e-14);
        traces.push(UTrace { u, values, increments, cauchy });
    }
    let finals: Vec<f64> =
        traces.iter().map(|t| t.increments.last().copied().unwrap_or(0.0)).collect();
    let max_increment = finals.iter().copied().fold(0.0f64, f64::max);
    let min_increment = finals.iter().copied().fold(f64::INFINITY, f64::min);
    let uniformity_factor = if max_increment == 0.0 {
        1.0
    } else if min_increment == 0.0 {
        f64::INFINITY
    } else {
        max_increment / min_increment
    };
    let all_cauchy = traces.iter().all(|t| t.cauchy);
    Ok(ConvergenceReport { schedule: schedule.to_vec(), traces, max_increment, uniformity_factor, all_cauchy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::make_kernel;
    use crate::sampling::{SeedSpec, WindowSampler};
    use crate::scalar::{crat_pow, CRat};
    use crate::symfun::power_to_eh;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dsine() -> IntegrableKernel {
        make_kernel(KernelSpec::DiscreteSine { rho: 0.5 }).unwrap()
    }

    // deterministic low-tech value stream for grid tests
    struct Xorshift(u64);
    impl Xorshift {
        fn next_unit(&mut self) -> f64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
    }

    #[test]
    fn g_and_f_basics() {
        assert_eq!(g_eval(3.7, c(0.0, 0.0), 2.0), c(1.0, 0.0));
        assert_eq!(f_eval(3.7, c(0.0, 0.0), 2.0).unwrap(), c(0.0, 0.0));
        // x = 0, u = i/2, R = 1: g = 1 − (i/2)/i = 1/2
        let g = g_eval(0.0, c(0.0, 0.5), 1.0);
        assert_relative_eq!(g.re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(g.im, 0.0, epsilon = 1e-15);

        let mut rng = Xorshift(0x9e3779b97f4a7c15);
        for _ in 0..100 {
            let x = 8.0 * rng.next_unit() - 4.0;
            let r = 0.3 + 2.0 * rng.next_unit();
            let u = c(3.0 * rng.next_unit() - 1.5, 2.0 * rng.next_unit() - 1.0);
            if (u.norm() / Complex64::new(x, r).norm()) > 0.85 {
                continue;
            }
            let g = g_eval(x, u, r);
            let f = f_eval(x, u, r).unwrap();
            assert_relative_eq!((-f).exp().re, g.re, max_relative = 1e-14, epsilon = 1e-14);
            assert_relative_eq!((-f).exp().im, g.im, max_relative = 1e-14, epsilon = 1e-14);
        }
    }

    #[test]
    fn ratio_of_gs_drops_regularization() {
        let mut rng = Xorshift(0x2545f4914f6cdd1d);
        for _ in 0..100 {
            let x = 6.0 * rng.next_unit() - 3.0;
            let r = 0.2 + 3.0 * rng.next_unit();
            let z = c(2.0 * rng.next_unit() - 1.0, 0.1 + rng.next_unit());
            let w = c(2.0 * rng.next_unit() - 1.0, -0.1 - rng.next_unit());
            let zir = z + c(0.0, r);
            let wir = w + c(0.0, r);
            let got = g_eval(x, zir, r) / g_eval(x, wir, r);
            let want = (z - x) / (w - x);
            assert_relative_eq!(got.re, want.re, max_relative = 1e-12, epsilon = 1e-13);
            assert_relative_eq!(got.im, want.im, max_relative = 1e-12, epsilon = 1e-13);
        }
    }

    #[test]
    fn branch_cut_detected_and_clear_cases_pass() {
        // u = (1+t)(x+iR) puts g = −t exactly on the cut
        let (x, r) = (1.0, 1.0);
        let u = c(1.5, 1.5);
        assert!(matches!(f_eval(x, u, r), Err(FunctionalsError::BranchCut(_))));
        // within 1e−12 of the cut still trips
        let u_near = u + c(0.0, 4e-13);
        assert!(matches!(f_eval(x, u_near, r), Err(FunctionalsError::BranchCut(_))));
        // clearly off the cut is fine
        assert!(f_eval(x, u + c(0.0, 0.1), r).is_ok());
    }

    #[test]
    fn rho0_at_origin_gives_unit_powers() {
        let x = Configuration::new(vec![0.0]);
        let params = RegularizationParams::new(1.0, 10.0, 8).unwrap();
        let spec = build_specialization(&x, None, Variant::Rho0, &params).unwrap();
        let mi = c(0.0, -1.0);
        let mut want = c(1.0, 0.0);
        for k in 0..8 {
            want *= mi;
            assert_relative_eq!(spec.values[k].re, want.re, epsilon = 1e-15);
            assert_relative_eq!(spec.values[k].im, want.im, epsilon = 1e-15);
        }
    }

    #[test]
    fn rho_with_empty_configuration_and_zero_kernel() {
        let x = Configuration::new(vec![]);
        let params = RegularizationParams::new(2.0, 5.0, 6).unwrap();
        let spec = build_specialization(&x, None, Variant::Rho, &params).unwrap();
        assert!(spec.values.iter().all(|v| v.norm() == 0.0));
        assert!(spec.compensators.iter().all(|v| v.norm() == 0.0));
        assert_eq!(spec.last_increment, 0.0);
    }

    #[test]
    fn shifting_by_negated_compensator_restores_plain_sums() {
        let k = dsine();
        let x = Configuration::new(vec![-2.0, 0.0, 3.0]);
        let params = RegularizationParams::new(1.0, 10.0, 6).unwrap();
        let rho = build_specialization(&x, Some(&k), Variant::Rho, &params).unwrap();
        let rho0 = build_specialization(&x, Some(&k), Variant::Rho0, &params).unwrap();
        let a: Vec<Complex64> = rho.compensators.iter().map(|c| -c).collect();
        let shifted =
            build_specialization(&x, Some(&k), Variant::Shifted(a), &params).unwrap();
        for k in 0..6 {
            assert_relative_eq!(
                shifted.values[k].re,
                rho0.values[k].re,
                max_relative = 1e-13,
                epsilon = 1e-14
            );
            assert_relative_eq!(
                shifted.values[k].im,
                rho0.values[k].im,
                max_relative = 1e-13,
                epsilon = 1e-14
            );
        }
        // rho_tilde only touches the first order
        let rt = build_specialization(&x, Some(&k), Variant::RhoTilde, &params).unwrap();
        assert_eq!(rt.values[1], rho0.values[1]);
        assert_relative_eq!(
            (rt.values[0] - (rho0.values[0] - rho.compensators[0])).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn series_matches_closed_form_log() {
        let x = Configuration::new(vec![0.0]);
        let params = RegularizationParams::new(1.0, 10.0, 40).unwrap();
        let spec = build_specialization(&x, None, Variant::Rho0, &params).unwrap();
        let u = c(0.5, 0.0);
        let sv = s_series(&spec, u, 1e-9).unwrap();
        let want = -(c(1.0, 0.5)).ln(); // −log(1 + i/2)
        assert_relative_eq!(sv.value.re, want.re, epsilon = 1e-11);
        assert_relative_eq!(sv.value.im, want.im, epsilon = 1e-11);
        assert!(sv.direct_check.unwrap() < 1e-12);
        // exp(−S) reproduces the finite product of g's
        let prod = g_eval(0.0, u, 1.0);
        let e = (-sv.value).exp();
        assert_relative_eq!(e.re, prod.re, epsilon = 1e-11);
        assert_relative_eq!(e.im, prod.im, epsilon = 1e-11);
        // u = 0 gives 0 with no tail
        let z = s_series(&spec, c(0.0, 0.0), 1e-30).unwrap();
        assert_eq!(z.value, c(0.0, 0.0));
        assert_eq!(z.tail_bound, 0.0);
    }

    #[test]
    fn halving_series_order_stays_within_tail_bound() {
        let k = dsine();
        let x = Configuration::new(vec![-3.0, 1.0, 4.0]);
        let u = c(0.25, 0.2);
        let p12 = RegularizationParams::new(1.0, 20.0, 12).unwrap();
        let p6 = RegularizationParams::new(1.0, 20.0, 6).unwrap();
        let s12 = s_series(
            &build_specialization(&x, Some(&k), Variant::Rho, &p12).unwrap(),
            u,
            1.0,
        )
        .unwrap();
        let s6 = s_series(
            &build_specialization(&x, Some(&k), Variant::Rho, &p6).unwrap(),
            u,
            1.0,
        )
        .unwrap();
        let diff = (s12.value - s6.value).norm();
        assert!(diff <= s6.tail_bound, "diff {diff} vs bound {}", s6.tail_bound);
        assert!(s12.tail_bound < s6.tail_bound);
    }

    #[test]
    fn tail_bound_enforced() {
        let x = Configuration::new(vec![0.0]);
        let params = RegularizationParams::new(1.0, 5.0, 4).unwrap();
        let spec = build_specialization(&x, None, Variant::Rho0, &params).unwrap();
        let err = s_series(&spec, c(0.95, 0.0), 1e-12);
        assert!(matches!(err, Err(FunctionalsError::TailAboveTolerance { .. })));
        let err = s_series(&spec, c(1.5, 0.0), 1e6);
        assert!(matches!(err, Err(FunctionalsError::TailAboveTolerance { .. })));
    }

    #[test]
    fn psi_empty_product_is_one_and_real_u_rejected() {
        let x = Configuration::new(vec![]);
        let params = RegularizationParams::new(1.0, 5.0, 4).unwrap();
        let v = psi(&x, c(0.3, 0.7), None, &params).unwrap();
        assert_eq!(v.value, c(1.0, 0.0));
        assert_eq!(v.compensator, c(0.0, 0.0));
        assert_eq!(v.last_increment, 0.0);
        assert!(matches!(
            psi(&x, c(0.5, 0.0), None, &params),
            Err(FunctionalsError::InvalidParams(_))
        ));
    }

    #[test]
    fn psi_ratio_is_pure_product_and_r_independent() {
        let x = Configuration::new(vec![0.0, 1.0]);
        let (z, w) = (c(0.0, 1.0), c(0.0, 2.0));
        let mut ratios = Vec::new();
        for r in [0.5, 1.0, 2.0] {
            let params = RegularizationParams::new(r, 5.0, 4).unwrap();
            let pz = psi(&x, z, None, &params).unwrap().value;
            let pw = psi(&x, w, None, &params).unwrap().value;
            ratios.push(pz / pw);
        }
        for ratio in &ratios {
            assert_relative_eq!(ratio.re, 0.3, epsilon = 1e-13);
            assert_relative_eq!(ratio.im, 0.1, epsilon = 1e-13);
        }
        for pair in ratios.windows(2) {
            assert!((pair[0] - pair[1]).norm() / pair[0].norm() < 1e-12);
        }
    }

    #[test]
    fn psi_continues_the_compensated_series() {
        let k = dsine();
        let sampler = WindowSampler::new(&k, &Window::Discrete { lo: -50, hi: 50 }, 0).unwrap();
        let x = Configuration::new(sampler.sample(&SeedSpec::new(314, 0)).points().to_vec());
        let params = RegularizationParams::new(1.0, 50.0, 48).unwrap();
        let rho = build_specialization(&x, Some(&k), Variant::Rho, &params).unwrap();
        for u in [c(0.0, -0.55), c(0.2, -0.7)] {
            let uir = u + c(0.0, 1.0);
            assert!(uir.norm() < 1.0);
            let lhs = psi(&x, u, Some(&k), &params).unwrap().value;
            let rhs = (-s_series(&rho, uir, 1e-8).unwrap().value).exp();
            assert_relative_eq!(lhs.re, rhs.re, max_relative = 1e-9, epsilon = 1e-10);
            assert_relative_eq!(lhs.im, rhs.im, max_relative = 1e-9, epsilon = 1e-10);
        }
    }

    #[test]
    fn psi_tilde_matches_hand_computation() {
        let k = dsine();
        let x = Configuration::new(vec![-1.0, 2.0]);
        let u = c(1.0, 1.0);
        let (r, t) = (1.0, 5.0);
        let params = RegularizationParams::new(r, t, 4).unwrap();
        let got = psi_tilde(&x, u, Some(&k), &params).unwrap();
        let ueff = u + c(0.0, r);
        let mut prod = c(1.0, 0.0);
        for &p in x.points() {
            prod *= g_eval(p, ueff, r);
        }
        let mut c1 = c(0.0, 0.0);
        for site in (Window::Symmetric { t }).lattice_sites() {
            c1 += Complex64::new(site, r).inv() * k.eval(site, site);
        }
        let want = prod * (-u * c1).exp();
        assert_relative_eq!(got.value.re, want.re, max_relative = 1e-13);
        assert_relative_eq!(got.value.im, want.im, max_relative = 1e-13);
        assert_relative_eq!(got.compensator.re, (u * c1).re, max_relative = 1e-13);
    }

    #[test]
    fn zero_kernel_schedule_has_zero_increments() {
        let x = Configuration::new(vec![0.0, 1.5]);
        let params = RegularizationParams::new(1.0, 5.0, 4).unwrap();
        let rep = convergence_diagnostic(
            &x,
            &[c(1.0, 1.0), c(0.5, -0.5)],
            None,
            &params,
            &[5.0, 10.0, 20.0],
        )
        .unwrap();
        assert!(rep.traces.iter().all(|t| t.increments.iter().all(|&i| i == 0.0)));
        assert_eq!(rep.uniformity_factor, 1.0);
        assert!(rep.all_cauchy);
        assert!(matches!(
            convergence_diagnostic(&x, &[c(1.0, 1.0)], None, &params, &[10.0, 10.0]),
            Err(FunctionalsError::InvalidParams(_))
        ));
    }

    #[test]
    fn discrete_sine_truncation_is_cauchy_and_uniform() {
        let k = dsine();
        let sampler = WindowSampler::new(&k, &Window::Discrete { lo: -400, hi: 400 }, 0).unwrap();
        let x = Configuration::new(sampler.sample(&SeedSpec::new(2718, 2)).points().to_vec());
        let params = RegularizationParams::new(1.0, 400.0, 4).unwrap();
        let grid = [c(1.0, 1.0), c(1.2, 1.0), c(0.8, 1.1), c(1.0, 0.9), c(0.9, 1.2)];
        let rep = convergence_diagnostic(
            &x,
            &grid,
            Some(&k),
            &params,
            &[50.0, 100.0, 200.0, 400.0],
        )
        .unwrap();
        for tr in &rep.traces {
            assert!(
                tr.increments.windows(2).all(|p| p[1] < p[0]),
                "increments not decreasing at u = {}: {:?}",
                tr.u,
                tr.increments
            );
        }
        assert!(rep.all_cauchy);
        assert!(
            rep.uniformity_factor < 10.0,
            "uniformity factor {}",
            rep.uniformity_factor
        );
    }

    #[test]
    fn plain_sums_reduce_to_elementary_symmetrics_exactly() {
        // exact arithmetic: e_j(1/(x+i)) from power sums via Newton's identities
        let pts: Vec<i64> = vec![0, 1, -2, 3];
        let vals: Vec<CRat> = pts
            .iter()
            .map(|&p| (CRat::from_ints(p, 0) + CRat::i()).inv())
            .collect();
        let m = 4;
        let mut phat = vec![CRat::from_ints(0, 0); m];
        for v in &vals {
            for (k, slot) in phat.iter_mut().enumerate() {
                *slot = slot.clone() + crat_pow(v, (k + 1) as i64);
            }
        }
        let (_, e) = power_to_eh(&phat);
        // direct expansion of ∏ (1 + v u)
        let mut direct = vec![CRat::from_ints(0, 0); m + 1];
        direct[0] = CRat::from_ints(1, 0);
        for v in &vals {
            for j in (1..=m).rev() {
                let add = direct[j - 1].clone() * v.clone();
                direct[j] = direct[j].clone() + add;
            }
        }
        assert_eq!(e, direct);
    }
}
