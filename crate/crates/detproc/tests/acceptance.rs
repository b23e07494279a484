//! Acceptance gate: one pass/fail line per criterion, nonzero exit on any
//! failure. Runs under `cargo test` as a harness-free target so the lines
//! are always printed. Tolerances, seeds, and runtime budgets are pinned
//! here; statistical checks use 3σ bands from the recorded sample spread.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::exit;
use std::time::Instant;

use num_complex::Complex64;

use detproc::fredholm::{expect_ratio, fredholm_det, subset_expansion_det, MultiplicativeSymbol};
use detproc::functionals::{
    build_specialization, convergence_diagnostic, psi, s_series, RegularizationParams, Variant,
};
use detproc::identities::{
    draw_specialization_samples, fs_confluent, fs_identity_report, giambelli_from_samples,
    giambelli_ope_exact, moment_independence, FsMethod, FsSource,
};
use detproc::kernels::{make_kernel, KernelSpec, Window};
use detproc::quad::gauss_legendre_on;
use detproc::sampling::{
    empirical_intensity, mean_stderr, sample_ope, Configuration, OpeSampler, SeedSpec,
    WindowSampler,
};
use detproc::scalar::CRat;
use detproc::symfun::{
    generalized_giambelli, generalized_schur, giambelli_det, hook_series_coeffs, schur_eval,
    IndeterminateTable, Partition, SchurMethod,
};
use detproc::weights::Weight;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    // Respect libtest-style name filters so `cargo test <filter>` does not
    // drag the full gate into unrelated runs.
    let mut args = std::env::args().skip(1);
    let mut filters = Vec::new();
    while let Some(a) = args.next() {
        match a.as_str() {
            "--skip" | "--test-threads" | "--format" | "--logfile" | "--color" => {
                let _ = args.next();
            }
            "--list" => {
                println!("acceptance: test");
                println!();
                println!("1 test, 0 benchmarks");
                return;
            }
            s if s.starts_with("--") => {}
            s => filters.push(s.to_string()),
        }
    }
    if !filters.is_empty() && !filters.iter().any(|f| "acceptance".contains(f.as_str())) {
        return;
    }

    type Criterion = (&'static str, f64, fn() -> Result<(), String>);
    let criteria: [Criterion; 10] = [
        ("Schur routes and hook determinants, exact", 60.0, c01_schur_routes),
        ("hook generating series, exact coefficients", 10.0, c02_hook_series),
        ("moment determinant shift independence", 5.0, c03_shift_independence),
        ("ensemble Giambelli over the parameter grid", 120.0, c04_ensemble_giambelli),
        ("expected ratio identity, finite ensembles", 180.0, c05_ratio_finite),
        ("expected ratio identity, lattice window", 600.0, c06_ratio_lattice),
        ("Giambelli Monte Carlo, lattice window", 900.0, c07_giambelli_mc),
        ("Fredholm determinant oracles", 60.0, c08_fredholm_oracles),
        ("sampler correlation laws", 600.0, c09_sampler_laws),
        ("regularized functional structure", 60.0, c10_regularization),
    ];

    let mut failures = 0usize;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(r) => r,
            Err(payload) => Err(panic_text(payload)),
        };
        let dt = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(()) if dt > *budget => {
                Err(format!("runtime {dt:.1}s exceeds the {budget:.0}s budget"))
            }
            other => other,
        };
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS ({dt:>6.1}s) {name}", i + 1),
            Err(reason) => {
                failures += 1;
                println!("criterion {:>2}: FAIL ({dt:>6.1}s) {name} — {reason}", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("acceptance: {failures} criterion(s) failed");
        exit(1);
    }
    println!("acceptance: all 10 criteria passed");
}

fn panic_text(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        format!("panic: {s}")
    } else if let Some(s) = payload.downcast_ref::<String>() {
        format!("panic: {s}")
    } else {
        "panic (non-string payload)".into()
    }
}

/// Deterministic rational test tables, distinct from the ones used in unit
/// tests: entry (r, s) depends on a per-table salt.
fn rational_table(maxr: i64, maxs: u32, salt: i64) -> IndeterminateTable<CRat> {
    let mut t = IndeterminateTable::new();
    for r in 1..=maxr {
        for s in 0..=maxs {
            let num = (salt * 41 + r * 17 + s as i64 * 11) % 23 - 11;
            let den = 1 + ((salt * 7 + r * 3 + s as i64) % 6).abs();
            t.set(r, s, CRat::from_ratio(num, den));
        }
    }
    t
}

/// All four evaluation routes agree exactly on every |λ| ≤ 8 over rational
/// points (2–4 variables); the hook determinant reproduces s_λ; and the
/// generalized hook determinant holds verbatim on 50 deterministic tables of
/// free indeterminates.
fn c01_schur_routes() -> Result<(), String> {
    let vars = [
        CRat::from_ratio(1, 2),
        CRat::from_ratio(-1, 3),
        CRat::from_ratio(2, 1),
        CRat::from_ratio(3, 5),
    ];
    let partitions = Partition::all_up_to_weight(8);
    let routes = [
        SchurMethod::Bialternant,
        SchurMethod::JacobiTrudiH,
        SchurMethod::JacobiTrudiE,
    ];
    for lam in &partitions {
        for nvars in [2usize, 3, 4] {
            let xs = &vars[..nvars];
            let base = schur_eval(lam, xs, SchurMethod::Tableaux).map_err(err)?;
            for route in routes {
                let v = schur_eval(lam, xs, route).map_err(err)?;
                ensure!(
                    v == base,
                    "{route:?} disagrees with tableaux at λ={:?}, {nvars} variables",
                    lam.parts()
                );
            }
        }
        if !lam.is_empty() {
            let direct = schur_eval(lam, &vars, SchurMethod::Bialternant).map_err(err)?;
            let hooked = giambelli_det(lam, |p, q| {
                schur_eval(&Partition::hook(p, q), &vars, SchurMethod::Bialternant).unwrap()
            });
            ensure!(hooked == direct, "hook determinant fails at λ={:?}", lam.parts());
        }
    }
    let mut checked = 0usize;
    for salt in 0..50i64 {
        let table = rational_table(9, 8, salt);
        for lam in partitions.iter().filter(|l| !l.is_empty()) {
            let s = generalized_schur(&table, lam, lam.len()).map_err(err)?;
            let g = generalized_giambelli(&table, lam).map_err(err)?;
            ensure!(
                s == g,
                "generalized hook determinant fails: table {salt}, λ={:?}",
                lam.parts()
            );
            checked += 1;
        }
    }
    ensure!(checked == 50 * 66, "expected 3300 table checks, ran {checked}");
    Ok(())
}

/// H(u)E(v) = 1 + (u+v)·Σ s_(p|q) uᵖ vᑫ through total degree 8 at three
/// rational points, coefficient by coefficient, exactly.
fn c02_hook_series() -> Result<(), String> {
    let xs = [
        CRat::from_ratio(1, 2),
        CRat::from_ratio(-1, 3),
        CRat::from_ratio(2, 7),
    ];
    let (lhs, rhs) = hook_series_coeffs(8, &xs).map_err(err)?;
    for a in 0..=8usize {
        for b in 0..=(8 - a) {
            ensure!(lhs[a][b] == rhs[a][b], "coefficient of u^{a} v^{b} differs");
        }
    }
    Ok(())
}

/// The normalized moment determinant is independent of the (complex) shift:
/// rational moments exactly, float moments below 1e-12, for N ≤ 4 and both
/// reference weights.
fn c03_shift_independence() -> Result<(), String> {
    let shifts = [
        CRat::from_ints(0, 0),
        CRat::from_ints(1, 0),
        CRat::i(),
        CRat::from_ints(3, -2),
    ];
    for weight in [Weight::Gaussian, Weight::Uniform01] {
        for n in 1..=4usize {
            let rep = moment_independence(weight, n, &shifts).map_err(err)?;
            ensure!(
                rep.pass,
                "{weight:?} N={n}: max deviation {:.3e} above {:.0e}",
                rep.abs_err,
                rep.tol
            );
        }
    }
    Ok(())
}

/// E[s_λ(x+iR)] equals the Giambelli determinant of hook expectations for
/// every λ of weight ≤ 6 fitting into the ensemble (ℓ(λ) ≤ N), both weights,
/// N ∈ {2,3}, R ∈ {1,2}; exact-moment routes agree to 1e-10 and the N=2
/// independent quadrature oracle to 1e-8.
fn c04_ensemble_giambelli() -> Result<(), String> {
    let mut checked = 0usize;
    for lam in Partition::all_up_to_weight(6).iter().filter(|l| !l.is_empty()) {
        for weight in [Weight::Gaussian, Weight::Uniform01] {
            for n in [2usize, 3] {
                if lam.len() > n {
                    continue;
                }
                for r in [1.0, 2.0] {
                    let rep = giambelli_ope_exact(weight, n, r, lam).map_err(err)?;
                    ensure!(
                        rep.pass,
                        "{weight:?} N={n} R={r} λ={:?}: rel err {:.3e}",
                        lam.parts(),
                        rep.rel_err
                    );
                    if n == 2 {
                        let ab = rep.params["route_ab_abs_err"].as_f64().unwrap_or(f64::NAN);
                        ensure!(
                            ab <= 1e-8,
                            "quadrature oracle gap {ab:.3e} at {weight:?} R={r} λ={:?}",
                            lam.parts()
                        );
                    }
                    checked += 1;
                }
            }
        }
    }
    ensure!(checked == 148, "expected 148 parameter tuples, ran {checked}");
    Ok(())
}

/// det E[Ψ(z_i)/Ψ(w_j)] = ∏(z_i−w_j)⁻¹ · det[(z_i−w_j)⁻¹]⁻¹ … i.e. the
/// determinant identity for expected characteristic-polynomial ratios on
/// finite Gaussian ensembles, at fixed non-real grids, plus the confluent
/// (repeated z) limit.
fn c05_ratio_finite() -> Result<(), String> {
    let zs = [cx(0.0, 1.0), cx(1.0, 1.0), cx(-1.0, 2.0)];
    let ws = [cx(0.0, -1.0), cx(2.0, -1.0), cx(1.0, -2.0)];
    for ensemble_n in [2usize, 3] {
        let source = FsSource::Ope { weight: Weight::Gaussian, n: ensemble_n };
        let nodes = if ensemble_n == 2 { 80 } else { 48 };
        for pairs in [2usize, 3] {
            let rep = fs_identity_report(
                &source,
                &zs[..pairs],
                &ws[..pairs],
                &FsMethod::Quadrature { nodes },
            )
            .map_err(err)?;
            ensure!(
                rep.pass,
                "N={ensemble_n}, {pairs} pairs: rel err {:.3e} above {:.0e}",
                rep.rel_err,
                rep.tol
            );
        }
    }
    let z0 = cx(0.5, 0.5);
    let rep = fs_confluent(
        &FsSource::Ope { weight: Weight::Gaussian, n: 2 },
        &[z0, z0],
        &[ws[0], ws[1]],
        1e-4,
    )
    .map_err(err)?;
    ensure!(rep.pass, "confluent limit: rel err {:.3e} above {:.0e}", rep.rel_err, rep.tol);
    Ok(())
}

/// The same identity on the discrete sine process over a lattice window:
/// Fredholm route to 1e-8, Monte Carlo at a fixed seed within 3σ, and
/// stability of both sides when the window doubles.
fn c06_ratio_lattice() -> Result<(), String> {
    let kernel = make_kernel(KernelSpec::DiscreteSine { rho: 0.5 }).map_err(err)?;
    let zs = [cx(0.3, 2.2), cx(0.375, 2.54)];
    let ws = [cx(0.3, 2.0), cx(0.375, 2.7)];
    let near = FsSource::Kernel { kernel: &kernel, window: Window::Discrete { lo: -20, hi: 20 } };
    let far = FsSource::Kernel { kernel: &kernel, window: Window::Discrete { lo: -40, hi: 40 } };

    let det_near =
        fs_identity_report(&near, &zs, &ws, &FsMethod::Fredholm { order: 64 }).map_err(err)?;
    ensure!(
        det_near.pass && det_near.rel_err <= 1e-8,
        "Fredholm route: rel err {:.3e}",
        det_near.rel_err
    );

    let mc = fs_identity_report(
        &near,
        &zs,
        &ws,
        &FsMethod::Mc { samples: 100_000, seed: SeedSpec::new(4242, 0) },
    )
    .map_err(err)?;
    ensure!(mc.pass, "sampled defect {:.3e} above tolerance {:.3e}", mc.abs_err, mc.tol);
    let lhs_stderr = mc.params["lhs_stderr"].as_f64().unwrap_or(f64::NAN);
    let mc_gap = (mc.lhs.to_c64() - det_near.lhs.to_c64()).norm();
    ensure!(
        mc_gap <= 3.0 * lhs_stderr,
        "sampled vs Fredholm LHS: gap {mc_gap:.3e}, stderr {lhs_stderr:.3e}"
    );

    let det_far =
        fs_identity_report(&far, &zs, &ws, &FsMethod::Fredholm { order: 64 }).map_err(err)?;
    let lhs_shift = (det_far.lhs.to_c64() - det_near.lhs.to_c64()).norm();
    let rhs_shift = (det_far.rhs.to_c64() - det_near.rhs.to_c64()).norm();
    ensure!(
        lhs_shift <= 3.0 * lhs_stderr,
        "window doubling moves LHS by {lhs_shift:.3e} (> 3σ = {:.3e})",
        3.0 * lhs_stderr
    );
    ensure!(
        rhs_shift <= 3.0 * lhs_stderr,
        "window doubling moves RHS by {rhs_shift:.3e} (> 3σ = {:.3e})",
        3.0 * lhs_stderr
    );
    Ok(())
}

/// Monte Carlo Giambelli on the discrete sine process over {−50..50}: the
/// estimated E[s_λ] matches the Giambelli determinant of estimated hook
/// expectations within a 3σ delta-method band, and a second run from the
/// recorded seed reproduces every figure bit for bit.
fn c07_giambelli_mc() -> Result<(), String> {
    let kernel = make_kernel(KernelSpec::DiscreteSine { rho: 0.5 }).map_err(err)?;
    let window = Window::Discrete { lo: -50, hi: 50 };
    let seed = SeedSpec::new(50_824, 0);
    let lams = [vec![2u32, 2], vec![3, 1], vec![2, 2, 1]];

    let samples =
        draw_specialization_samples(&kernel, &window, 1.0, 6, 100_000, seed).map_err(err)?;
    let mut estimates = Vec::new();
    for parts in &lams {
        let lam = Partition::new(parts.clone()).map_err(err)?;
        let est = giambelli_from_samples(&samples, &lam).map_err(err)?;
        let defect = (est.lhs - est.rhs).norm();
        ensure!(
            defect <= 3.0 * est.stderr,
            "λ={parts:?}: defect {defect:.3e} above 3σ band {:.3e}",
            3.0 * est.stderr
        );
        estimates.push(est);
    }

    let again =
        draw_specialization_samples(&kernel, &window, 1.0, 6, 100_000, seed).map_err(err)?;
    for (parts, est) in lams.iter().zip(&estimates) {
        let lam = Partition::new(parts.clone()).map_err(err)?;
        let rerun = giambelli_from_samples(&again, &lam).map_err(err)?;
        ensure!(
            rerun.lhs == est.lhs && rerun.rhs == est.rhs && rerun.stderr == est.stderr,
            "λ={parts:?}: rerun from the recorded seed is not bit-identical"
        );
    }
    Ok(())
}

/// Discrete Fredholm determinants agree with the brute-force subset
/// expansion on every lattice window of ≤ 12 sites inside {−6..6}, for both
/// a ratio symbol and a hole (g ≡ 0) symbol; the continuous Nyström route is
/// stable under order doubling below 1e-8.
fn c08_fredholm_oracles() -> Result<(), String> {
    let kernel = make_kernel(KernelSpec::DiscreteSine { rho: 0.5 }).map_err(err)?;
    let (z, w) = (cx(0.3, 2.2), cx(0.3, 2.0));
    let mut windows = 0usize;
    for lo in -6i64..=6 {
        for hi in lo..=6 {
            if hi - lo + 1 > 12 {
                continue;
            }
            let window = Window::Discrete { lo, hi };
            let ratio = MultiplicativeSymbol::ratio(window, &[z], &[w]).map_err(err)?;
            let hole = MultiplicativeSymbol::new(window, |_| Complex64::new(0.0, 0.0));
            for (tag, sym) in [("ratio", &ratio), ("hole", &hole)] {
                let fast = fredholm_det(&kernel, sym, 0).map_err(err)?.value;
                let brute = subset_expansion_det(&kernel, sym).map_err(err)?;
                let gap = (fast - brute).norm() / fast.norm().max(1.0);
                ensure!(gap <= 1e-10, "{tag} symbol on {{{lo}..{hi}}}: expansion gap {gap:.3e}");
            }
            windows += 1;
        }
    }
    ensure!(windows == 90, "expected 90 windows, ran {windows}");

    let zs = [cx(0.0, 1.0), cx(1.0, 1.0), cx(-1.0, 2.0)];
    let ws = [cx(0.0, -1.0), cx(2.0, -1.0), cx(1.0, -2.0)];
    for n in [2usize, 3] {
        let cd = make_kernel(KernelSpec::Cd { weight: Weight::Gaussian, n }).map_err(err)?;
        for pairs in [2usize, 3] {
            let res = expect_ratio(&cd, &zs[..pairs], &ws[..pairs], Window::Symmetric { t: 12.0 }, 200)
                .map_err(err)?;
            ensure!(
                res.doubling_err < 1e-8,
                "N={n}, {pairs} pairs: order-doubling drift {:.3e}",
                res.doubling_err
            );
        }
    }
    Ok(())
}

/// ∬_{A×B} (K(x,x)K(y,y) − K(x,y)K(y,x)) dx dy by tensor Gauss–Legendre.
fn pair_intensity_integral(
    kernel: &detproc::kernels::IntegrableKernel,
    a: (f64, f64),
    b: (f64, f64),
) -> f64 {
    let ra = gauss_legendre_on(60, a.0, a.1);
    let rb = gauss_legendre_on(60, b.0, b.1);
    let mut total = 0.0;
    for (&x, &wx) in ra.nodes.iter().zip(&ra.weights) {
        for (&y, &wy) in rb.nodes.iter().zip(&rb.weights) {
            let rho2 = kernel.eval(x, x) * kernel.eval(y, y) - kernel.eval(x, y) * kernel.eval(y, x);
            total += wx * wy * rho2;
        }
    }
    total
}

/// Empirical one- and two-point correlations match the kernel predictions
/// within 3σ at 10⁵ samples, for the discrete sine window sampler and the
/// Gaussian-weight ensemble sampler; ensemble samples carry exactly N points.
fn c09_sampler_laws() -> Result<(), String> {
    let nsamples = 100_000usize;

    let kernel = make_kernel(KernelSpec::DiscreteSine { rho: 0.5 }).map_err(err)?;
    let window = Window::Discrete { lo: -10, hi: 10 };
    let sampler = WindowSampler::new(&kernel, &window, 0).map_err(err)?;
    let samples: Vec<Configuration> =
        (0..nsamples).map(|s| sampler.sample(&SeedSpec::new(905, s as u64))).collect();
    for bin in empirical_intensity(&kernel, &window, &samples, 21).map_err(err)? {
        let mid = 0.5 * (bin.lo + bin.hi);
        ensure!(
            (bin.observed - bin.expected).abs() <= 3.0 * bin.stderr,
            "site {mid:.0}: occupancy {:.4} vs {:.4} (σ={:.1e})",
            bin.observed,
            bin.expected,
            bin.stderr
        );
    }
    for (x, y) in [(0i64, 1i64), (0, 2), (-3, 4), (2, 5), (-5, -4)] {
        let (xf, yf) = (x as f64, y as f64);
        let joint: Vec<f64> = samples
            .iter()
            .map(|s| (s.count_in(xf - 0.5, xf + 0.5) * s.count_in(yf - 0.5, yf + 0.5)) as f64)
            .collect();
        let ms = mean_stderr(&joint);
        let expected = kernel.eval(xf, xf) * kernel.eval(yf, yf)
            - kernel.eval(xf, yf) * kernel.eval(yf, xf);
        ensure!(
            (ms.mean - expected).abs() <= 3.0 * ms.stderr,
            "pair ({x},{y}): {:.4} vs {expected:.4} (σ={:.1e})",
            ms.mean,
            ms.stderr
        );
    }
    drop(samples);

    for (n, t, bins) in [(2usize, 4.0, 8usize), (4, 5.0, 10)] {
        let cd = make_kernel(KernelSpec::Cd { weight: Weight::Gaussian, n }).map_err(err)?;
        let w = Window::Symmetric { t };
        let samples: Vec<Configuration> = (0..nsamples)
            .map(|s| sample_ope(Weight::Gaussian, n, &SeedSpec::new(906 + n as u64, s as u64)).unwrap())
            .collect();
        for bin in empirical_intensity(&cd, &w, &samples, bins).map_err(err)? {
            ensure!(
                (bin.observed - bin.expected).abs() <= 3.0 * bin.stderr,
                "N={n} bin [{:.2},{:.2}): {:.4} vs {:.4} (σ={:.1e})",
                bin.lo,
                bin.hi,
                bin.observed,
                bin.expected,
                bin.stderr
            );
        }
        if n == 4 {
            let joint: Vec<f64> = samples
                .iter()
                .map(|s| (s.count_in(-2.0, -0.3) * s.count_in(0.3, 2.0)) as f64)
                .collect();
            let ms = mean_stderr(&joint);
            let expected = pair_intensity_integral(&cd, (-2.0, -0.3), (0.3, 2.0));
            ensure!(
                (ms.mean - expected).abs() <= 3.0 * ms.stderr,
                "interval pair: {:.4} vs {expected:.4} (σ={:.1e})",
                ms.mean,
                ms.stderr
            );
        }
    }

    for weight in [Weight::Gaussian, Weight::Uniform01] {
        for n in 1..=4usize {
            let sampler = OpeSampler::new(weight, n).map_err(err)?;
            for s in 0..3000u64 {
                let got = sampler.sample(&SeedSpec::new(77, s)).len();
                ensure!(got == n, "{weight:?} N={n}: sample carries {got} points");
            }
        }
    }
    Ok(())
}

/// Regularization structure of the compensated ratio functionals: pure
/// product ratios are R-independent to 1e-12; the compensated product is
/// analytically continued by exp(−S) within the recorded series tail bound;
/// and truncation increments decrease along a doubling schedule, uniformly
/// over a grid of evaluation points.
fn c10_regularization() -> Result<(), String> {
    let x = Configuration::new(vec![-2.0, -0.5, 0.6, 1.7, 3.1]);
    let (z, w) = (cx(0.3, 2.2), cx(0.3, 2.0));
    let mut ratios = Vec::new();
    for r in [1.0, 2.0] {
        let params = RegularizationParams::new(r, 10.0, 8).map_err(err)?;
        let num = psi(&x, z, None, &params).map_err(err)?.value;
        let den = psi(&x, w, None, &params).map_err(err)?.value;
        ratios.push(num / den);
    }
    let mut direct = Complex64::new(1.0, 0.0);
    for &p in x.points() {
        direct *= (z - p) / (w - p);
    }
    let r_dep = (ratios[0] - ratios[1]).norm() / direct.norm();
    ensure!(r_dep <= 1e-12, "ratio changes with R by {r_dep:.3e}");
    let against_product = (ratios[0] - direct).norm() / direct.norm();
    ensure!(against_product <= 1e-12, "ratio off the plain product by {against_product:.3e}");

    let kernel = make_kernel(KernelSpec::DiscreteSine { rho: 0.5 }).map_err(err)?;
    let sampler =
        WindowSampler::new(&kernel, &Window::Discrete { lo: -50, hi: 50 }, 0).map_err(err)?;
    let xs = sampler.sample(&SeedSpec::new(314, 0));
    let params = RegularizationParams::new(1.0, 50.0, 16).map_err(err)?;
    let rho = build_specialization(&xs, Some(&kernel), Variant::Rho, &params).map_err(err)?;
    for u in [cx(0.0, -0.55), cx(0.2, -0.7), cx(0.0, -0.45)] {
        let inside = u + Complex64::new(0.0, 1.0);
        let lhs = psi(&xs, u, Some(&kernel), &params).map_err(err)?.value;
        let sv = s_series(&rho, inside, 1.0).map_err(err)?;
        let gap = (lhs - (-sv.value).exp()).norm();
        ensure!(
            gap <= sv.tail_bound,
            "continuation at u={u}: gap {gap:.3e} above tail bound {:.3e}",
            sv.tail_bound
        );
    }

    let far_sampler =
        WindowSampler::new(&kernel, &Window::Discrete { lo: -400, hi: 400 }, 0).map_err(err)?;
    let far_xs = far_sampler.sample(&SeedSpec::new(2718, 2));
    let far_params = RegularizationParams::new(1.0, 400.0, 4).map_err(err)?;
    let grid = [cx(1.0, 1.0), cx(1.2, 1.0), cx(0.8, 1.1), cx(1.0, 0.9), cx(0.9, 1.2)];
    let schedule = [50.0, 100.0, 200.0, 400.0];
    let rep = convergence_diagnostic(&far_xs, &grid, Some(&kernel), &far_params, &schedule)
        .map_err(err)?;
    for tr in &rep.traces {
        ensure!(
            tr.increments.windows(2).all(|p| p[1] < p[0]),
            "increments not strictly decreasing at u={}",
            tr.u
        );
    }
    ensure!(rep.all_cauchy, "a truncation trace failed the Cauchy test");
    ensure!(
        rep.uniformity_factor < 10.0,
        "non-uniform convergence: spread factor {:.2}",
        rep.uniformity_factor
    );
    Ok(())
}
