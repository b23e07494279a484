//! Airy and Bessel functions for the kernel zoo.
//!
//! Airy: Taylor stepping of y″ = xy between reference points, switching to
//! asymptotic expansions at |x| = 8. On (1, 8) the pair is integrated
//! inward from an asymptotic seed at x = 9 — outward stepping would ride
//! the exponentially growing companion solution and destroy Ai.
//!
//! Bessel J_s: ascending series for x ≤ 8 (reciprocal-gamma guard kills
//! terms at nonpositive-integer arguments), Hankel P/Q asymptotics beyond.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

const AI0: f64 = 0.35502805388781722;
const AIP0: f64 = -0.25881940379280682;

/// (Ai(x), Ai′(x)).
pub fn airy(x: f64) -> (f64, f64) {
    if x >= 8.0 {
        airy_asym_pos(x)
    } else if x <= -8.0 {
        airy_asym_neg(x)
    } else if x > 1.0 {
        let (y, yp) = airy_asym_pos(9.0);
        airy_taylor_from(9.0, y, yp, x)
    } else {
        airy_taylor_from(0.0, AI0, AIP0, x)
    }
}

/// Advance (y, y′) of y″ = x·y from x0 to target by ≤ 0.5-length Taylor steps.
fn airy_taylor_from(x0: f64, y: f64, yp: f64, target: f64) -> (f64, f64) {
    let mut x = x0;
    let mut state = (y, yp);
    let mut remaining = ((target - x0).abs() / 0.5).ceil() as usize;
    while remaining > 0 {
        let h = (target - x) / remaining as f64;
        state = airy_taylor_step(x, state.0, state.1, h);
        x += h;
        remaining -= 1;
    }
    state
}

fn airy_taylor_step(x0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    const NC: usize = 40;
    let mut c = [0.0f64; NC];
    c[0] = y;
    c[1] = yp;
    for n in 0..NC - 2 {
        let prev = if n == 0 { 0.0 } else { c[n - 1] };
        c[n + 2] = (x0 * c[n] + prev) / (((n + 1) * (n + 2)) as f64);
    }
    let mut v = 0.0;
    let mut d = 0.0;
    for n in (1..NC).rev() {
        v = (v + c[n]) * h;
        d = (d + n as f64 * c[n]) * if n > 1 { h } else { 1.0 };
    }
    (v + c[0], d)
}

/// u_k, v_k coefficient pair of the Airy asymptotic series, iteratively.
struct AiryCoeffs {
    u: f64,
    k: usize,
}

impl AiryCoeffs {
    fn new() -> Self {
        AiryCoeffs { u: 1.0, k: 0 }
    }
    fn next(&mut self) -> (f64, f64) {
        let (u, k) = (self.u, self.k as f64);
        let v = if self.k == 0 {
            1.0
        } else {
            -u * (6.0 * k + 1.0) / (6.0 * k - 1.0)
        };
        self.k += 1;
        let kn = self.k as f64;
        self.u = u * (6.0 * kn - 5.0) * (6.0 * kn - 3.0) * (6.0 * kn - 1.0)
            / (216.0 * kn * (2.0 * kn - 1.0));
        (u, v)
    }
}

fn airy_asym_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut coeffs = AiryCoeffs::new();
    let mut su = 0.0;
    let mut sv = 0.0;
    let mut zpow = 1.0;
    let mut sign = 1.0;
    let mut last = f64::INFINITY;
    for _ in 0..30 {
        let (u, v) = coeffs.next();
        let term = u * zpow;
        if term.abs() >= last || term.abs() < 1e-18 {
            break;
        }
        su += sign * term;
        sv += sign * v * zpow;
        last = term.abs();
        zpow /= zeta;
        sign = -sign;
    }
    let pref = (-zeta).exp() / (2.0 * PI.sqrt());
    (pref / x.powf(0.25) * su, -pref * x.powf(0.25) * sv)
}

fn airy_asym_neg(x: f64) -> (f64, f64) {
    let t = -x;
    let zeta = 2.0 / 3.0 * t.powf(1.5);
    // split Σ(−1)^k u_k ζ^{−k} into even/odd parts (same for v)
    let mut coeffs = AiryCoeffs::new();
    let mut ue = 0.0;
    let mut uo = 0.0;
    let mut ve = 0.0;
    let mut vo = 0.0;
    let mut zpow = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..30 {
        let (u, v) = coeffs.next();
        let term = u * zpow;
        if term.abs() >= last || term.abs() < 1e-18 {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            ue += sign * term;
            ve += sign * v * zpow;
        } else {
            uo += sign * term;
            vo += sign * v * zpow;
        }
        last = term.abs();
        zpow /= zeta;
    }
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let ai = (c * ue + s * uo) / (PI.sqrt() * t.powf(0.25));
    let aip = (s * ve - c * vo) * t.powf(0.25) / PI.sqrt();
    (ai, aip)
}

/// 1/Γ(g), zero at the poles g = 0, −1, −2, …
fn recip_gamma(g: f64) -> f64 {
    if g < 0.5 && (g - g.round()).abs() < 1e-12 {
        0.0
    } else {
        1.0 / libm::tgamma(g)
    }
}

/// J_s(x) for real order s and x > 0.
pub fn bessel_j(s: f64, x: f64) -> f64 {
    assert!(x > 0.0, "Bessel order functions need x > 0");
    if x <= 8.0 {
        bessel_series(s, x)
    } else {
        bessel_asym(s, x)
    }
}

/// J_s′(x) = (J_{s−1}(x) − J_{s+1}(x))/2.
pub fn bessel_j_prime(s: f64, x: f64) -> f64 {
    0.5 * (bessel_j(s - 1.0, x) - bessel_j(s + 1.0, x))
}

fn bessel_series(s: f64, x: f64) -> f64 {
    let half = x / 2.0;
    let mut sum = 0.0;
    let mut factorial = 1.0;
    let mut peak: f64 = 0.0;
    for m in 0..64 {
        if m > 0 {
            factorial *= m as f64;
        }
        let rg = recip_gamma(s + m as f64 + 1.0);
        if rg != 0.0 {
            let mut t = rg / factorial * half.powf(s + 2.0 * m as f64);
            if m % 2 == 1 {
                t = -t;
            }
            sum += t;
            peak = peak.max(t.abs());
            if m as f64 > x && t.abs() < 1e-17 * peak.max(1e-300) {
                break;
            }
        }
    }
    sum
}

fn bessel_asym(s: f64, x: f64) -> f64 {
    let mu = 4.0 * s * s;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut t = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 0..30 {
        if t.abs() >= last || t.abs() < 1e-18 {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
        last = t.abs();
        let kn = (k + 1) as f64;
        t *= (mu - (2.0 * kn - 1.0).powi(2)) / (kn * 8.0 * x);
    }
    let omega = x - s * FRAC_PI_2 - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}
