//! Reference weights ω on the real line: exact moments, complex-shifted
//! moments A_n = ∫(x+iR)^n dω(x) for any integer n, three-term recurrence
//! coefficients, and native quadrature rules.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::quad::{gauss_hermite_prob, gauss_legendre_on, QuadRule};
use crate::scalar::{crat_pow, CRat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    /// Standard normal density e^{−x²/2}/√(2π) on ℝ.
    Gaussian,
    /// Lebesgue measure on [0, 1].
    Uniform01,
}

impl Weight {
    /// ∫ x^n dω, exact.
    pub fn moment(&self, n: u32) -> BigRational {
        match self {
            Weight::Gaussian => {
                if n % 2 == 1 {
                    BigRational::from_integer(BigInt::from(0))
                } else {
                    // (n−1)!! for even n
                    let mut acc = BigInt::from(1);
                    let mut k = 1i64;
                    while k < n as i64 {
                        acc *= BigInt::from(k);
                        k += 2;
                    }
                    BigRational::from_integer(acc)
                }
            }
            Weight::Uniform01 => {
                BigRational::new(BigInt::from(1), BigInt::from(n as i64 + 1))
            }
        }
    }

    /// ∫ (x+a)^n dω for n ≥ 0, exact: binomial expansion over exact moments.
    pub fn shifted_moment_exact(&self, n: u32, a: &CRat) -> CRat {
        let mut acc = CRat::from_ints(0, 0);
        // running C(n, k)
        let mut c = BigRational::from_integer(BigInt::from(1));
        for k in 0..=n {
            let term = CRat::real(c.clone() * self.moment(k))
                * crat_pow(a, (n - k) as i64);
            acc = acc + term;
            if k < n {
                c = c * BigRational::new(BigInt::from((n - k) as i64), BigInt::from(k as i64 + 1));
            }
        }
        acc
    }

    /// A_n = ∫ (x+iR)^n dω for any n ∈ ℤ. Negative n requires R > 0
    /// (pole below the support); no quadrature is involved.
    pub fn shifted_moment(&self, n: i64, r: f64) -> Complex64 {
        if n >= 0 {
            return self
                .shifted_moment_exact(n as u32, &crat_from_f64_imag(r))
                .to_c64();
        }
        assert!(r > 0.0, "negative shifted moments need R > 0");
        match self {
            Weight::Gaussian => {
                // I_m = A_{−m}: I₀ = 1, I₁ from the complex error function,
                // then the integration-by-parts recursion
                // m·I_{m+1} = iR·I_m − I_{m−1}.
                let m = (-n) as usize;
                let i1 = Complex64::new(0.0, -1.0)
                    * (std::f64::consts::PI / 2.0).sqrt()
                    * (r * r / 2.0).exp()
                    * libm::erfc(r / std::f64::consts::SQRT_2);
                let mut prev = Complex64::new(1.0, 0.0);
                let mut cur = i1;
                for k in 1..m {
                    let next = (Complex64::new(0.0, r) * cur - prev) / k as f64;
                    prev = cur;
                    cur = next;
                }
                if m == 0 {
                    prev
                } else {
                    cur
                }
            }
            Weight::Uniform01 => {
                let ir = Complex64::new(0.0, r);
                if n == -1 {
                    ((ir + 1.0) / ir).ln()
                } else {
                    let p = n + 1;
                    ((ir + 1.0).powi(p as i32) - ir.powi(p as i32)) / p as f64
                }
            }
        }
    }

    /// Monic three-term recurrence p_{k+1} = (x−α_k)p_k − β_k p_{k−1}
    /// for the first `n` coefficients, plus the total mass μ₀.
    pub fn recurrence(&self, n: usize) -> (Vec<f64>, Vec<f64>, f64) {
        match self {
            Weight::Gaussian => {
                let alpha = vec![0.0; n];
                let beta = (0..n).map(|k| k as f64).collect();
                (alpha, beta, 1.0)
            }
            Weight::Uniform01 => {
                // Legendre on [−1,1] mapped affinely to [0,1]: β scales by 1/4.
                let alpha = vec![0.5; n];
                let beta = (0..n)
                    .map(|k| {
                        if k == 0 {
                            0.0
                        } else {
                            let kf = k as f64;
                            kf * kf / (4.0 * (4.0 * kf * kf - 1.0))
                        }
                    })
                    .collect();
                (alpha, beta, 1.0)
            }
        }
    }

    pub fn quad(&self, order: usize) -> QuadRule {
        match self {
            Weight::Gaussian => gauss_hermite_prob(order),
            Weight::Uniform01 => gauss_legendre_on(order, 0.0, 1.0),
        }
    }

    /// (log ω)′(x) on the interior of the support.
    pub fn dlog_density(&self, x: f64) -> f64 {
        match self {
            Weight::Gaussian => -x,
            Weight::Uniform01 => 0.0,
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match self {
            Weight::Gaussian => (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            Weight::Uniform01 => {
                if (0.0..=1.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            Weight::Gaussian => (f64::NEG_INFINITY, f64::INFINITY),
            Weight::Uniform01 => (0.0, 1.0),
        }
    }
}

/// iR as an exact complex rational when R is a small dyadic/decimal float;
/// used only to route n ≥ 0 through the exact binomial path.
fn crat_from_f64_imag(r: f64) -> CRat {
    let rat = BigRational::from_float(r).expect("finite R");
    CRat::new(BigRational::from_integer(BigInt::from(0)), rat)
}
