//! Orthonormal polynomials for a [`Weight`], by the three-term recurrence.

use crate::weights::Weight;

pub struct OrthonormalBasis {
    pub weight: Weight,
    alpha: Vec<f64>,
    b: Vec<f64>, // b_k = √β_k, with b_0 unused
    inv_sqrt_mu0: f64,
}

impl OrthonormalBasis {
    /// Basis φ_0..φ_{n_max}, orthonormal w.r.t. the weight.
    pub fn new(weight: Weight, n_max: usize) -> Self {
        let (alpha, beta, mu0) = weight.recurrence(n_max + 2);
        let b = beta.iter().map(|&x| x.sqrt()).collect();
        OrthonormalBasis {
            weight,
            alpha,
            b,
            inv_sqrt_mu0: 1.0 / mu0.sqrt(),
        }
    }

    pub fn sqrt_beta(&self, k: usize) -> f64 {
        self.b[k]
    }

    /// Values (φ_0(x), …, φ_m(x)).
    pub fn eval_all(&self, m: usize, x: f64) -> Vec<f64> {
        self.eval_with_deriv(m, x).0
    }

    /// Values and derivatives of φ_0..φ_m at x.
    ///
    /// b_{k+1}φ_{k+1} = (x − α_k)φ_k − b_kφ_{k−1}, differentiated once for
    /// the derivative column.
    pub fn eval_with_deriv(&self, m: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
        assert!(m + 1 < self.alpha.len(), "basis built too short");
        let mut p = Vec::with_capacity(m + 1);
        let mut d = Vec::with_capacity(m + 1);
        p.push(self.inv_sqrt_mu0);
        d.push(0.0);
        for k in 0..m {
            let prev = if k == 0 { 0.0 } else { p[k - 1] };
            let dprev = if k == 0 { 0.0 } else { d[k - 1] };
            let bk = if k == 0 { 0.0 } else { self.b[k] };
            let next = ((x - self.alpha[k]) * p[k] - bk * prev) / self.b[k + 1];
            let dnext = (p[k] + (x - self.alpha[k]) * d[k] - bk * dprev) / self.b[k + 1];
            p.push(next);
            d.push(dnext);
        }
        (p, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hermite_low_orders() {
        // probabilists' Hermite, normalized: φ_k = He_k/√(k!)
        let basis = OrthonormalBasis::new(Weight::Gaussian, 4);
        let x = 1.3;
        let (p, d) = basis.eval_with_deriv(3, x);
        assert_relative_eq!(p[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(p[1], x, epsilon = 1e-15);
        assert_relative_eq!(p[2], (x * x - 1.0) / 2.0f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(p[3], (x.powi(3) - 3.0 * x) / 6.0f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(d[2], 2.0 * x / 2.0f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(d[3], (3.0 * x * x - 3.0) / 6.0f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn shifted_legendre_low_orders() {
        let basis = OrthonormalBasis::new(Weight::Uniform01, 3);
        let x = 0.75;
        let (p, _) = basis.eval_with_deriv(2, x);
        assert_relative_eq!(p[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(p[1], 3.0f64.sqrt() * (2.0 * x - 1.0), epsilon = 1e-14);
        assert_relative_eq!(
            p[2],
            5.0f64.sqrt() * (6.0 * x * x - 6.0 * x + 1.0),
            epsilon = 1e-13
        );
    }

    #[test]
    fn orthonormality_by_quadrature() {
        for w in [Weight::Gaussian, Weight::Uniform01] {
            let basis = OrthonormalBasis::new(w, 6);
            let rule = w.quad(40);
            for i in 0..=5usize {
                for j in 0..=5usize {
                    let val: f64 = rule
                        .nodes
                        .iter()
                        .zip(&rule.weights)
                        .map(|(&x, &wt)| {
                            let p = basis.eval_all(5, x);
                            wt * p[i] * p[j]
                        })
                        .sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert_relative_eq!(val, want, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let basis = OrthonormalBasis::new(Weight::Gaussian, 6);
        let x = 0.6;
        let h = 1e-6;
        let (_, d) = basis.eval_with_deriv(5, x);
        let pp = basis.eval_all(5, x + h);
        let pm = basis.eval_all(5, x - h);
        for k in 0..=5 {
            let fd = (pp[k] - pm[k]) / (2.0 * h);
            assert_relative_eq!(d[k], fd, epsilon = 1e-7, max_relative = 1e-7);
        }
    }
}
