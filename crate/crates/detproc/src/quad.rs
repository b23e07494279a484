//! Gauss quadrature rules via Golub–Welsch (eigenvalues of the Jacobi
//! matrix of the three-term recurrence).

use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Clone, Debug)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Affine image of the rule under x ↦ lo + (x − a)·(hi − lo)/(b − a),
    /// for a rule native to [a, b].
    fn mapped(self, a: f64, b: f64, lo: f64, hi: f64) -> QuadRule {
        let scale = (hi - lo) / (b - a);
        QuadRule {
            nodes: self.nodes.iter().map(|&x| lo + (x - a) * scale).collect(),
            weights: self.weights.iter().map(|&w| w * scale).collect(),
        }
    }
}

/// Gauss rule for the measure with monic three-term recurrence
/// p_{k+1} = (x − alpha_k) p_k − beta_k p_{k−1}, total mass mu0.
///
/// `alpha` has length n, `beta` length n with `beta[0]` unused.
pub fn golub_welsch(alpha: &[f64], beta: &[f64], mu0: f64) -> QuadRule {
    let n = alpha.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        j[(k, k)] = alpha[k];
        if k > 0 {
            let b = beta[k].sqrt();
            j[(k, k - 1)] = b;
            j[(k - 1, k)] = b;
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v0 = eig.eigenvectors[(0, k)];
            (eig.eigenvalues[k], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    QuadRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// n-point Gauss–Legendre on [−1, 1] (weight 1, mass 2).
pub fn gauss_legendre(n: usize) -> QuadRule {
    let alpha = vec![0.0; n];
    let mut beta = vec![0.0; n];
    for (k, b) in beta.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        *b = kf * kf / (4.0 * kf * kf - 1.0);
    }
    golub_welsch(&alpha, &beta, 2.0)
}

/// Gauss–Legendre mapped to [lo, hi].
pub fn gauss_legendre_on(n: usize, lo: f64, hi: f64) -> QuadRule {
    gauss_legendre(n).mapped(-1.0, 1.0, lo, hi)
}

/// n-point Gauss–Hermite for the standard normal density
/// e^{−x²/2}/√(2π) dx (probabilists' normalization, mass 1).
pub fn gauss_hermite_prob(n: usize) -> QuadRule {
    let alpha = vec![0.0; n];
    let mut beta = vec![0.0; n];
    for (k, b) in beta.iter_mut().enumerate().skip(1) {
        *b = k as f64;
    }
    golub_welsch(&alpha, &beta, 1.0)
}
