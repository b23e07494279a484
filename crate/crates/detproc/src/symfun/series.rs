//! Truncated power series over a [`Field`] scalar, plus the Newton-identity
//! bridge from power sums to complete/elementary symmetric values.

use crate::scalar::Field;
use crate::symfun::partition::SymfunError;

/// Coefficients c_0..c_M of a series truncated at order M.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<S> {
    pub c: Vec<S>,
}

impl<S: Field> TruncatedSeries<S> {
    pub fn from_coeffs(c: Vec<S>) -> Self {
        assert!(!c.is_empty());
        TruncatedSeries { c }
    }

    pub fn one(order: usize) -> Self {
        let mut c = vec![S::zero(); order + 1];
        c[0] = S::one();
        TruncatedSeries { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeff(&self, k: usize) -> S {
        self.c.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// Product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let m = self.order().min(other.order());
        let mut c = vec![S::zero(); m + 1];
        for n in 0..=m {
            let mut acc = S::zero();
            for k in 0..=n {
                acc = acc + self.c[k].clone() * other.c[n - k].clone();
            }
            c[n] = acc;
        }
        TruncatedSeries { c }
    }

    /// Substitute u -> s·u.
    pub fn scale_var(&self, s: S) -> Self {
        let mut c = Vec::with_capacity(self.c.len());
        let mut pow = S::one();
        for (k, a) in self.c.iter().enumerate() {
            if k > 0 {
                pow = pow * s.clone();
            }
            c.push(a.clone() * pow.clone());
        }
        TruncatedSeries { c }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self, SymfunError> {
        if self.c[0].is_zero() {
            return Err(SymfunError::ZeroConstantTerm);
        }
        let m = self.order();
        let a0inv = S::one() / self.c[0].clone();
        let mut b = vec![S::zero(); m + 1];
        b[0] = a0inv.clone();
        for n in 1..=m {
            let mut acc = S::zero();
            for k in 1..=n {
                acc = acc + self.c[k].clone() * b[n - k].clone();
            }
            b[n] = -(a0inv.clone() * acc);
        }
        Ok(TruncatedSeries { c: b })
    }

    /// exp of a series with zero constant term, via n·b_n = Σ k·a_k·b_{n−k}.
    pub fn exp(&self) -> Result<Self, SymfunError> {
        if !self.c[0].is_zero() {
            return Err(SymfunError::NonzeroConstantTerm);
        }
        let m = self.order();
        let mut b = vec![S::zero(); m + 1];
        b[0] = S::one();
        for n in 1..=m {
            let mut acc = S::zero();
            for k in 1..=n {
                acc = acc + S::from_int(k as i64) * self.c[k].clone() * b[n - k].clone();
            }
            b[n] = acc / S::from_int(n as i64);
        }
        Ok(TruncatedSeries { c: b })
    }
}

/// From power sums p_1..p_M to (h_0..h_M, e_0..e_M): H(u) = exp(Σ p_k u^k/k)
/// and E(u) = H(−u)^{-1}.
pub fn power_to_eh<S: Field>(p: &[S]) -> (Vec<S>, Vec<S>) {
    let m = p.len();
    let mut logh = vec![S::zero(); m + 1];
    for (k, pk) in p.iter().enumerate() {
        logh[k + 1] = pk.clone() / S::from_int((k + 1) as i64);
    }
    let h = TruncatedSeries::from_coeffs(logh)
        .exp()
        .expect("zero constant term by construction");
    let e = h
        .scale_var(-S::one())
        .inverse()
        .expect("constant term is 1");
    (h.c, e.c)
}

/// Power sums p_1..p_M of explicit variables.
pub fn power_sums<S: Field>(xs: &[S], m: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(m);
    let mut pows: Vec<S> = xs.to_vec();
    for _ in 0..m {
        let mut s = S::zero();
        for v in &pows {
            s = s + v.clone();
        }
        out.push(s);
        for (pw, x) in pows.iter_mut().zip(xs) {
            *pw = pw.clone() * x.clone();
        }
    }
    out
}
