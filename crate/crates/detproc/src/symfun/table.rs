//! Generalized Jacobi–Trudi determinants over a doubly-indexed table.
//!
//! The table h_{r,s} plays the role of h_r with an extra column index; rows
//! r = 0 are forced to 1 and r < 0 to 0. The determinant
//! det(h_{λ_i−i+j, j−1}) is independent of the chosen size N ≥ l(λ) and
//! satisfies the Giambelli identity in terms of its own hook evaluations,
//! whatever the table values are.

use crate::linalg::{det, Mat};
use crate::scalar::Field;
use crate::symfun::partition::{Partition, SymfunError};
use std::collections::HashMap;

#[derive(Clone, Debug, Default)]
pub struct IndeterminateTable<S> {
    entries: HashMap<(i64, u32), S>,
}

impl<S: Field> IndeterminateTable<S> {
    pub fn new() -> Self {
        IndeterminateTable { entries: HashMap::new() }
    }

    pub fn set(&mut self, r: i64, s: u32, v: S) {
        assert!(r > 0, "rows r ≤ 0 are forced (0 → 1, negative → 0)");
        self.entries.insert((r, s), v);
    }

    pub fn get(&self, r: i64, s: u32) -> Result<S, SymfunError> {
        if r == 0 {
            return Ok(S::one());
        }
        if r < 0 {
            return Ok(S::zero());
        }
        self.entries
            .get(&(r, s))
            .cloned()
            .ok_or(SymfunError::MissingTableEntry(r, s))
    }

    /// Classical specialization: every column equal to the same h-sequence.
    pub fn from_h_sequence(h: &[S], max_col: u32) -> Self {
        let mut t = IndeterminateTable::new();
        for (r, v) in h.iter().enumerate().skip(1) {
            for s in 0..=max_col {
                t.set(r as i64, s, v.clone());
            }
        }
        t
    }
}

/// s̃_λ = det(h_{λ_i−i+j, j−1})_{i,j=1..N} for any N ≥ l(λ).
pub fn generalized_schur<S: Field>(
    table: &IndeterminateTable<S>,
    lam: &Partition,
    n: usize,
) -> Result<S, SymfunError> {
    assert!(n >= lam.len(), "matrix size must cover all rows of λ");
    let mut m = Mat::from_fn(n, |_, _| S::zero());
    for i in 0..n {
        for j in 0..n {
            let r = lam.part(i) as i64 - i as i64 + j as i64;
            m.data[i * n + j] = table.get(r, j as u32)?;
        }
    }
    Ok(det(&m))
}

/// Giambelli determinant built from generalized hook evaluations of the same
/// table; equals [`generalized_schur`] for every table (any N ≥ depth+…).
pub fn generalized_giambelli<S: Field>(
    table: &IndeterminateTable<S>,
    lam: &Partition,
) -> Result<S, SymfunError> {
    let f = lam.to_frobenius();
    let d = f.depth();
    let mut m = Mat::from_fn(d, |_, _| S::zero());
    for i in 0..d {
        for j in 0..d {
            let hook = Partition::hook(f.arms[i], f.legs[j]);
            m.data[i * d + j] = generalized_schur(table, &hook, hook.len())?;
        }
    }
    Ok(det(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CRat;
    use crate::symfun::series::{power_sums, power_to_eh};

    fn rational_table(maxr: i64, maxs: u32, salt: i64) -> IndeterminateTable<CRat> {
        let mut t = IndeterminateTable::new();
        for r in 1..=maxr {
            for s in 0..=maxs {
                // deterministic pseudo-random-ish rationals
                let num = (salt * 37 + r * 13 + s as i64 * 7) % 19 - 9;
                let den = 1 + ((salt + r + s as i64) % 5).abs();
                t.set(r, s, CRat::from_ratio(num, den));
            }
        }
        t
    }

    #[test]
    fn independent_of_matrix_size() {
        let t = rational_table(12, 12, 3);
        let lam = Partition::new(vec![3, 2]).unwrap();
        let base = generalized_schur(&t, &lam, 2).unwrap();
        for n in 3..=6 {
            assert_eq!(generalized_schur(&t, &lam, n).unwrap(), base);
        }
    }

    #[test]
    fn giambelli_identity_for_arbitrary_tables() {
        for salt in 0..3 {
            let t = rational_table(14, 14, salt);
            for lam in Partition::all_up_to_weight(5) {
                if lam.is_empty() {
                    continue;
                }
                let s = generalized_schur(&t, &lam, lam.len()).unwrap();
                let g = generalized_giambelli(&t, &lam).unwrap();
                assert_eq!(s, g, "salt={salt} λ={lam:?}");
            }
        }
    }

    #[test]
    fn classical_reduction() {
        // with every column the same h-sequence the table determinant is the
        // ordinary Jacobi–Trudi value
        let p = power_sums(
            &[CRat::from_ratio(1, 2), CRat::from_ratio(2, 1), CRat::from_ratio(-1, 3)],
            8,
        );
        let (h, _e) = power_to_eh(&p);
        let t = IndeterminateTable::from_h_sequence(&h, 8);
        for lam in Partition::all_up_to_weight(5) {
            let want = crate::symfun::schur::schur_from_h(&lam, &h).unwrap();
            let got = generalized_schur(&t, &lam, lam.len().max(1)).unwrap();
            assert_eq!(got, want, "{lam:?}");
        }
    }

    #[test]
    fn missing_entry_is_reported() {
        let t: IndeterminateTable<CRat> = IndeterminateTable::new();
        let lam = Partition::new(vec![2]).unwrap();
        assert!(matches!(
            generalized_schur(&t, &lam, 1),
            Err(SymfunError::MissingTableEntry(2, 0))
        ));
    }
}
