//! Schur function evaluation by four independent routes, hook determinants,
//! and the hook generating-series coefficient tables.
//!
//! The tableaux route is a direct combinatorial enumeration and serves as the
//! oracle for the determinantal routes.

use crate::linalg::{det, Mat};
use crate::scalar::Field;
use crate::symfun::partition::{Partition, SymfunError};
use crate::symfun::series::{power_sums, power_to_eh};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchurMethod {
    JacobiTrudiH,
    JacobiTrudiE,
    Bialternant,
    Tableaux,
}

/// Gap threshold (relative to 1 + max |x|) below which the float bialternant
/// switches to divided differences.
pub const BIALTERNANT_GAP_TOL: f64 = 1e-6;

/// s_λ from complete homogeneous values h_0..h_M: det(h_{λ_i − i + j}).
pub fn schur_from_h<S: Field>(lam: &Partition, h: &[S]) -> Result<S, SymfunError> {
    let l = lam.len();
    if l == 0 {
        return Ok(S::one());
    }
    let need = lam.part(0) as usize + l - 1;
    if h.len() <= need {
        return Err(SymfunError::InsufficientOrder { need, have: h.len().saturating_sub(1) });
    }
    let m = Mat::from_fn(l, |i, j| {
        let idx = lam.part(i) as i64 - i as i64 + j as i64;
        if idx < 0 {
            S::zero()
        } else {
            h[idx as usize].clone()
        }
    });
    Ok(det(&m))
}

/// s_λ from elementary values e_0..e_M via the conjugate shape.
pub fn schur_from_e<S: Field>(lam: &Partition, e: &[S]) -> Result<S, SymfunError> {
    schur_from_h(&lam.transpose(), e)
}

/// Tableaux oracle: sum over semistandard Young tableaux of shape λ with
/// entries in 1..=n of the content monomial.
pub fn schur_tableaux<S: Field>(lam: &Partition, xs: &[S]) -> S {
    if lam.is_empty() {
        return S::one();
    }
    if lam.len() > xs.len() {
        return S::zero(); // a column longer than the alphabet admits no filling
    }
    let rows = lam.len();
    let mut filling: Vec<Vec<usize>> = (0..rows)
        .map(|r| vec![0; lam.part(r) as usize])
        .collect();
    let mut total = S::zero();
    fill_cell(lam, xs, &mut filling, 0, 0, S::one(), &mut total);
    total
}

#[allow(clippy::too_many_arguments)]
fn fill_cell<S: Field>(
    lam: &Partition,
    xs: &[S],
    filling: &mut Vec<Vec<usize>>,
    r: usize,
    c: usize,
    acc: S,
    total: &mut S,
) {
    if r == lam.len() {
        *total = total.clone() + acc;
        return;
    }
    let (nr, nc) = if c + 1 < lam.part(r) as usize {
        (r, c + 1)
    } else {
        (r + 1, 0)
    };
    let min_row = if c > 0 { filling[r][c - 1] } else { 1 };
    let min_col = if r > 0 && c < lam.part(r - 1) as usize {
        filling[r - 1][c] + 1
    } else {
        1
    };
    let lo = min_row.max(min_col);
    for v in lo..=xs.len() {
        filling[r][c] = v;
        let acc2 = acc.clone() * xs[v - 1].clone();
        fill_cell(lam, xs, filling, nr, nc, acc2, total);
    }
}

/// Ratio-of-alternants evaluation det(x_i^{λ_j+n−j}) / ∏_{i<j}(x_i − x_j).
///
/// Exact scalars with a repeated variable are rejected (the alternant
/// vanishes identically). Float inputs whose minimum gap falls below
/// [`BIALTERNANT_GAP_TOL`]·(1 + max|x|) are evaluated through a divided-
/// difference table, which stays finite through confluent points.
pub fn schur_bialternant<S: Field>(lam: &Partition, xs: &[S]) -> Result<S, SymfunError> {
    let n = xs.len();
    if lam.len() > n {
        return Ok(S::zero());
    }
    if n == 0 {
        return Ok(S::one());
    }
    // cluster nearly-equal points together so confluent runs are contiguous
    let mut pts = xs.to_vec();
    pts.sort_by(|a, b| {
        a.sort_key()
            .partial_cmp(&b.sort_key())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let scale = 1.0 + pts.iter().map(|x| x.abs_approx()).fold(0.0, f64::max);
    let tol = BIALTERNANT_GAP_TOL * scale;

    let mut min_gap = f64::INFINITY;
    let mut exact_repeat = false;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = pts[i].clone() - pts[j].clone();
            if d.is_zero() {
                exact_repeat = true;
            }
            min_gap = min_gap.min(d.abs_approx());
        }
    }
    if S::EXACT {
        if exact_repeat {
            return Err(SymfunError::RepeatedVariable);
        }
    } else if min_gap < tol {
        return Ok(bialternant_divided_differences(lam, &pts, tol));
    }

    let exps: Vec<i64> = (0..n)
        .map(|j| lam.part(j) as i64 + (n - 1 - j) as i64)
        .collect();
    let a = det(&Mat::from_fn(n, |i, j| int_pow(&pts[i], exps[j])));
    let mut v = S::one();
    for i in 0..n {
        for j in (i + 1)..n {
            v = v * (pts[i].clone() - pts[j].clone());
        }
    }
    Ok(a / v)
}

fn int_pow<S: Field>(x: &S, e: i64) -> S {
    let mut acc = S::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}

/// Binomial coefficient C(m, k) as a scalar (0 when k > m).
fn binom<S: Field>(m: i64, k: i64) -> S {
    if k < 0 || k > m {
        return S::zero();
    }
    let mut num = S::one();
    let mut den = S::one();
    for t in 0..k {
        num = num * S::from_int(m - t);
        den = den * S::from_int(t + 1);
    }
    num / den
}

/// Confluent-safe evaluation: row i of the alternant is replaced by the
/// (i)-th divided difference of each column power over x_0..x_i, which
/// divides out the Vandermonde up to the sign (−1)^{n(n−1)/2}.
fn bialternant_divided_differences<S: Field>(lam: &Partition, pts: &[S], tol: f64) -> S {
    let n = pts.len();
    let exps: Vec<i64> = (0..n)
        .map(|j| lam.part(j) as i64 + (n - 1 - j) as i64)
        .collect();
    let mut dd = Mat::from_fn(n, |_, _| S::zero());
    for j in 0..n {
        let m = exps[j];
        // level-0 values, then successive divided differences in place
        let mut level: Vec<S> = pts.iter().map(|x| int_pow(x, m)).collect();
        dd.data[j] = level[0].clone(); // D[0][j]
        for k in 1..n {
            let mut next = Vec::with_capacity(n - k);
            for i in 0..(n - k) {
                let gap = pts[i + k].clone() - pts[i].clone();
                if gap.is_zero() || gap.abs_approx() < tol {
                    // f^{(k)}(x)/k! = C(m, k)·x^{m−k}
                    let c: S = binom(m, k as i64);
                    let v = if m - (k as i64) < 0 {
                        S::zero()
                    } else {
                        c * int_pow(&pts[i], m - k as i64)
                    };
                    next.push(v);
                } else {
                    next.push((level[i + 1].clone() - level[i].clone()) / gap);
                }
            }
            dd.data[k * n + j] = next[0].clone(); // D[k][j]
            level = next;
        }
    }
    let d = det(&dd);
    if (n * (n - 1) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

/// Unified entry point: evaluate s_λ at explicit variable values by the
/// chosen route. The Jacobi–Trudi routes derive h/e prefixes from power sums
/// internally.
pub fn schur_eval<S: Field>(
    lam: &Partition,
    xs: &[S],
    method: SchurMethod,
) -> Result<S, SymfunError> {
    match method {
        SchurMethod::Tableaux => Ok(schur_tableaux(lam, xs)),
        SchurMethod::Bialternant => schur_bialternant(lam, xs),
        SchurMethod::JacobiTrudiH | SchurMethod::JacobiTrudiE => {
            let tr = lam.transpose();
            let order = (lam.part(0) as usize + lam.len()).max(tr.part(0) as usize + tr.len());
            let p = power_sums(xs, order);
            let (h, e) = power_to_eh(&p);
            if method == SchurMethod::JacobiTrudiH {
                schur_from_h(lam, &h)
            } else {
                schur_from_e(lam, &e)
            }
        }
    }
}

/// Giambelli determinant det(hook(p_i, q_j)) over the Frobenius coordinates
/// of λ. The empty partition yields 1 (empty determinant).
pub fn giambelli_det<S: Field>(lam: &Partition, mut hook: impl FnMut(u32, u32) -> S) -> S {
    let f = lam.to_frobenius();
    let d = f.depth();
    let m = Mat::from_fn(d, |i, j| hook(f.arms[i], f.legs[j]));
    det(&m)
}

/// Coefficient tables, through total degree `m`, of both sides of
/// H(u)E(v) = 1 + (u+v)·Σ_{p,q≥0} s_{(p|q)} u^p v^q evaluated at `xs`.
///
/// Returns (lhs, rhs) with entry `[a][b]` the coefficient of u^a v^b; entries
/// with a+b > m are filled with zero on both sides.
pub fn hook_series_coeffs<S: Field>(
    m: usize,
    xs: &[S],
) -> Result<(Vec<Vec<S>>, Vec<Vec<S>>), SymfunError> {
    let p = power_sums(xs, m + 2);
    let (h, e) = power_to_eh(&p);
    let mut lhs = vec![vec![S::zero(); m + 1]; m + 1];
    let mut rhs = vec![vec![S::zero(); m + 1]; m + 1];
    let mut hooks = std::collections::HashMap::new();
    let mut hook_val = |p: i64, q: i64, h: &[S], e: &[S]| -> Result<S, SymfunError> {
        if p < 0 || q < 0 {
            return Ok(S::zero());
        }
        let key = (p, q);
        if let Some(v) = hooks.get(&key) {
            let v: &S = v;
            return Ok(v.clone());
        }
        let lam = Partition::hook(p as u32, q as u32);
        let v = schur_from_h(&lam, h)?;
        // cross-check against the conjugate route to catch slicing bugs early
        debug_assert!({
            let w = schur_from_e(&lam, e)?;
            (v.clone() - w).abs_approx() < 1e-9 * (1.0 + v.abs_approx())
        });
        hooks.insert(key, v.clone());
        Ok(v)
    };
    for a in 0..=m {
        for b in 0..=(m - a) {
            lhs[a][b] = h[a].clone() * e[b].clone();
            let term1 = hook_val(a as i64 - 1, b as i64, &h, &e)?;
            let term2 = hook_val(a as i64, b as i64 - 1, &h, &e)?;
            rhs[a][b] = term1 + term2;
            if a == 0 && b == 0 {
                rhs[a][b] = S::one();
            }
        }
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CRat;
    use num_complex::Complex64;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<CRat> {
        v.iter().map(|&n| CRat::from_ints(n, 0)).collect()
    }

    #[test]
    fn s21_at_1_2_is_6() {
        let lam = part(&[2, 1]);
        let xs = ints(&[1, 2]);
        for m in [
            SchurMethod::Tableaux,
            SchurMethod::JacobiTrudiH,
            SchurMethod::JacobiTrudiE,
            SchurMethod::Bialternant,
        ] {
            assert_eq!(schur_eval(&lam, &xs, m).unwrap(), CRat::from_ints(6, 0), "{m:?}");
        }
    }

    #[test]
    fn four_routes_agree_on_rational_grid() {
        let xs = vec![
            CRat::from_ratio(1, 2),
            CRat::from_ratio(-2, 3),
            CRat::from_ratio(3, 1),
        ];
        for lam in Partition::all_up_to_weight(6) {
            let t = schur_eval(&lam, &xs, SchurMethod::Tableaux).unwrap();
            for m in [
                SchurMethod::JacobiTrudiH,
                SchurMethod::JacobiTrudiE,
                SchurMethod::Bialternant,
            ] {
                assert_eq!(schur_eval(&lam, &xs, m).unwrap(), t, "{lam:?} {m:?}");
            }
        }
    }

    #[test]
    fn more_rows_than_variables_gives_zero() {
        let lam = part(&[1, 1, 1]);
        let xs = ints(&[1, 2]);
        assert_eq!(schur_eval(&lam, &xs, SchurMethod::Tableaux).unwrap(), CRat::from_ints(0, 0));
        assert_eq!(
            schur_eval(&lam, &xs, SchurMethod::JacobiTrudiH).unwrap(),
            CRat::from_ints(0, 0)
        );
        assert_eq!(
            schur_eval(&lam, &xs, SchurMethod::Bialternant).unwrap(),
            CRat::from_ints(0, 0)
        );
    }

    #[test]
    fn exact_repeated_variable_errors() {
        let lam = part(&[2]);
        let xs = ints(&[3, 3]);
        assert!(matches!(
            schur_bialternant(&lam, &xs),
            Err(SymfunError::RepeatedVariable)
        ));
    }

    #[test]
    fn float_near_coincident_switches_to_divided_differences() {
        let lam = part(&[3, 1]);
        let eps = 1e-9;
        let xs = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0 + eps, 0.0),
            Complex64::new(2.0, 0.5),
        ];
        let v = schur_bialternant(&lam, &xs).unwrap();
        let t = schur_tableaux(&lam, &xs);
        assert!((v - t).norm() < 1e-6 * t.norm(), "dd={v} oracle={t}");
        // exactly coincident must also stay finite and close to the limit
        let xs0 = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.5),
        ];
        let v0 = schur_bialternant(&lam, &xs0).unwrap();
        assert!((v0 - t).norm() < 1e-6 * t.norm(), "confluent={v0} oracle={t}");
    }

    #[test]
    fn insufficient_h_prefix_errors() {
        let lam = part(&[3, 1]);
        let h = ints(&[1, 2, 3]); // need h_4
        assert!(matches!(
            schur_from_h(&lam, &h),
            Err(SymfunError::InsufficientOrder { need: 4, have: 2 })
        ));
    }

    #[test]
    fn giambelli_of_hook_is_hook_value() {
        let lam = Partition::hook(2, 1);
        let v = giambelli_det(&lam, |p, q| CRat::from_ints((10 * p + q) as i64, 0));
        assert_eq!(v, CRat::from_ints(21, 0));
    }

    #[test]
    fn giambelli_matches_schur_for_exact_variables() {
        // classical Giambelli: s_λ = det(s_{(p_i|q_j)}) for honest Schur values
        let xs = ints(&[1, 2, 3]);
        for lam in Partition::all_up_to_weight(6) {
            let direct = schur_tableaux(&lam, &xs);
            let gb = giambelli_det(&lam, |p, q| {
                schur_tableaux(&Partition::hook(p, q), &xs)
            });
            assert_eq!(gb, direct, "{lam:?}");
        }
    }

    #[test]
    fn hook_series_tables_agree() {
        let xs = vec![
            CRat::from_ratio(2, 3),
            CRat::from_ratio(-1, 2),
            CRat::from_ratio(5, 7),
        ];
        let (lhs, rhs) = hook_series_coeffs(6, &xs).unwrap();
        assert_eq!(lhs, rhs);
    }
}
