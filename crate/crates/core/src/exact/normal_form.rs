//! Integer normal forms with transformation matrices.
//!
//! Pivot selection is pinned for reproducibility: among the eligible
//! nonzero entries the one of smallest absolute value wins, ties broken by
//! lowest row index, then lowest column index. All outputs are therefore
//! byte-stable across platforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ZMatrix;

/// Smith normal form: returns `(u, d, v)` with `u * a * v = d`, `u` and
/// `v` unimodular, `d` diagonal with nonnegative entries satisfying the
/// divisibility chain `d[0] | d[1] | ...`.
pub fn snf(a: &ZMatrix) -> (ZMatrix, ZMatrix, ZMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = ZMatrix::identity(m);
    let mut v = ZMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = select_pivot(&d, t, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            eliminate_cross(&mut d, &mut u, &mut v, t);
            // the pivot must divide the whole trailing block
            match find_nondivisible(&d, t) {
                Some(i) => {
                    d.row_add(t, i);
                    u.row_add(t, i);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    (u, d, v)
}

// Clears column t below the pivot and row t to its right, re-promoting any
// nonzero remainder (which is strictly smaller than the pivot) until both
// are clear.
fn eliminate_cross(d: &mut ZMatrix, u: &mut ZMatrix, v: &mut ZMatrix, t: usize) {
    let (m, n) = (d.rows(), d.cols());
    loop {
        let col_ok = (t + 1..m).all(|i| d[(i, t)].is_zero());
        let row_ok = (t + 1..n).all(|j| d[(t, j)].is_zero());
        if col_ok && row_ok {
            return;
        }
        if !col_ok {
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = &d[(i, t)] / &d[(t, t)];
                d.row_sub_mul(i, t, &q);
                u.row_sub_mul(i, t, &q);
                if !d[(i, t)].is_zero() {
                    // remainder beats the pivot
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                }
            }
        } else {
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = &d[(t, j)] / &d[(t, t)];
                d.col_sub_mul(j, t, &q);
                v.col_sub_mul(j, t, &q);
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                }
            }
        }
    }
}

fn find_nondivisible(d: &ZMatrix, t: usize) -> Option<usize> {
    let p = &d[(t, t)];
    for i in t + 1..d.rows() {
        for j in t + 1..d.cols() {
            if !d[(i, j)].mod_floor(p).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

fn select_pivot(d: &ZMatrix, row0: usize, col0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in row0..d.rows() {
        for j in col0..d.cols() {
            if d[(i, j)].is_zero() {
                continue;
            }
            let a = d[(i, j)].abs();
            match &best {
                Some((b, _, _)) if *b <= a => {}
                _ => best = Some((a, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Row Hermite normal form: returns `(h, u)` with `u * a = h`, `u`
/// unimodular. Pivots are positive, entries above a pivot are reduced into
/// `[0, pivot)`, and zero rows sit at the bottom. Row span over Z is
/// preserved.
pub fn hnf_row(a: &ZMatrix) -> (ZMatrix, ZMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = ZMatrix::identity(m);
    let mut r = 0;
    for j in 0..n {
        if r >= m {
            break;
        }
        // gcd-reduce column j among rows >= r
        while let Some(p) = min_abs_row(&h, r, j) {
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = &h[(i, j)] / &h[(r, j)];
                h.row_sub_mul(i, r, &q);
                u.row_sub_mul(i, r, &q);
                if !h[(i, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, j)].is_zero() {
            continue;
        }
        if h[(r, j)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, j)].div_floor(&h[(r, j)]);
            h.row_sub_mul(i, r, &q);
            u.row_sub_mul(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

fn min_abs_row(h: &ZMatrix, row0: usize, j: usize) -> Option<usize> {
    let mut best: Option<(BigInt, usize)> = None;
    for i in row0..h.rows() {
        if h[(i, j)].is_zero() {
            continue;
        }
        let a = h[(i, j)].abs();
        match &best {
            Some((b, _)) if *b <= a => {}
            _ => best = Some((a, i)),
        }
    }
    best.map(|(_, i)| i)
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &ZMatrix) -> BigInt {
    assert_eq!(a.rows(), a.cols(), "determinant: matrix must be square");
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                m[(i, j)] = num / &prev; // exact by Sylvester's identity
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    sign * m[(n - 1, n - 1)].clone()
}

/// Inverse of a unimodular integer matrix, or `None` when `a` is not
/// unimodular. Uses the Hermite form: `u * a = I` forces `u = a^-1`.
pub fn inverse_unimodular(a: &ZMatrix) -> Option<ZMatrix> {
    if a.rows() != a.cols() {
        return None;
    }
    let (h, u) = hnf_row(a);
    if h == ZMatrix::identity(a.rows()) {
        Some(u)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zm(cols: usize, rows: Vec<Vec<i64>>) -> ZMatrix {
        ZMatrix::from_i64(cols, rows)
    }

    fn check_snf(a: &ZMatrix) -> ZMatrix {
        let (u, d, v) = snf(a);
        assert_eq!(u.mul(a).mul(&v), d, "u*a*v != d");
        assert_eq!(determinant(&u).abs(), BigInt::one());
        assert_eq!(determinant(&v).abs(), BigInt::one());
        // diagonal, nonnegative, divisibility chain
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    assert!(d[(i, j)].is_zero(), "off-diagonal entry");
                }
            }
        }
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols()))
            .map(|i| d[(i, i)].clone())
            .collect();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative() && !w[1].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero(), "zero before nonzero in the chain");
            } else {
                assert!(w[1].mod_floor(&w[0]).is_zero(), "divisibility chain broken");
            }
        }
        d
    }

    #[test]
    fn snf_zero_1x1() {
        let a = zm(1, vec![vec![0]]);
        let (u, d, v) = snf(&a);
        assert_eq!(d, zm(1, vec![vec![0]]));
        assert_eq!(u, ZMatrix::identity(1));
        assert_eq!(v, ZMatrix::identity(1));
    }

    #[test]
    fn snf_identity() {
        let a = ZMatrix::identity(2);
        let d = check_snf(&a);
        assert_eq!(d, a);
    }

    #[test]
    fn snf_diag_2_3() {
        // hand reduction: gcd(2,3) = 1 and 2*3 = 6, so diag(1, 6)
        let a = zm(2, vec![vec![2, 0], vec![0, 3]]);
        let d = check_snf(&a);
        assert_eq!(d, zm(2, vec![vec![1, 0], vec![0, 6]]));
    }

    #[test]
    fn snf_rectangular_and_torsion() {
        let a = zm(3, vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let d = check_snf(&a);
        assert_eq!(
            d,
            zm(3, vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 156]])
        );
        check_snf(&zm(3, vec![vec![1, 2, 3]]));
        check_snf(&zm(1, vec![vec![4], vec![6]]));
        check_snf(&ZMatrix::zero(0, 3));
        check_snf(&ZMatrix::zero(3, 0));
    }

    #[test]
    fn hnf_examples() {
        let a = zm(1, vec![vec![1]]);
        let (h, _) = hnf_row(&a);
        assert_eq!(h, a);

        let a = zm(1, vec![vec![2], vec![3]]);
        let (h, u) = hnf_row(&a);
        assert_eq!(h, zm(1, vec![vec![1], vec![0]]));
        assert_eq!(u.mul(&a), h);
        assert_eq!(determinant(&u).abs(), BigInt::one());

        let a = zm(2, vec![vec![4, 0], vec![0, 0]]);
        let (h, _) = hnf_row(&a);
        assert_eq!(h, a);
    }

    #[test]
    fn hnf_reduces_above_pivot() {
        let a = zm(2, vec![vec![5, 7], vec![0, 3]]);
        let (h, u) = hnf_row(&a);
        assert_eq!(u.mul(&a), h);
        // pivots positive, entry above second pivot in [0, 3)
        assert!(h[(0, 0)].is_positive());
        assert!(h[(1, 1)].is_positive());
        assert!(!h[(0, 1)].is_negative() && h[(0, 1)] < h[(1, 1)]);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = zm(3, vec![vec![2, -3, 1], vec![2, 0, -1], vec![1, 4, 5]]);
        assert_eq!(determinant(&a), BigInt::from(49));
        assert_eq!(determinant(&ZMatrix::identity(4)), BigInt::one());
        assert_eq!(determinant(&ZMatrix::zero(2, 2)), BigInt::zero());
        assert_eq!(determinant(&ZMatrix::zero(0, 0)), BigInt::one());
    }

    #[test]
    fn unimodular_inverse() {
        let a = zm(2, vec![vec![1, 0], vec![2, -1]]);
        let inv = inverse_unimodular(&a).unwrap();
        assert_eq!(a.mul(&inv), ZMatrix::identity(2));
        assert_eq!(inv.mul(&a), ZMatrix::identity(2));
        assert!(inverse_unimodular(&zm(2, vec![vec![2, 0], vec![0, 1]])).is_none());
        assert!(inverse_unimodular(&ZMatrix::zero(1, 2)).is_none());
    }
}
