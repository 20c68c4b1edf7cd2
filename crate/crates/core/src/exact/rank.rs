//! Rank computations over two fields, and the saturated-kernel machinery.
//!
//! For a matrix with entries in the Q-span of the symbols there are two
//! meaningful ranks. Flattening every entry to its coefficient vector gives
//! the rank over Q, which counts the free rank of the group generated by
//! the rows. Reading the symbols as independent transcendentals instead
//! gives the rank over the rational function field, which is the dimension
//! of the real span of the rows. A finitely generated subgroup of `R^n` is
//! discrete exactly when the two agree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{hnf_row, snf, ExactError, KMatrix, KNumber, QMatrix, Rational, ZMatrix};

/// Rank over Q of the rows after flattening each entry to its coefficient
/// vector. Equals the free rank of the abelian group generated by the rows.
pub fn flatten_rank_q(a: &KMatrix) -> usize {
    a.flatten_q(a.symbol_span()).rank()
}

/// Rank over the fraction field `Q(x_1, ..., x_d)`, with the symbols read
/// as the variables. Computed by fraction-free Gaussian elimination over
/// the polynomial ring; equals the dimension of the real span of the rows
/// under the declared symbol semantics.
pub fn function_field_rank(a: &KMatrix) -> usize {
    let span = a.symbol_span();
    let nvars = span - 1;
    let mut m: Vec<Vec<QPoly>> = a
        .iter_rows()
        .map(|row| row.iter().map(|k| QPoly::from_knumber(k, nvars)).collect())
        .collect();
    poly_rank(&mut m, a.cols())
}

// One-step Bareiss elimination; divisions are exact by Sylvester's identity.
fn poly_rank(m: &mut [Vec<QPoly>], cols: usize) -> usize {
    let rows = m.len();
    let mut prev = QPoly::one(0);
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = m[r][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[r][j]));
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss division must be exact");
            }
            m[i][c] = QPoly::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// A Z-basis of the saturated lattice `{u : u^T * a = 0}` of integer left
/// relations, one basis vector per row. Saturation is automatic: the
/// lattice is the intersection of a rational subspace with `Z^rows`.
pub fn saturated_left_kernel(a: &KMatrix) -> ZMatrix {
    let flat = a.flatten_q(a.symbol_span());
    let int = clear_denominators(&flat);
    let (h, u) = hnf_row(&int);
    let zero_rows: Vec<usize> = (0..h.rows())
        .filter(|&i| h.row(i).iter().all(|x| x.is_zero()))
        .collect();
    let mut out = ZMatrix::zero(zero_rows.len(), a.rows());
    for (k, &i) in zero_rows.iter().enumerate() {
        for j in 0..a.rows() {
            out[(k, j)] = u[(i, j)].clone();
        }
    }
    out
}

// Scales each column by the lcm of its denominators; the left kernel is
// unchanged.
fn clear_denominators(a: &QMatrix) -> ZMatrix {
    let mut out = ZMatrix::zero(a.rows(), a.cols());
    for j in 0..a.cols() {
        let mut lcm = BigInt::one();
        for i in 0..a.rows() {
            lcm = lcm.lcm(a[(i, j)].denom());
        }
        for i in 0..a.rows() {
            let q = &a[(i, j)] * Rational::from_integer(lcm.clone());
            debug_assert!(q.is_integer());
            out[(i, j)] = q.to_integer();
        }
    }
    out
}

/// Completes the rows of `k` (a basis of a saturated sublattice of `Z^n`)
/// to a basis of `Z^n`: returns `U` in `GL_n(Z)` whose last `rank(k)` rows
/// are a Z-basis of the row span of `k`.
pub fn extend_to_unimodular(k: &ZMatrix) -> Result<ZMatrix, ExactError> {
    let (m, n) = (k.rows(), k.cols());
    if m == 0 {
        return Ok(ZMatrix::identity(n));
    }
    if m > n {
        return Err(ExactError::NotSaturated);
    }
    let (p, d, q) = snf(k);
    for i in 0..m {
        if d[(i, i)] != BigInt::one() {
            return Err(ExactError::NotSaturated);
        }
    }
    let qinv = super::inverse_unimodular(&q).expect("SNF transform is unimodular");
    // rows of q^-1: the first m span the same lattice as k (they equal p*k);
    // rotate them to the bottom
    let completion = qinv.row_slice(m, n);
    let base = p.mul(k);
    debug_assert_eq!(base, qinv.row_slice(0, m));
    Ok(completion.vstack(&base))
}

// ---------------------------------------------------------------------------
// Sparse multivariate polynomials over Q, just enough for Bareiss
// ---------------------------------------------------------------------------

/// Monomials are exponent vectors of fixed length; the zero polynomial has
/// an empty term map.
#[derive(Debug, Clone, PartialEq, Eq)]
struct QPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl QPoly {
    fn zero() -> Self {
        QPoly {
            nvars: 0,
            terms: BTreeMap::new(),
        }
    }

    fn one(nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; nvars], Rational::one());
        QPoly { nvars, terms }
    }

    fn from_knumber(k: &KNumber, nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (i, q) in k.iter() {
            let mut exp = vec![0u32; nvars];
            if i > 0 {
                exp[i - 1] = 1;
            }
            terms.insert(exp, q.clone());
        }
        QPoly { nvars, terms }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, exp: Vec<u32>, q: Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &q;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn sub(&self, other: &QPoly) -> QPoly {
        let mut out = self.clone();
        if out.is_zero() {
            out.nvars = other.nvars;
        }
        for (exp, q) in &other.terms {
            out.insert(exp.clone(), -q.clone());
        }
        out
    }

    fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = QPoly {
            nvars: self.nvars.max(other.nvars),
            terms: BTreeMap::new(),
        };
        for (ea, qa) in &self.terms {
            for (eb, qb) in &other.terms {
                let mut exp = vec![0u32; out.nvars];
                for (t, v) in exp.iter_mut().enumerate() {
                    *v = ea.get(t).copied().unwrap_or(0) + eb.get(t).copied().unwrap_or(0);
                }
                out.insert(exp, qa * qb);
            }
        }
        out
    }

    /// Exact division; `None` when the divisor does not divide exactly.
    fn div_exact(&self, divisor: &QPoly) -> Option<QPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(QPoly::zero());
        }
        let nvars = self.nvars.max(divisor.nvars);
        let (dexp, dq) = divisor.terms.iter().next_back().expect("nonzero divisor");
        let mut rem = self.clone();
        rem.nvars = nvars;
        let mut quot = QPoly {
            nvars,
            terms: BTreeMap::new(),
        };
        while let Some((rexp, rq)) = rem
            .terms
            .iter()
            .next_back()
            .map(|(e, q)| (e.clone(), q.clone()))
        {
            let mut qexp = vec![0u32; nvars];
            for (t, q) in qexp.iter_mut().enumerate() {
                let re = rexp.get(t).copied().unwrap_or(0);
                let de = dexp.get(t).copied().unwrap_or(0);
                if re < de {
                    return None;
                }
                *q = re - de;
            }
            let qc = &rq / dq;
            let mut single = QPoly {
                nvars,
                terms: BTreeMap::new(),
            };
            single.insert(qexp.clone(), qc.clone());
            rem = rem.sub(&single.mul(divisor));
            quot.insert(qexp, qc);
        }
        Some(quot)
    }
}
