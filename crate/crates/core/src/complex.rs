//! Finitely generated integer chain complexes and vector-valued cochains.
//!
//! A complex stores cell counts `n_0 ... n_top` and boundary matrices
//! `d_k` of shape `n_(k-1) x n_k`; the constructor verifies `d_k * d_(k+1)
//! = 0`. Homology is computed by Smith normal form with explicit integer
//! cycles generating the free part, which is all the period machinery ever
//! needs: torsion classes evaluate to zero against vector-valued cochains
//! and are reported but carry no cycle rows.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{inverse_unimodular, snf, KMatrix, ZMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("malformed simplicial input: {0}")]
    MalformedInput(String),
    #[error("degree {degree} out of range (top degree {top})")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("cochain is not closed")]
    NotClosed,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("boundary composition d{0} * d{1} is nonzero")]
    NotAComplex(usize, usize),
}

/// A chain complex of free Z-modules, cells indexed per degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<ZMatrix>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<ZMatrix>) -> Result<Self, ComplexError> {
        if dims.is_empty() {
            return Err(ComplexError::MalformedInput(
                "complex has no degrees".into(),
            ));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(ComplexError::ShapeMismatch(format!(
                "{} degrees need {} boundary maps, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (k, b) in boundaries.iter().enumerate() {
            let (rows, cols) = (dims[k], dims[k + 1]);
            if b.rows() != rows || b.cols() != cols {
                return Err(ComplexError::ShapeMismatch(format!(
                    "boundary d{} must be {}x{}, got {}x{}",
                    k + 1,
                    rows,
                    cols,
                    b.rows(),
                    b.cols()
                )));
            }
        }
        for k in 0..boundaries.len().saturating_sub(1) {
            if !boundaries[k].mul(&boundaries[k + 1]).is_zero() {
                return Err(ComplexError::NotAComplex(k + 1, k + 2));
            }
        }
        Ok(ChainComplex { dims, boundaries })
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// Stored boundary map `d_k` for `1 <= k <= top`.
    pub fn boundary(&self, k: usize) -> Option<&ZMatrix> {
        if k >= 1 && k <= self.top() {
            Some(&self.boundaries[k - 1])
        } else {
            None
        }
    }

    // d_k as a materialized matrix, with the virtual zero maps at the ends.
    pub(crate) fn boundary_in(&self, k: usize) -> ZMatrix {
        if k == 0 {
            ZMatrix::zero(0, self.dim(0))
        } else {
            self.boundaries[k - 1].clone()
        }
    }

    pub(crate) fn boundary_out(&self, k: usize) -> ZMatrix {
        if k == self.top() {
            ZMatrix::zero(self.dim(k), 0)
        } else {
            self.boundaries[k].clone()
        }
    }

    /// Alternating sum of cell counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

/// Maximal simplices of a simplicial complex, by vertex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialInput {
    pub vertices: usize,
    pub facets: Vec<Vec<usize>>,
}

impl SimplicialInput {
    fn validate(&self) -> Result<(), ComplexError> {
        for facet in &self.facets {
            if facet.is_empty() {
                return Err(ComplexError::MalformedInput("empty facet".into()));
            }
            let mut seen = BTreeSet::new();
            for &v in facet {
                if v >= self.vertices {
                    return Err(ComplexError::MalformedInput(format!(
                        "vertex {v} out of range (vertices: {})",
                        self.vertices
                    )));
                }
                if !seen.insert(v) {
                    return Err(ComplexError::MalformedInput(format!(
                        "repeated vertex {v} in facet"
                    )));
                }
            }
        }
        Ok(())
    }

    // All faces per degree, sorted lexicographically.
    fn face_sets(&self) -> Vec<BTreeSet<Vec<usize>>> {
        let top = self.facets.iter().map(|f| f.len() - 1).max().unwrap_or(0);
        let mut cells: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); top + 1];
        for v in 0..self.vertices {
            cells[0].insert(vec![v]);
        }
        for facet in &self.facets {
            let mut sorted = facet.clone();
            sorted.sort_unstable();
            insert_faces(&mut cells, &sorted);
        }
        cells
    }
}

/// Builds the full face complex of the given facets. Cells of each degree
/// are the sorted vertex tuples in lexicographic order; the boundary of a
/// cell alternates signs over omitted vertices.
pub fn from_simplicial(input: &SimplicialInput) -> Result<ChainComplex, ComplexError> {
    input.validate()?;
    let cells = input.face_sets();
    let indexed: Vec<BTreeMap<Vec<usize>, usize>> = cells
        .iter()
        .map(|set| set.iter().cloned().zip(0..).collect())
        .collect();
    let dims: Vec<usize> = indexed.iter().map(|m| m.len()).collect();
    let mut boundaries = Vec::with_capacity(dims.len().saturating_sub(1));
    for k in 1..dims.len() {
        let mut b = ZMatrix::zero(dims[k - 1], dims[k]);
        for (cell, &j) in &indexed[k] {
            for (omit, sign) in (0..cell.len()).zip([1i64, -1].into_iter().cycle()) {
                let mut face = cell.clone();
                face.remove(omit);
                let i = indexed[k - 1][&face];
                b[(i, j)] = BigInt::from(sign);
            }
        }
        boundaries.push(b);
    }
    ChainComplex::new(dims, boundaries)
}

fn insert_faces(cells: &mut [BTreeSet<Vec<usize>>], simplex: &[usize]) {
    let k = simplex.len() - 1;
    if !cells[k].insert(simplex.to_vec()) {
        return;
    }
    if k == 0 {
        return;
    }
    for omit in 0..simplex.len() {
        let mut face = simplex.to_vec();
        face.remove(omit);
        insert_faces(cells, &face);
    }
}

/// All cells of the face complex, per degree, in the same lexicographic
/// order the boundary matrices use. Handy for building chain maps from
/// vertex permutations.
pub fn simplicial_cells(input: &SimplicialInput) -> Result<Vec<Vec<Vec<usize>>>, ComplexError> {
    input.validate()?;
    Ok(input
        .face_sets()
        .into_iter()
        .map(|set| set.into_iter().collect())
        .collect())
}

/// Homology of one degree: Betti number, torsion invariant factors, and
/// explicit cycles projecting to a basis of the free part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyResult {
    pub degree: usize,
    pub betti: usize,
    /// Invariant factors greater than 1.
    pub torsion: Vec<BigInt>,
    /// `betti x n_degree`; each row is a cycle, rows are independent
    /// modulo boundaries, each row primitive with positive leading entry.
    pub cycle_basis: ZMatrix,
}

/// Computes homology in degree `k` via Smith normal forms of the two
/// adjacent boundary maps.
pub fn homology(c: &ChainComplex, k: usize) -> Result<HomologyResult, ComplexError> {
    if k > c.top() {
        return Err(ComplexError::DegreeOutOfRange {
            degree: k,
            top: c.top(),
        });
    }
    let a = c.boundary_in(k);
    let b = c.boundary_out(k);
    // integer kernel of a: columns of v past the rank of the Smith form
    let (_, da, va) = snf(&a);
    let rank_a = (0..da.rows().min(da.cols()))
        .take_while(|&i| !da[(i, i)].is_zero())
        .count();
    let kernel = va.col_slice(rank_a, va.cols()); // n_k x z
    let z = kernel.cols();
    // express im(b) in kernel coordinates: kernel * x = b
    let x = solve_in_kernel_basis(&kernel, &b);
    // quotient Z^z / im(x)
    let (p, s, _) = snf(&x);
    let t = (0..s.rows().min(s.cols()))
        .take_while(|&i| !s[(i, i)].is_zero())
        .count();
    let torsion: Vec<BigInt> = (0..t)
        .map(|i| s[(i, i)].clone())
        .filter(|d| !d.is_one())
        .collect();
    let betti = z - t;
    let pinv = inverse_unimodular(&p).expect("SNF transform is unimodular");
    let free_cols = pinv.col_slice(t, z); // z x betti
    let mut cycle_basis = kernel.mul(&free_cols).transpose(); // betti x n_k
    normalize_rows(&mut cycle_basis);
    debug_assert!(
        a.mul(&cycle_basis.transpose()).is_zero(),
        "cycle rows must be cycles"
    );
    Ok(HomologyResult {
        degree: k,
        betti,
        torsion,
        cycle_basis,
    })
}

// Solves kernel * x = b over Z, where the kernel columns are a basis of a
// saturated lattice containing every column of b.
fn solve_in_kernel_basis(kernel: &ZMatrix, b: &ZMatrix) -> ZMatrix {
    let z = kernel.cols();
    if z == 0 {
        debug_assert!(b.is_zero(), "image must lie in the kernel");
        return ZMatrix::zero(0, b.cols());
    }
    let (uk, dk, vk) = snf(kernel);
    for i in 0..z {
        debug_assert!(dk[(i, i)].is_one(), "kernel basis must be saturated");
    }
    let ub = uk.mul(b);
    debug_assert!(
        ub.row_slice(z, ub.rows()).is_zero(),
        "image must lie in the kernel"
    );
    vk.mul(&ub.row_slice(0, z))
}

// Divides each row by its gcd and makes the leading nonzero entry positive.
fn normalize_rows(m: &mut ZMatrix) {
    for i in 0..m.rows() {
        let mut g = BigInt::zero();
        for j in 0..m.cols() {
            g = g.gcd(&m[(i, j)]);
        }
        if g.is_zero() {
            continue;
        }
        let lead_negative = (0..m.cols())
            .find(|&j| !m[(i, j)].is_zero())
            .map(|j| m[(i, j)].is_negative())
            .unwrap_or(false);
        if lead_negative {
            g = -g;
        }
        if !g.is_one() {
            for j in 0..m.cols() {
                let v = &m[(i, j)] / &g;
                m[(i, j)] = v;
            }
        }
    }
}

/// A cochain in one degree with values in `K^ell`: one row of scalars per
/// cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    values: KMatrix,
}

impl Cochain {
    pub fn new(c: &ChainComplex, degree: usize, values: KMatrix) -> Result<Self, ComplexError> {
        if degree > c.top() {
            return Err(ComplexError::DegreeOutOfRange {
                degree,
                top: c.top(),
            });
        }
        if values.rows() != c.dim(degree) {
            return Err(ComplexError::ShapeMismatch(format!(
                "cochain in degree {degree} needs {} value rows, got {}",
                c.dim(degree),
                values.rows()
            )));
        }
        Ok(Cochain { degree, values })
    }

    pub fn zero(c: &ChainComplex, degree: usize, ell: usize) -> Result<Self, ComplexError> {
        Self::new(c, degree, KMatrix::zero(c.dim(degree), ell))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Fiber dimension of the values.
    pub fn ell(&self) -> usize {
        self.values.cols()
    }

    pub fn values(&self) -> &KMatrix {
        &self.values
    }
}

/// The coboundary `(δf)(c) = f(∂c)`, raising the degree by one.
pub fn coboundary(c: &ChainComplex, f: &Cochain) -> Result<Cochain, ComplexError> {
    if f.degree >= c.top() {
        return Err(ComplexError::DegreeOutOfRange {
            degree: f.degree + 1,
            top: c.top(),
        });
    }
    let d = c.boundary_out(f.degree);
    let values = f.values.left_mul_z(&d.transpose());
    Cochain::new(c, f.degree + 1, values)
}

/// A cochain is closed when its coboundary vanishes; top-degree cochains
/// are closed by convention.
pub fn is_closed(c: &ChainComplex, f: &Cochain) -> bool {
    if f.degree == c.top() {
        return true;
    }
    coboundary(c, f)
        .map(|df| df.values.is_zero())
        .unwrap_or(false)
}

/// Period matrix of a closed cochain against a cycle basis: row `i` is the
/// evaluation of the cochain on cycle `i`. Independent of the
/// representative within a cohomology class.
pub fn periods(c: &ChainComplex, f: &Cochain, h: &HomologyResult) -> Result<KMatrix, ComplexError> {
    if f.degree != h.degree {
        return Err(ComplexError::ShapeMismatch(format!(
            "cochain degree {} vs homology degree {}",
            f.degree, h.degree
        )));
    }
    if !is_closed(c, f) {
        return Err(ComplexError::NotClosed);
    }
    if h.cycle_basis.cols() != c.dim(f.degree) {
        return Err(ComplexError::ShapeMismatch(
            "cycle basis does not match the complex".into(),
        ));
    }
    Ok(f.values.left_mul_z(&h.cycle_basis))
}

/// The sphere-product model: one 0-cell, two 2-cells, one 4-cell, zero
/// boundary maps. Its degree-2 homology is free of rank 2 with the
/// identity cycle basis.
pub fn sphere_product_complex() -> ChainComplex {
    ChainComplex::new(
        vec![1, 0, 2, 0, 1],
        vec![
            ZMatrix::zero(1, 0),
            ZMatrix::zero(0, 2),
            ZMatrix::zero(2, 0),
            ZMatrix::zero(0, 1),
        ],
    )
    .expect("static complex is valid")
}
