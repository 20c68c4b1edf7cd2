//! Finite deck-group actions on chain complexes and the equivariant de
//! Rham certificate.
//!
//! When the base is not simply connected the obstruction is computed on
//! the universal cover, where the deck group acts by chain maps. Given a
//! finite-dimensional, group-invariant space of closed scalar 2-cochains
//! that surjects onto degree-2 cohomology, the tautological cochain valued
//! in the dual of that space has discrete periods, and averaging over the
//! (finite) group produces invariant representatives whenever needed.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::algebroid::{is_discrete, MonodromyReport};
use crate::complex::{is_closed, periods, ChainComplex, Cochain, ComplexError, HomologyResult};
use crate::exact::{determinant, KMatrix, QMatrix, Rational, ZMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivariantError {
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("form subspace assumptions failed")]
    AssumptionsFailed,
    /// Some group element moves a basis form out of the Q-span of the
    /// basis, so the induced coefficient action does not exist.
    #[error("coefficient action undefined: a basis form leaves the span")]
    CoefficientActionUndefined,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A finite group acting on a chain complex by chain maps. Element 0 is
/// the identity; `table[i][j]` is the index of the composite `g_i ∘ g_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    complex: ChainComplex,
    elements: Vec<Vec<ZMatrix>>,
    table: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(
        complex: ChainComplex,
        elements: Vec<Vec<ZMatrix>>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self, EquivariantError> {
        let order = elements.len();
        if order == 0 {
            return Err(EquivariantError::InvalidAction("no elements".into()));
        }
        let top = complex.top();
        for (g, mats) in elements.iter().enumerate() {
            if mats.len() != top + 1 {
                return Err(EquivariantError::InvalidAction(format!(
                    "element {g} has {} matrices, need {}",
                    mats.len(),
                    top + 1
                )));
            }
            for (k, m) in mats.iter().enumerate() {
                let n = complex.dim(k);
                if m.rows() != n || m.cols() != n {
                    return Err(EquivariantError::InvalidAction(format!(
                        "element {g} degree {k}: expected {n}x{n}, got {}x{}",
                        m.rows(),
                        m.cols()
                    )));
                }
                if determinant(m).abs() != BigInt::one() {
                    return Err(EquivariantError::InvalidAction(format!(
                        "element {g} degree {k} is not invertible over Z"
                    )));
                }
            }
            // chain map: g commutes with the boundary
            for k in 1..=top {
                let d = complex.boundary(k).expect("degree in range");
                if mats[k - 1].mul(d) != d.mul(&mats[k]) {
                    return Err(EquivariantError::InvalidAction(format!(
                        "element {g} is not a chain map in degree {k}"
                    )));
                }
            }
        }
        if elements[0]
            .iter()
            .enumerate()
            .any(|(k, m)| *m != ZMatrix::identity(complex.dim(k)))
        {
            return Err(EquivariantError::InvalidAction(
                "element 0 must be the identity".into(),
            ));
        }
        if table.len() != order || table.iter().any(|row| row.len() != order) {
            return Err(EquivariantError::InvalidAction(
                "table shape mismatch".into(),
            ));
        }
        for (i, row) in table.iter().enumerate() {
            for (j, &t) in row.iter().enumerate() {
                if t >= order {
                    return Err(EquivariantError::InvalidAction(
                        "table index out of range".into(),
                    ));
                }
                // the table must agree with matrix composition degreewise
                for (k, target) in elements[t].iter().enumerate() {
                    if elements[i][k].mul(&elements[j][k]) != *target {
                        return Err(EquivariantError::InvalidAction(format!(
                            "table entry ({i}, {j}) disagrees with composition in degree {k}"
                        )));
                    }
                }
            }
        }
        for (i, row) in table.iter().enumerate() {
            if !row
                .iter()
                .enumerate()
                .any(|(j, &t)| t == 0 && table[j][i] == 0)
            {
                return Err(EquivariantError::InvalidAction(format!(
                    "element {i} has no inverse"
                )));
            }
        }
        Ok(GroupAction {
            complex,
            elements,
            table,
        })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn matrix(&self, element: usize, degree: usize) -> &ZMatrix {
        &self.elements[element][degree]
    }

    /// Pullback of a cochain along the chain map of one element:
    /// `(g · f)(c) = f(g c)`, i.e. values are hit by the transpose.
    pub fn pullback(&self, element: usize, f: &Cochain) -> Cochain {
        let g = &self.elements[element][f.degree()];
        let values = f.values().left_mul_z(&g.transpose());
        Cochain::new(&self.complex, f.degree(), values).expect("shape preserved")
    }
}

/// A finite-dimensional space of closed scalar 2-cochains, given by a
/// basis. Basis elements must be independent over Q after flattening.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSubspace {
    basis: Vec<Cochain>,
}

impl FormSubspace {
    pub fn new(complex: &ChainComplex, basis: Vec<Cochain>) -> Result<Self, EquivariantError> {
        for f in &basis {
            if f.degree() != 2 || f.ell() != 1 {
                return Err(EquivariantError::ShapeMismatch(
                    "basis forms must be scalar 2-cochains".into(),
                ));
            }
            if f.values().rows() != complex.dim(2) {
                return Err(EquivariantError::ShapeMismatch(
                    "basis form does not match the complex".into(),
                ));
            }
            if !is_closed(complex, f) {
                return Err(EquivariantError::ShapeMismatch(
                    "basis form is not closed".into(),
                ));
            }
        }
        if !basis.is_empty() {
            let flat = flatten_forms(&basis);
            if flat.rank() != basis.len() {
                return Err(EquivariantError::ShapeMismatch(
                    "basis forms are linearly dependent over Q".into(),
                ));
            }
        }
        Ok(FormSubspace { basis })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Cochain] {
        &self.basis
    }
}

// Stacks the flattened coefficient rows of scalar cochains, one row per
// form, with a common symbol span.
fn flatten_forms(forms: &[Cochain]) -> QMatrix {
    let span = forms
        .iter()
        .map(|f| f.values().symbol_span())
        .max()
        .unwrap_or(1);
    let rows: Vec<QMatrix> = forms
        .iter()
        .map(|f| {
            let flat = f.values().flatten_q(span);
            // n2 x span, reshape to one row
            let mut row = QMatrix::zero(1, flat.rows() * flat.cols());
            for i in 0..flat.rows() {
                for j in 0..flat.cols() {
                    row[(0, i * flat.cols() + j)] = flat[(i, j)].clone();
                }
            }
            row
        })
        .collect();
    let mut out = rows[0].clone();
    for r in &rows[1..] {
        out = out.vstack(r);
    }
    out
}

/// Group average `(1/|G|) Σ_g g · f`. The result is invariant under every
/// element and stays closed when `f` is closed.
pub fn average_cochain(a: &GroupAction, f: &Cochain) -> Cochain {
    let mut sum = KMatrix::zero(f.values().rows(), f.values().cols());
    for g in 0..a.order() {
        sum = sum.add(a.pullback(g, f).values());
    }
    let factor = Rational::new(BigInt::one(), BigInt::from(a.order() as i64));
    Cochain::new(&a.complex, f.degree(), sum.scale(&factor)).expect("shape preserved")
}

// Coordinates of `form` in the Q-span of the basis, or None.
fn coordinates_in_span(e: &FormSubspace, form: &Cochain) -> Option<QMatrix> {
    if e.basis.is_empty() {
        return None;
    }
    let mut all = e.basis.to_vec();
    all.push(form.clone());
    let flat = flatten_forms(&all);
    let basis_rows = flat.row_slice(0, e.dimension()).transpose();
    let target = flat.row_slice(e.dimension(), e.dimension() + 1).transpose();
    basis_rows.solve(&target)
}

/// Checks the two conditions that make the equivariant construction work:
/// (i) every group element maps every basis form back into the Q-span of
/// the basis; (ii) the period pairing of the basis against the degree-2
/// cycle basis has full rank `betti`.
pub fn check_assumptions(a: &GroupAction, e: &FormSubspace, h: &HomologyResult) -> bool {
    if h.degree != 2 || h.cycle_basis.cols() != a.complex.dim(2) {
        return false;
    }
    for g in 1..a.order() {
        for form in &e.basis {
            let moved = a.pullback(g, form);
            if coordinates_in_span(e, &moved).is_none() {
                return false;
            }
        }
    }
    match period_matrix(a.complex(), e, h) {
        Ok(p) => crate::exact::function_field_rank(&p) == h.betti,
        Err(_) => false,
    }
}

/// Period matrix of the basis forms against the cycle basis: entry `(i,
/// j)` is the period of form `j` over cycle `i`.
pub fn period_matrix(
    c: &ChainComplex,
    e: &FormSubspace,
    h: &HomologyResult,
) -> Result<KMatrix, EquivariantError> {
    let mut out = KMatrix::zero(h.betti, e.dimension());
    for (j, form) in e.basis.iter().enumerate() {
        let col = periods(c, form, h)?; // betti x 1
        for i in 0..h.betti {
            out[(i, j)] = col[(i, 0)].clone();
        }
    }
    Ok(out)
}

/// The tautological cochain valued in the dual of the form space: the
/// coordinate of `θ(σ)` against basis form `j` is the value of form `j`
/// on the cell `σ`.
pub fn tautological_theta(a: &GroupAction, e: &FormSubspace) -> Cochain {
    let n2 = a.complex.dim(2);
    let mut values = KMatrix::zero(n2, e.dimension());
    for (j, form) in e.basis.iter().enumerate() {
        for i in 0..n2 {
            values[(i, j)] = form.values()[(i, 0)].clone();
        }
    }
    Cochain::new(&a.complex, 2, values).expect("shape matches")
}

/// Discreteness certificate for the equivariant construction: the rows of
/// the tautological period matrix generate the monodromy group upstairs,
/// and surjectivity of the period pairing forces both ranks to `betti`.
pub fn equivariant_derham_certificate(
    a: &GroupAction,
    e: &FormSubspace,
    h: &HomologyResult,
) -> Result<MonodromyReport, EquivariantError> {
    if !check_assumptions(a, e, h) {
        return Err(EquivariantError::AssumptionsFailed);
    }
    let p = period_matrix(a.complex(), e, h)?;
    Ok(is_discrete(&p))
}

/// Checks invariance of a dual-valued cochain under the twisted action:
/// cells are hit by the chain map, coefficients by the inverse of the
/// induced matrix on the form basis. Equivalently, `g^T · values =
/// values · C_g` for every `g`, with `C_g` the matrix of the pullback on
/// the basis.
pub fn check_equivariance(
    a: &GroupAction,
    e: &FormSubspace,
    f: &Cochain,
) -> Result<bool, EquivariantError> {
    if f.degree() != 2 || f.ell() != e.dimension() {
        return Err(EquivariantError::ShapeMismatch(format!(
            "cochain must be degree 2 with {} coordinates",
            e.dimension()
        )));
    }
    for g in 0..a.order() {
        let c_g = coefficient_action(a, e, g)?;
        let moved = f.values().left_mul_z(&a.matrix(g, 2).transpose());
        let twisted = f.values().mul_q(&c_g);
        if moved != twisted {
            return Ok(false);
        }
    }
    Ok(true)
}

// Matrix of the pullback action of element g on the basis of e: column j
// holds the coordinates of g · φ_j.
fn coefficient_action(
    a: &GroupAction,
    e: &FormSubspace,
    g: usize,
) -> Result<QMatrix, EquivariantError> {
    let d = e.dimension();
    let mut c = QMatrix::zero(d, d);
    for (j, form) in e.basis.iter().enumerate() {
        let moved = a.pullback(g, form);
        let coords =
            coordinates_in_span(e, &moved).ok_or(EquivariantError::CoefficientActionUndefined)?;
        for i in 0..d {
            c[(i, j)] = coords[(i, 0)].clone();
        }
    }
    Ok(c)
}

/// Builds the dual-valued cochain of a linear section of the projection
/// from closed 2-cochains onto cohomology: the section matrix columns are
/// closed cochains whose periods form the identity. The cochain values
/// ARE the section matrix; validation is what this function adds.
pub fn section_to_theta(
    c: &ChainComplex,
    h: &HomologyResult,
    section: &KMatrix,
) -> Result<Cochain, EquivariantError> {
    if section.rows() != c.dim(2) || section.cols() != h.betti {
        return Err(EquivariantError::ShapeMismatch(format!(
            "section must be {}x{}",
            c.dim(2),
            h.betti
        )));
    }
    let theta = Cochain::new(c, 2, section.clone())?;
    if !is_closed(c, &theta) {
        return Err(EquivariantError::ShapeMismatch(
            "section columns must be closed".into(),
        ));
    }
    if periods(c, &theta, h)? != KMatrix::identity(h.betti) {
        return Err(EquivariantError::ShapeMismatch(
            "section does not split the period projection".into(),
        ));
    }
    Ok(theta)
}

/// Recovers the section matrix from a representative cochain, validating
/// the same identities. Inverse of [`section_to_theta`].
pub fn theta_to_section(
    c: &ChainComplex,
    h: &HomologyResult,
    theta: &Cochain,
) -> Result<KMatrix, EquivariantError> {
    if theta.degree() != 2 || theta.ell() != h.betti {
        return Err(EquivariantError::ShapeMismatch(
            "representative must be a degree-2 cochain with betti coordinates".into(),
        ));
    }
    if !is_closed(c, theta) {
        return Err(EquivariantError::ShapeMismatch(
            "representative must be closed".into(),
        ));
    }
    if periods(c, theta, h)? != KMatrix::identity(h.betti) {
        return Err(EquivariantError::ShapeMismatch(
            "representative does not realize the tautological periods".into(),
        ));
    }
    Ok(theta.values().clone())
}
