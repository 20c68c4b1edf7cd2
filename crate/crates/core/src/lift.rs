//! Integrable lifts: surjective algebroid morphisms from an integrable
//! total algebroid onto a given one.
//!
//! Two constructions are provided. The Almeida-Molino lift splits the
//! curvature into its `n` nonzero block components after a unimodular
//! change of the cycle basis, where `n` is the minimal number of nonzero
//! period rows achievable; the fiber map is the sum over the blocks. The
//! de Rham lift adjoins the tautological homology-valued curvature, whose
//! identity period block makes the total discrete; the fiber map is the
//! projection back onto the original fiber.
//!
//! The minimal row count `n` is computed in closed form as `r` minus the
//! rank of the saturated integer left kernel of the period matrix: zero
//! rows of `u * periods` correspond exactly to integer left-kernel
//! vectors, and saturation is what allows a kernel basis to be completed
//! to a basis of `Z^r`. The randomized search in the acceptance tests
//! confirms the minimality on small instances.
//!
//! Everything here stays at the algebroid level: the outputs are
//! certified presentations and morphisms. The integrating groupoids
//! themselves (and the equivalences between the lifts for different
//! basis choices) are not constructed.

use num_traits::One;
use thiserror::Error;

use crate::algebroid::{
    is_discrete, verify_morphism_functoriality, AlgebroidError, AlgebroidPresentation,
    MonodromyReport, Provenance,
};
use crate::complex::{periods, ChainComplex, Cochain, ComplexError, HomologyResult};
use crate::exact::{
    extend_to_unimodular, function_field_rank, saturated_left_kernel, ExactError, KMatrix, QMatrix,
    SymbolBasis, ZMatrix,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    /// The curvature class is trivial; there is nothing to lift.
    #[error("period matrix is zero (trivial class)")]
    TrivialClass,
    #[error("presentation is not asserted simply connected")]
    NotSimplyConnected,
    #[error("homology degree mismatch: expected 2, got {0}")]
    DegreeMismatch(usize),
    /// The linear system for a prescribed-period cocycle had no solution;
    /// this cannot happen for a cycle basis produced by `homology`.
    #[error("no closed cochain realizes the prescribed periods")]
    Unsolvable,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
}

/// The minimal number of nonzero period rows over all unimodular changes
/// of the cycle basis, together with a transform realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NOfBResult {
    /// Number of nonzero rows of `u * periods`.
    pub n: usize,
    /// Unimodular `r x r`; its last `r - n` rows span the saturated left
    /// kernel of the periods.
    pub u: ZMatrix,
    /// `u * periods`: exactly the first `n` rows are nonzero.
    pub transformed_periods: KMatrix,
}

/// Computes the minimal nonzero-row count: `r` minus the rank of the
/// saturated integer left kernel of the period matrix.
pub fn n_of_b(p: &AlgebroidPresentation) -> NOfBResult {
    let kernel = saturated_left_kernel(p.periods());
    let k = kernel.rows();
    let n = p.r() - k;
    let u = extend_to_unimodular(&kernel).expect("saturated kernel basis always extends");
    let transformed_periods = p.periods().left_mul_z(&u);
    debug_assert!(
        transformed_periods.row_slice(n, p.r()).is_zero(),
        "kernel rows must kill the periods"
    );
    debug_assert!(
        (0..n).all(|i| !transformed_periods.row_slice(i, i + 1).is_zero()),
        "completion rows must have nonzero periods"
    );
    NOfBResult {
        n,
        u,
        transformed_periods,
    }
}

/// An integrable lift: the base presentation (possibly re-expressed in a
/// transformed cycle basis), the integrable total, the surjective fiber
/// map, a basis of its kernel, and the discreteness certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftResult {
    pub base: AlgebroidPresentation,
    pub total: AlgebroidPresentation,
    /// `ell x ell_total` fiber component of the morphism `total -> base`.
    pub fiber_map: KMatrix,
    /// `(ell_total - ell) x ell_total`, spans `ker(fiber_map)`.
    pub kernel_basis: KMatrix,
    pub certificate: MonodromyReport,
    /// Construction parameter: the nonzero block count for the
    /// Almeida-Molino lift, the homology rank for the de Rham lift.
    pub n: usize,
    /// Cycle-basis transform applied to both presentations (identity for
    /// the de Rham lift); callers can map periods back through it.
    pub basis_change: ZMatrix,
    /// True when the construction collapses to the base itself (`n = 1`
    /// Almeida-Molino case).
    pub degenerate: bool,
}

/// The Almeida-Molino lift. With `n` the minimal nonzero-row count and
/// `a = u * periods`, the total has fiber dimension `n * ell` and block
/// periods placing row `i` of `a` in block `i`; the fiber map sums the
/// blocks. The total is always discrete because the nonzero block rows
/// occupy disjoint blocks.
pub fn almeida_molino_lift(p: &AlgebroidPresentation) -> Result<LiftResult, LiftError> {
    if !p.simply_connected() {
        return Err(LiftError::NotSimplyConnected);
    }
    if p.periods().is_zero() {
        return Err(LiftError::TrivialClass);
    }
    let NOfBResult {
        n,
        u,
        transformed_periods,
    } = n_of_b(p);
    let (r, ell) = (p.r(), p.ell());
    let ell_total = n * ell;

    let mut total_periods = KMatrix::zero(r, ell_total);
    for i in 0..n {
        for j in 0..ell {
            total_periods[(i, i * ell + j)] = transformed_periods[(i, j)].clone();
        }
    }
    // sum map: n horizontal identity blocks
    let mut fiber_map = KMatrix::zero(ell, ell_total);
    for b in 0..n {
        for j in 0..ell {
            fiber_map[(j, b * ell + j)] = crate::exact::KNumber::from_integer(1);
        }
    }
    // kernel of the sum map: differences of consecutive blocks
    let mut kernel_basis = KMatrix::zero(ell_total - ell, ell_total);
    for b in 0..n.saturating_sub(1) {
        for j in 0..ell {
            kernel_basis[(b * ell + j, b * ell + j)] = crate::exact::KNumber::from_integer(1);
            kernel_basis[(b * ell + j, (b + 1) * ell + j)] =
                crate::exact::KNumber::from_integer(-1);
        }
    }

    let (base, total) = match p.source() {
        None => {
            let base =
                AlgebroidPresentation::new(p.symbols().clone(), transformed_periods.clone(), true)?;
            let total =
                AlgebroidPresentation::new(p.symbols().clone(), total_periods.clone(), true)?;
            (base, total)
        }
        Some(src) => {
            // transformed cycle basis: same complex, cycles u * Z
            let transformed_h = HomologyResult {
                degree: src.homology.degree,
                betti: src.homology.betti,
                torsion: src.homology.torsion.clone(),
                cycle_basis: u.mul(&src.homology.cycle_basis),
            };
            let base = AlgebroidPresentation::with_source(
                p.symbols().clone(),
                transformed_periods.clone(),
                Provenance {
                    complex: src.complex.clone(),
                    curvature: src.curvature.clone(),
                    homology: transformed_h.clone(),
                },
                true,
            )?;
            // block curvature from normalized scalar cocycles
            let curvature =
                block_curvature(&src.complex, &transformed_h, &transformed_periods, n, ell)?;
            let total = AlgebroidPresentation::with_source(
                p.symbols().clone(),
                total_periods.clone(),
                Provenance {
                    complex: src.complex.clone(),
                    curvature,
                    homology: transformed_h,
                },
                true,
            )?;
            (base, total)
        }
    };

    let certificate = is_discrete(&total_periods);
    debug_assert!(certificate.discrete, "block periods are always discrete");
    Ok(LiftResult {
        base,
        total,
        fiber_map,
        kernel_basis,
        certificate,
        n,
        basis_change: u,
        degenerate: n <= 1,
    })
}

// Builds the 2-cochain whose block j equals (normalized cocycle phi_j)
// tensor (row j of the transformed periods), so its period matrix is the
// block matrix of the lift and the block sum pushes forward to a
// representative of the base curvature class.
fn block_curvature(
    complex: &ChainComplex,
    h: &HomologyResult,
    transformed_periods: &KMatrix,
    n: usize,
    ell: usize,
) -> Result<Cochain, LiftError> {
    // phi_j, j < n: closed scalar cochains with period delta_ij on cycle i
    let mut target = QMatrix::zero(h.betti, n);
    for j in 0..n {
        target[(j, j)] = crate::exact::Rational::one();
    }
    let phi = closed_cochain_with_periods(complex, &h.cycle_basis, &target)?;
    let n2 = complex.dim(2);
    let mut values = KMatrix::zero(n2, n * ell);
    for cell in 0..n2 {
        for b in 0..n {
            for j in 0..ell {
                values[(cell, b * ell + j)] = transformed_periods[(b, j)].scale(&phi[(cell, b)]);
            }
        }
    }
    Ok(Cochain::new(complex, 2, values)?)
}

// Solves for rational closed 2-cochain columns with prescribed periods:
// cycles * v = target and d3^T * v = 0. Solvable whenever the cycle rows
// are independent over Q, which `homology` guarantees.
fn closed_cochain_with_periods(
    complex: &ChainComplex,
    cycles: &ZMatrix,
    target: &QMatrix,
) -> Result<QMatrix, LiftError> {
    if complex.top() < 2 {
        return Err(LiftError::DegreeMismatch(complex.top()));
    }
    let closedness = complex.boundary_out(2).transpose().to_q();
    let system = cycles.to_q().vstack(&closedness);
    let rhs = target.vstack(&QMatrix::zero(closedness.rows(), target.cols()));
    system.solve(&rhs).ok_or(LiftError::Unsolvable)
}

/// The de Rham presentation of a complex: fiber dimension equal to the
/// degree-2 Betti number, identity period matrix, realized by an explicit
/// closed 2-cochain with values in the homology coordinates. The
/// simply-connected assertion is supplied by the caller.
pub fn derham_presentation(
    complex: &ChainComplex,
    h: &HomologyResult,
    simply_connected: bool,
) -> Result<(AlgebroidPresentation, Cochain), LiftError> {
    if h.degree != 2 {
        return Err(LiftError::DegreeMismatch(h.degree));
    }
    let r = h.betti;
    let theta_values = closed_cochain_with_periods(complex, &h.cycle_basis, &QMatrix::identity(r))?;
    let theta = Cochain::new(complex, 2, theta_values.to_k())?;
    let presentation = AlgebroidPresentation::with_source(
        SymbolBasis::rational_only(),
        KMatrix::identity(r),
        Provenance {
            complex: complex.clone(),
            curvature: theta.clone(),
            homology: h.clone(),
        },
        simply_connected,
    )?;
    Ok((presentation, theta))
}

/// The de Rham lift: total periods `[I_r | A]`, fiber map the projection
/// onto the last `ell` coordinates, kernel the homology-valued block. The
/// identity block forces both ranks to `r`, so the certificate is always
/// discrete.
pub fn derham_lift(p: &AlgebroidPresentation) -> Result<LiftResult, LiftError> {
    if !p.simply_connected() {
        return Err(LiftError::NotSimplyConnected);
    }
    let (r, ell) = (p.r(), p.ell());
    let total_periods = KMatrix::identity(r).hstack(p.periods());
    // p_V: drop the first r coordinates
    let fiber_map = KMatrix::zero(ell, r).hstack(&KMatrix::identity(ell));
    let kernel_basis = KMatrix::identity(r).hstack(&KMatrix::zero(r, ell));
    let total = match p.source() {
        None => AlgebroidPresentation::new(p.symbols().clone(), total_periods.clone(), true)?,
        Some(src) => {
            let theta_values = closed_cochain_with_periods(
                &src.complex,
                &src.homology.cycle_basis,
                &QMatrix::identity(r),
            )?;
            let values = theta_values.to_k().hstack(src.curvature.values());
            let curvature = Cochain::new(&src.complex, 2, values)?;
            AlgebroidPresentation::with_source(
                p.symbols().clone(),
                total_periods.clone(),
                Provenance {
                    complex: src.complex.clone(),
                    curvature,
                    homology: src.homology.clone(),
                },
                true,
            )?
        }
    };
    let certificate = is_discrete(&total_periods);
    debug_assert!(certificate.discrete, "identity block forces discreteness");
    Ok(LiftResult {
        base: p.clone(),
        total,
        fiber_map,
        kernel_basis,
        certificate,
        n: r,
        basis_change: ZMatrix::identity(r),
        degenerate: false,
    })
}

/// Full verification of a lift: the certificate is discrete, the fiber
/// map is surjective, it carries total generators onto base generators,
/// and the recorded kernel basis spans its kernel. With chain-level
/// provenance on the total, additionally checks that the pushed-forward
/// curvature has exactly the base periods (classes of closed cochains are
/// determined by their periods over the chosen basis). Total; any shape
/// or scalar failure counts as "not verified".
pub fn verify_lift(lr: &LiftResult) -> bool {
    let ell = lr.base.ell();
    let ell_total = lr.total.ell();
    if lr.fiber_map.rows() != ell || lr.fiber_map.cols() != ell_total {
        return false;
    }
    if !lr.certificate.discrete {
        return false;
    }
    if function_field_rank(&lr.fiber_map) != ell {
        return false;
    }
    match verify_morphism_functoriality(&lr.total, &lr.base, &lr.fiber_map) {
        Ok(true) => {}
        _ => return false,
    }
    // kernel: right shape, annihilated, and spanning
    if lr.kernel_basis.rows() != ell_total - ell || lr.kernel_basis.cols() != ell_total {
        return false;
    }
    match lr.fiber_map.try_mul(&lr.kernel_basis.transpose()) {
        Ok(prod) if prod.is_zero() => {}
        _ => return false,
    }
    if function_field_rank(&lr.kernel_basis) != ell_total - ell {
        return false;
    }
    // chain-level check when provenance is available
    if let (Some(total_src), Some(base_src)) = (lr.total.source(), lr.base.source()) {
        let Ok(pushed) = total_src
            .curvature
            .values()
            .try_mul(&lr.fiber_map.transpose())
        else {
            return false;
        };
        let Ok(pushed_cochain) = Cochain::new(&total_src.complex, 2, pushed) else {
            return false;
        };
        let Ok(pushed_periods) = periods(&total_src.complex, &pushed_cochain, &base_src.homology)
        else {
            return false;
        };
        if pushed_periods != *lr.base.periods() {
            return false;
        }
    }
    true
}
