//! Presentations of trivially abelian transitive Lie algebroids and the
//! integrability decision.
//!
//! A presentation reduces the algebroid to its monodromy data: the rank
//! `r` of the free part of the second homology of the base (the base is
//! asserted simply connected, so this is also the rank of the second
//! homotopy group), the isotropy fiber dimension `ell`, and the `r x ell`
//! period matrix of the curvature. The algebroid is integrable exactly
//! when the subgroup of `R^ell` generated by the period rows is discrete,
//! and a finitely generated subgroup of a real vector space is discrete
//! exactly when its free rank equals the dimension of its real span.

use thiserror::Error;

use crate::complex::{periods, ChainComplex, Cochain, ComplexError, HomologyResult};
use crate::exact::{flatten_rank_q, function_field_rank, ExactError, KMatrix, SymbolBasis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebroidError {
    /// Monodromy data is only meaningful with the simply-connected
    /// assertion; without it the obstruction lives on the universal cover.
    #[error("presentation is not asserted simply connected")]
    NotSimplyConnected,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("symbol index {0} out of range for the declared basis")]
    SymbolOutOfRange(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Chain-level provenance of a presentation: the curvature cochain on a
/// concrete complex, plus the homology basis its periods were taken in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub complex: ChainComplex,
    pub curvature: Cochain,
    pub homology: HomologyResult,
}

/// A trivially abelian transitive algebroid reduced to its monodromy data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebroidPresentation {
    symbols: SymbolBasis,
    r: usize,
    ell: usize,
    periods: KMatrix,
    source: Option<Box<Provenance>>,
    simply_connected: bool,
}

impl AlgebroidPresentation {
    /// Presentation from an explicit period matrix (`r x ell`).
    pub fn new(
        symbols: SymbolBasis,
        periods: KMatrix,
        simply_connected: bool,
    ) -> Result<Self, AlgebroidError> {
        if let Some(max) = periods.max_symbol_index() {
            if max >= symbols.len() {
                return Err(AlgebroidError::SymbolOutOfRange(max));
            }
        }
        Ok(AlgebroidPresentation {
            symbols,
            r: periods.rows(),
            ell: periods.cols(),
            periods,
            source: None,
            simply_connected,
        })
    }

    /// Presentation computed from a closed curvature 2-cochain on a
    /// complex; homology and the period matrix are derived, and the
    /// provenance is retained.
    pub fn from_curvature(
        symbols: SymbolBasis,
        complex: ChainComplex,
        curvature: Cochain,
        simply_connected: bool,
    ) -> Result<Self, AlgebroidError> {
        if curvature.degree() != 2 {
            return Err(AlgebroidError::ShapeMismatch(format!(
                "curvature must be a 2-cochain, got degree {}",
                curvature.degree()
            )));
        }
        let homology = crate::complex::homology(&complex, 2)?;
        let period_matrix = periods(&complex, &curvature, &homology)?;
        let mut p = Self::new(symbols, period_matrix, simply_connected)?;
        p.source = Some(Box::new(Provenance {
            complex,
            curvature,
            homology,
        }));
        Ok(p)
    }

    /// Presentation with explicit provenance; validates that the stored
    /// period matrix matches the recomputed one.
    pub fn with_source(
        symbols: SymbolBasis,
        periods_matrix: KMatrix,
        provenance: Provenance,
        simply_connected: bool,
    ) -> Result<Self, AlgebroidError> {
        let recomputed = periods(
            &provenance.complex,
            &provenance.curvature,
            &provenance.homology,
        )?;
        if recomputed != periods_matrix {
            return Err(AlgebroidError::ShapeMismatch(
                "stored periods disagree with the provenance".into(),
            ));
        }
        let mut p = Self::new(symbols, periods_matrix, simply_connected)?;
        p.source = Some(Box::new(provenance));
        Ok(p)
    }

    pub fn symbols(&self) -> &SymbolBasis {
        &self.symbols
    }

    /// Rank of the free part of degree-2 homology.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Isotropy fiber dimension.
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn periods(&self) -> &KMatrix {
        &self.periods
    }

    pub fn source(&self) -> Option<&Provenance> {
        self.source.as_deref()
    }

    pub fn simply_connected(&self) -> bool {
        self.simply_connected
    }
}

/// Discreteness report for a finitely generated subgroup of `R^ell`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyReport {
    /// Rows generate the group.
    pub generators: KMatrix,
    /// Free rank of the generated group (rank over Q of the flattened rows).
    pub free_rank: usize,
    /// Dimension of the real span of the rows.
    pub real_span_dim: usize,
    /// `free_rank == real_span_dim`.
    pub discrete: bool,
}

/// Generators of the monodromy group: the period matrix rows, read in
/// `R^ell` through the exponential identification.
pub fn monodromy_generators(p: &AlgebroidPresentation) -> Result<KMatrix, AlgebroidError> {
    if !p.simply_connected {
        return Err(AlgebroidError::NotSimplyConnected);
    }
    Ok(p.periods.clone())
}

/// Decides discreteness of the group generated by the rows.
pub fn is_discrete(generators: &KMatrix) -> MonodromyReport {
    let free_rank = flatten_rank_q(generators);
    let real_span_dim = function_field_rank(generators);
    MonodromyReport {
        generators: generators.clone(),
        free_rank,
        real_span_dim,
        discrete: free_rank == real_span_dim,
    }
}

/// Full integrability decision: the algebroid is integrable exactly when
/// the report says discrete.
pub fn is_integrable(p: &AlgebroidPresentation) -> Result<MonodromyReport, AlgebroidError> {
    Ok(is_discrete(&monodromy_generators(p)?))
}

/// Checks that the fiber map `f` (`ell_q x ell_p`) carries the monodromy
/// generators of `p` exactly onto those of `q`, i.e. `periods(p) * f^T =
/// periods(q)` row by row.
pub fn verify_morphism_functoriality(
    p: &AlgebroidPresentation,
    q: &AlgebroidPresentation,
    f: &KMatrix,
) -> Result<bool, AlgebroidError> {
    if p.r != q.r {
        return Err(AlgebroidError::ShapeMismatch(format!(
            "presentations have different ranks: {} vs {}",
            p.r, q.r
        )));
    }
    if p.symbols != q.symbols {
        return Err(AlgebroidError::ShapeMismatch(
            "presentations use different symbol bases".into(),
        ));
    }
    if f.rows() != q.ell || f.cols() != p.ell {
        return Err(AlgebroidError::ShapeMismatch(format!(
            "fiber map must be {}x{}, got {}x{}",
            q.ell,
            p.ell,
            f.rows(),
            f.cols()
        )));
    }
    let image = p.periods.try_mul(&f.transpose())?;
    Ok(image == q.periods)
}
