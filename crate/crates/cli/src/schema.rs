//! JSON schemas for every command input and report payload.
//!
//! Scalars serialize as text (`"p/q"`, `"λ"`, `"1/2 - 3/2*λ"`) so nothing
//! is ever rounded; integer matrices serialize as plain JSON numbers.
//! Matrix shapes that JSON cannot carry on its own (zero-row boundary
//! maps) are recovered from the declared cell counts.

use algd::algebroid::{AlgebroidPresentation, MonodromyReport};
use algd::complex::{ChainComplex, Cochain, HomologyResult, SimplicialInput};
use algd::equivariant::{FormSubspace, GroupAction};
use algd::exact::{KMatrix, KNumber, SymbolBasis, ZMatrix};
use algd::lift::LiftResult;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::job::CliError;

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexInput {
    pub dims: Vec<usize>,
    pub boundaries: Vec<Vec<Vec<i64>>>,
}

impl ComplexInput {
    pub fn build(&self) -> Result<ChainComplex, CliError> {
        if self.boundaries.len() + 1 != self.dims.len() {
            return Err(CliError::Schema(format!(
                "{} dims require {} boundary maps, got {}",
                self.dims.len(),
                self.dims.len().saturating_sub(1),
                self.boundaries.len()
            )));
        }
        let mut boundaries = Vec::with_capacity(self.boundaries.len());
        for (k, rows) in self.boundaries.iter().enumerate() {
            let (r, c) = (self.dims[k], self.dims[k + 1]);
            boundaries.push(parse_zmatrix(rows, r, c)?);
        }
        Ok(ChainComplex::new(self.dims.clone(), boundaries)?)
    }
}

pub fn parse_zmatrix(rows: &[Vec<i64>], r: usize, c: usize) -> Result<ZMatrix, CliError> {
    if rows.len() != r {
        return Err(CliError::Schema(format!(
            "expected {r} rows, got {}",
            rows.len()
        )));
    }
    let mut m = ZMatrix::zero(r, c);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(CliError::Schema(format!(
                "row {i} has {} entries, expected {c}",
                row.len()
            )));
        }
        for (j, &x) in row.iter().enumerate() {
            m[(i, j)] = BigInt::from(x);
        }
    }
    Ok(m)
}

pub fn parse_kmatrix(
    rows: &[Vec<String>],
    basis: &SymbolBasis,
    cols: Option<usize>,
) -> Result<KMatrix, CliError> {
    let c = match cols {
        Some(c) => c,
        None => rows.first().map(|r| r.len()).unwrap_or(0),
    };
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(CliError::Schema(format!(
                "row {i} has {} entries, expected {c}",
                row.len()
            )));
        }
        let mut out = Vec::with_capacity(c);
        for text in row {
            out.push(KNumber::parse(text, basis)?);
        }
        parsed.push(out);
    }
    Ok(KMatrix::from_rows(c, parsed))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainInput {
    pub degree: usize,
    pub values: Vec<Vec<String>>,
}

/// Input for the algebroid commands: either an explicit period matrix or
/// a complex together with a closed curvature cochain.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationInput {
    #[serde(default)]
    pub symbols: Vec<String>,
    pub simply_connected: bool,
    #[serde(default)]
    pub periods: Option<Vec<Vec<String>>>,
    /// Optional shape declarations; validated against the data when given.
    #[serde(default)]
    pub r: Option<usize>,
    #[serde(default)]
    pub ell: Option<usize>,
    #[serde(default)]
    pub complex: Option<ComplexInput>,
    #[serde(default)]
    pub cochain: Option<CochainInput>,
}

impl PresentationInput {
    pub fn build(&self) -> Result<AlgebroidPresentation, CliError> {
        let basis = SymbolBasis::new(self.symbols.iter().cloned())?;
        let built = match (&self.periods, &self.complex, &self.cochain) {
            (Some(periods), None, None) => {
                let cols = self.ell.or_else(|| periods.first().map(|r| r.len()));
                let m = parse_kmatrix(periods, &basis, cols)?;
                Ok(AlgebroidPresentation::new(basis, m, self.simply_connected)?)
            }
            (None, Some(complex), Some(cochain)) => {
                let c = complex.build()?;
                let ell = self
                    .ell
                    .or_else(|| cochain.values.first().map(|r| r.len()))
                    .ok_or_else(|| CliError::Schema("cannot infer the fiber dimension".into()))?;
                let values = parse_kmatrix(&cochain.values, &basis, Some(ell))?;
                let f = Cochain::new(&c, cochain.degree, values)?;
                Ok(AlgebroidPresentation::from_curvature(
                    basis,
                    c,
                    f,
                    self.simply_connected,
                )?)
            }
            _ => Err(CliError::Schema(
                "provide either `periods` or both `complex` and `cochain`".into(),
            )),
        }?;
        if let Some(r) = self.r {
            if r != built.r() {
                return Err(CliError::Schema(format!(
                    "declared r = {r}, but the data has {} period rows",
                    built.r()
                )));
            }
        }
        if let Some(ell) = self.ell {
            if ell != built.ell() {
                return Err(CliError::Schema(format!(
                    "declared ell = {ell}, but the data has fiber dimension {}",
                    built.ell()
                )));
            }
        }
        Ok(built)
    }
}

/// Input for the homology command: a chain complex or a simplicial facet
/// list.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyInput {
    #[serde(default)]
    pub complex: Option<ComplexInput>,
    #[serde(default)]
    pub vertices: Option<usize>,
    #[serde(default)]
    pub facets: Option<Vec<Vec<usize>>>,
}

impl HomologyInput {
    pub fn build(&self) -> Result<ChainComplex, CliError> {
        match (&self.complex, &self.facets) {
            (Some(complex), None) => complex.build(),
            (None, Some(facets)) => {
                let vertices = self
                    .vertices
                    .unwrap_or_else(|| facets.iter().flatten().max().map_or(0, |&m| m + 1));
                let input = SimplicialInput {
                    vertices,
                    facets: facets.clone(),
                };
                Ok(algd::complex::from_simplicial(&input)?)
            }
            _ => Err(CliError::Schema(
                "provide either `complex` or `facets`".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionElementInput {
    pub matrices: Vec<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionInput {
    pub complex: ComplexInput,
    pub elements: Vec<ActionElementInput>,
    pub table: Vec<Vec<usize>>,
}

impl ActionInput {
    pub fn build(&self) -> Result<GroupAction, CliError> {
        let c = self.complex.build()?;
        let mut elements = Vec::with_capacity(self.elements.len());
        for (g, e) in self.elements.iter().enumerate() {
            if e.matrices.len() != c.top() + 1 {
                return Err(CliError::Schema(format!(
                    "element {g} needs {} matrices, got {}",
                    c.top() + 1,
                    e.matrices.len()
                )));
            }
            let mut mats = Vec::with_capacity(e.matrices.len());
            for (k, rows) in e.matrices.iter().enumerate() {
                let n = c.dim(k);
                mats.push(parse_zmatrix(rows, n, n)?);
            }
            elements.push(mats);
        }
        Ok(GroupAction::new(c, elements, self.table.clone())?)
    }
}

/// Input for the equivariant command: a finite action plus a basis of
/// closed scalar 2-cochains on the same complex.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivariantInput {
    #[serde(default)]
    pub symbols: Vec<String>,
    pub action: ActionInput,
    pub forms: Vec<Vec<Vec<String>>>,
}

impl EquivariantInput {
    pub fn build(&self) -> Result<(GroupAction, FormSubspace), CliError> {
        let basis = SymbolBasis::new(self.symbols.iter().cloned())?;
        let action = self.action.build()?;
        let mut forms = Vec::with_capacity(self.forms.len());
        for rows in &self.forms {
            let values = parse_kmatrix(rows, &basis, Some(1))?;
            forms.push(Cochain::new(action.complex(), 2, values)?);
        }
        let subspace = FormSubspace::new(action.complex(), forms)?;
        Ok((action, subspace))
    }
}

// ---------------------------------------------------------------------------
// Outputs
// ---------------------------------------------------------------------------

pub fn kmatrix_text(m: &KMatrix, basis: &SymbolBasis) -> Vec<Vec<String>> {
    m.iter_rows()
        .map(|row| row.iter().map(|k| k.to_text(basis)).collect())
        .collect()
}

pub fn zmatrix_numbers(m: &ZMatrix) -> Result<Vec<Vec<i64>>, CliError> {
    m.iter_rows()
        .map(|row| {
            row.iter()
                .map(|x| {
                    i64::try_from(x).map_err(|_| {
                        CliError::Schema("integer too large for the report format".into())
                    })
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: usize,
    pub betti: usize,
    pub torsion: Vec<String>,
    pub cycle_basis: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HomologyReport {
    pub dims: Vec<usize>,
    pub betti: Vec<usize>,
    pub euler_characteristic: i64,
    pub degrees: Vec<DegreeReport>,
}

pub fn homology_report(
    c: &ChainComplex,
    results: &[HomologyResult],
) -> Result<HomologyReport, CliError> {
    let degrees = results
        .iter()
        .map(|h| {
            Ok(DegreeReport {
                degree: h.degree,
                betti: h.betti,
                torsion: h.torsion.iter().map(|t| t.to_string()).collect(),
                cycle_basis: zmatrix_numbers(&h.cycle_basis)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(HomologyReport {
        dims: c.dims().to_vec(),
        betti: results.iter().map(|h| h.betti).collect(),
        euler_characteristic: c.euler_characteristic(),
        degrees,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MonodromyPayload {
    pub generators: Vec<Vec<String>>,
    pub free_rank: usize,
    pub real_span_dim: usize,
    pub discrete: bool,
}

pub fn monodromy_payload(report: &MonodromyReport, basis: &SymbolBasis) -> MonodromyPayload {
    MonodromyPayload {
        generators: kmatrix_text(&report.generators, basis),
        free_rank: report.free_rank,
        real_span_dim: report.real_span_dim,
        discrete: report.discrete,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LiftPayload {
    pub n: usize,
    pub u: Vec<Vec<i64>>,
    pub total_periods: Vec<Vec<String>>,
    pub fiber_map: Vec<Vec<String>>,
    pub kernel: Vec<Vec<String>>,
    pub discrete: bool,
    pub degenerate: bool,
}

pub fn lift_payload(lr: &LiftResult) -> Result<LiftPayload, CliError> {
    let basis = lr.base.symbols();
    Ok(LiftPayload {
        n: lr.n,
        u: zmatrix_numbers(&lr.basis_change)?,
        total_periods: kmatrix_text(lr.total.periods(), basis),
        fiber_map: kmatrix_text(&lr.fiber_map, basis),
        kernel: kmatrix_text(&lr.kernel_basis, basis),
        discrete: lr.certificate.discrete,
        degenerate: lr.degenerate,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LiftCheck {
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrete: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerifyPayload {
    pub integrable: bool,
    pub almeida_molino: LiftCheck,
    pub derham: LiftCheck,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EquivariantPayload {
    pub assumptions: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_equivariant: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period_matrix: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub real_span_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrete: Option<bool>,
}
