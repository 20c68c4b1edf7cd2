//! Exact-arithmetic decision procedures for the integrability of transitive
//! abelian Lie algebroids, together with the two integrable-lift
//! constructions that remove the obstruction by adding fiber dimensions.
//!
//! A trivially abelian transitive algebroid over a base with free second
//! homology of rank `r` and isotropy fiber `R^l` is determined, for our
//! purposes, by its period matrix: the `r x l` matrix of evaluations of the
//! curvature 2-cochain on a basis of 2-cycles. The algebroid is integrable
//! exactly when the subgroup of `R^l` generated by the rows of that matrix
//! is discrete. Everything here is computed without floating point: scalars
//! live in the Q-span of declared symbols that stand for algebraically
//! independent transcendental reals.
//!
//! Module map:
//! - [`exact`]: rationals, symbolic scalars, integer/rational/symbolic
//!   matrices, Smith and Hermite normal forms, saturated kernels and
//!   unimodular basis completion.
//! - [`complex`]: finitely generated integer chain complexes, simplicial
//!   ingestion, homology with explicit cycle generators, vector-valued
//!   cochains and their period matrices.
//! - [`algebroid`]: algebroid presentations, monodromy generators, the
//!   discreteness decision and morphism checks.
//! - [`lift`]: the Almeida-Molino and de Rham integrable lifts with full
//!   extension verification.
//! - [`equivariant`]: finite deck-group actions, averaging, and the
//!   equivariant de Rham certificate.

pub mod algebroid;
pub mod complex;
pub mod equivariant;
pub mod exact;
pub mod lift;
