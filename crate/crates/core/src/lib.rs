//! Topological classification of one-dimensional discrete-time quantum
//! walks with discrete symmetries.
//!
//! A walk is a banded, translation-invariant unitary on `ℓ²(ℤ) ⊗ ℂᵈ`,
//! represented by its matrix Laurent polynomial `W(x)` (the hopping blocks).
//! For each of the five nontrivial symmetry types (D, AIII, BDI, CII, DIII)
//! this crate computes the complete homotopy invariant `six(W)` of gapped
//! admissible walks — winding numbers, flip signs or Pfaffian/closure data
//! depending on the type — together with independent cross-check oracles:
//! root counting for windings, Pfaffian ratios for type D, and boundary-mode
//! counting on decoupled finite rings for the bulk-boundary correspondence.
//!
//! Modules:
//! - [`walk`]: Laurent-matrix arithmetic, unitarity, regrouping.
//! - [`symmetry`]: symmetry types, (anti)unitary representations,
//!   admissibility, the finite-dimensional symmetry index.
//! - [`spectral`]: momentum-space evaluation, gap checks, band projections,
//!   flattening and chiral block extraction.
//! - [`invariants`]: the index formulas and their oracles.
//! - [`boundary`]: decay modes, decoupled finite walks, boundary modes.
//! - [`models`]: named example walks (split-step, bridges, generators).
//! - [`sample`]: seeded random admissible walks for testing.
//! - [`json`]: serialization schemas.

pub mod boundary;
pub mod error;
pub mod invariants;
pub mod json;
pub mod mat;
pub mod models;
pub mod sample;
pub mod spectral;
pub mod symmetry;
pub mod walk;

pub use error::{Error, Result};
pub use symmetry::{IndexGroup, IndexValue, SymOp, SymmetryRep, SymmetryType};
pub use walk::LaurentMatrix;
