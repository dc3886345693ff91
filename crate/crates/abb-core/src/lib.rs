//! Finite geometry toolkit for the André/Bruck–Bose (ABB) representation.
//!
//! The library models a projective plane `PG(2, q^n)` inside `PG(2n, q)`:
//! affine points of the plane map to affine points of the higher-dimensional
//! space, while the line at infinity blows up into a Desarguesian spread of
//! the hyperplane at infinity.  On top of that correspondence the crate
//! provides sublines and subplanes with canonical forms, normal rational
//! curves and scrolls together with their extensions over the big field, and
//! a verification harness that exercises the structural statements relating
//! all of these objects on concrete desk-scale parameter sets.
//!
//! Module map:
//!
//! * [`gf`] — towers of finite fields `F_p ⊆ F_q ⊆ F_{q^n}` with table-driven
//!   arithmetic, Frobenius maps, relative norms and subfield enumeration.
//! * [`linalg`] — deterministic row-reduction based linear algebra over any
//!   level of the tower.
//! * [`proj`] — projective points and subspaces with canonical
//!   representatives and exhaustive point enumeration.
//! * [`spread`] — Desarguesian spreads and subspreads, reguli, and indicator
//!   sets in the big-field model.
//! * [`abb`] — the ABB point correspondence, the big-field embedding, the
//!   Frobenius collineation, and the stabiliser actions of the line at
//!   infinity on all three spaces.
//! * [`subobj`] — sublines and subplanes, their classification against the
//!   line at infinity, and reduction to canonical form.
//! * [`curves`] — normal rational curves, their big-field extensions,
//!   intersections with indicator sets, scrolls, and Veronese projections.
//! * [`verify`] — the statement checker, censuses, point-set classification
//!   and the demo grid.
//! * [`io`] — serde-friendly exchange formats for field specs, points and
//!   reports.

pub mod abb;
pub mod curves;
pub mod error;
pub mod gf;
pub mod io;
pub mod linalg;
pub mod proj;
pub mod spread;
pub mod subobj;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{Elt, FieldCtx};
