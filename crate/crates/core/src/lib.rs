//! Exact homotopy-cardinality linear algebra over finite groupoids, and the
//! Dijkgraaf-Witten partition functions built on top of it.
//!
//! The crate is organized around a tower of modules:
//!
//! - [`scalar`]: the coefficient field — exact cyclotomic numbers and dense
//!   exact linear algebra.
//! - [`fingroup`]: finite groups, finitely generated abelian groups with
//!   characters, Smith normal form, and 2-cocycles valued in roots of unity.
//! - [`groupoid`]: finite groupoids as 1-type models of pi-finite spaces:
//!   components, homotopy cardinality, finite path integrals, homotopy fibers
//!   and pullbacks.
//! - [`span`]: local systems, (co)limits, norm maps, decorated spans and
//!   their linearization.
//! - [`fincat`]: finite 1-categories, chain-sum Moebius inversion, orthogonal
//!   and nested factorization systems.
//! - [`pairing`]: hom-counting linear pairings and Pontryagin pairings on
//!   weighted categories, with Gram-matrix non-degeneracy certification.
//! - [`frobenius`]: finite-dimensional (super)algebras, semisimplicity,
//!   Frobenius forms, handle and window elements, twisted group algebras.
//! - [`dw`]: mapping groupoids into `BG`, closed-surface and
//!   presented-manifold partition functions, the circle algebra of a 2d
//!   theory, and invariant-vector separation of manifolds.
//! - [`selftest`]: the embedded verification corpus; every check is exact.
//!
//! All values are immutable after construction and safe to share across
//! threads; nothing in the computational path touches floating point.

// Index-style loops mirror the table and matrix index algebra throughout.
#![allow(clippy::needless_range_loop)]

pub mod scalar;
pub mod fingroup;
pub mod groupoid;
pub mod span;
pub mod fincat;
pub mod pairing;
pub mod frobenius;
pub mod dw;
pub mod selftest;

pub use scalar::{Cyclotomic, ExactMatrix};
