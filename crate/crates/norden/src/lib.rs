//! Numerical differential geometry for anti-Kähler (Norden) metrics.
//!
//! A metric `g` on a 2m-dimensional manifold is *anti-Hermitian* with respect
//! to an almost complex structure `J` when `g(JX, JY) = -g(X, Y)`; it is
//! *anti-Kähler* when `J` is additionally parallel (`∇J = 0`). Such metrics
//! always have neutral signature `(m, m)`, and in adapted coordinates
//! `z^a = x^a + i y^a` they are exactly the real parts of holomorphic metric
//! tensors: `g_μν dx^μ dx^ν = 2 Re[ĝ_ab dz^a dz^b]`.
//!
//! This crate provides the numerical machinery to *verify* those structural
//! statements as residual checks on concrete metrics, and to *generate* new
//! neutral-signature Einstein metrics from real-analytic Einstein seeds by
//! iterating complexification and realification (the dimension-doubling
//! tower).
//!
//! Module map:
//!
//! * [`expr`] — expression AST, parser, formatter, and metric manifest I/O;
//! * [`jets`] — order-2 forward-mode automatic differentiation over either
//!   the real or the complex scalar field;
//! * [`geometry`] — metric evaluation, Christoffel symbols, Riemann/Ricci
//!   curvature, Einstein fits, and signature computation;
//! * [`antikahler`] — the anti-Kähler residual checks (anti-Hermiticity,
//!   holomorphy, parallel `J`, Christoffel block structure, curvature
//!   commutation identities, Ricci block correspondence, Nijenhuis tensor);
//! * [`generator`] — complexify / realify / twin / tower constructions and
//!   holomorphic frame metrics;
//! * [`catalog`] — built-in example manifests with known expected values;
//! * [`verify`] — check orchestration producing deterministic JSON reports.
//!
//! Supporting modules: [`field`] (scalar-field abstraction), [`linalg`]
//! (LU solves and symmetric eigenvalues), [`sample`] (deterministic
//! counter-based point sampling), [`error`].

pub mod antikahler;
pub mod catalog;
pub mod error;
pub mod expr;
pub mod field;
pub mod generator;
pub mod geometry;
pub mod jets;
pub mod linalg;
pub mod sample;
pub mod verify;

pub use error::Error;

/// Largest real dimension the engine accepts (tower levels stop here).
pub const MAX_REAL_DIM: usize = 16;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
