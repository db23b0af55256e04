//! # sddapprox
//!
//! Approximation of symmetric positive semidefinite element matrices by
//! symmetric diagonally dominant (SDD) matrices, and the instruments needed to
//! judge such approximations.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`spectra`] | Jacobi eigensolver, null spaces, `κ(A)`, `Λ(A, B)`, `κ(A, B)` |
//! | [`sddcore`] | SDD predicate, the positive-part heuristic `A₊`, `A = A₊ − A₋` |
//! | [`bounds`] | support numbers, path embeddings, SDD lower bounds, PSD certificates |
//! | [`elements`] | P1/P2 triangle stiffness and the reference matrix families |
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below name the double-precision instantiations.
//!
//! ```
//! use sddapprox::{elements, sddcore, spectra};
//!
//! let p = elements::ExampleParams::new(0.01).unwrap();
//! let (a, _, _) = elements::example1(&p).unwrap();
//! let aplus = sddcore::plus_heuristic(&a).materialize();
//! let pencil = spectra::generalized_spectrum(&a, &aplus).unwrap();
//! assert!(pencil.kappa <= 2.0 + 1e-8);
//! ```
// `!(x > y)` is used on purpose so that NaN falls into the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod elements;
pub mod error;
pub mod matrix;
pub mod scalar;
pub mod sddcore;
pub mod spectra;

pub use error::{Error, Result};
pub use matrix::{Mat, SymMatrix};
pub use scalar::Real;
pub use sddcore::{Edge, SddGraph};
pub use spectra::{PencilReport, Spectrum, ZeroTol};

/// Largest supported matrix order.
pub const MAX_ORDER: usize = 2048;

pub type SymMatrixF64 = SymMatrix<f64>;
pub type SymMatrixF32 = SymMatrix<f32>;
pub type MatF64 = Mat<f64>;
pub type SddGraphF64 = SddGraph<f64>;
pub type SpectrumF64 = Spectrum<f64>;
pub type PencilReportF64 = PencilReport<f64>;
pub type PathEmbeddingF64 = bounds::PathEmbedding<f64>;
pub type ElementGeometryF64 = elements::ElementGeometry<f64>;
pub type ExampleParamsF64 = elements::ExampleParams<f64>;
