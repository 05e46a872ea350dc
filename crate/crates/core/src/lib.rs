//! Exact computations for finite-dimensional averaging algebras: axioms and
//! derived structures, the operator and total cochain complexes, formal
//! deformations, abelian extensions, the L-infinity bracket system with its
//! Maurer–Cartan theory, and homotopy averaging algebras.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod catalog;
pub mod complexes;
pub mod deform;
pub mod extension;
pub mod graded;
pub mod homotopy;
pub mod linfty;
pub mod matrix;
pub mod random;
pub mod report;
pub mod scalar;

pub use algebra::{AvBimodule, AveragingAlgebra, Flavor};
pub use matrix::DenseMatrix;
pub use report::{Check, Counterexample, Report};
pub use scalar::{Field, Scalar};
