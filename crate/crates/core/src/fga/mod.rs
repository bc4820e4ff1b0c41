//! Finitely generated abelian groups over exact integers.

mod group;
mod hermite;
mod hom;
mod matrix;
pub mod mixed;
pub mod rational;
mod smith;
mod solve;

pub use group::{FgaElement, FgaGroup};
pub use hermite::{hermite_normal_form, lattice_basis, pivot_columns, reduce_against};
pub use hom::FgaHom;
pub use matrix::IntMatrix;
pub use mixed::{CoordKind, KernelDescription, MixedGroup, MixedHom, MixedSolution};
pub use rational::{QMatrix, Rational};
pub use smith::{smith_normal_form, SmithDecomposition};
pub use solve::{solve_integer_linear, IntegerSolution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FgaError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("not well defined: {0}")]
    NotWellDefined(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
}
