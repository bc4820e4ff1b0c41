//! Exact character-map calculus for principal bundles with abelian structure group.
//!
//! `fga` holds the integer and rational linear algebra, `picard` the base
//! descriptors, `bundles` the character maps and their solvers, `toric` the
//! Cox construction and `rm` the group-first construction.

pub mod bundles;
pub mod fga;
pub mod json;
pub mod picard;
pub mod rm;
pub mod toric;
