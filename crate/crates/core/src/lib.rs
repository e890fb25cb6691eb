//! Exact construction of rank-r vector bundles from codimension-two local
//! complete intersections.
//!
//! Given a subscheme `Y` cut out locally by pairs `(f_i, g_i)`, a line bundle
//! `L` and sections generating the twisted determinant of the normal bundle,
//! [`serre::build_bundle`] produces transition matrices `Z_ij` of a rank-r
//! bundle `E` with `det Z_ij = h_ij` and `r - 1` sections whose dependency
//! locus is `Y`, after killing the Čech obstruction.
//!
//! All arithmetic is exact over the rationals; nothing here uses floating
//! point.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod algebra;
pub mod cech;
pub mod cover;
pub mod error;
pub mod ideals;
pub mod serre;
pub mod verify;

pub use error::{Error, Stage, StageError};
