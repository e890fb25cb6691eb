//! Exact arithmetic: polynomials over the rationals, localized elements and
//! matrices over them.

mod loc;
mod matrix;
mod parse;
mod poly;

pub use loc::LocElem;
pub use matrix::MatrixL;
pub use parse::{parse_loc, parse_poly};
pub use poly::{rat, rat_frac, Monomial, Poly, Rational};
