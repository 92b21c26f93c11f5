//! Exact verification kernel for Lie conformal and left-symmetric conformal
//! algebras of rank one and two.

pub mod arith;
pub mod conformal;
pub mod catalog;
pub mod coeff;
pub mod dsl;
pub mod checks;
