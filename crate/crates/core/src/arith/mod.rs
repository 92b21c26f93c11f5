//! Exact arithmetic kernel.
//!
//! Three layers, each in normal form at all times:
//!
//! * [`ParamPoly`]: sparse multivariate polynomials over ℚ in named
//!   parameters (`a`, `b`, `c`, ...).
//! * [`Scalar`]: reduced fractions of parameter polynomials. The denominator
//!   is monic under graded-lex order and coprime to the numerator.
//! * [`FormalPoly`]: sparse polynomials in the formal variables ∂, λ, μ, ν
//!   with [`Scalar`] coefficients, tagged with the parameter [`Universe`]
//!   they were built over.
//!
//! Equality at every layer is structural equality of normal forms, so
//! `p == q` is an exact identity test.

mod formal;
mod gcd;
mod param;
mod scalar;
mod symbol;

pub use formal::{Assignment, FormalPoly, Universe, Var, VarExp};
pub use gcd::{content_in, gcd, primitive_part_in};
pub use param::{Monomial, ParamPoly};
pub use scalar::Scalar;
pub use symbol::Symbol;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("symbol universes differ: {{{left}}} vs {{{right}}}")]
    UniverseMismatch { left: String, right: String },
    #[error("symbol `{0}` is not declared in the parameter universe")]
    UnknownSymbol(String),
    #[error("assignment does not cover `{0}`")]
    IncompleteAssignment(String),
    #[error("denominator vanishes under the assignment")]
    Pole,
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor involves a formal variable")]
    NonConstantDivisor,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Writes a rational as `p` or `p/q` (the DSL literal form), sign included.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `x (x-1) ... (x-k+1)` with the empty product equal to one.
pub fn falling_factorial(x: &BigInt, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    let mut term = x.clone();
    for _ in 0..k {
        acc *= &term;
        term -= 1;
    }
    acc
}

/// Generalised binomial coefficient `C(m, r)`, defined for every integer `m`.
pub fn binomial(m: &BigInt, r: u32) -> BigInt {
    let num = falling_factorial(m, r);
    let mut den = BigInt::one();
    for i in 2..=r {
        den *= i;
    }
    num / den
}

pub(crate) fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generalised_binomial() {
        let m = BigInt::from(-3);
        assert_eq!(binomial(&m, 0), BigInt::from(1));
        assert_eq!(binomial(&m, 1), BigInt::from(-3));
        // (-3)(-4)/2 = 6
        assert_eq!(binomial(&m, 2), BigInt::from(6));
        assert_eq!(binomial(&BigInt::from(2), 3), BigInt::from(0));
        assert_eq!(binomial(&BigInt::from(5), 2), BigInt::from(10));
    }

    #[test]
    fn falling_factorial_empty_product() {
        assert_eq!(falling_factorial(&BigInt::from(-7), 0), BigInt::from(1));
        assert_eq!(falling_factorial(&BigInt::from(4), 2), BigInt::from(12));
    }

    #[test]
    fn rational_literals() {
        assert_eq!(fmt_rational(&ratio(-2, 4)), "-1/2");
        assert_eq!(fmt_rational(&rat(3)), "3");
    }
}
