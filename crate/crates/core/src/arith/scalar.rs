use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{gcd, ArithError, ParamPoly, Rational, Symbol};

/// An element of ℚ(params): a reduced fraction of parameter polynomials.
///
/// Invariants: `den` is nonzero and monic under graded-lex order, and
/// `gcd(num, den) = 1`. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: ParamPoly,
    den: ParamPoly,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar {
            num: ParamPoly::zero(),
            den: ParamPoly::one(),
        }
    }

    pub fn one() -> Scalar {
        Scalar::from_poly(ParamPoly::one())
    }

    pub fn from_rational(r: Rational) -> Scalar {
        Scalar::from_poly(ParamPoly::constant(r))
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_rational(super::rat(n))
    }

    pub fn symbol(name: &str) -> Scalar {
        Scalar::from_poly(ParamPoly::symbol(Symbol::new(name)))
    }

    pub fn from_poly(num: ParamPoly) -> Scalar {
        Scalar {
            num,
            den: ParamPoly::one(),
        }
    }

    /// Builds `num / den` in lowest terms.
    pub fn new(num: ParamPoly, den: ParamPoly) -> Result<Scalar, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Scalar::reduce(num, den))
    }

    fn reduce(num: ParamPoly, den: ParamPoly) -> Scalar {
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = den.constant_value() {
            return Scalar {
                num: num.scale(&c.recip()),
                den: ParamPoly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coefficient().recip();
        Scalar {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    /// `num / den` for a pair already known to be coprime; only rescales
    /// the denominator to be monic.
    fn monic(num: ParamPoly, den: ParamPoly) -> Scalar {
        if let Some(c) = den.constant_value() {
            return Scalar {
                num: num.scale(&c.recip()),
                den: ParamPoly::one(),
            };
        }
        let lc = den.leading_coefficient().recip();
        Scalar {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn numer(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denom(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// True when the denominator is one.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn recip(&self) -> Result<Scalar, ArithError> {
        Scalar::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        Ok(self * &other.recip()?)
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            num: self.num.scale(r),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        Scalar {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Replaces a parameter by a rational value.
    pub fn subs(&self, sym: Symbol, value: &Rational) -> Result<Scalar, ArithError> {
        let den = self.den.subs(sym, value);
        if den.is_zero() {
            return Err(ArithError::Pole);
        }
        Ok(Scalar::reduce(self.num.subs(sym, value), den))
    }

    pub fn eval(&self, values: &BTreeMap<Symbol, Rational>) -> Result<Rational, ArithError> {
        let n = self.num.eval(values)?;
        let d = self.den.eval(values)?;
        if d.is_zero() {
            return Err(ArithError::Pole);
        }
        Ok(n / d)
    }

    pub(crate) fn leads_negative(&self) -> bool {
        self.num.leads_negative()
    }

    /// Whether the scalar can be printed as a factor without parentheses.
    pub(crate) fn is_atomic(&self) -> bool {
        self.den.is_one() && self.num.is_atomic()
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl From<ParamPoly> for Scalar {
    fn from(p: ParamPoly) -> Self {
        Scalar::from_poly(p)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() == 1 {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        if self.den.is_atomic() {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    /// `a/b + c/d` with `g = gcd(b, d)`: only `g` can share factors with the
    /// new numerator, so the final gcd runs against `g` rather than `b·d`.
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(&self.num + &rhs.num);
        }
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return Scalar::monic(num, &self.den * &rhs.den);
        }
        let b = self.den.exact_div(&g).expect("gcd divides");
        let d = rhs.den.exact_div(&g).expect("gcd divides");
        let t = &(&self.num * &d) + &(&rhs.num * &b);
        if t.is_zero() {
            return Scalar::zero();
        }
        let h = gcd(&t, &g);
        if h.is_one() {
            return Scalar::monic(t, &(&b * &d) * &g);
        }
        let num = t.exact_div(&h).expect("gcd divides");
        let den = &(&b * &d) * &g.exact_div(&h).expect("gcd divides");
        Scalar::monic(num, den)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    /// `(a/b)(c/d)`: cancelling `gcd(a, d)` and `gcd(c, b)` first leaves a
    /// product already in lowest terms.
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(&self.num * &rhs.num);
        }
        let cancel = |n: &ParamPoly, d: &ParamPoly| -> (ParamPoly, ParamPoly) {
            let g = gcd(n, d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (n.exact_div(&g).expect("gcd divides"), d.exact_div(&g).expect("gcd divides"))
            }
        };
        let (a, d) = cancel(&self.num, &rhs.den);
        let (c, b) = cancel(&rhs.num, &self.den);
        Scalar::monic(&a * &c, &b * &d)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn s(n: &str) -> ParamPoly {
        ParamPoly::symbol(Symbol::new(n))
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let a = s("a");
        let b = s("b");
        let num = &(&a + &b) * &(&a - &b);
        let den = (&a + &b).scale(&rat(2));
        let q = Scalar::new(num, den).unwrap();
        assert_eq!(q.numer(), &(&a - &b).scale(&ratio(1, 2)));
        assert_eq!(q.denom(), &ParamPoly::one());
        assert!(q.is_polynomial());
    }

    #[test]
    fn monic_denominator() {
        let b = s("b");
        let d = s("d");
        // -d^2 / b written as d^2 / (-b)
        let q = Scalar::new(&d * &d, -&b).unwrap();
        assert_eq!(q.denom(), &b);
        assert_eq!(q.numer(), &-(&d * &d));
        assert_eq!(q.to_string(), "-d^2/b");
    }

    #[test]
    fn inverse_product_is_one() {
        let c = s("c");
        let h1 = s("h1");
        let k2 = s("k2");
        let x = Scalar::new(&h1 * &(&h1 - &k2), c.clone()).unwrap();
        assert_eq!(&x * &x.recip().unwrap(), Scalar::one());
        assert!(Scalar::zero().recip().is_err());
    }

    #[test]
    fn addition_over_common_denominator() {
        let c = s("c");
        let x = Scalar::new(ParamPoly::one(), c.clone()).unwrap();
        let y = Scalar::new(-&ParamPoly::one(), c.clone()).unwrap();
        assert!((&x + &y).is_zero());
        let z = Scalar::new(c.clone(), c.clone()).unwrap();
        assert!(z.is_one());
    }

    #[test]
    fn cancelling_arithmetic_matches_plain_reduction() {
        let a = s("a");
        let b = s("b");
        let one = ParamPoly::one();
        let pieces = [
            (&a + &one, &a * &b),
            (&b - &a, (&a + &one).scale(&rat(3))),
            (&a * &a, &b - &one.scale(&rat(2))),
            ((&a * &b) + one.clone(), &a + &one),
            (b.scale(&ratio(-1, 2)), one.clone()),
            (&(&a + &b) * &(&a - &one), &(&a + &one) * &(&b + &one)),
        ];
        let xs: Vec<Scalar> = pieces.iter().map(|(n, d)| Scalar::new(n.clone(), d.clone()).unwrap()).collect();
        for x in &xs {
            for y in &xs {
                let prod = Scalar::new(&x.num * &y.num, &x.den * &y.den).unwrap();
                assert_eq!(x * y, prod, "({x}) * ({y})");
                let sum = Scalar::new(&(&x.num * &y.den) + &(&y.num * &x.den), &x.den * &y.den).unwrap();
                assert_eq!(x + y, sum, "({x}) + ({y})");
                assert!((x - x).is_zero());
            }
        }
    }

    #[test]
    fn substitution_detects_poles() {
        let b = s("b");
        let x = Scalar::new(ParamPoly::one(), b).unwrap();
        assert_eq!(x.subs(Symbol::new("b"), &rat(0)), Err(ArithError::Pole));
        assert_eq!(x.subs(Symbol::new("b"), &rat(2)).unwrap(), Scalar::from_rational(ratio(1, 2)));
    }
}
