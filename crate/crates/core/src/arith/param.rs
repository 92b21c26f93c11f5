use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::{fmt_rational, is_negative, ArithError, Rational, Symbol};

/// A power product of parameters, stored sparsely and sorted by symbol.
///
/// Ordered graded-lexicographically with alphabetically earlier symbols
/// more significant, so the last key of a `BTreeMap<Monomial, _>` is the
/// leading term.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Symbol, u32); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(sym: Symbol, exp: u32) -> Monomial {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(smallvec::smallvec![(sym, exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_of(&self, sym: Symbol) -> u32 {
        self.0
            .iter()
            .find(|(s, _)| *s == sym)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Symbol, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (s, e) = self.0[i];
            let (t, f) = other.0[j];
            match s.cmp(&t) {
                Ordering::Less => {
                    out.push((s, e));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((t, f));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((s, e + f));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        for &(s, e) in &self.0 {
            let f = if j < other.0.len() && other.0[j].0 == s {
                j += 1;
                other.0[j - 1].1
            } else if j < other.0.len() && other.0[j].0 < s {
                return None;
            } else {
                0
            };
            match e.cmp(&f) {
                Ordering::Less => return None,
                Ordering::Equal => {}
                Ordering::Greater => out.push((s, e - f)),
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Removes `sym` from the monomial, returning its exponent.
    pub fn split_off(&self, sym: Symbol) -> (u32, Monomial) {
        let mut rest = self.0.clone();
        let mut exp = 0;
        rest.retain(|(s, e)| {
            if *s == sym {
                exp = *e;
                false
            } else {
                true
            }
        });
        (exp, Monomial(rest))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(s, e)), Some(&(t, f))) => match s.cmp(&t) {
                    // `s` is missing from `other`, so `self` has the larger exponent there.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(s, e) in &self.0 {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            f.write_str("1")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

/// Polynomial over ℚ in named parameters. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl ParamPoly {
    pub fn zero() -> ParamPoly {
        ParamPoly::default()
    }

    pub fn one() -> ParamPoly {
        ParamPoly::constant(Rational::one())
    }

    pub fn constant(r: Rational) -> ParamPoly {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Monomial::one(), r);
        }
        ParamPoly { terms }
    }

    pub fn symbol(sym: Symbol) -> ParamPoly {
        ParamPoly::monomial(Monomial::var(sym, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> ParamPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamPoly { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> ParamPoly {
        let mut p = ParamPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term under graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, r: &Rational) -> ParamPoly {
        if r.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * r))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, r: &Rational) -> ParamPoly {
        if r.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c * r))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.total_degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Exponent of `sym` in the polynomial, `-1` for zero.
    pub fn degree_in(&self, sym: Symbol) -> i64 {
        self.terms
            .keys()
            .map(|m| m.degree_of(sym) as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().map(|(s, _)| s))
            .collect()
    }

    /// Coefficients with respect to `sym`; entry `k` multiplies `sym^k`.
    pub fn coeffs_in(&self, sym: Symbol) -> Vec<ParamPoly> {
        let deg = self.degree_in(sym);
        if deg < 0 {
            return Vec::new();
        }
        let mut out = vec![ParamPoly::zero(); deg as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(sym);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(sym: Symbol, coeffs: &[ParamPoly]) -> ParamPoly {
        let mut p = ParamPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var(sym, k as u32);
            for (m, r) in &c.terms {
                p.add_term(m.mul(&shift), r.clone());
            }
        }
        p
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &ParamPoly) -> Option<ParamPoly> {
        let (lm, lc) = divisor.leading()?;
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(lm)?;
            let qc = c / lc;
            let step = divisor.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
            rem = &rem - &step;
        }
        Some(quot)
    }

    /// Replaces `sym` by a rational value.
    pub fn subs(&self, sym: Symbol, value: &Rational) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(sym);
            let factor = num_traits::pow::pow(value.clone(), e as usize);
            out.add_term(rest, c * factor);
        }
        out
    }

    pub fn eval(&self, values: &BTreeMap<Symbol, Rational>) -> Result<Rational, ArithError> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (s, e) in m.factors() {
                let v = values
                    .get(&s)
                    .ok_or_else(|| ArithError::IncompleteAssignment(s.to_string()))?;
                t *= num_traits::pow::pow(v.clone(), e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Whether printing this polynomial starts with a minus sign.
    pub(crate) fn leads_negative(&self) -> bool {
        self.terms
            .iter()
            .next_back()
            .is_some_and(|(_, c)| is_negative(c))
    }

    /// Whether the polynomial prints as a single factor (no top-level `+`/`-`).
    pub(crate) fn is_atomic(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                !is_negative(c) && (m.is_one() || c.is_one())
            }
            _ => false,
        }
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({self})")
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        if self.is_zero() || rhs.is_zero() {
            return ParamPoly::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut out = ParamPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for ParamPoly {
            type Output = ParamPoly;
            fn $method(self, rhs: ParamPoly) -> ParamPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $method(self, rhs: &ParamPoly) -> ParamPoly {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn sym(s: &str) -> ParamPoly {
        ParamPoly::symbol(Symbol::new(s))
    }

    #[test]
    fn grlex_order() {
        let a = Symbol::new("a");
        let b = Symbol::new("b");
        let a2 = Monomial::var(a, 2);
        let ab = Monomial::var(a, 1).mul(&Monomial::var(b, 1));
        let b2 = Monomial::var(b, 2);
        let a1 = Monomial::var(a, 1);
        assert!(a2 > ab && ab > b2 && b2 > a1);
        assert!(a1 > Monomial::var(b, 1));
        assert!(Monomial::one() < Monomial::var(b, 1));
    }

    #[test]
    fn monomial_division() {
        let a = Symbol::new("a");
        let b = Symbol::new("b");
        let ab2 = Monomial::var(a, 1).mul(&Monomial::var(b, 2));
        assert_eq!(ab2.div(&Monomial::var(b, 1)), Some(Monomial::var(a, 1).mul(&Monomial::var(b, 1))));
        assert_eq!(ab2.div(&Monomial::var(a, 2)), None);
        assert_eq!(Monomial::var(b, 1).div(&Monomial::var(a, 1)), None);
    }

    #[test]
    fn exact_division() {
        let a = sym("a");
        let b = sym("b");
        let p = &(&a + &b) * &(&a - &b);
        assert_eq!(p.exact_div(&(&a - &b)), Some(&a + &b));
        assert_eq!((&a + &b).exact_div(&a), None);
        assert_eq!(p.exact_div(&ParamPoly::constant(rat(2))), Some(p.scale(&ratio(1, 2))));
    }

    #[test]
    fn coefficient_views_roundtrip() {
        let a = sym("a");
        let b = sym("b");
        let p = &(&(&a * &a) * &b) + &(&b + &ParamPoly::constant(rat(3)));
        let cs = p.coeffs_in(Symbol::new("a"));
        assert_eq!(cs.len(), 3);
        assert_eq!(ParamPoly::from_coeffs_in(Symbol::new("a"), &cs), p);
    }

    #[test]
    fn display() {
        let a = sym("a");
        let b = sym("b");
        let p = &(&a * &a) - &(&b.scale(&ratio(1, 2)) + &ParamPoly::constant(rat(1)));
        assert_eq!(p.to_string(), "a^2 - 1/2*b - 1");
    }
}
