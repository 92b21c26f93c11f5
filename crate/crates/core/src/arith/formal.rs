use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{ArithError, ParamPoly, Rational, Scalar, Symbol};

/// The formal variables: ∂ and the three bracket variables λ, μ, ν.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Del,
    Lam,
    Mu,
    Nu,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::Del, Var::Lam, Var::Mu, Var::Nu];

    pub fn index(self) -> usize {
        self as usize
    }

    /// ASCII name, as used in source files and reports.
    pub fn name(self) -> &'static str {
        match self {
            Var::Del => "del",
            Var::Lam => "lam",
            Var::Mu => "mu",
            Var::Nu => "nu",
        }
    }

    pub fn glyph(self) -> &'static str {
        match self {
            Var::Del => "∂",
            Var::Lam => "λ",
            Var::Mu => "μ",
            Var::Nu => "ν",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

/// Exponents of (∂, λ, μ, ν).
pub type VarExp = [u32; 4];

/// The declared, ordered set of parameter symbols a polynomial lives over.
#[derive(Clone)]
pub struct Universe(Arc<[Symbol]>);

impl Universe {
    pub fn new<I, S>(names: I) -> Universe
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set: BTreeSet<Symbol> = names.into_iter().map(|s| Symbol::new(s.as_ref())).collect();
        Universe(set.into_iter().collect())
    }

    pub fn empty() -> Universe {
        Universe(Arc::from(Vec::new()))
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        self.0.binary_search(&sym).is_ok()
    }

    pub fn is_subset_of(&self, other: &Universe) -> bool {
        self.0.iter().all(|&s| other.contains(s))
    }

    pub fn union(&self, other: &Universe) -> Universe {
        if self.is_subset_of(other) {
            return other.clone();
        }
        Universe::new(self.0.iter().chain(other.0.iter()).map(|s| s.as_str()))
    }

    pub fn zero(&self) -> FormalPoly {
        FormalPoly {
            universe: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> FormalPoly {
        self.rational(Rational::one())
    }

    pub fn int(&self, n: i64) -> FormalPoly {
        self.rational(super::rat(n))
    }

    pub fn rational(&self, r: Rational) -> FormalPoly {
        self.monomial([0; 4], Scalar::from_rational(r))
    }

    pub fn var(&self, v: Var) -> FormalPoly {
        let mut e = [0; 4];
        e[v.index()] = 1;
        self.monomial(e, Scalar::one())
    }

    pub fn param(&self, name: &str) -> Result<FormalPoly, ArithError> {
        let sym = Symbol::new(name);
        if !self.contains(sym) {
            return Err(ArithError::UnknownSymbol(name.to_owned()));
        }
        Ok(self.monomial([0; 4], Scalar::from_poly(ParamPoly::symbol(sym))))
    }

    /// A constant polynomial; every symbol of `s` must be declared.
    pub fn constant(&self, s: Scalar) -> Result<FormalPoly, ArithError> {
        self.check_scalar(&s)?;
        Ok(self.monomial([0; 4], s))
    }

    fn check_scalar(&self, s: &Scalar) -> Result<(), ArithError> {
        match s.symbols().into_iter().find(|&sym| !self.contains(sym)) {
            Some(sym) => Err(ArithError::UnknownSymbol(sym.to_string())),
            None => Ok(()),
        }
    }

    fn monomial(&self, e: VarExp, s: Scalar) -> FormalPoly {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(e, s);
        }
        FormalPoly {
            universe: self.clone(),
            terms,
        }
    }

    pub fn from_terms(
        &self,
        terms: impl IntoIterator<Item = (VarExp, Scalar)>,
    ) -> Result<FormalPoly, ArithError> {
        let mut p = self.zero();
        for (e, s) in terms {
            self.check_scalar(&s)?;
            p.add_term(e, s);
        }
        Ok(p)
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Universe {}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(|s| s.as_str()).collect();
        f.write_str(&names.join(", "))
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Universe{{{self}}}")
    }
}

/// Values for formal variables and parameters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub vars: [Option<Rational>; 4],
    pub params: BTreeMap<Symbol, Rational>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with_var(mut self, v: Var, value: Rational) -> Assignment {
        self.vars[v.index()] = Some(value);
        self
    }

    pub fn with_param(mut self, name: &str, value: Rational) -> Assignment {
        self.params.insert(Symbol::new(name), value);
        self
    }

    pub fn var(&self, v: Var) -> Option<&Rational> {
        self.vars[v.index()].as_ref()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for v in Var::ALL {
            if let Some(r) = self.var(v) {
                parts.push(format!("{}={}", v.name(), super::fmt_rational(r)));
            }
        }
        for (s, r) in &self.params {
            parts.push(format!("{}={}", s, super::fmt_rational(r)));
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Sparse polynomial in ∂, λ, μ, ν with coefficients in ℚ(params).
#[derive(Clone, PartialEq, Eq)]
pub struct FormalPoly {
    universe: Universe,
    terms: BTreeMap<VarExp, Scalar>,
}

impl FormalPoly {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VarExp, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of the monomial with exponents `e`.
    pub fn coefficient(&self, e: &VarExp) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// The value of a polynomial without formal variables.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.terms.keys().all(|e| *e == [0; 4]) {
            Some(self.coefficient(&[0; 4]))
        } else {
            None
        }
    }

    fn add_term(&mut self, e: VarExp, s: Scalar) {
        if s.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(s);
            }
            Entry::Occupied(mut o) => {
                let sum = &*o.get() + &s;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_universe(&self, other: &FormalPoly) -> Result<(), ArithError> {
        if self.universe == other.universe {
            Ok(())
        } else {
            Err(ArithError::UniverseMismatch {
                left: self.universe.to_string(),
                right: other.universe.to_string(),
            })
        }
    }

    pub fn try_add(&self, other: &FormalPoly) -> Result<FormalPoly, ArithError> {
        self.check_universe(other)?;
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (e, s) in &small.terms {
            big.add_term(*e, s.clone());
        }
        Ok(big)
    }

    pub fn try_sub(&self, other: &FormalPoly) -> Result<FormalPoly, ArithError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &FormalPoly) -> Result<FormalPoly, ArithError> {
        self.check_universe(other)?;
        let mut out = self.universe.zero();
        for (e1, s1) in &self.terms {
            for (e2, s2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.add_term(e, s1 * s2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> FormalPoly {
        if s.is_zero() {
            return self.universe.zero();
        }
        FormalPoly {
            universe: self.universe.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> FormalPoly {
        if r.is_zero() {
            return self.universe.zero();
        }
        FormalPoly {
            universe: self.universe.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, c.scale(r))).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> FormalPoly {
        let mut acc = self.universe.one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Divides by a polynomial free of formal variables.
    pub fn div_constant(&self, d: &FormalPoly) -> Result<FormalPoly, ArithError> {
        self.check_universe(d)?;
        let s = d.as_scalar().ok_or(ArithError::NonConstantDivisor)?;
        let inv = s.recip()?;
        Ok(self.scale(&inv))
    }

    /// Top exponent of `v`, `-1` for the zero polynomial.
    pub fn degree(&self, v: Var) -> i64 {
        self.terms
            .keys()
            .map(|e| e[v.index()] as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for e in self.terms.keys() {
            for v in Var::ALL {
                if e[v.index()] > 0 {
                    out.insert(v);
                }
            }
        }
        out
    }

    /// Whether every monomial only involves variables from `allowed`.
    pub fn uses_only(&self, allowed: &[Var]) -> bool {
        self.vars().iter().all(|v| allowed.contains(v))
    }

    pub fn params(&self) -> BTreeSet<Symbol> {
        self.terms.values().flat_map(Scalar::symbols).collect()
    }

    /// The coefficient of `v^k`, as a polynomial without `v`.
    pub fn coeff_in(&self, v: Var, k: u32) -> FormalPoly {
        let i = v.index();
        let mut out = self.universe.zero();
        for (e, s) in &self.terms {
            if e[i] == k {
                let mut e2 = *e;
                e2[i] = 0;
                out.add_term(e2, s.clone());
            }
        }
        out
    }

    /// Simultaneous substitution: `v ↦ repl[v]` for every `Some` entry.
    ///
    /// Replacements may mention the variables they replace; each term is
    /// rewritten exactly once.
    pub fn compose(&self, repl: &[Option<&FormalPoly>; 4]) -> Result<FormalPoly, ArithError> {
        for r in repl.iter().flatten() {
            self.check_universe(r)?;
        }
        let mut powers: [Vec<FormalPoly>; 4] = Default::default();
        let mut out = self.universe.zero();
        for (e, s) in &self.terms {
            let mut kept = [0u32; 4];
            let mut factor: Option<FormalPoly> = None;
            for v in Var::ALL {
                let i = v.index();
                match repl[i] {
                    None => kept[i] = e[i],
                    Some(r) => {
                        if e[i] == 0 {
                            continue;
                        }
                        let cache = &mut powers[i];
                        if cache.is_empty() {
                            cache.push(self.universe.one());
                        }
                        while cache.len() <= e[i] as usize {
                            let next = &cache[cache.len() - 1] * r;
                            cache.push(next);
                        }
                        let p = &cache[e[i] as usize];
                        factor = Some(match factor {
                            None => p.clone(),
                            Some(f) => &f * p,
                        });
                    }
                }
            }
            match factor {
                None => out.add_term(kept, s.clone()),
                Some(f) => {
                    for (fe, fs) in &f.terms {
                        let ne = [
                            kept[0] + fe[0],
                            kept[1] + fe[1],
                            kept[2] + fe[2],
                            kept[3] + fe[3],
                        ];
                        out.add_term(ne, fs * s);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Replaces every power `v^k` by `repl^k` in a single pass.
    pub fn substitute(&self, v: Var, repl: &FormalPoly) -> Result<FormalPoly, ArithError> {
        let mut r = [None; 4];
        r[v.index()] = Some(repl);
        self.compose(&r)
    }

    /// Renames `from` to `to`; `to` must not already occur.
    pub fn rename(&self, from: Var, to: Var) -> FormalPoly {
        if from == to {
            return self.clone();
        }
        let (i, j) = (from.index(), to.index());
        let mut out = self.universe.zero();
        for (e, s) in &self.terms {
            let mut e2 = *e;
            e2[j] += e2[i];
            e2[i] = 0;
            out.add_term(e2, s.clone());
        }
        out
    }

    pub fn eval(&self, at: &Assignment) -> Result<Rational, ArithError> {
        let mut acc = Rational::zero();
        for (e, s) in &self.terms {
            let mut t = s.eval(&at.params)?;
            for v in Var::ALL {
                let k = e[v.index()];
                if k == 0 {
                    continue;
                }
                let x = at
                    .var(v)
                    .ok_or_else(|| ArithError::IncompleteAssignment(v.name().to_owned()))?;
                t *= num_traits::pow::pow(x.clone(), k as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Replaces a parameter by a value, keeping the universe.
    pub fn subs_param(&self, sym: Symbol, value: &Rational) -> Result<FormalPoly, ArithError> {
        let mut out = self.universe.zero();
        for (e, s) in &self.terms {
            out.add_term(*e, s.subs(sym, value)?);
        }
        Ok(out)
    }

    /// Re-tags the polynomial with a larger universe.
    pub fn widen(&self, target: &Universe) -> Result<FormalPoly, ArithError> {
        if !self.universe.is_subset_of(target) {
            let missing = self
                .universe
                .symbols()
                .iter()
                .find(|s| !target.contains(**s))
                .map(|s| s.to_string())
                .unwrap_or_default();
            return Err(ArithError::UnknownSymbol(missing));
        }
        Ok(FormalPoly {
            universe: target.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Renders with at most `max_terms` terms, summarising the rest.
    pub fn render_capped(&self, max_terms: usize) -> String {
        if self.terms.len() <= max_terms {
            return self.to_string();
        }
        let shown = self.display_terms().into_iter().take(max_terms).collect::<Vec<_>>();
        let mut s = render_terms(&shown);
        s.push_str(&format!(" +… ({} terms)", self.terms.len() - max_terms));
        s
    }

    fn display_terms(&self) -> Vec<(VarExp, Scalar)> {
        let mut ts: Vec<(VarExp, Scalar)> =
            self.terms.iter().map(|(e, s)| (*e, s.clone())).collect();
        ts.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        ts
    }
}

fn render_monomial(e: &VarExp) -> String {
    let mut parts = Vec::new();
    for v in Var::ALL {
        match e[v.index()] {
            0 => {}
            1 => parts.push(v.name().to_owned()),
            k => parts.push(format!("{}^{}", v.name(), k)),
        }
    }
    parts.join("*")
}

fn render_terms(ts: &[(VarExp, Scalar)]) -> String {
    if ts.is_empty() {
        return "0".to_owned();
    }
    let mut out = String::new();
    for (i, (e, s)) in ts.iter().enumerate() {
        let neg = s.leads_negative();
        let abs = if neg { -s } else { s.clone() };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mono = render_monomial(e);
        if mono.is_empty() {
            if abs.is_atomic() || abs.is_polynomial() && abs.numer().len() == 1 {
                out.push_str(&abs.to_string());
            } else {
                out.push_str(&format!("({abs})"));
            }
        } else if abs.is_one() {
            out.push_str(&mono);
        } else if abs.is_atomic() {
            out.push_str(&format!("{abs}*{mono}"));
        } else {
            out.push_str(&format!("({abs})*{mono}"));
        }
    }
    out
}

impl fmt::Display for FormalPoly {
    /// ASCII rendering that the `.lsca` expression grammar accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(&self.display_terms()))
    }
}

impl fmt::Debug for FormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalPoly({self})")
    }
}

impl Add for &FormalPoly {
    type Output = FormalPoly;
    fn add(self, rhs: &FormalPoly) -> FormalPoly {
        self.try_add(rhs).expect("polynomials over different universes")
    }
}

impl Sub for &FormalPoly {
    type Output = FormalPoly;
    fn sub(self, rhs: &FormalPoly) -> FormalPoly {
        self.try_sub(rhs).expect("polynomials over different universes")
    }
}

impl Mul for &FormalPoly {
    type Output = FormalPoly;
    fn mul(self, rhs: &FormalPoly) -> FormalPoly {
        self.try_mul(rhs).expect("polynomials over different universes")
    }
}

impl Neg for &FormalPoly {
    type Output = FormalPoly;
    fn neg(self) -> FormalPoly {
        FormalPoly {
            universe: self.universe.clone(),
            terms: self.terms.iter().map(|(e, s)| (*e, -s)).collect(),
        }
    }
}

impl Neg for FormalPoly {
    type Output = FormalPoly;
    fn neg(self) -> FormalPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for FormalPoly {
            type Output = FormalPoly;
            fn $method(self, rhs: FormalPoly) -> FormalPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FormalPoly> for FormalPoly {
            type Output = FormalPoly;
            fn $method(self, rhs: &FormalPoly) -> FormalPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<FormalPoly> for &FormalPoly {
            type Output = FormalPoly;
            fn $method(self, rhs: FormalPoly) -> FormalPoly {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn setup() -> (Universe, FormalPoly, FormalPoly, FormalPoly) {
        let u = Universe::new(["a", "b", "c"]);
        let del = u.var(Var::Del);
        let lam = u.var(Var::Lam);
        let mu = u.var(Var::Mu);
        (u, del, lam, mu)
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let (u, del, lam, _) = setup();
        let p = &del + &(&lam * &u.int(2));
        assert_eq!(&p + &u.zero(), p);
        let c = u.param("c").unwrap();
        let f = &(&del + &lam) + &c;
        assert_eq!(&f + &-&lam, &del + &c);
        let a = u.param("a").unwrap();
        let q = &(&a * &del) + &(&(&u.one() - &a) * &del);
        assert_eq!(q, del);
    }

    #[test]
    fn products() {
        let (u, del, lam, mu) = setup();
        let p = &del + &lam;
        assert_eq!(&p * &u.one(), p);
        assert_eq!(&(&lam - &mu) * &(&lam + &mu), &(&lam * &lam) - &(&mu * &mu));
    }

    #[test]
    fn universe_mismatch_is_an_error() {
        let (u, del, _, _) = setup();
        let other = Universe::new(["a"]);
        let x = other.var(Var::Del);
        assert!(matches!(del.try_add(&x), Err(ArithError::UniverseMismatch { .. })));
        assert!(matches!(del.try_mul(&x), Err(ArithError::UniverseMismatch { .. })));
        assert!(u.param("zz").is_err());
    }

    #[test]
    fn substitution_examples() {
        let (u, del, lam, mu) = setup();
        let p = &del + &(&lam * &u.int(2));
        let skew = &-&lam - &del;
        assert_eq!(p.substitute(Var::Lam, &skew).unwrap(), &(&lam * &u.int(-2)) - &del);
        let sq = &lam * &lam;
        let shifted = sq.substitute(Var::Lam, &(&lam + &mu)).unwrap();
        assert_eq!(shifted, &(&sq + &(&(&lam * &mu) * &u.int(2))) + &(&mu * &mu));
    }

    #[test]
    fn evaluation() {
        let (u, del, lam, _) = setup();
        let p = &del + &(&lam * &u.int(2));
        let at = Assignment::new().with_var(Var::Del, rat(1)).with_var(Var::Lam, rat(3));
        assert_eq!(p.eval(&at).unwrap(), rat(7));
        let a = u.param("a").unwrap();
        let b = u.param("b").unwrap();
        let q = &(&del + &(&a * &lam)) + &b;
        let at = Assignment::new()
            .with_var(Var::Del, rat(0))
            .with_var(Var::Lam, rat(1))
            .with_param("a", rat(2))
            .with_param("b", rat(-1));
        assert_eq!(q.eval(&at).unwrap(), rat(1));
        let partial = Assignment::new().with_var(Var::Del, rat(0));
        assert!(matches!(q.eval(&partial), Err(ArithError::IncompleteAssignment(_))));
    }

    #[test]
    fn poles_are_reported() {
        let (u, del, _, _) = setup();
        let inv_c = u
            .constant(Scalar::new(ParamPoly::one(), ParamPoly::symbol(Symbol::new("c"))).unwrap())
            .unwrap();
        let p = &del * &inv_c;
        let at = Assignment::new().with_var(Var::Del, rat(1)).with_param("c", rat(0));
        assert_eq!(p.eval(&at), Err(ArithError::Pole));
        let at = Assignment::new().with_var(Var::Del, rat(1)).with_param("c", rat(4));
        assert_eq!(p.eval(&at).unwrap(), ratio(1, 4));
    }

    #[test]
    fn coefficients_and_degrees() {
        let (u, del, lam, _) = setup();
        let a = u.param("a").unwrap();
        let b = u.param("b").unwrap();
        let p = &(&del + &(&lam * &u.int(2))) + &u.zero();
        assert_eq!(p.coeff_in(Var::Lam, 1), u.int(2));
        let q = &(&del + &(&a * &lam)) + &b;
        assert_eq!(q.coeff_in(Var::Lam, 0), &del + &b);
        assert_eq!(p.degree(Var::Lam), 1);
        assert_eq!(u.zero().degree(Var::Del), -1);
        assert_eq!((&del + &lam).pow(3).degree(Var::Del), 3);
    }

    #[test]
    fn rendering() {
        let (u, del, lam, _) = setup();
        let a = u.param("a").unwrap();
        let b = u.param("b").unwrap();
        let q = &(&del + &(&a * &lam)) + &b;
        assert_eq!(q.to_string(), "del + a*lam + b");
        let r = &(&(&lam * &lam) * &u.rational(ratio(-1, 2))) - &(&(&a + &b) * &del);
        assert_eq!(r.to_string(), "-1/2*lam^2 - (a + b)*del");
        assert_eq!(u.zero().to_string(), "0");
        let big = (&del + &lam).pow(4);
        assert!(big.render_capped(2).ends_with("+… (3 terms)"));
    }
}
