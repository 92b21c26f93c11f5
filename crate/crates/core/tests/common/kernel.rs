//! Strategies and property bodies shared by the property suite and the
//! acceptance run.
#![allow(dead_code)]

use lsca_core::arith::{rat, Assignment, FormalPoly, Rational, Scalar, Universe, Var};
use lsca_core::conformal::{AlgebraKind, ConformalAlgebra, ModuleElement};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const TRIALS: u32 = 1000;

pub fn universe() -> Universe {
    Universe::new(["a", "b"])
}

/// One term `c * a^i * b^j * del^k * lam^l`.
pub type TermSpec = (i64, u32, u32, u32, u32);

pub fn term_spec() -> impl Strategy<Value = TermSpec> {
    (-4i64..=4, 0u32..=2, 0u32..=1, 0u32..=2, 0u32..=2)
}

/// Denominators a coefficient may carry.
pub fn denominator(u: &Universe, k: usize) -> FormalPoly {
    let a = u.param("a").unwrap();
    let b = u.param("b").unwrap();
    match k {
        0 => u.one(),
        1 => a,
        2 => &a + &u.one(),
        3 => &b - &u.int(2),
        _ => &(&a * &b) + &u.one(),
    }
}

pub fn build(shape: &(Vec<TermSpec>, usize)) -> FormalPoly {
    let u = universe();
    let (terms, den) = shape;
    let mut p = u.zero();
    for &(c, i, j, k, l) in terms {
        let t = &(&(&u.int(c) * &u.param("a").unwrap().pow(i)) * &u.param("b").unwrap().pow(j))
            * &(&u.var(Var::Del).pow(k) * &u.var(Var::Lam).pow(l));
        p = &p + &t;
    }
    p.div_constant(&denominator(&u, *den)).unwrap()
}

pub fn poly() -> impl Strategy<Value = FormalPoly> {
    (prop::collection::vec(term_spec(), 0..4), 0usize..5).prop_map(|s| build(&s))
}

pub fn point() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-5i64..=5, -5i64..=5, -5i64..=5, -5i64..=5)
}

pub fn assignment((a, b, d, l): (i64, i64, i64, i64)) -> Assignment {
    Assignment::new()
        .with_param("a", rat(a))
        .with_param("b", rat(b))
        .with_var(Var::Del, rat(d))
        .with_var(Var::Lam, rat(l))
}

pub fn ring_axioms(p: FormalPoly, q: FormalPoly, r: FormalPoly) -> Result<(), TestCaseError> {
    let u = universe();
    prop_assert_eq!(&p + &q, &q + &p);
    prop_assert_eq!(&p * &q, &q * &p);
    prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
    prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
    prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
    prop_assert_eq!(&p + &u.zero(), p.clone());
    prop_assert_eq!(&p * &u.one(), p.clone());
    prop_assert!((&p - &p).is_zero());
    prop_assert!((&p + &(-&p)).is_zero());
    Ok(())
}

pub fn exact_division(p: FormalPoly, k: usize) -> Result<(), TestCaseError> {
    let d = denominator(&universe(), k);
    prop_assert_eq!(&(p.div_constant(&d).unwrap()) * &d, p);
    Ok(())
}

pub fn evaluation_homomorphism(p: FormalPoly, q: FormalPoly, at: (i64, i64, i64, i64)) -> Result<(), TestCaseError> {
    let at = assignment(at);
    if let (Ok(x), Ok(y)) = (p.eval(&at), q.eval(&at)) {
        prop_assert_eq!((&p + &q).eval(&at).unwrap(), &x + &y);
        prop_assert_eq!((&p * &q).eval(&at).unwrap(), &x * &y);
    }
    Ok(())
}

/// `eval(p[v := r], at) == eval(p, at[v := eval(r, at)])`, with `r` allowed
/// to mention `v` itself.
pub fn substitution_commutes(
    p: FormalPoly,
    q: FormalPoly,
    at: (i64, i64, i64, i64),
    substitute_lam: bool,
) -> Result<(), TestCaseError> {
    let v = if substitute_lam { Var::Lam } else { Var::Del };
    let repl = &q + &universe().var(v);
    let at = assignment(at);
    let Ok(rv) = repl.eval(&at) else { return Ok(()) };
    let Ok(lhs) = p.substitute(v, &repl).unwrap().eval(&at) else { return Ok(()) };
    let mut moved = at.clone();
    moved.vars[v.index()] = Some(rv);
    prop_assert_eq!(lhs, p.eval(&moved).unwrap());
    Ok(())
}

pub fn parameter_substitution(p: FormalPoly, at: (i64, i64, i64, i64)) -> Result<(), TestCaseError> {
    let at = assignment(at);
    let Ok(full) = p.eval(&at) else { return Ok(()) };
    let a = at.params.keys().copied().find(|s| s.as_str() == "a").unwrap();
    if let Ok(partial) = p.subs_param(a, &at.params[&a]) {
        prop_assert_eq!(partial.eval(&at).unwrap(), full);
    }
    Ok(())
}

pub fn algebra_and_elements() -> impl Strategy<Value = (Vec<FormalPoly>, Vec<FormalPoly>, bool)> {
    (prop::collection::vec(poly(), 8), prop::collection::vec(poly(), 4), any::<bool>())
}

/// `x_λ y == Σ_n λ^n/n! · x_(n) y` for a random table of rank one or two.
pub fn nth_product_reconstruction(
    (entries, xs, rank2): (Vec<FormalPoly>, Vec<FormalPoly>, bool),
) -> Result<(), TestCaseError> {
    let u = universe();
    let rank = if rank2 { 2 } else { 1 };
    let gens: Vec<&str> = ["L", "W"][..rank].to_vec();
    let mut alg = ConformalAlgebra::new("random", AlgebraKind::Raw, u.clone(), &gens).unwrap();
    let mut next = entries.into_iter();
    for i in 0..rank {
        for j in 0..rank {
            let comps = (0..rank).map(|_| next.next().unwrap()).collect();
            alg.set_entry(i, j, ModuleElement::from_components(comps)).unwrap();
        }
    }
    // Elements are polynomials in ∂ only.
    let del_only = |p: &FormalPoly| p.coeff_in(Var::Lam, 0);
    let x = ModuleElement::from_components((0..rank).map(|i| del_only(&xs[i])).collect());
    let y = ModuleElement::from_components((0..rank).map(|i| del_only(&xs[2 + i])).collect());
    let bracket = alg.bracket(&x, &y).unwrap();
    let top = bracket.degree(Var::Lam).max(0) as u32;
    let mut rebuilt = ModuleElement::zero(&u, rank);
    let mut factorial = rat(1);
    for n in 0..=top {
        if n > 0 {
            factorial *= rat(i64::from(n));
        }
        let nth = alg.nth_product(&x, &y, n).unwrap();
        let inv = Scalar::from_rational(Rational::from_integer(1.into()) / &factorial);
        let term = nth.scale(&inv).try_mul_poly(&u.var(Var::Lam).pow(n)).unwrap();
        rebuilt = rebuilt.try_add(&term).unwrap();
    }
    prop_assert_eq!(rebuilt, bracket);
    prop_assert!(alg.nth_product(&x, &y, top + 1).unwrap().is_zero());
    Ok(())
}
