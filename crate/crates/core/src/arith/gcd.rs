//! Multivariate gcd over ℚ by recursive primitive remainder sequences.
//!
//! A polynomial is viewed as univariate in its alphabetically first symbol
//! with coefficients in the remaining parameters; contents are computed
//! recursively and the primitive parts are reduced with pseudo-remainders.

use super::{Monomial, ParamPoly, Symbol};

/// Monic gcd of two parameter polynomials (`gcd(0, 0) = 0`).
pub fn gcd(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    if a.is_zero() {
        return monic(b);
    }
    if b.is_zero() {
        return monic(a);
    }
    if a.is_constant() || b.is_constant() {
        return ParamPoly::one();
    }
    if a == b {
        return monic(a);
    }
    let var = match a.symbols().union(&b.symbols()).next() {
        Some(&v) => v,
        None => return ParamPoly::one(),
    };
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let content = gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let prim = primitive_gcd(pa, pb, var);
    monic(&(&content * &prim))
}

/// gcd of the coefficients of `p` viewed as a polynomial in `var`.
pub fn content_in(p: &ParamPoly, var: Symbol) -> ParamPoly {
    let mut acc = ParamPoly::zero();
    for c in p.coeffs_in(var) {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

pub fn primitive_part_in(p: &ParamPoly, var: Symbol) -> ParamPoly {
    if p.is_zero() {
        return ParamPoly::zero();
    }
    let c = content_in(p, var);
    p.exact_div(&c).expect("content divides")
}

fn primitive_gcd(a: ParamPoly, b: ParamPoly, var: Symbol) -> ParamPoly {
    let (mut r0, mut r1) = if a.degree_in(var) >= b.degree_in(var) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        if r1.degree_in(var) <= 0 {
            // A primitive polynomial of degree zero in `var` is a unit.
            return ParamPoly::one();
        }
        let r = pseudo_remainder(&r0, &r1, var);
        if r.is_zero() {
            return primitive_part_in(&r1, var);
        }
        r0 = r1;
        r1 = primitive_part_in(&r, var);
    }
}

fn pseudo_remainder(a: &ParamPoly, b: &ParamPoly, var: Symbol) -> ParamPoly {
    let db = b.degree_in(var);
    let lcb = b.coeffs_in(var).pop().unwrap_or_default();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lcr = r.coeffs_in(var).pop().unwrap_or_default();
        let shift = ParamPoly::monomial(Monomial::var(var, (dr - db) as u32), num_traits::One::one());
        r = &(&r * &lcb) - &(&(&lcr * &shift) * b);
    }
    r
}

fn monic(p: &ParamPoly) -> ParamPoly {
    if p.is_zero() {
        return ParamPoly::zero();
    }
    let lc = p.leading_coefficient();
    p.scale(&lc.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn s(n: &str) -> ParamPoly {
        ParamPoly::symbol(Symbol::new(n))
    }

    fn k(n: i64) -> ParamPoly {
        ParamPoly::constant(rat(n))
    }

    #[test]
    fn univariate() {
        let x = s("x");
        let p = &(&x - &k(1)) * &(&x + &k(2));
        let q = &(&x - &k(1)) * &(&x - &k(3));
        assert_eq!(gcd(&p, &q), &x - &k(1));
        assert_eq!(gcd(&p, &k(5)), k(1));
        assert_eq!(gcd(&k(0), &p.scale(&rat(3))), p);
    }

    #[test]
    fn multivariate_common_factor() {
        let a = s("a");
        let b = s("b");
        let c = s("c");
        let g = &(&a * &b) - &c;
        let p = &g * &(&a + &k(1));
        let q = &g * &(&(&b * &b) + &c);
        assert_eq!(gcd(&p, &q), g);
        // h1 (h1 - k2) and c share nothing.
        let h1 = s("h1");
        let k2 = s("k2");
        assert!(gcd(&(&h1 * &(&h1 - &k2)), &c).is_one());
    }

    #[test]
    fn contents_in_a_variable() {
        let a = s("a");
        let b = s("b");
        // (b+1) a^2 + (b+1)(b-1) a
        let p = &(&(&b + &k(1)) * &(&a * &a)) + &(&(&(&b + &k(1)) * &(&b - &k(1))) * &a);
        assert_eq!(content_in(&p, Symbol::new("a")), &b + &k(1));
    }

    #[test]
    fn gcd_of_powers() {
        let a = s("a");
        let b = s("b");
        let p = (&a + &b).pow(3);
        let q = &(&a + &b).pow(2) * &(&a - &b);
        assert_eq!(gcd(&p, &q), (&a + &b).pow(2));
    }
}
