//! Two consequences of the equation system used to rule out branches.
//!
//! Both are stated for a single unknown polynomial `h` (given in λ) after
//! the other ansatz coefficients have been eliminated:
//!
//! * [`case_c_collapse`] — for `h2 = ∂+λ+c`, `b = 0`, solving the first
//!   equation for `h1` and substituting back leaves a one-variable identity
//!   in ∂ that `h` must satisfy;
//! * [`case_b_cleared`] — for `h2 = c`, `b = 0`, the first equation with
//!   `h1` eliminated, multiplied through by `∂+c`.
//!
//! The `_oracle` functions recompute both at a rational point by the
//! elimination route itself (dividing by `∂+c`), sharing no code with the
//! polynomial forms.

use super::CatalogError;
use crate::arith::{FormalPoly, Rational, Var};
use num_traits::{One, Zero};

fn h_at(h: &FormalPoly, x: &FormalPoly) -> Result<FormalPoly, CatalogError> {
    Ok(h.substitute(Var::Lam, x)?)
}

fn check_h(h: &FormalPoly) -> Result<(), CatalogError> {
    if h.uses_only(&[Var::Lam]) {
        Ok(())
    } else {
        Err(CatalogError::NotAnsatzShaped(format!("h = {h} must be a polynomial in lam alone")))
    }
}

/// The one-variable identity in ∂:
///
/// ```text
/// ((a²-3a+1)∂ - (2a-1)c) h(∂) + a(∂+c) h(0) - (2a+3)(∂+c) h(-∂) + 2(∂+c) h(-2∂)
/// ```
pub fn case_c_collapse(h: &FormalPoly, a: &FormalPoly, c: &FormalPoly) -> Result<FormalPoly, CatalogError> {
    let u = h.universe().union(a.universe()).union(c.universe());
    let (h, a, c) = (h.widen(&u)?, a.widen(&u)?, c.widen(&u)?);
    check_h(&h)?;
    let d = u.var(Var::Del);
    let one = u.one();
    let two = u.int(2);
    let three = u.int(3);
    let dc = &d + &c;
    let lead = &(&(&(&(&a * &a) - &(&three * &a)) + &one) * &d) - &(&(&(&two * &a) - &one) * &c);
    let terms = [
        &lead * &h_at(&h, &d)?,
        &(&a * &dc) * &h_at(&h, &u.zero())?,
        -&(&(&(&two * &a) + &three) * &dc) * &h_at(&h, &-&d)?,
        &(&two * &dc) * &h_at(&h, &(&u.int(-2) * &d))?,
    ];
    Ok(terms.iter().fold(u.zero(), |acc, t| &acc + t))
}

/// The cleared identity in (λ, μ, ∂):
///
/// ```text
///   (((a-1)λ-μ)((a-1)∂-λ-μ) - (∂+c)((a-1)(λ+∂)-μ)) h(λ+μ+∂)
/// - c(∂+aλ) h(-∂) + (∂+λ+μ+c)((a-1)λ-μ) h(λ+μ) + c(∂+λ) h(-λ-∂)
/// + μ(∂+λ+μ+c) h(μ) - c(a∂+λ) h(-λ) + (∂+λ+μ+c)((a-1)∂-μ) h(μ+∂)
/// ```
pub fn case_b_cleared(h: &FormalPoly, a: &FormalPoly, c: &FormalPoly) -> Result<FormalPoly, CatalogError> {
    let u = h.universe().union(a.universe()).union(c.universe());
    let (h, a, c) = (h.widen(&u)?, a.widen(&u)?, c.widen(&u)?);
    check_h(&h)?;
    let l = u.var(Var::Lam);
    let m = u.var(Var::Mu);
    let d = u.var(Var::Del);
    let am1 = &a - &u.one();
    let lm = &l + &m;
    let full = &(&d + &lm) + &c;
    let wl = &(&am1 * &l) - &m;
    let wd = &(&am1 * &d) - &m;
    let first = &(&wl * &(&(&am1 * &d) - &lm)) - &(&(&d + &c) * &(&(&am1 * &(&l + &d)) - &m));
    let terms = [
        &first * &h_at(&h, &(&lm + &d))?,
        -&(&c * &(&d + &(&a * &l))) * &h_at(&h, &-&d)?,
        &(&full * &wl) * &h_at(&h, &lm)?,
        &(&c * &(&d + &l)) * &h_at(&h, &-&(&l + &d))?,
        &(&m * &full) * &h_at(&h, &m)?,
        -&(&c * &(&(&a * &d) + &l)) * &h_at(&h, &-&l)?,
        &(&full * &wd) * &h_at(&h, &(&m + &d))?,
    ];
    Ok(terms.iter().fold(u.zero(), |acc, t| &acc + t))
}

/// Horner evaluation of `Σ coeffs[i] x^i`.
fn poly_eval(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Recomputes [`case_c_collapse`] at `∂ = del` by eliminating `h1`.
///
/// `h` lists coefficients in increasing degree. Returns `None` when the
/// point hits a pole of the elimination (`∂ = 0` or a vanishing `y+c`).
pub fn case_c_collapse_oracle(h: &[Rational], a: &Rational, c: &Rational, del: &Rational) -> Option<Rational> {
    let hv = |x: &Rational| poly_eval(h, x);
    let one = Rational::one();
    // h1(x, y) solved from the equation with μ = 0.
    let h1 = |x: &Rational, y: &Rational| -> Option<Rational> {
        let den = y + c;
        if den.is_zero() {
            return None;
        }
        let num = ((a - &one) * y - x) * hv(&(x + y)) - (y + x + c) * hv(&-y) + (x + y + c) * hv(x);
        Some(num / den)
    };
    if del.is_zero() {
        return None;
    }
    let two = Rational::from_integer(2.into());
    let zero = Rational::zero();
    let bracket = a * del * h1(&zero, del)?
        - (&two * del + c) * h1(&-del, &(&two * del))?
        - (del + c) * h1(&(-&two * del), del)?;
    Some((del + c) * bracket / del)
}

/// Recomputes [`case_b_cleared`] at `(λ, μ, ∂)` as `(∂+c)` times the first
/// equation with `h1` eliminated. `None` on a pole of the elimination.
pub fn case_b_cleared_oracle(
    h: &[Rational],
    a: &Rational,
    c: &Rational,
    lam: &Rational,
    mu: &Rational,
    del: &Rational,
) -> Option<Rational> {
    let hv = |x: &Rational| poly_eval(h, x);
    let one = Rational::one();
    let h1 = |x: &Rational, y: &Rational| -> Option<Rational> {
        let den = y + c;
        if den.is_zero() {
            return None;
        }
        let num = ((a - &one) * y - x) * hv(&(x + y)) - c * hv(&-y) + (x + y + c) * hv(x);
        Some(num / den)
    };
    let weight = (a - &one) * lam - mu;
    let residual = weight * h1(&(lam + mu), del)?
        - (h1(mu, &(lam + del))? * (del + lam + c) + c * h1(&(-lam - del), del)?
            - (del + lam + mu + c) * h1(mu, del)?);
    Some((del + c) * residual)
}
