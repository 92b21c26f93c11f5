//! The rank-two ansatz over 𝒲(a,b) and its functional equation system.
//!
//! With `L_λ L = f L`, `f = ∂+λ+c`, the remaining products are
//!
//! ```text
//! L_λ W = g1 L + g2 W,   W_λ L = h1 L + h2 W,   W_λ W = k1 L + k2 W,
//! ```
//!
//! each coefficient a polynomial in (λ, ∂). Left-symmetry together with
//! compatibility with 𝒲(a,b) is equivalent to fourteen polynomial
//! identities E1..E14 in (λ, μ, ∂); [`equation_residuals`] writes each one
//! out by hand as `LHS - RHS`, independently of the generic checkers in
//! [`crate::conformal`]. [`meta_consistency`] compares the two routes.

use super::{make_w, CatalogError};
use crate::arith::{FormalPoly, Universe, Var};
use crate::conformal::{AlgebraKind, ConformalAlgebra, Residual};

pub const EQUATION_COUNT: usize = 14;

/// The seven ansatz polynomials; `f = ∂+λ+c` is derived from `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnsatzStructure {
    pub c: FormalPoly,
    pub g1: FormalPoly,
    pub g2: FormalPoly,
    pub h1: FormalPoly,
    pub h2: FormalPoly,
    pub k1: FormalPoly,
    pub k2: FormalPoly,
}

impl AnsatzStructure {
    /// All products zero except `L_λ L = (∂+λ+c)L`.
    pub fn zero(c: FormalPoly) -> AnsatzStructure {
        let z = c.universe().zero();
        AnsatzStructure {
            c,
            g1: z.clone(),
            g2: z.clone(),
            h1: z.clone(),
            h2: z.clone(),
            k1: z.clone(),
            k2: z,
        }
    }

    pub fn universe(&self) -> &Universe {
        self.c.universe()
    }

    pub fn f(&self) -> FormalPoly {
        let u = self.universe();
        &(&u.var(Var::Del) + &u.var(Var::Lam)) + &self.c
    }

    pub fn polys(&self) -> [(&'static str, &FormalPoly); 6] {
        [
            ("g1", &self.g1),
            ("g2", &self.g2),
            ("h1", &self.h1),
            ("h2", &self.h2),
            ("k1", &self.k1),
            ("k2", &self.k2),
        ]
    }

    /// The rank-two left-symmetric table on generators `L`, `W`.
    pub fn to_algebra(&self, name: &str) -> Result<ConformalAlgebra, CatalogError> {
        let mut a = ConformalAlgebra::new(name, AlgebraKind::LeftSymmetric, self.universe().clone(), &["L", "W"])?;
        a.set_bracket("L", "L", &[("L", self.f())])?;
        a.set_bracket("L", "W", &[("L", self.g1.clone()), ("W", self.g2.clone())])?;
        a.set_bracket("W", "L", &[("L", self.h1.clone()), ("W", self.h2.clone())])?;
        a.set_bracket("W", "W", &[("L", self.k1.clone()), ("W", self.k2.clone())])?;
        Ok(a)
    }

    /// Reads the seven polynomials back from a rank-two table.
    pub fn from_algebra(a: &ConformalAlgebra) -> Result<AnsatzStructure, CatalogError> {
        let names: Vec<&str> = a.generators().iter().map(|g| g.name.as_str()).collect();
        if names != ["L", "W"] {
            return Err(CatalogError::NotAnsatzShaped(format!(
                "generators must be L, W (found {})",
                names.join(", ")
            )));
        }
        let t = a.table();
        let u = a.universe();
        let ll = t.get(0, 0);
        if !ll.component(1).is_zero() {
            return Err(CatalogError::NotAnsatzShaped("L_lam L has a W component".into()));
        }
        let c = ll
            .component(0)
            .try_sub(&(&u.var(Var::Del) + &u.var(Var::Lam)))?;
        if c.as_scalar().is_none() {
            return Err(CatalogError::NotAnsatzShaped(format!(
                "L_lam L = ({})L is not of the form (del + lam + c)L",
                ll.component(0)
            )));
        }
        Ok(AnsatzStructure {
            c,
            g1: t.get(0, 1).component(0).clone(),
            g2: t.get(0, 1).component(1).clone(),
            h1: t.get(1, 0).component(0).clone(),
            h2: t.get(1, 0).component(1).clone(),
            k1: t.get(1, 1).component(0).clone(),
            k2: t.get(1, 1).component(1).clone(),
        })
    }

    pub fn widen(&self, target: &Universe) -> Result<AnsatzStructure, CatalogError> {
        Ok(AnsatzStructure {
            c: self.c.widen(target)?,
            g1: self.g1.widen(target)?,
            g2: self.g2.widen(target)?,
            h1: self.h1.widen(target)?,
            h2: self.h2.widen(target)?,
            k1: self.k1.widen(target)?,
            k2: self.k2.widen(target)?,
        })
    }
}

/// `LHS - RHS` of one equation of the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationResidual {
    /// `E1` .. `E14`.
    pub label: String,
    pub value: FormalPoly,
}

impl EquationResidual {
    pub fn vanishes(&self) -> bool {
        self.value.is_zero()
    }
}

/// Evaluates `p(x, y)`: λ ↦ x and ∂ ↦ y simultaneously.
fn at(p: &FormalPoly, x: &FormalPoly, y: &FormalPoly) -> FormalPoly {
    let mut r = [None; 4];
    r[Var::Lam.index()] = Some(x);
    r[Var::Del.index()] = Some(y);
    p.compose(&r).expect("one universe")
}

/// The fourteen residuals for target 𝒲(a,b), with `a`, `b` constants.
///
/// All arguments are embedded in the union of their universes first.
pub fn equation_residuals(
    s: &AnsatzStructure,
    a: &FormalPoly,
    b: &FormalPoly,
) -> Result<Vec<EquationResidual>, CatalogError> {
    let u = s.universe().union(a.universe()).union(b.universe());
    let s = s.widen(&u)?;
    let a = a.widen(&u)?;
    let b = b.widen(&u)?;
    let (c, g1, g2, h1, h2, k1, k2) = (&s.c, &s.g1, &s.g2, &s.h1, &s.h2, &s.k1, &s.k2);

    let l = u.var(Var::Lam);
    let m = u.var(Var::Mu);
    let d = u.var(Var::Del);
    let lm = &l + &m;
    let ld = &l + &d;
    let md = &m + &d;
    let skew = -&ld;

    // -λ-μ+aλ+b, the L_{λ+μ}-weight of W against L.
    let w_weight = &(&(&(-&l) - &m) + &(&a * &l)) + &b;
    // ∂+λ+c and ∂+μ+λ+c, the two evaluations of f that occur.
    let f_l = &(&d + &l) + c;
    let f_lm = &(&d + &lm) + c;
    let f_m = &(&d + &m) + c;
    let l_minus_m = &l - &m;

    let mut out = Vec::with_capacity(EQUATION_COUNT);
    let mut push = |value: FormalPoly| {
        out.push(EquationResidual {
            label: format!("E{}", out.len() + 1),
            value,
        })
    };

    // E1
    push(
        &(&w_weight * &at(h1, &lm, &d))
            - &(&(&(&at(h1, &m, &ld) * &f_l) + &(&at(h2, &m, &ld) * &at(g1, &l, &d)))
                - &(&f_lm * &at(h1, &m, &d))),
    );
    // E2
    push(
        &(&w_weight * &at(h2, &lm, &d))
            - &(&(&at(h2, &m, &ld) * &at(g2, &l, &d)) - &(&f_lm * &at(h2, &m, &d))),
    );
    // E3
    push(
        &(&l_minus_m * &at(g1, &lm, &d))
            - &(&(&(&(&at(g1, &m, &ld) * &f_l) + &(&at(g2, &m, &ld) * &at(g1, &l, &d)))
                - &(&at(g1, &l, &md) * &f_m))
                - &(&at(g2, &l, &md) * &at(g1, &m, &d))),
    );
    // E4
    push(
        &(&l_minus_m * &at(g2, &lm, &d))
            - &(&(&at(g2, &m, &ld) * &at(g2, &l, &d)) - &(&at(g2, &l, &md) * &at(g2, &m, &d))),
    );
    // E5
    push(
        &(&w_weight * &at(k1, &lm, &d))
            - &(&(&(&(&at(k1, &m, &ld) * &f_l) + &(&at(k2, &m, &ld) * &at(g1, &l, &d)))
                - &(&at(g1, &l, &md) * &at(h1, &m, &d)))
                - &(&at(g2, &l, &md) * &at(k1, &m, &d))),
    );
    // E6
    push(
        &(&w_weight * &at(k2, &lm, &d))
            - &(&(&(&at(k2, &m, &ld) * &at(g2, &l, &d)) - &(&at(g1, &l, &md) * &at(h2, &m, &d)))
                - &(&at(g2, &l, &md) * &at(k2, &m, &d))),
    );
    // E7..E10 share one shape: x(μ,λ+∂)p(λ,∂) + y(μ,λ+∂)q(λ,∂) minus the
    // same with λ and μ exchanged.
    let quad = |x: &FormalPoly, p: &FormalPoly, y: &FormalPoly, q: &FormalPoly| {
        let lhs = &(&at(x, &m, &ld) * &at(p, &l, &d)) + &(&at(y, &m, &ld) * &at(q, &l, &d));
        let rhs = &(&at(x, &l, &md) * &at(p, &m, &d)) + &(&at(y, &l, &md) * &at(q, &m, &d));
        &lhs - &rhs
    };
    push(quad(h1, h1, h2, k1));
    push(quad(h1, h2, h2, k2));
    push(quad(k1, h1, k2, k1));
    push(quad(k1, h2, k2, k2));
    // E11
    push(g1 - &at(h1, &skew, &d));
    // E12
    push(&(g2 - &at(h2, &skew, &d)) - &(&(&d + &(&a * &l)) + &b));
    // E13
    push(k1 - &at(k1, &skew, &d));
    // E14
    push(k2 - &at(k2, &skew, &d));
    Ok(out)
}

/// The two sides of the equivalence between the hand-written system and the
/// generic left-symmetry and compatibility checkers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaConsistency {
    pub equations_vanish: bool,
    pub left_symmetric: bool,
    pub compatible: bool,
}

impl MetaConsistency {
    pub fn consistent(&self) -> bool {
        self.equations_vanish == (self.left_symmetric && self.compatible)
    }
}

pub fn meta_consistency(
    s: &AnsatzStructure,
    a: &FormalPoly,
    b: &FormalPoly,
) -> Result<MetaConsistency, CatalogError> {
    let equations_vanish = equation_residuals(s, a, b)?.iter().all(EquationResidual::vanishes);
    let alg = s.to_algebra("ansatz")?;
    let left_symmetric = alg.residuals_left_symmetric()?.iter().all(Residual::vanishes);
    let u = a.universe().union(b.universe());
    let w = make_w(&a.widen(&u)?, &b.widen(&u)?)?;
    let compatible = alg.is_compatible_structure(&w)?.compatible();
    Ok(MetaConsistency {
        equations_vanish,
        left_symmetric,
        compatible,
    })
}
