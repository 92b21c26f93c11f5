//! The coefficient algebra of a conformal algebra.
//!
//! Basis vectors are `(e_i)_m` for a generator `e_i` and any integer `m`.
//! The product of two basis vectors is read off the λ-bracket table: an entry
//! term `c λ^r ∂^s e_k` in `(e_i)_λ e_j` contributes
//!
//! ```text
//! C(m, r) r! c (-1)^s (m+n-r)(m+n-r-1)...(m+n-r-s+1) (e_k)_{m+n-r-s}
//! ```
//!
//! to `(e_i)_m (e_j)_n`, with the generalised binomial so negative `m` is
//! allowed. Products are exact finite sums, so no truncation is involved;
//! windows only bound which index pairs or triples are tested.
//!
//! Closed forms are stated in the basis shifted by `φ(x_i) = x_{i+1}`; a
//! [`ShiftConvention`] translates between the two presentations.

mod closed;

pub use closed::{
    corollary_closed_form, verify_corollary, verify_corollary_instance, verify_lie_window, w_bracket_closed_form,
    ProductKind,
};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{binomial, falling_factorial, Rational, Scalar, Var};
use crate::conformal::{AlgebraKind, ConformalAlgebra, GeneratorId};

/// `(gen)_index`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffBasisVector {
    pub gen: GeneratorId,
    pub index: i64,
}

impl CoeffBasisVector {
    pub fn new(gen: &GeneratorId, index: i64) -> CoeffBasisVector {
        CoeffBasisVector { gen: gen.clone(), index }
    }
}

impl fmt::Display for CoeffBasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.gen.name, self.index)
    }
}

/// A finite linear combination of basis vectors; zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoeffElement {
    terms: BTreeMap<CoeffBasisVector, Scalar>,
}

impl CoeffElement {
    pub fn zero() -> CoeffElement {
        CoeffElement::default()
    }

    pub fn basis(v: CoeffBasisVector) -> CoeffElement {
        CoeffElement::term(v, Scalar::one())
    }

    pub fn term(v: CoeffBasisVector, coeff: Scalar) -> CoeffElement {
        let mut e = CoeffElement::zero();
        e.add_term(v, coeff);
        e
    }

    pub fn add_term(&mut self, v: CoeffBasisVector, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&v) {
            Some(old) => {
                let sum = &*old + &coeff;
                if sum.is_zero() {
                    self.terms.remove(&v);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(v, coeff);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CoeffBasisVector, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, v: &CoeffBasisVector) -> Scalar {
        self.terms.get(v).cloned().unwrap_or_default()
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

    pub fn scale(&self, s: &Scalar) -> CoeffElement {
        let mut out = CoeffElement::zero();
        for (v, c) in &self.terms {
            out.add_term(v.clone(), c * s);
        }
        out
    }

    /// Adds `t` to every index.
    pub fn shift_indices(&self, t: i64) -> CoeffElement {
        let terms = self
            .terms
            .iter()
            .map(|(v, c)| (CoeffBasisVector::new(&v.gen, v.index + t), c.clone()))
            .collect();
        CoeffElement { terms }
    }
}

impl Add for &CoeffElement {
    type Output = CoeffElement;
    fn add(self, rhs: &CoeffElement) -> CoeffElement {
        let mut out = self.clone();
        for (v, c) in &rhs.terms {
            out.add_term(v.clone(), c.clone());
        }
        out
    }
}

impl Sub for &CoeffElement {
    type Output = CoeffElement;
    fn sub(self, rhs: &CoeffElement) -> CoeffElement {
        self + &-rhs
    }
}

impl Neg for &CoeffElement {
    type Output = CoeffElement;
    fn neg(self) -> CoeffElement {
        let terms = self.terms.iter().map(|(v, c)| (v.clone(), -c)).collect();
        CoeffElement { terms }
    }
}

impl fmt::Display for CoeffElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (v, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.leads_negative() { (true, -c) } else { (false, c.clone()) };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag.is_one() {
                write!(f, "{v}")?;
            } else if mag.is_atomic() {
                write!(f, "{mag}*{v}")?;
            } else {
                write!(f, "({mag})*{v}")?;
            }
        }
        Ok(())
    }
}

/// Per-generator index offsets: the shifted vector `(x)_i` stands for the
/// unshifted `(x)_{i + offset(x)}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShiftConvention {
    default: i64,
    per_generator: BTreeMap<usize, i64>,
}

impl ShiftConvention {
    /// The unshifted basis.
    pub fn identity() -> ShiftConvention {
        ShiftConvention::default()
    }

    pub fn uniform(offset: i64) -> ShiftConvention {
        ShiftConvention {
            default: offset,
            per_generator: BTreeMap::new(),
        }
    }

    /// `φ(x_i) = x_{i+1}` on every generator, the presentation of all closed
    /// forms in this crate.
    pub fn standard() -> ShiftConvention {
        ShiftConvention::uniform(1)
    }

    pub fn with_offset(mut self, generator: usize, offset: i64) -> ShiftConvention {
        self.per_generator.insert(generator, offset);
        self
    }

    pub fn offset(&self, generator: usize) -> i64 {
        self.per_generator.get(&generator).copied().unwrap_or(self.default)
    }

    fn to_unshifted(&self, v: &CoeffBasisVector) -> CoeffBasisVector {
        CoeffBasisVector::new(&v.gen, v.index + self.offset(v.gen.index))
    }

    fn from_unshifted(&self, e: &CoeffElement) -> CoeffElement {
        let mut out = CoeffElement::zero();
        for (v, c) in e.terms() {
            out.add_term(CoeffBasisVector::new(&v.gen, v.index - self.offset(v.gen.index)), c.clone());
        }
        out
    }
}

fn int_scalar(n: BigInt) -> Scalar {
    Scalar::from_rational(Rational::from_integer(n))
}

/// Product of two basis vectors in the unshifted basis.
pub fn coeff_product(alg: &ConformalAlgebra, x: &CoeffBasisVector, y: &CoeffBasisVector) -> CoeffElement {
    let entry = alg.table().get(x.gen.index, y.gen.index);
    let (m, n) = (BigInt::from(x.index), BigInt::from(y.index));
    let mut out = CoeffElement::zero();
    for (k, poly) in entry.components().iter().enumerate() {
        let target = &alg.generators()[k];
        for (exp, c) in poly.terms() {
            let r = exp[Var::Lam.index()];
            let s = exp[Var::Del.index()];
            let r_fact: BigInt = (2..=r).fold(BigInt::one(), |acc, i| acc * i);
            let sign = if s % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let top = &m + &n - r;
            let factor = binomial(&m, r) * r_fact * sign * falling_factorial(&top, s);
            let index = x.index + y.index - i64::from(r) - i64::from(s);
            out.add_term(CoeffBasisVector::new(target, index), c * &int_scalar(factor));
        }
    }
    out
}

/// [`coeff_product`] for vectors given in a shifted basis; the result is in
/// the same shifted basis.
pub fn coeff_product_shifted(
    alg: &ConformalAlgebra,
    x: &CoeffBasisVector,
    y: &CoeffBasisVector,
    shift: &ShiftConvention,
) -> CoeffElement {
    let raw = coeff_product(alg, &shift.to_unshifted(x), &shift.to_unshifted(y));
    shift.from_unshifted(&raw)
}

/// Bilinear extension of [`coeff_product_shifted`] to elements.
pub fn coeff_product_elements(
    alg: &ConformalAlgebra,
    x: &CoeffElement,
    y: &CoeffElement,
    shift: &ShiftConvention,
) -> CoeffElement {
    let mut out = CoeffElement::zero();
    for (u, cu) in x.terms() {
        for (v, cv) in y.terms() {
            let p = coeff_product_shifted(alg, u, v, shift);
            out = &out + &p.scale(&(cu * cv));
        }
    }
    out
}

/// The Lie bracket of the coefficient algebra.
///
/// For a left-symmetric or raw table this is `x∘y - y∘x`. A Lie table
/// already encodes the bracket, so the product itself is returned: taking
/// the difference there would double it.
pub fn coeff_commutator(
    alg: &ConformalAlgebra,
    x: &CoeffBasisVector,
    y: &CoeffBasisVector,
    shift: &ShiftConvention,
) -> CoeffElement {
    let xy = coeff_product_shifted(alg, x, y, shift);
    match alg.kind {
        AlgebraKind::Lie => xy,
        AlgebraKind::LeftSymmetric | AlgebraKind::Raw => &xy - &coeff_product_shifted(alg, y, x, shift),
    }
}

/// `(x∘y)∘z - x∘(y∘z) - (y∘x)∘z + y∘(x∘z)`.
pub fn associator_residual(
    alg: &ConformalAlgebra,
    x: &CoeffBasisVector,
    y: &CoeffBasisVector,
    z: &CoeffBasisVector,
    shift: &ShiftConvention,
) -> CoeffElement {
    let (ex, ey, ez) = (
        CoeffElement::basis(x.clone()),
        CoeffElement::basis(y.clone()),
        CoeffElement::basis(z.clone()),
    );
    let prod = |a: &CoeffElement, b: &CoeffElement| coeff_product_elements(alg, a, b, shift);
    let xy_z = prod(&prod(&ex, &ey), &ez);
    let x_yz = prod(&ex, &prod(&ey, &ez));
    let yx_z = prod(&prod(&ey, &ex), &ez);
    let y_xz = prod(&ey, &prod(&ex, &ez));
    &(&(&xy_z - &x_yz) - &yx_z) + &y_xz
}

/// Every basis vector with index in `[-radius, radius]`, generator-major.
pub fn window_basis(alg: &ConformalAlgebra, radius: i64) -> Vec<CoeffBasisVector> {
    alg.generators()
        .iter()
        .flat_map(|g| (-radius..=radius).map(move |i| CoeffBasisVector::new(g, i)))
        .collect()
}

/// A triple with a nonzero associator residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatorFailure {
    pub triple: [CoeffBasisVector; 3],
    pub residual: CoeffElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LeftSymmetryReport {
    pub checked: usize,
    /// Failures in triple order.
    pub failures: Vec<AssociatorFailure>,
}

impl LeftSymmetryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the left-symmetric identity on all basis triples with indices in
/// `[-radius, radius]` (unshifted basis; the identity is shift-invariant).
pub fn verify_left_symmetry_window(alg: &ConformalAlgebra, radius: i64) -> LeftSymmetryReport {
    let basis = window_basis(alg, radius);
    let shift = ShiftConvention::identity();
    let mut report = LeftSymmetryReport::default();
    for x in &basis {
        for y in &basis {
            for z in &basis {
                report.checked += 1;
                let residual = associator_residual(alg, x, y, z, &shift);
                if !residual.is_zero() {
                    report.failures.push(AssociatorFailure {
                        triple: [x.clone(), y.clone(), z.clone()],
                        residual,
                    });
                }
            }
        }
    }
    report
}

/// `max(λ-degree + ∂-degree)` over all table terms; every product term of
/// `(x)_m (y)_n` has index in `[m+n-D, m+n]`.
pub fn index_spread(alg: &ConformalAlgebra) -> i64 {
    alg.table()
        .iter()
        .flat_map(|(_, e)| e.components().iter())
        .flat_map(|p| p.terms().map(|(exp, _)| i64::from(exp[Var::Lam.index()] + exp[Var::Del.index()])))
        .max()
        .unwrap_or(0)
}

/// Two sides of one product that disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductMismatch {
    pub left: CoeffBasisVector,
    pub right: CoeffBasisVector,
    pub computed: CoeffElement,
    pub expected: CoeffElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProductReport {
    pub checked: usize,
    pub mismatches: Vec<ProductMismatch>,
}

impl ProductReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}
