//! Conformal algebras of finite rank over ℂ[∂].
//!
//! An algebra is a free module on named generators together with a
//! λ-bracket table: for every ordered pair of generators, a vector of
//! polynomials in (∂, λ). Brackets of arbitrary module elements follow from
//! sesquilinearity,
//!
//! ```text
//! (∂a)_λ b = -λ a_λ b,        a_λ (∂b) = (∂+λ) a_λ b,
//! ```
//!
//! and nested brackets are evaluated by the same rule with λ replaced by
//! another formal variable (μ, or the sum λ+μ).

mod axioms;

pub use axioms::{Axiom, CompatibilityReport, EntryDiff, Residual, ResidualLabel};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::{ArithError, FormalPoly, Rational, Scalar, Symbol, Universe, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConformalError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("element has {found} components but the algebra has rank {rank}")]
    RankMismatch { rank: usize, found: usize },
    #[error("module element component for `{0}` mentions a variable other than del")]
    NotAModuleElement(String),
    #[error("cannot rename the bracket variable to {0}")]
    RenameClash(&'static str),
    #[error("generators differ: [{left}] vs [{right}]")]
    GeneratorMismatch { left: String, right: String },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("table entry [{0}] mentions a variable other than del and lam")]
    BadEntry(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraKind {
    Lie,
    LeftSymmetric,
    Raw,
}

impl AlgebraKind {
    pub fn keyword(self) -> &'static str {
        match self {
            AlgebraKind::Lie => "lie",
            AlgebraKind::LeftSymmetric => "lsc",
            AlgebraKind::Raw => "raw",
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A generator of the free ℂ[∂]-module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId {
    pub index: usize,
    pub name: String,
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A parameter condition recorded on an algebra or family.
///
/// Constraints never enter symbolic computations; they only decide which
/// parameter values are admissible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    NonZero(Symbol),
    /// At least one of the symbols is nonzero.
    NotAllZero(Vec<Symbol>),
}

impl Constraint {
    pub fn symbols(&self) -> Vec<Symbol> {
        match self {
            Constraint::NonZero(s) => vec![*s],
            Constraint::NotAllZero(v) => v.clone(),
        }
    }

    /// `None` when some involved symbol has no value.
    pub fn holds(&self, values: &BTreeMap<Symbol, Rational>) -> Option<bool> {
        use num_traits::Zero;
        match self {
            Constraint::NonZero(s) => values.get(s).map(|v| !v.is_zero()),
            Constraint::NotAllZero(syms) => {
                let mut unknown = false;
                for s in syms {
                    match values.get(s) {
                        Some(v) if !v.is_zero() => return Some(true),
                        Some(_) => {}
                        None => unknown = true,
                    }
                }
                if unknown {
                    None
                } else {
                    Some(false)
                }
            }
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::NonZero(s) => write!(f, "{s} != 0"),
            Constraint::NotAllZero(syms) => {
                let names: Vec<String> = syms.iter().map(|s| s.to_string()).collect();
                let zeros = vec!["0"; syms.len()];
                write!(f, "({}) != ({})", names.join(", "), zeros.join(", "))
            }
        }
    }
}

/// A finite combination `Σ p_i e_i` of generators.
///
/// For genuine module elements every `p_i` is a polynomial in ∂ alone;
/// bracket values and intermediate nested brackets additionally carry the
/// bracket variables λ, μ.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleElement {
    components: Vec<FormalPoly>,
}

impl ModuleElement {
    pub fn zero(universe: &Universe, rank: usize) -> ModuleElement {
        ModuleElement {
            components: vec![universe.zero(); rank],
        }
    }

    pub fn from_components(components: Vec<FormalPoly>) -> ModuleElement {
        ModuleElement { components }
    }

    pub fn components(&self) -> &[FormalPoly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &FormalPoly {
        &self.components[i]
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(FormalPoly::is_zero)
    }

    pub fn try_add(&self, other: &ModuleElement) -> Result<ModuleElement, ConformalError> {
        self.zip(other, |p, q| p.try_add(q))
    }

    pub fn try_sub(&self, other: &ModuleElement) -> Result<ModuleElement, ConformalError> {
        self.zip(other, |p, q| p.try_sub(q))
    }

    fn zip(
        &self,
        other: &ModuleElement,
        op: impl Fn(&FormalPoly, &FormalPoly) -> Result<FormalPoly, ArithError>,
    ) -> Result<ModuleElement, ConformalError> {
        if self.rank() != other.rank() {
            return Err(ConformalError::RankMismatch {
                rank: self.rank(),
                found: other.rank(),
            });
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(p, q)| op(p, q))
            .collect::<Result<_, _>>()?;
        Ok(ModuleElement { components })
    }

    /// Multiplies every component by `p`.
    pub fn try_mul_poly(&self, p: &FormalPoly) -> Result<ModuleElement, ConformalError> {
        let components = self
            .components
            .iter()
            .map(|c| c.try_mul(p))
            .collect::<Result<_, _>>()?;
        Ok(ModuleElement { components })
    }

    pub fn neg(&self) -> ModuleElement {
        ModuleElement {
            components: self.components.iter().map(|c| -c).collect(),
        }
    }

    /// Simultaneous substitution in every component.
    pub fn compose(&self, repl: &[Option<&FormalPoly>; 4]) -> Result<ModuleElement, ConformalError> {
        let components = self
            .components
            .iter()
            .map(|c| c.compose(repl))
            .collect::<Result<_, _>>()?;
        Ok(ModuleElement { components })
    }

    pub fn substitute(&self, v: Var, repl: &FormalPoly) -> Result<ModuleElement, ConformalError> {
        let mut r = [None; 4];
        r[v.index()] = Some(repl);
        self.compose(&r)
    }

    pub fn rename(&self, from: Var, to: Var) -> ModuleElement {
        ModuleElement {
            components: self.components.iter().map(|c| c.rename(from, to)).collect(),
        }
    }

    pub fn coeff_in(&self, v: Var, k: u32) -> ModuleElement {
        ModuleElement {
            components: self.components.iter().map(|c| c.coeff_in(v, k)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> ModuleElement {
        ModuleElement {
            components: self.components.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn widen(&self, target: &Universe) -> Result<ModuleElement, ConformalError> {
        let components = self
            .components
            .iter()
            .map(|c| c.widen(target))
            .collect::<Result<_, _>>()?;
        Ok(ModuleElement { components })
    }

    pub fn subs_param(&self, sym: Symbol, value: &Rational) -> Result<ModuleElement, ConformalError> {
        let components = self
            .components
            .iter()
            .map(|c| c.subs_param(sym, value))
            .collect::<Result<_, _>>()?;
        Ok(ModuleElement { components })
    }

    pub fn degree(&self, v: Var) -> i64 {
        self.components.iter().map(|c| c.degree(v)).max().unwrap_or(-1)
    }

    /// Renders as `p1*L + p2*W` with generator names.
    pub fn render(&self, generators: &[GeneratorId], max_terms: Option<usize>) -> String {
        let mut parts = Vec::new();
        for (p, g) in self.components.iter().zip(generators) {
            if p.is_zero() {
                continue;
            }
            let body = match max_terms {
                Some(n) => p.render_capped(n),
                None => p.to_string(),
            };
            if p.len() == 1 && p.as_scalar().is_some_and(|s| s.is_one()) {
                parts.push(g.name.clone());
            } else if p.len() == 1 {
                parts.push(format!("{body}*{}", g.name));
            } else {
                parts.push(format!("({body})*{}", g.name));
            }
        }
        if parts.is_empty() {
            "0".to_owned()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.components.iter()).finish()
    }
}

/// Bracket data for all ordered pairs of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketTable {
    rank: usize,
    entries: Vec<ModuleElement>,
}

impl BracketTable {
    pub fn zero(universe: &Universe, rank: usize) -> BracketTable {
        BracketTable {
            rank,
            entries: vec![ModuleElement::zero(universe, rank); rank * rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> &ModuleElement {
        &self.entries[i * self.rank + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: ModuleElement) {
        assert_eq!(value.rank(), self.rank, "table entry rank");
        self.entries[i * self.rank + j] = value;
    }

    /// Ordered pairs with their entries, row-major.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &ModuleElement)> {
        let r = self.rank;
        self.entries.iter().enumerate().map(move |(k, e)| ((k / r, k % r), e))
    }
}

/// A conformal algebra of finite rank with its bracket table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalAlgebra {
    pub name: String,
    pub kind: AlgebraKind,
    universe: Universe,
    constraints: Vec<Constraint>,
    generators: Vec<GeneratorId>,
    table: BracketTable,
}

impl ConformalAlgebra {
    /// An algebra with the given generators and an all-zero table.
    pub fn new<S: AsRef<str>>(
        name: impl Into<String>,
        kind: AlgebraKind,
        universe: Universe,
        generator_names: &[S],
    ) -> Result<ConformalAlgebra, ConformalError> {
        let mut generators: Vec<GeneratorId> = Vec::with_capacity(generator_names.len());
        for (index, n) in generator_names.iter().enumerate() {
            let n = n.as_ref();
            if generators.iter().any(|g| g.name == n) {
                return Err(ConformalError::DuplicateGenerator(n.to_owned()));
            }
            generators.push(GeneratorId {
                index,
                name: n.to_owned(),
            });
        }
        let table = BracketTable::zero(&universe, generators.len());
        Ok(ConformalAlgebra {
            name: name.into(),
            kind,
            universe,
            constraints: Vec::new(),
            generators,
            table,
        })
    }

    /// Attaches admissibility constraints, kept sorted and deduplicated.
    pub fn with_constraints(mut self, mut constraints: Vec<Constraint>) -> ConformalAlgebra {
        constraints.sort();
        constraints.dedup();
        self.constraints = constraints;
        self
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn generators(&self) -> &[GeneratorId] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn table(&self) -> &BracketTable {
        &self.table
    }

    pub fn generator(&self, name: &str) -> Result<&GeneratorId, ConformalError> {
        self.generators
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| ConformalError::UnknownGenerator(name.to_owned()))
    }

    /// Sets `[x_λ y]` from `(generator name, coefficient)` pairs.
    pub fn set_bracket(
        &mut self,
        x: &str,
        y: &str,
        value: &[(&str, FormalPoly)],
    ) -> Result<(), ConformalError> {
        let i = self.generator(x)?.index;
        let j = self.generator(y)?.index;
        let mut entry = ModuleElement::zero(&self.universe, self.rank());
        for (g, p) in value {
            let k = self.generator(g)?.index;
            entry.components[k] = entry.components[k].try_add(p)?;
        }
        self.set_entry(i, j, entry)
    }

    /// Sets a table entry; it must only involve ∂ and λ.
    pub fn set_entry(&mut self, i: usize, j: usize, entry: ModuleElement) -> Result<(), ConformalError> {
        if entry.rank() != self.rank() {
            return Err(ConformalError::RankMismatch {
                rank: self.rank(),
                found: entry.rank(),
            });
        }
        if !entry.components.iter().all(|p| p.uses_only(&[Var::Del, Var::Lam])) {
            return Err(ConformalError::BadEntry(format!(
                "{} _ {}",
                self.generators[i], self.generators[j]
            )));
        }
        for p in &entry.components {
            if p.universe() != &self.universe {
                return Err(ArithError::UniverseMismatch {
                    left: self.universe.to_string(),
                    right: p.universe().to_string(),
                }
                .into());
            }
        }
        self.table.set(i, j, entry);
        Ok(())
    }

    /// The basis element `e` of the named generator.
    pub fn gen(&self, name: &str) -> Result<ModuleElement, ConformalError> {
        let i = self.generator(name)?.index;
        Ok(self.basis(i))
    }

    pub fn basis(&self, i: usize) -> ModuleElement {
        let mut e = ModuleElement::zero(&self.universe, self.rank());
        e.components[i] = self.universe.one();
        e
    }

    /// Builds `Σ p_g g` from pairs, with ∂-only coefficients.
    pub fn element(&self, parts: &[(&str, FormalPoly)]) -> Result<ModuleElement, ConformalError> {
        let mut e = ModuleElement::zero(&self.universe, self.rank());
        for (g, p) in parts {
            if !p.uses_only(&[Var::Del]) {
                return Err(ConformalError::NotAModuleElement((*g).to_owned()));
            }
            let k = self.generator(g)?.index;
            e.components[k] = e.components[k].try_add(p)?;
        }
        Ok(e)
    }

    fn check_module_element(&self, x: &ModuleElement) -> Result<(), ConformalError> {
        if x.rank() != self.rank() {
            return Err(ConformalError::RankMismatch {
                rank: self.rank(),
                found: x.rank(),
            });
        }
        for (p, g) in x.components.iter().zip(&self.generators) {
            if !p.uses_only(&[Var::Del]) {
                return Err(ConformalError::NotAModuleElement(g.name.clone()));
            }
        }
        Ok(())
    }

    /// `x_λ y` for module elements `x`, `y`.
    pub fn bracket(&self, x: &ModuleElement, y: &ModuleElement) -> Result<ModuleElement, ConformalError> {
        self.check_module_element(x)?;
        self.check_module_element(y)?;
        self.bracket_at(x, y, &self.universe.var(Var::Lam))
    }

    /// `x_v y` with the bracket variable renamed to `out_var`.
    pub fn bracket_shifted(
        &self,
        x: &ModuleElement,
        y: &ModuleElement,
        out_var: Var,
    ) -> Result<ModuleElement, ConformalError> {
        if out_var == Var::Del {
            return Err(ConformalError::RenameClash(Var::Del.name()));
        }
        self.check_module_element(x)?;
        self.check_module_element(y)?;
        self.bracket_at(x, y, &self.universe.var(out_var))
    }

    /// The sesquilinear bracket with the bracket variable replaced by the
    /// polynomial `v`:
    ///
    /// `x_v y = Σ p_i(-v) q_j(∂+v) [e_i _v e_j]`.
    ///
    /// Coefficients of `x` and `y` may carry bracket variables other than ∂;
    /// they are treated as constants, which is exactly what nested brackets
    /// need.
    pub fn bracket_at(
        &self,
        x: &ModuleElement,
        y: &ModuleElement,
        v: &FormalPoly,
    ) -> Result<ModuleElement, ConformalError> {
        let u = &self.universe;
        let del = u.var(Var::Del);
        let minus_v = -v;
        let del_plus_v = del.try_add(v)?;
        let mut left_repl = [None; 4];
        left_repl[Var::Del.index()] = Some(&minus_v);
        let mut right_repl = [None; 4];
        right_repl[Var::Del.index()] = Some(&del_plus_v);
        let mut table_repl = [None; 4];
        table_repl[Var::Lam.index()] = Some(v);

        let left: Vec<(usize, FormalPoly)> = x
            .components
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| Ok((i, p.compose(&left_repl)?)))
            .collect::<Result<_, ArithError>>()?;
        let right: Vec<(usize, FormalPoly)> = y
            .components
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(j, q)| Ok((j, q.compose(&right_repl)?)))
            .collect::<Result<_, ArithError>>()?;

        let is_lam = v == &u.var(Var::Lam);
        let mut out = ModuleElement::zero(u, self.rank());
        for (i, p) in &left {
            for (j, q) in &right {
                let entry = self.table.get(*i, *j);
                if entry.is_zero() {
                    continue;
                }
                let coeff = p.try_mul(q)?;
                let shifted = if is_lam {
                    entry.clone()
                } else {
                    entry.compose(&table_repl)?
                };
                out = out.try_add(&shifted.try_mul_poly(&coeff)?)?;
            }
        }
        Ok(out)
    }

    /// `(inner)_{λ+μ} c` where `inner` is a bracket value in (∂, λ).
    pub fn compose_left(&self, inner: &ModuleElement, c: &ModuleElement) -> Result<ModuleElement, ConformalError> {
        let total = self.universe.var(Var::Lam).try_add(&self.universe.var(Var::Mu))?;
        self.bracket_at(inner, c, &total)
    }

    /// `b_μ (inner)` where `inner` is a bracket value in (∂, λ).
    pub fn compose_right(&self, b: &ModuleElement, inner: &ModuleElement) -> Result<ModuleElement, ConformalError> {
        self.bracket_at(b, inner, &self.universe.var(Var::Mu))
    }

    /// The n-th product `x_(n) y = n! · [λⁿ] x_λ y`.
    pub fn nth_product(
        &self,
        x: &ModuleElement,
        y: &ModuleElement,
        n: u32,
    ) -> Result<ModuleElement, ConformalError> {
        let b = self.bracket(x, y)?;
        let fact = crate::arith::falling_factorial(&BigInt::from(n), n);
        Ok(b.coeff_in(Var::Lam, n).scale(&Scalar::from_rational(Rational::from_integer(fact))))
    }

    /// The largest λ-degree over the table (the locality bound).
    pub fn locality_bound(&self) -> i64 {
        self.table.entries.iter().map(|e| e.degree(Var::Lam)).max().unwrap_or(-1)
    }

    /// Re-tags the algebra with a larger parameter universe.
    pub fn widen(&self, target: &Universe) -> Result<ConformalAlgebra, ConformalError> {
        let mut table = BracketTable::zero(target, self.rank());
        for ((i, j), e) in self.table.iter() {
            table.set(i, j, e.widen(target)?);
        }
        Ok(ConformalAlgebra {
            universe: target.clone(),
            table,
            ..self.clone()
        })
    }

    /// Replaces a parameter by a value everywhere in the table.
    pub fn subs_param(&self, sym: Symbol, value: &Rational) -> Result<ConformalAlgebra, ConformalError> {
        let mut out = self.clone();
        for k in 0..out.table.entries.len() {
            out.table.entries[k] = out.table.entries[k].subs_param(sym, value)?;
        }
        Ok(out)
    }

    pub fn render_entry(&self, i: usize, j: usize) -> String {
        self.table.get(i, j).render(&self.generators, None)
    }
}

#[cfg(test)]
mod tests;
