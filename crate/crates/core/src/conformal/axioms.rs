//! Axiom residuals, the sub-adjacent bracket and compatibility.

use std::fmt;

use super::{AlgebraKind, ConformalAlgebra, ConformalError, ModuleElement};
use crate::arith::Var;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Skew,
    Jacobi,
    LeftSymmetry,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Skew => "skew",
            Axiom::Jacobi => "jacobi",
            Axiom::LeftSymmetry => "left-symmetry",
        }
    }
}

/// Which identity instance a residual belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidualLabel {
    pub axiom: Axiom,
    pub generators: Vec<String>,
}

impl fmt::Display for ResidualLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.axiom.name(), self.generators.join(","))
    }
}

/// One instantiated identity: it holds iff every component is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub label: ResidualLabel,
    pub value: ModuleElement,
}

impl Residual {
    pub fn vanishes(&self) -> bool {
        self.value.is_zero()
    }
}

fn label(a: &ConformalAlgebra, axiom: Axiom, idx: &[usize]) -> ResidualLabel {
    ResidualLabel {
        axiom,
        generators: idx.iter().map(|&i| a.generators[i].name.clone()).collect(),
    }
}

impl ConformalAlgebra {
    /// `b_{-λ-∂} a` for the entry `[b _ a]`.
    fn flipped_entry(&self, b: usize, a: usize) -> Result<ModuleElement, ConformalError> {
        let u = &self.universe;
        let repl = -&(&u.var(Var::Lam) + &u.var(Var::Del));
        self.table.get(b, a).substitute(Var::Lam, &repl)
    }

    /// `[a_λ b] + [b_{-λ-∂} a]` for every ordered pair.
    pub fn residuals_skew(&self) -> Result<Vec<Residual>, ConformalError> {
        let mut out = Vec::new();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let value = self.table.get(i, j).try_add(&self.flipped_entry(j, i)?)?;
                out.push(Residual {
                    label: label(self, Axiom::Skew, &[i, j]),
                    value,
                });
            }
        }
        Ok(out)
    }

    /// `[a_λ[b_μ c]] - [[a_λ b]_{λ+μ} c] - [b_μ[a_λ c]]` for every triple.
    pub fn residuals_jacobi(&self) -> Result<Vec<Residual>, ConformalError> {
        let lam = self.universe.var(Var::Lam);
        let mu = self.universe.var(Var::Mu);
        let mut out = Vec::new();
        for i in 0..self.rank() {
            let a = self.basis(i);
            for j in 0..self.rank() {
                let b = self.basis(j);
                let ab = self.bracket_at(&a, &b, &lam)?;
                for k in 0..self.rank() {
                    let c = self.basis(k);
                    let bc = self.bracket_at(&b, &c, &mu)?;
                    let ac = self.bracket_at(&a, &c, &lam)?;
                    let t1 = self.bracket_at(&a, &bc, &lam)?;
                    let t2 = self.compose_left(&ab, &c)?;
                    let t3 = self.compose_right(&b, &ac)?;
                    out.push(Residual {
                        label: label(self, Axiom::Jacobi, &[i, j, k]),
                        value: t1.try_sub(&t2)?.try_sub(&t3)?,
                    });
                }
            }
        }
        Ok(out)
    }

    /// `(a_λ b)_{λ+μ} c - a_λ(b_μ c) - (b_μ a)_{λ+μ} c + b_μ(a_λ c)` for every
    /// ordered triple.
    pub fn residuals_left_symmetric(&self) -> Result<Vec<Residual>, ConformalError> {
        let lam = self.universe.var(Var::Lam);
        let mu = self.universe.var(Var::Mu);
        let mut out = Vec::new();
        for i in 0..self.rank() {
            let a = self.basis(i);
            for j in 0..self.rank() {
                let b = self.basis(j);
                let ab = self.bracket_at(&a, &b, &lam)?;
                let ba = self.bracket_at(&b, &a, &mu)?;
                for k in 0..self.rank() {
                    let c = self.basis(k);
                    let bc = self.bracket_at(&b, &c, &mu)?;
                    let ac = self.bracket_at(&a, &c, &lam)?;
                    let t1 = self.compose_left(&ab, &c)?;
                    let t2 = self.bracket_at(&a, &bc, &lam)?;
                    let t3 = self.compose_left(&ba, &c)?;
                    let t4 = self.compose_right(&b, &ac)?;
                    let value = t1.try_sub(&t2)?.try_sub(&t3)?.try_add(&t4)?;
                    out.push(Residual {
                        label: label(self, Axiom::LeftSymmetry, &[i, j, k]),
                        value,
                    });
                }
            }
        }
        Ok(out)
    }

    /// The commutator bracket `[a_λ b] = a_λ b - b_{-λ-∂} a`.
    pub fn sub_adjacent(&self) -> Result<ConformalAlgebra, ConformalError> {
        let mut out = self.clone();
        out.kind = AlgebraKind::Lie;
        out.name = format!("{}-commutator", self.name);
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let e = self.table.get(i, j).try_sub(&self.flipped_entry(j, i)?)?;
                out.table.set(i, j, e);
            }
        }
        Ok(out)
    }

    /// Compares the commutator of `self` with the Lie table of `lie`.
    ///
    /// Both are first embedded into the union of their parameter universes.
    pub fn is_compatible_structure(&self, lie: &ConformalAlgebra) -> Result<CompatibilityReport, ConformalError> {
        let names = |a: &ConformalAlgebra| {
            a.generators.iter().map(|g| g.name.as_str()).collect::<Vec<_>>().join(", ")
        };
        if names(self) != names(lie) {
            return Err(ConformalError::GeneratorMismatch {
                left: names(self),
                right: names(lie),
            });
        }
        let u = self.universe.union(&lie.universe);
        let commutator = self.widen(&u)?.sub_adjacent()?;
        let lie = lie.widen(&u)?;
        let mut diffs = Vec::new();
        for ((i, j), expected) in lie.table.iter() {
            let actual = commutator.table.get(i, j);
            if actual != expected {
                diffs.push(EntryDiff {
                    pair: (
                        self.generators[i].name.clone(),
                        self.generators[j].name.clone(),
                    ),
                    expected: expected.render(&self.generators, None),
                    actual: actual.render(&self.generators, None),
                    difference: actual.try_sub(expected)?,
                });
            }
        }
        Ok(CompatibilityReport { diffs })
    }
}

/// One table entry where the commutator and the Lie bracket disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryDiff {
    pub pair: (String, String),
    pub expected: String,
    pub actual: String,
    pub difference: ModuleElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub diffs: Vec<EntryDiff>,
}

impl CompatibilityReport {
    pub fn compatible(&self) -> bool {
        self.diffs.is_empty()
    }
}
