//! Folding a parsed definition into a [`ConformalAlgebra`], and the
//! reverse direction for export.

use std::collections::BTreeMap;

use super::ast::{AlgebraDef, Expr, ExprKind};
use super::{parse_algebra, ParseError, SourceSpan};
use crate::arith::{FormalPoly, Scalar, Symbol, Universe, Var};
use crate::conformal::{ConformalAlgebra, Constraint, ModuleElement};

/// Upper bound on `terms(a) * terms(b)` for a single multiplication.
const MAX_PRODUCT_WORK: usize = 200_000;
/// Upper bound on the total degree of any intermediate polynomial.
const MAX_DEGREE: u32 = 256;
/// Upper bound on the bit length of any numeric coefficient.
const MAX_BITS: u64 = 8192;

/// A value during folding: a scalar polynomial plus a combination of
/// generators. Bracket values must end with a zero scalar part.
#[derive(Clone)]
struct Lin {
    scalar: FormalPoly,
    vector: Vec<FormalPoly>,
}

impl Lin {
    fn scalar(p: FormalPoly, rank: usize) -> Lin {
        let z = p.universe().zero();
        Lin {
            scalar: p,
            vector: vec![z; rank],
        }
    }

    fn has_vector(&self) -> bool {
        self.vector.iter().any(|p| !p.is_zero())
    }

    fn map2(&self, other: &Lin, f: impl Fn(&FormalPoly, &FormalPoly) -> FormalPoly) -> Lin {
        Lin {
            scalar: f(&self.scalar, &other.scalar),
            vector: self.vector.iter().zip(&other.vector).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn polys(&self) -> impl Iterator<Item = &FormalPoly> {
        std::iter::once(&self.scalar).chain(&self.vector)
    }
}

struct Folder<'a> {
    universe: Universe,
    generators: BTreeMap<&'a str, usize>,
    rank: usize,
}

fn too_big(p: &FormalPoly) -> Option<&'static str> {
    for (exp, s) in p.terms() {
        if exp.iter().sum::<u32>() > MAX_DEGREE {
            return Some("degree");
        }
        for part in [s.numer(), s.denom()] {
            for (mono, r) in part.terms() {
                if mono.total_degree() > MAX_DEGREE {
                    return Some("degree");
                }
                if r.numer().bits() > MAX_BITS || r.denom().bits() > MAX_BITS {
                    return Some("coefficient size");
                }
            }
        }
    }
    None
}

impl Folder<'_> {
    fn guard(&self, v: Lin, span: SourceSpan) -> Result<Lin, ParseError> {
        if let Some(what) = v.polys().find_map(too_big) {
            return Err(ParseError::semantic(span, format!("expression exceeds the {what} limit")));
        }
        Ok(v)
    }

    fn mul(&self, a: &Lin, b: &Lin, span: SourceSpan) -> Result<Lin, ParseError> {
        if a.has_vector() && b.has_vector() {
            return Err(ParseError::semantic(span, "product of two generator terms is not linear"));
        }
        let work: usize = a.polys().map(FormalPoly::len).sum::<usize>() * b.polys().map(FormalPoly::len).sum::<usize>();
        if work > MAX_PRODUCT_WORK {
            return Err(ParseError::semantic(span, "expression expands to too many terms"));
        }
        let vector = a
            .vector
            .iter()
            .zip(&b.vector)
            .map(|(va, vb)| &(&a.scalar * vb) + &(va * &b.scalar))
            .collect();
        self.guard(
            Lin {
                scalar: &a.scalar * &b.scalar,
                vector,
            },
            span,
        )
    }

    fn fold(&self, e: &Expr) -> Result<Lin, ParseError> {
        let u = &self.universe;
        match &e.kind {
            ExprKind::Number(r) => Ok(Lin::scalar(u.rational(r.clone()), self.rank)),
            ExprKind::Ident(name) => {
                if let Some(&i) = self.generators.get(name.as_str()) {
                    let mut v = Lin::scalar(u.zero(), self.rank);
                    v.vector[i] = u.one();
                    return Ok(v);
                }
                let p = match Var::from_name(name) {
                    Some(var @ (Var::Del | Var::Lam)) => u.var(var),
                    _ => u
                        .param(name)
                        .map_err(|_| ParseError::semantic(e.span, format!("unknown symbol `{name}`")))?,
                };
                Ok(Lin::scalar(p, self.rank))
            }
            ExprKind::Neg(a) => {
                let a = self.fold(a)?;
                Ok(Lin {
                    scalar: -&a.scalar,
                    vector: a.vector.iter().map(|p| -p).collect(),
                })
            }
            ExprKind::Add(a, b) => Ok(self.fold(a)?.map2(&self.fold(b)?, |x, y| x + y)),
            ExprKind::Sub(a, b) => Ok(self.fold(a)?.map2(&self.fold(b)?, |x, y| x - y)),
            ExprKind::Mul(a, b) => self.mul(&self.fold(a)?, &self.fold(b)?, e.span),
            ExprKind::Div(a, b) => {
                let num = self.fold(a)?;
                let den = self.fold(b)?;
                if den.has_vector() || den.scalar.as_scalar().is_none() {
                    return Err(ParseError::semantic(
                        b.span,
                        format!("divisor `{b}` must be free of del, lam and generators"),
                    ));
                }
                if den.scalar.is_zero() {
                    return Err(ParseError::semantic(b.span, format!("division by zero in `{e}`")));
                }
                let div = |p: &FormalPoly| {
                    p.div_constant(&den.scalar)
                        .map_err(|err| ParseError::semantic(b.span, err.to_string()))
                };
                let scalar = div(&num.scalar)?;
                let vector = num.vector.iter().map(div).collect::<Result<Vec<_>, _>>()?;
                self.guard(Lin { scalar, vector }, e.span)
            }
            ExprKind::Pow(a, n) => {
                let base = self.fold(a)?;
                if base.has_vector() && *n != 1 {
                    return Err(ParseError::semantic(e.span, "a generator term cannot be raised to a power"));
                }
                let mut acc = Lin::scalar(u.one(), self.rank);
                for _ in 0..*n {
                    acc = self.mul(&acc, &base, e.span)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Folds every clause into an exact table entry and records constraints.
pub fn elaborate(def: &AlgebraDef) -> Result<ConformalAlgebra, ParseError> {
    let names: Vec<&str> = def.params.iter().map(|p| p.name.as_str()).collect();
    let universe = Universe::new(&names);
    let generator_names: Vec<&str> = def.generators.iter().map(|g| g.name.as_str()).collect();
    let header = def
        .generators
        .first()
        .map(|g| g.span)
        .unwrap_or(SourceSpan { line: 1, column: 1, length: 1 });
    let mut alg = ConformalAlgebra::new(&def.name, def.kind, universe.clone(), &generator_names)
        .map_err(|e| ParseError::semantic(header, e.to_string()))?;
    let folder = Folder {
        universe,
        generators: generator_names.iter().enumerate().map(|(i, n)| (*n, i)).collect(),
        rank: generator_names.len(),
    };
    for clause in &def.brackets {
        let value = folder.fold(&clause.value)?;
        if !value.scalar.is_zero() {
            return Err(ParseError::semantic(
                clause.value.span,
                format!(
                    "bracket value `{}` has a part `{}` not attached to a generator",
                    clause.value, value.scalar
                ),
            ));
        }
        let i = folder.generators[clause.left.as_str()];
        let j = folder.generators[clause.right.as_str()];
        alg.set_entry(i, j, ModuleElement::from_components(value.vector))
            .map_err(|e| ParseError::semantic(clause.value.span, e.to_string()))?;
    }
    let mut constraints: Vec<Constraint> = def
        .params
        .iter()
        .filter(|p| p.nonzero)
        .map(|p| Constraint::NonZero(Symbol::new(&p.name)))
        .collect();
    constraints.extend(
        def.not_all_zero
            .iter()
            .map(|n| Constraint::NotAllZero(n.params.iter().map(|p| Symbol::new(p)).collect())),
    );
    Ok(alg.with_constraints(constraints))
}

pub fn parse_and_elaborate(text: &str) -> Result<ConformalAlgebra, ParseError> {
    elaborate(&parse_algebra(text)?)
}

fn identifier(name: &str) -> String {
    let mut s: String = name.chars().filter(char::is_ascii_alphanumeric).collect();
    if !s.starts_with(|c: char| c.is_ascii_alphabetic()) {
        s.insert(0, 'A');
    }
    s
}

fn render_value(alg: &ConformalAlgebra, entry: &ModuleElement) -> String {
    let mut parts = Vec::new();
    for (p, g) in entry.components().iter().zip(alg.generators()) {
        if p.is_zero() {
            continue;
        }
        if p.as_scalar().is_some_and(|s| s == Scalar::one()) {
            parts.push(g.name.clone());
        } else {
            parts.push(format!("({p})*{}", g.name));
        }
    }
    parts.join(" + ")
}

/// Writes an algebra in `.lsca` syntax. Zero entries are left to
/// `default zero;`; the name is reduced to its alphanumeric characters.
pub fn export(alg: &ConformalAlgebra) -> String {
    let mut out = format!("algebra {} {};\n", identifier(&alg.name), alg.kind.keyword());
    let nonzero: Vec<Symbol> = alg
        .constraints()
        .iter()
        .filter_map(|c| match c {
            Constraint::NonZero(s) => Some(*s),
            Constraint::NotAllZero(_) => None,
        })
        .collect();
    let params: Vec<String> = alg
        .universe()
        .symbols()
        .iter()
        .map(|s| {
            if nonzero.contains(s) {
                format!("{s} nonzero")
            } else {
                s.to_string()
            }
        })
        .collect();
    if !params.is_empty() {
        out.push_str(&format!("params {};\n", params.join(", ")));
    }
    for c in alg.constraints() {
        if let Constraint::NotAllZero(syms) = c {
            let names: Vec<String> = syms.iter().map(|s| s.to_string()).collect();
            out.push_str(&format!("nonzero ({});\n", names.join(", ")));
        }
    }
    let gens: Vec<&str> = alg.generators().iter().map(|g| g.name.as_str()).collect();
    out.push_str(&format!("generators {};\n", gens.join(", ")));
    let mut any_zero = false;
    for ((i, j), entry) in alg.table().iter() {
        if entry.is_zero() {
            any_zero = true;
            continue;
        }
        out.push_str(&format!(
            "bracket [{} _ {}] = {};\n",
            gens[i],
            gens[j],
            render_value(alg, entry)
        ));
    }
    if any_zero {
        out.push_str("default zero;\n");
    }
    out
}
