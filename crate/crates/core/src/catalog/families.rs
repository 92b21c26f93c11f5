//! The eleven left-symmetric families over 𝒲(a,b), keyed by `T1`..`T11`.

use std::collections::BTreeMap;
use std::fmt;

use super::{make_w, AnsatzStructure, CatalogError};
use crate::arith::{FormalPoly, Rational, Scalar, Symbol, Universe, Var};
use crate::conformal::{ConformalAlgebra, Constraint};

/// Value of one family parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamValue {
    Symbolic,
    Value(Rational),
}

/// Parameter name → value; unset parameters stay symbolic.
pub type ParamAssignment = BTreeMap<String, ParamValue>;

/// The Lie algebra 𝒲(a,b) a family is compatible with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// 𝒲(a,b) with `a`, `b` family parameters.
    General,
    /// 𝒲(1,b) with `b` a family parameter.
    OneB,
    /// 𝒲(1,0).
    OneZero,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::General => "W(a,b)",
            Target::OneB => "W(1,b)",
            Target::OneZero => "W(1,0)",
        })
    }
}

/// A case of the case analysis and the family it lands in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaCase {
    pub case: &'static str,
    pub family: &'static str,
    /// Parameter specialisation under which the case equals the family.
    pub specialization: &'static str,
}

#[derive(Debug, Clone, Copy)]
enum Cond {
    NonZero(&'static str),
    NotAllZero(&'static [&'static str]),
}

impl Cond {
    fn to_constraint(self) -> Constraint {
        match self {
            Cond::NonZero(s) => Constraint::NonZero(Symbol::new(s)),
            Cond::NotAllZero(v) => Constraint::NotAllZero(v.iter().map(|s| Symbol::new(s)).collect()),
        }
    }
}

/// Values of `a`, `b`, `c` and the family parameters, as constants.
struct Env {
    u: Universe,
    values: BTreeMap<&'static str, FormalPoly>,
}

impl Env {
    fn get(&self, name: &str) -> FormalPoly {
        self.values
            .get(name)
            .cloned()
            .unwrap_or_else(|| panic!("family parameter `{name}` missing from environment"))
    }

    fn del(&self) -> FormalPoly {
        self.u.var(Var::Del)
    }

    fn lam(&self) -> FormalPoly {
        self.u.var(Var::Lam)
    }

    fn int(&self, n: i64) -> FormalPoly {
        self.u.int(n)
    }
}

/// One entry of the registry.
pub struct FamilySpec {
    pub id: &'static str,
    pub params: &'static [&'static str],
    pub target: Target,
    pub cases: &'static [LemmaCase],
    conds: &'static [Cond],
    /// `c` in terms of the other parameters, when it is not free.
    fixed_c: Option<fn(&Env) -> FormalPoly>,
    build: fn(&Env) -> AnsatzStructure,
}

impl FamilySpec {
    pub fn constraints(&self) -> Vec<Constraint> {
        self.conds.iter().map(|c| c.to_constraint()).collect()
    }

    /// Human-readable constraint list, `-` when unconstrained.
    pub fn constraint_text(&self) -> String {
        let cs = self.constraints();
        if cs.is_empty() {
            "-".to_owned()
        } else {
            cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        }
    }
}

impl fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilySpec")
            .field("id", &self.id)
            .field("params", &self.params)
            .field("target", &self.target)
            .finish()
    }
}

fn base(env: &Env) -> AnsatzStructure {
    AnsatzStructure::zero(env.get("c"))
}

fn del_lam(env: &Env) -> FormalPoly {
    &env.del() + &env.lam()
}

const T1_CASES: &[LemmaCase] = &[LemmaCase { case: "A1", family: "T1", specialization: "-" }];
const T2_CASES: &[LemmaCase] = &[
    LemmaCase { case: "B1", family: "T2", specialization: "b != 0" },
    LemmaCase { case: "B3", family: "T2", specialization: "b = 0" },
];
const T3_CASES: &[LemmaCase] = &[
    LemmaCase { case: "C1", family: "T3", specialization: "b != 0" },
    LemmaCase { case: "C2", family: "T3", specialization: "b = 0" },
];
const T4_CASES: &[LemmaCase] = &[LemmaCase { case: "A2", family: "T4", specialization: "a = 1, c = 2b" }];
const T5_CASES: &[LemmaCase] = &[LemmaCase { case: "B2", family: "T5", specialization: "a = 1, c = b" }];
const T6_CASES: &[LemmaCase] = &[LemmaCase { case: "A3", family: "T6", specialization: "a = 1, b = 0" }];
const T7_CASES: &[LemmaCase] = &[LemmaCase { case: "A4", family: "T7", specialization: "a = 1, b = c = 0" }];
const T8_CASES: &[LemmaCase] = &[LemmaCase { case: "A5", family: "T8", specialization: "a = 1, b = 0" }];
const T9_CASES: &[LemmaCase] = &[LemmaCase { case: "A6", family: "T9", specialization: "a = 1, b = c = 0" }];
const T10_CASES: &[LemmaCase] = &[LemmaCase { case: "B4", family: "T10", specialization: "a = 1, b = 0" }];
const T11_CASES: &[LemmaCase] = &[LemmaCase { case: "C3", family: "T11", specialization: "a = 1, b = 0" }];

static FAMILIES: &[FamilySpec] = &[
    FamilySpec {
        id: "T1",
        params: &["a", "b", "c"],
        target: Target::General,
        cases: T1_CASES,
        conds: &[],
        fixed_c: None,
        build: |e| AnsatzStructure {
            g2: &(&e.del() + &(&e.get("a") * &e.lam())) + &e.get("b"),
            ..base(e)
        },
    },
    FamilySpec {
        id: "T2",
        params: &["a", "b", "c"],
        target: Target::General,
        cases: T2_CASES,
        conds: &[Cond::NonZero("c")],
        fixed_c: None,
        build: |e| AnsatzStructure {
            g2: &(&(&e.del() + &(&e.get("a") * &e.lam())) + &e.get("b")) + &e.get("c"),
            h2: e.get("c"),
            ..base(e)
        },
    },
    FamilySpec {
        id: "T3",
        params: &["a", "b", "c"],
        target: Target::General,
        cases: T3_CASES,
        conds: &[],
        fixed_c: None,
        build: |e| AnsatzStructure {
            g2: &(&(&e.del() + &(&(&e.get("a") - &e.int(1)) * &e.lam())) + &e.get("b")) + &e.get("c"),
            h2: &del_lam(e) + &e.get("c"),
            ..base(e)
        },
    },
    FamilySpec {
        id: "T4",
        params: &["b", "k1"],
        target: Target::OneB,
        cases: T4_CASES,
        conds: &[Cond::NonZero("k1")],
        fixed_c: Some(|e| &e.int(2) * &e.get("b")),
        build: |e| AnsatzStructure {
            g2: &del_lam(e) + &e.get("b"),
            k1: e.get("k1"),
            ..base(e)
        },
    },
    FamilySpec {
        id: "T5",
        params: &["b", "d"],
        target: Target::OneB,
        cases: T5_CASES,
        conds: &[Cond::NonZero("b"), Cond::NonZero("d")],
        fixed_c: Some(|e| e.get("b")),
        build: |e| {
            let (b, d) = (e.get("b"), e.get("d"));
            AnsatzStructure {
                g1: d.clone(),
                h1: d.clone(),
                g2: &del_lam(e) + &(&e.int(2) * &b),
                h2: b.clone(),
                k1: (-&(&d * &d)).div_constant(&b).expect("b is a nonzero constant"),
                k2: -&d,
                ..base(e)
            }
        },
    },
    FamilySpec {
        id: "T6",
        params: &["c", "k2"],
        target: Target::OneZero,
        cases: T6_CASES,
        conds: &[Cond::NonZero("k2")],
        fixed_c: None,
        build: |e| AnsatzStructure {
            g2: del_lam(e),
            k2: e.get("k2"),
            ..base(e)
        },
    },
    FamilySpec {
        id: "T7",
        params: &["k1", "k2"],
        target: Target::OneZero,
        cases: T7_CASES,
        conds: &[Cond::NonZero("k1"), Cond::NonZero("k2")],
        fixed_c: Some(|e| e.int(0)),
        build: |e| AnsatzStructure {
            g2: del_lam(e),
            k1: e.get("k1"),
            k2: e.get("k2"),
            ..base(e)
        },
    },
    FamilySpec {
        id: "T8",
        params: &["c", "h1", "k2"],
        target: Target::OneZero,
        cases: T8_CASES,
        conds: &[Cond::NonZero("c"), Cond::NonZero("h1")],
        fixed_c: None,
        build: |e| {
            let (c, h1, k2) = (e.get("c"), e.get("h1"), e.get("k2"));
            AnsatzStructure {
                g1: h1.clone(),
                h1: h1.clone(),
                g2: del_lam(e),
                k1: (&h1 * &(&h1 - &k2)).div_constant(&c).expect("c is a nonzero constant"),
                k2,
                ..base(e)
            }
        },
    },
    FamilySpec {
        id: "T9",
        params: &["h1", "k1"],
        target: Target::OneZero,
        cases: T9_CASES,
        conds: &[Cond::NonZero("h1"), Cond::NonZero("k1")],
        fixed_c: Some(|e| e.int(0)),
        build: |e| AnsatzStructure {
            g1: e.get("h1"),
            h1: e.get("h1"),
            g2: del_lam(e),
            k1: e.get("k1"),
            k2: e.get("h1"),
            ..base(e)
        },
    },
    FamilySpec {
        id: "T10",
        params: &["c", "k1", "k2"],
        target: Target::OneZero,
        cases: T10_CASES,
        conds: &[Cond::NonZero("c"), Cond::NotAllZero(&["k1", "k2"])],
        fixed_c: None,
        build: |e| AnsatzStructure {
            g2: &del_lam(e) + &e.get("c"),
            h2: e.get("c"),
            k1: e.get("k1"),
            k2: e.get("k2"),
            ..base(e)
        },
    },
    FamilySpec {
        id: "T11",
        params: &["c", "k2"],
        target: Target::OneZero,
        cases: T11_CASES,
        conds: &[Cond::NonZero("k2")],
        fixed_c: None,
        build: |e| AnsatzStructure {
            g2: &e.del() + &e.get("c"),
            h2: &del_lam(e) + &e.get("c"),
            k2: e.get("k2"),
            ..base(e)
        },
    },
];

/// The registry, in id order `T1`..`T11`.
pub fn families() -> &'static [FamilySpec] {
    FAMILIES
}

pub fn family(id: &str) -> Result<&'static FamilySpec, CatalogError> {
    FAMILIES
        .iter()
        .find(|f| f.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| CatalogError::UnknownFamily(id.to_owned()))
}

/// A family instantiated at (possibly symbolic) parameter values.
#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub id: &'static str,
    pub algebra: ConformalAlgebra,
    pub ansatz: AnsatzStructure,
    /// Target 𝒲(a,b) constants.
    pub a: FormalPoly,
    pub b: FormalPoly,
    /// `a`, `b`, `c` and every family parameter, as they enter the table.
    pub env: BTreeMap<String, Scalar>,
}

impl FamilyInstance {
    pub fn target(&self) -> Result<ConformalAlgebra, CatalogError> {
        make_w(&self.a, &self.b)
    }

    /// An environment value; every family defines `a`, `b` and `c`.
    pub fn value(&self, name: &str) -> Scalar {
        self.env.get(name).cloned().unwrap_or_default()
    }

    pub fn universe(&self) -> &Universe {
        self.algebra.universe()
    }
}

fn canonical_param(name: &str) -> &str {
    if name == "h1_const" {
        "h1"
    } else {
        name
    }
}

/// Instantiates a family, rejecting values that violate its conditions.
///
/// Parameters absent from `assignment` stay symbolic; `h1_const` is
/// accepted as a synonym of `h1`.
pub fn make_family(id: &str, assignment: &ParamAssignment) -> Result<FamilyInstance, CatalogError> {
    let spec = family(id)?;
    let mut concrete: BTreeMap<Symbol, Rational> = BTreeMap::new();
    for (name, value) in assignment {
        let name = canonical_param(name);
        let Some(&p) = spec.params.iter().find(|p| **p == name) else {
            return Err(CatalogError::UnknownParameter {
                family: spec.id.to_owned(),
                param: name.to_owned(),
            });
        };
        if let ParamValue::Value(v) = value {
            concrete.insert(Symbol::new(p), v.clone());
        }
    }
    let constraints = spec.constraints();
    for c in &constraints {
        if c.holds(&concrete) == Some(false) {
            return Err(CatalogError::InvalidParameter {
                family: spec.id.to_owned(),
                constraint: c.to_string(),
            });
        }
    }
    let symbolic: Vec<&str> = spec
        .params
        .iter()
        .copied()
        .filter(|p| !concrete.contains_key(&Symbol::new(p)))
        .collect();
    let u = Universe::new(&symbolic);
    let mut values: BTreeMap<&'static str, FormalPoly> = BTreeMap::new();
    for &p in spec.params {
        let v = match concrete.get(&Symbol::new(p)) {
            Some(r) => u.rational(r.clone()),
            None => u.param(p)?,
        };
        values.insert(p, v);
    }
    match spec.target {
        Target::General => {}
        Target::OneB => {
            values.insert("a", u.int(1));
        }
        Target::OneZero => {
            values.insert("a", u.int(1));
            values.insert("b", u.int(0));
        }
    }
    let mut env = Env { u: u.clone(), values };
    if let Some(fixed) = spec.fixed_c {
        let c = fixed(&env);
        env.values.insert("c", c);
    }
    let ansatz = (spec.build)(&env);
    let open: Vec<Constraint> = constraints
        .into_iter()
        .filter(|c| c.holds(&concrete).is_none())
        .collect();
    let algebra = ansatz.to_algebra(spec.id)?.with_constraints(open);
    let scalars = env
        .values
        .iter()
        .map(|(k, v)| ((*k).to_owned(), v.as_scalar().expect("parameters are constants")))
        .collect();
    Ok(FamilyInstance {
        id: spec.id,
        algebra,
        ansatz,
        a: env.get("a"),
        b: env.get("b"),
        env: scalars,
    })
}
