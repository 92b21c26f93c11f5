//! Refutation witnesses for the branches excluded by the classification.
//!
//! Each witness is a concrete ansatz shape (or a reduced one-variable
//! identity) lying in an excluded branch, together with the equation it
//! violates and a frozen rational point where the violation is visible.
//! Points were found by [`search_point`]; [`verify_refutations`] re-evaluates
//! every witness and reports a [`CatalogError::StaleWitness`] if the frozen
//! value no longer matches.

use std::fmt;

use super::{case_b_cleared, case_c_collapse, equation_residuals, AnsatzStructure, CatalogError};
use crate::arith::{rat, ratio, Assignment, FormalPoly, Rational, Universe, Var};

/// Values tried per free variable, in order.
pub const SEARCH_VALUES: [i64; 5] = [0, 1, -1, 2, -2];

/// The identity a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessEquation {
    /// One of `E1`..`E14`.
    System(usize),
    /// [`case_c_collapse`].
    CaseCCollapse,
    /// [`case_b_cleared`].
    CaseBCleared,
}

impl fmt::Display for WitnessEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessEquation::System(k) => write!(f, "E{k}"),
            WitnessEquation::CaseCCollapse => f.write_str("case-c-collapse"),
            WitnessEquation::CaseBCleared => f.write_str("case-b-cleared"),
        }
    }
}

/// Builds the witness residual over the witness universe.
type Builder = fn(&Universe) -> Result<FormalPoly, CatalogError>;

pub struct RefutationWitness {
    pub branch: &'static str,
    pub summary: &'static str,
    pub equation: WitnessEquation,
    /// Symbolic parameters of the witness.
    pub params: &'static [&'static str],
    /// `(param, v)`: the branch requires `param != v`.
    pub excluded: &'static [(&'static str, i64)],
    /// Frozen evaluation point, parameters and formal variables alike.
    pub point: &'static [(&'static str, i64)],
    /// Frozen residual value `(numerator, denominator)` at `point`.
    pub expected: (i64, i64),
    build: Builder,
}

impl fmt::Debug for RefutationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RefutationWitness")
            .field("branch", &self.branch)
            .field("equation", &self.equation)
            .field("point", &self.point)
            .finish()
    }
}

impl RefutationWitness {
    pub fn universe(&self) -> Universe {
        Universe::new(self.params)
    }

    pub fn residual(&self) -> Result<FormalPoly, CatalogError> {
        (self.build)(&self.universe())
    }

    pub fn assignment(&self) -> Assignment {
        to_assignment(self.point.iter().map(|(n, v)| (*n, rat(*v))))
    }

    pub fn expected_value(&self) -> Rational {
        ratio(self.expected.0, self.expected.1)
    }

    /// The same witness frozen at a different point and value.
    pub fn refrozen(&self, point: &'static [(&'static str, i64)], expected: (i64, i64)) -> RefutationWitness {
        RefutationWitness {
            point,
            expected,
            ..*self
        }
    }

    /// Parameters that [`search_point`] holds fixed, with their values.
    pub fn fixed_params(&self) -> Vec<(&'static str, i64)> {
        let mut fixed: Vec<(&'static str, i64)> = Vec::new();
        for &(p, _) in self.excluded {
            if fixed.iter().any(|(q, _)| *q == p) {
                continue;
            }
            let v = SEARCH_VALUES
                .iter()
                .copied()
                .find(|v| !self.excluded.iter().any(|(q, w)| *q == p && w == v))
                .expect("a search value survives");
            fixed.push((p, v));
        }
        fixed
    }
}

fn to_assignment<'a>(values: impl Iterator<Item = (&'a str, Rational)>) -> Assignment {
    values.fold(Assignment::new(), |acc, (name, v)| match Var::from_name(name) {
        Some(var) => acc.with_var(var, v),
        None => acc.with_param(name, v),
    })
}

/// Finds the first point, in lexicographic order over [`SEARCH_VALUES`],
/// where `residual` is nonzero.
///
/// `fixed` parameters keep their value; the remaining parameters (in sorted
/// order) and then `del`, `lam`, `mu`, `nu` (those that occur) are searched.
pub fn search_point(residual: &FormalPoly, fixed: &[(&str, i64)]) -> Option<(Vec<(String, i64)>, Rational)> {
    search_point_where(residual, fixed, |_| true, usize::MAX)
}

/// [`search_point`] restricted to points accepted by `admissible`, giving up
/// after `max_points` candidates.
pub fn search_point_where(
    residual: &FormalPoly,
    fixed: &[(&str, i64)],
    admissible: impl Fn(&Assignment) -> bool,
    max_points: usize,
) -> Option<(Vec<(String, i64)>, Rational)> {
    let mut free: Vec<String> = residual
        .universe()
        .symbols()
        .iter()
        .map(|s| s.as_str())
        .filter(|s| !fixed.iter().any(|(f, _)| f == s))
        .map(str::to_owned)
        .collect();
    let vars = residual.vars();
    free.extend(
        [Var::Del, Var::Lam, Var::Mu, Var::Nu]
            .into_iter()
            .filter(|v| vars.contains(v))
            .map(|v| v.name().to_owned()),
    );
    let n = free.len();
    let base = SEARCH_VALUES.len();
    let total = base.checked_pow(n as u32)?.min(max_points);
    for index in 0..total {
        let mut digits = vec![0usize; n];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = rest % base;
            rest /= base;
        }
        let mut point: Vec<(String, i64)> = fixed.iter().map(|(p, v)| ((*p).to_owned(), *v)).collect();
        point.extend(free.iter().zip(&digits).map(|(name, d)| (name.clone(), SEARCH_VALUES[*d])));
        let at = to_assignment(point.iter().map(|(n, v)| (n.as_str(), rat(*v))));
        if !admissible(&at) {
            continue;
        }
        match residual.eval(&at) {
            Ok(v) if v != rat(0) => return Some((point, v)),
            _ => {}
        }
    }
    None
}

/// Evaluation of one witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessOutcome {
    pub branch: &'static str,
    pub equation: WitnessEquation,
    pub point: Assignment,
    pub value: Rational,
    /// The residual, rendered with at most a handful of terms.
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RefutationReport {
    pub outcomes: Vec<WitnessOutcome>,
}

impl RefutationReport {
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }
}

/// Re-evaluates every witness at its frozen point.
pub fn verify_refutations(witnesses: &[RefutationWitness]) -> Result<RefutationReport, CatalogError> {
    let mut outcomes = Vec::with_capacity(witnesses.len());
    for w in witnesses {
        let stale = |reason: String| CatalogError::StaleWitness {
            branch: w.branch.to_owned(),
            reason,
        };
        for &(p, v) in w.excluded {
            let at = w.point.iter().find(|(n, _)| *n == p).map(|(_, x)| *x);
            if at == Some(v) {
                return Err(stale(format!("frozen point sets {p} = {v}, which the branch excludes")));
            }
        }
        let residual = w.residual()?;
        let point = w.assignment();
        let value = residual.eval(&point).map_err(|e| stale(e.to_string()))?;
        if value == rat(0) {
            return Err(stale(format!("{} vanishes at {point}", w.equation)));
        }
        if value != w.expected_value() {
            return Err(stale(format!(
                "{} evaluates to {value} at {point}, frozen value is {}",
                w.equation,
                w.expected_value()
            )));
        }
        outcomes.push(WitnessOutcome {
            branch: w.branch,
            equation: w.equation,
            point,
            value,
            residual: residual.render_capped(6),
        });
    }
    Ok(RefutationReport { outcomes })
}

fn var(u: &Universe, v: Var) -> FormalPoly {
    u.var(v)
}

fn p(u: &Universe, name: &str) -> FormalPoly {
    u.param(name).expect("witness parameter declared")
}

fn system(s: &AnsatzStructure, a: &FormalPoly, b: &FormalPoly, k: usize) -> Result<FormalPoly, CatalogError> {
    Ok(equation_residuals(s, a, b)?.swap_remove(k - 1).value)
}

/// `∂ + x λ + y`.
fn lin(u: &Universe, x: &FormalPoly, y: &FormalPoly) -> FormalPoly {
    &(&var(u, Var::Del) + &(x * &var(u, Var::Lam))) + y
}

static WITNESSES: &[RefutationWitness] = &[
    RefutationWitness {
        branch: "skew-forced-h2-without-g2",
        summary: "g2 = 0 with h2 the skew partner of the W(a,b) bracket",
        equation: WitnessEquation::System(2),
        params: &["a", "b", "c"],
        excluded: &[],
        point: &[("a", 0), ("b", 0), ("c", 0), ("del", 1), ("lam", 0), ("mu", 0)],
        expected: (-1, 1),
        build: |u| {
            let (a, b) = (p(u, "a"), p(u, "b"));
            let d = var(u, Var::Del);
            let s = AnsatzStructure {
                h2: &(&(&(&a - &u.one()) * &d) + &(&a * &var(u, Var::Lam))) - &b,
                ..AnsatzStructure::zero(p(u, "c"))
            };
            system(&s, &a, &b, 2)
        },
    },
    RefutationWitness {
        branch: "g2-doubled-derivative",
        summary: "g2 = 2del + a lam + b, h2 = del",
        equation: WitnessEquation::System(4),
        params: &["a", "b", "c"],
        excluded: &[],
        point: &[("a", 0), ("b", 0), ("c", 0), ("del", 1), ("lam", 0), ("mu", 1)],
        expected: (2, 1),
        build: |u| {
            let (a, b) = (p(u, "a"), p(u, "b"));
            let d = var(u, Var::Del);
            let s = AnsatzStructure {
                g2: &lin(u, &a, &b) + &d,
                h2: d,
                ..AnsatzStructure::zero(p(u, "c"))
            };
            system(&s, &a, &b, 4)
        },
    },
    RefutationWitness {
        branch: "g2-over-weighted",
        summary: "g2 = del + (a+1) lam + b, h2 = -lam - del",
        equation: WitnessEquation::System(2),
        params: &["a", "b", "c"],
        excluded: &[],
        point: &[("a", 0), ("b", 0), ("c", 0), ("del", 0), ("lam", 1), ("mu", 0)],
        expected: (2, 1),
        build: |u| {
            let (a, b) = (p(u, "a"), p(u, "b"));
            let s = AnsatzStructure {
                g2: lin(u, &(&a + &u.one()), &b),
                h2: -&(&var(u, Var::Lam) + &var(u, Var::Del)),
                ..AnsatzStructure::zero(p(u, "c"))
            };
            system(&s, &a, &b, 2)
        },
    },
    RefutationWitness {
        branch: "g2-under-weighted-unshifted",
        summary: "g2 = del + (a-1) lam + b, h2 = lam + del with c != 0",
        equation: WitnessEquation::System(2),
        params: &["a", "b", "c"],
        excluded: &[("c", 0)],
        point: &[("c", 1), ("a", 0), ("b", 0), ("del", 0), ("mu", 1)],
        expected: (1, 1),
        build: |u| {
            let (a, b) = (p(u, "a"), p(u, "b"));
            let s = AnsatzStructure {
                g2: lin(u, &(&a - &u.one()), &b),
                h2: &var(u, Var::Lam) + &var(u, Var::Del),
                ..AnsatzStructure::zero(p(u, "c"))
            };
            system(&s, &a, &b, 2)
        },
    },
    RefutationWitness {
        branch: "plain-w-constant-k1-weight-two",
        summary: "a = 2, b = 0, g2 = del + 2 lam, k1 = e0 constant",
        equation: WitnessEquation::System(5),
        params: &["c", "e0"],
        excluded: &[("e0", 0)],
        point: &[("e0", 1), ("c", 0), ("lam", 1)],
        expected: (2, 1),
        build: |u| {
            let (a, b) = (u.int(2), u.int(0));
            let s = AnsatzStructure {
                g2: lin(u, &a, &b),
                k1: p(u, "e0"),
                ..AnsatzStructure::zero(p(u, "c"))
            };
            system(&s, &a, &b, 5)
        },
    },
    RefutationWitness {
        branch: "plain-w-linear-k1",
        summary: "a = 1, g2 = del + lam + b, k1 = e1 lam",
        equation: WitnessEquation::System(13),
        params: &["b", "c", "e1"],
        excluded: &[("e1", 0)],
        point: &[("e1", 1), ("b", 0), ("c", 0), ("del", 0), ("lam", 1)],
        expected: (2, 1),
        build: |u| {
            let (a, b) = (u.int(1), p(u, "b"));
            let s = AnsatzStructure {
                g2: lin(u, &a, &b),
                k1: &p(u, "e1") * &var(u, Var::Lam),
                ..AnsatzStructure::zero(p(u, "c"))
            };
            system(&s, &a, &b, 13)
        },
    },
    RefutationWitness {
        branch: "plain-w-constant-k1-k2-shifted",
        summary: "a = 1, b = 0, g2 = del + lam, constant k1 != 0 and k2 with c != 0",
        equation: WitnessEquation::System(5),
        params: &["K1", "K2", "c"],
        excluded: &[("K1", 0), ("c", 0)],
        point: &[("K1", 1), ("c", 1), ("K2", 0)],
        expected: (-1, 1),
        build: |u| {
            let (a, b) = (u.int(1), u.int(0));
            let s = AnsatzStructure {
                g2: lin(u, &a, &b),
                k1: p(u, "K1"),
                k2: p(u, "K2"),
                ..AnsatzStructure::zero(p(u, "c"))
            };
            system(&s, &a, &b, 5)
        },
    },
    RefutationWitness {
        branch: "plain-w-equal-h1-k2-extra-k1",
        summary: "a = 1, b = 0, g2 = del + lam, g1 = h1 = k2 = H, k1 = K != 0, c != 0",
        equation: WitnessEquation::System(5),
        params: &["H", "K", "c"],
        excluded: &[("H", 0), ("K", 0), ("c", 0)],
        point: &[("H", 1), ("K", 1), ("c", 1)],
        expected: (-1, 1),
        build: |u| {
            let (a, b) = (u.int(1), u.int(0));
            let h = p(u, "H");
            let s = AnsatzStructure {
                g1: h.clone(),
                h1: h.clone(),
                g2: lin(u, &a, &b),
                k1: p(u, "K"),
                k2: h,
                ..AnsatzStructure::zero(p(u, "c"))
            };
            system(&s, &a, &b, 5)
        },
    },
    RefutationWitness {
        branch: "constant-h2-constant-h1-general-weight",
        summary: "h2 = c, g2 = del + a lam + b + c, g1 = h1 = d with a != 1, b != 0",
        equation: WitnessEquation::System(1),
        params: &["a", "b", "c", "d"],
        excluded: &[("a", 1), ("b", 0), ("c", 0), ("d", 0)],
        point: &[("a", 0), ("b", 1), ("c", 1), ("d", 1), ("lam", 1)],
        expected: (-1, 1),
        build: |u| {
            let (a, b, c, d) = (p(u, "a"), p(u, "b"), p(u, "c"), p(u, "d"));
            let s = AnsatzStructure {
                g1: d.clone(),
                h1: d,
                g2: lin(u, &a, &(&b + &c)),
                h2: c.clone(),
                ..AnsatzStructure::zero(c)
            };
            system(&s, &a, &b, 1)
        },
    },
    RefutationWitness {
        branch: "constant-h2-quadratic-h1-weight-three",
        summary: "a = 3, b = 0, h2 = c, quadratic g1, h1 and k2 in one scale q",
        equation: WitnessEquation::System(6),
        params: &["c", "q"],
        excluded: &[("c", 0), ("q", 0)],
        point: &[("c", 1), ("q", 1), ("del", 0), ("lam", 1)],
        expected: (-4, 1),
        build: |u| {
            let (a, b, c, q) = (u.int(3), u.int(0), p(u, "c"), p(u, "q"));
            let (l, d) = (var(u, Var::Lam), var(u, Var::Del));
            let n = |k: i64| u.int(k);
            let h1 = &(&(&(&(&(&n(2) * &(&d * &d)) + &(&(&n(3) * &c) * &d)) + &(&(&n(3) * &c) * &l))
                + &(&(&n(3) * &d) * &l))
                + &(&l * &l))
                * &q;
            let g1 = &(&(&(&l * &l) - &(&(&n(3) * &c) * &l)) - &(&l * &d)) * &q;
            let k2 = -&(&(&(&l * &l) + &(&d * &l)) * &q);
            let s = AnsatzStructure {
                g1,
                h1,
                g2: lin(u, &a, &c),
                h2: c.clone(),
                k2,
                ..AnsatzStructure::zero(c)
            };
            system(&s, &a, &b, 6)
        },
    },
    RefutationWitness {
        branch: "constant-h2-linear-h1-weight-two",
        summary: "a = 2, b = 0, h2 = c, h1 = (lam + del) h, g1 = -h lam, k2 = h c",
        equation: WitnessEquation::System(5),
        params: &["c", "h"],
        excluded: &[("c", 0), ("h", 0)],
        point: &[("c", 1), ("h", 1), ("del", 0), ("lam", 1)],
        expected: (2, 1),
        build: |u| {
            let (a, b, c, h) = (u.int(2), u.int(0), p(u, "c"), p(u, "h"));
            let (l, d) = (var(u, Var::Lam), var(u, Var::Del));
            let h2c = (&h * &h).div_constant(&c)?;
            let k1 = -&(&h2c * &(&(&d * &d) + &(&l * &(&d + &l))));
            let s = AnsatzStructure {
                g1: -&(&h * &l),
                h1: &(&l + &d) * &h,
                g2: lin(u, &a, &c),
                h2: c.clone(),
                k1,
                k2: &h * &c,
                ..AnsatzStructure::zero(c)
            };
            system(&s, &a, &b, 5)
        },
    },
    RefutationWitness {
        branch: "shifted-h2-linear-h1-unit-weight",
        summary: "a = 1, c = b, g2 = del + 2b, h2 = del + lam + b, h1 = (lam + del + c) d0",
        equation: WitnessEquation::System(13),
        params: &["b", "d0"],
        excluded: &[("d0", 0)],
        point: &[("d0", 1), ("b", 0), ("del", 0), ("lam", 1)],
        expected: (-2, 1),
        build: |u| {
            let (a, b, d0) = (u.int(1), p(u, "b"), p(u, "d0"));
            let c = b.clone();
            let (l, d) = (var(u, Var::Lam), var(u, Var::Del));
            let shifted = &(&l + &d) + &c;
            let s = AnsatzStructure {
                g1: &(&c - &l) * &d0,
                h1: &shifted * &d0,
                g2: &d + &(&u.int(2) * &b),
                h2: &(&d + &l) + &b,
                k1: -&(&(&d0 * &d0) * &shifted),
                k2: -&(&d0 * &shifted),
                ..AnsatzStructure::zero(c)
            };
            system(&s, &a, &b, 13)
        },
    },
    RefutationWitness {
        branch: "shifted-h2-quartic-weight-five",
        summary: "h = lam^4 with a = 5",
        equation: WitnessEquation::CaseCCollapse,
        params: &["c"],
        excluded: &[],
        point: &[("c", 0), ("del", 1)],
        expected: (30, 1),
        build: |u| case_c_collapse(&var(u, Var::Lam).pow(4), &u.int(5), &p(u, "c")),
    },
    RefutationWitness {
        branch: "shifted-h2-cubic-weight-four",
        summary: "h = lam^3 with a = 4",
        equation: WitnessEquation::CaseCCollapse,
        params: &["c"],
        excluded: &[],
        point: &[("c", 1), ("del", 1)],
        expected: (-12, 1),
        build: |u| case_c_collapse(&var(u, Var::Lam).pow(3), &u.int(4), &p(u, "c")),
    },
    RefutationWitness {
        branch: "shifted-h2-quadratic-h1-weight-three",
        summary: "a = 3, b = 0, h2 = del + lam + c, h1 = q (lam + del)(lam + del + c)",
        equation: WitnessEquation::System(6),
        params: &["c", "q"],
        excluded: &[("q", 0)],
        point: &[("q", 1), ("c", 0), ("del", 1), ("lam", 1)],
        expected: (4, 1),
        build: |u| {
            let (a, b, c, q) = (u.int(3), u.int(0), p(u, "c"), p(u, "q"));
            let (l, d) = (var(u, Var::Lam), var(u, Var::Del));
            let ld = &l + &d;
            let s = AnsatzStructure {
                g1: &(&q * &l) * &(&l - &c),
                h1: &(&q * &ld) * &(&ld + &c),
                g2: lin(u, &u.int(2), &c),
                h2: &ld + &c,
                k2: -&(&(&q * &(&(&l * &l) + &(&l * &d))) + &(&q * &(&d * &d))),
                ..AnsatzStructure::zero(c)
            };
            system(&s, &a, &b, 6)
        },
    },
    RefutationWitness {
        branch: "shifted-h2-linear-h1-unit-weight-unshifted",
        summary: "a = 1, b = c = 0, g2 = del, h2 = del + lam, h1 = H (lam + del), g1 = k2 = -H lam",
        equation: WitnessEquation::System(14),
        params: &["H"],
        excluded: &[("H", 0)],
        point: &[("H", 1), ("del", 0), ("lam", 1)],
        expected: (-2, 1),
        build: |u| {
            let (a, b, h) = (u.int(1), u.int(0), p(u, "H"));
            let (l, d) = (var(u, Var::Lam), var(u, Var::Del));
            let s = AnsatzStructure {
                g1: -&(&h * &l),
                h1: &h * &(&l + &d),
                g2: d.clone(),
                h2: &d + &l,
                k2: -&(&h * &l),
                ..AnsatzStructure::zero(u.int(0))
            };
            system(&s, &a, &b, 14)
        },
    },
    RefutationWitness {
        branch: "constant-h2-cubic-weight-three",
        summary: "h = lam^3 with a = 3 in the cleared constant-h2 identity",
        equation: WitnessEquation::CaseBCleared,
        params: &["c"],
        excluded: &[("c", 0)],
        point: &[("c", 1), ("del", 1), ("lam", 1), ("mu", 0)],
        expected: (-44, 1),
        build: |u| case_b_cleared(&var(u, Var::Lam).pow(3), &u.int(3), &p(u, "c")),
    },
];

/// All witnesses, in a fixed order.
pub fn list_refutation_witnesses() -> &'static [RefutationWitness] {
    WITNESSES
}
