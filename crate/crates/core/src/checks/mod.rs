//! Named verification suites behind one trait.
//!
//! Every suite implements [`Check`] and is registered under a short name in
//! a [`CheckRegistry`]; front ends select suites by name at runtime. A check
//! runs against a [`Subject`] (an algebra, plus its family instance when it
//! came from the catalog) and returns a [`CheckOutcome`]. A failing outcome
//! always carries a [`Counterexample`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{Assignment, FormalPoly, Rational, Scalar, Var};
use crate::catalog::{
    equation_residuals, list_refutation_witnesses, make_virasoro, make_w, search_point_where, verify_refutations,
    AnsatzStructure, CatalogError, FamilyInstance,
};
use crate::coeff::{verify_corollary_instance, verify_left_symmetry_window, verify_lie_window, ProductReport};
use crate::conformal::{AlgebraKind, ConformalAlgebra, ConformalError, Constraint, ModuleElement, Residual};

/// Candidate points tried when looking for a nonzero evaluation.
const POINT_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("check `{check}` does not apply: {reason}")]
    NotApplicable { check: &'static str, reason: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Conformal(#[from] ConformalError),
}

/// What is being verified.
#[derive(Debug, Clone)]
pub struct Subject {
    /// Family id or file name, echoed in reports.
    pub label: String,
    pub algebra: ConformalAlgebra,
    pub family: Option<FamilyInstance>,
}

impl Subject {
    pub fn from_family(inst: FamilyInstance) -> Subject {
        Subject {
            label: inst.id.to_owned(),
            algebra: inst.algebra.clone(),
            family: Some(inst),
        }
    }

    pub fn from_algebra(label: impl Into<String>, algebra: ConformalAlgebra) -> Subject {
        Subject {
            label: label.into(),
            algebra,
            family: None,
        }
    }

    /// The Lie algebra a compatible structure should reproduce, and the
    /// 𝒲(a,b) constants when the algebra has generators `L, W`.
    ///
    /// Catalog families know their target. For other algebras it is read off
    /// the Lie table itself (or the commutator of a non-Lie table): rank one
    /// means Virasoro, and for rank two `[L_λ W]` must be `(∂+aλ+b)W`.
    pub fn target(&self) -> Result<Target, CheckError> {
        if let Some(inst) = &self.family {
            return Ok(Target {
                algebra: inst.target()?,
                ab: Some((inst.a.clone(), inst.b.clone())),
            });
        }
        let not_applicable = |reason: String| CheckError::NotApplicable { check: "target", reason };
        let lie = match self.algebra.kind {
            AlgebraKind::Lie => self.algebra.clone(),
            _ => self.algebra.sub_adjacent()?,
        };
        let names: Vec<&str> = lie.generators().iter().map(|g| g.name.as_str()).collect();
        match names.as_slice() {
            ["L"] => Ok(Target {
                algebra: make_virasoro(),
                ab: None,
            }),
            ["L", "W"] => {
                let u = lie.universe();
                let lw = lie.table().get(0, 1);
                let p = lw.component(1);
                let a = p.coeff_in(Var::Lam, 1);
                let b = p.coeff_in(Var::Lam, 0).coeff_in(Var::Del, 0);
                let shape = &(&u.var(Var::Del) + &(&a * &u.var(Var::Lam))) + &b;
                if a.as_scalar().is_none() || !lw.component(0).is_zero() || p != &shape {
                    return Err(not_applicable(format!(
                        "[L _ W] = {} is not of the form (del + a*lam + b)*W",
                        lw.render(lie.generators(), None)
                    )));
                }
                Ok(Target {
                    algebra: make_w(&a, &b)?,
                    ab: Some((a, b)),
                })
            }
            _ => Err(not_applicable(format!(
                "no known Lie target for generators {}",
                names.join(", ")
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Target {
    pub algebra: ConformalAlgebra,
    pub ab: Option<(FormalPoly, FormalPoly)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Index radius for coefficient-algebra checks.
    pub window: i64,
    /// Term cap for the short residual rendering.
    pub max_terms: usize,
}

impl Default for CheckOptions {
    fn default() -> CheckOptions {
        CheckOptions { window: 3, max_terms: 8 }
    }
}

/// One line of a check that reports per-instance results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub label: String,
    pub ok: bool,
    /// Full rendering (normal form, or `0`).
    pub value: String,
    /// Rendering capped at [`CheckOptions::max_terms`] terms.
    pub value_short: String,
}

/// Evidence for a failure: the offending residual and, when one was found,
/// an admissible point where it does not vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub label: String,
    pub residual: String,
    pub residual_short: String,
    pub point: Option<Assignment>,
    pub value: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// Identity instances examined.
    pub checked: usize,
    /// Instances that did not hold.
    pub failed: usize,
    pub items: Vec<CheckItem>,
    pub counterexample: Option<Counterexample>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{status} {} ({} checked, {} failed)", self.name, self.checked, self.failed)
    }
}

/// A verification suite.
pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, subject: &Subject, options: &CheckOptions) -> Result<CheckOutcome, CheckError>;
}

/// Checks keyed by name, in registration order.
pub struct CheckRegistry {
    checks: Vec<Box<dyn Check>>,
}

impl CheckRegistry {
    pub fn empty() -> CheckRegistry {
        CheckRegistry { checks: Vec::new() }
    }

    /// Every built-in suite.
    pub fn standard() -> CheckRegistry {
        let mut r = CheckRegistry::empty();
        r.register(Box::new(AxiomCheck::Skew));
        r.register(Box::new(AxiomCheck::Jacobi));
        r.register(Box::new(AxiomCheck::Lie));
        r.register(Box::new(AxiomCheck::Lsc));
        r.register(Box::new(CompatCheck));
        r.register(Box::new(EquationsCheck));
        r.register(Box::new(CoeffLeftSymmetryCheck));
        r.register(Box::new(CoeffCorollaryCheck));
        r.register(Box::new(CoeffLieCheck));
        r.register(Box::new(RefuteCheck));
        r
    }

    /// Adds a check, replacing any check of the same name.
    pub fn register(&mut self, check: Box<dyn Check>) {
        match self.checks.iter_mut().find(|c| c.name() == check.name()) {
            Some(slot) => *slot = check,
            None => self.checks.push(check),
        }
    }

    pub fn get(&self, name: &str) -> Result<&dyn Check, CheckError> {
        self.checks
            .iter()
            .find(|c| c.name() == name)
            .map(|c| c.as_ref())
            .ok_or_else(|| CheckError::UnknownCheck(name.to_owned()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Check> {
        self.checks.iter().map(|c| c.as_ref())
    }

    /// Runs the named checks concurrently; results come back in the order
    /// of `names`. Unknown names fail before anything runs.
    pub fn run_all(
        &self,
        names: &[&str],
        subject: &Subject,
        options: &CheckOptions,
    ) -> Result<Vec<CheckOutcome>, CheckError> {
        let checks = names.iter().map(|n| self.get(n)).collect::<Result<Vec<_>, _>>()?;
        std::thread::scope(|scope| {
            let handles: Vec<_> = checks
                .iter()
                .map(|c| scope.spawn(move || c.run(subject, options)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap_or_else(|e| std::panic::resume_unwind(e)))
                .collect()
        })
    }
}

impl Default for CheckRegistry {
    fn default() -> CheckRegistry {
        CheckRegistry::standard()
    }
}

/// The suites a subject gets when none are named.
pub fn default_checks(subject: &Subject) -> &'static [&'static str] {
    match subject.algebra.kind {
        AlgebraKind::Lie => &["lie"],
        AlgebraKind::LeftSymmetric if subject.family.is_some() => &["lsc", "compat", "equations"],
        AlgebraKind::LeftSymmetric => &["lsc", "compat"],
        AlgebraKind::Raw => &["lsc"],
    }
}

/// First point over the search grid that satisfies `constraints` and where
/// `p` is nonzero.
pub fn admissible_point(p: &FormalPoly, constraints: &[Constraint]) -> Option<(Assignment, Rational)> {
    let admissible = |at: &Assignment| constraints.iter().all(|c| c.holds(&at.params) != Some(false));
    let (point, value) = search_point_where(p, &[], admissible, POINT_BUDGET)?;
    let at = point.into_iter().fold(Assignment::new(), |acc, (name, v)| {
        let v = Rational::from_integer(v.into());
        match Var::from_name(&name) {
            Some(var) => acc.with_var(var, v),
            None => acc.with_param(&name, v),
        }
    });
    Some((at, value))
}

fn poly_counterexample(label: String, p: &FormalPoly, constraints: &[Constraint], options: &CheckOptions) -> Counterexample {
    let found = admissible_point(p, constraints);
    Counterexample {
        label,
        residual: p.to_string(),
        residual_short: p.render_capped(options.max_terms),
        point: found.as_ref().map(|(at, _)| at.clone()),
        value: found.map(|(_, v)| v),
    }
}

fn element_counterexample(
    label: String,
    value: &ModuleElement,
    alg: &ConformalAlgebra,
    options: &CheckOptions,
) -> Counterexample {
    let first = value.components().iter().find(|p| !p.is_zero());
    let found = first.and_then(|p| admissible_point(p, alg.constraints()));
    Counterexample {
        label,
        residual: value.render(alg.generators(), None),
        residual_short: value.render(alg.generators(), Some(options.max_terms)),
        point: found.as_ref().map(|(at, _)| at.clone()),
        value: found.map(|(_, v)| v),
    }
}

fn from_residuals(
    name: &'static str,
    residuals: Vec<Residual>,
    alg: &ConformalAlgebra,
    options: &CheckOptions,
) -> CheckOutcome {
    let failed: Vec<&Residual> = residuals.iter().filter(|r| !r.vanishes()).collect();
    CheckOutcome {
        name,
        checked: residuals.len(),
        failed: failed.len(),
        items: Vec::new(),
        counterexample: failed
            .first()
            .map(|r| element_counterexample(r.label.to_string(), &r.value, alg, options)),
    }
}

/// The conformal-algebra axiom suites.
#[derive(Debug, Clone, Copy)]
pub enum AxiomCheck {
    Skew,
    Jacobi,
    /// Skew-symmetry and Jacobi together.
    Lie,
    Lsc,
}

impl Check for AxiomCheck {
    fn name(&self) -> &'static str {
        match self {
            AxiomCheck::Skew => "skew",
            AxiomCheck::Jacobi => "jacobi",
            AxiomCheck::Lie => "lie",
            AxiomCheck::Lsc => "lsc",
        }
    }

    fn description(&self) -> &'static str {
        match self {
            AxiomCheck::Skew => "skew-symmetry of every table entry",
            AxiomCheck::Jacobi => "conformal Jacobi identity on all generator triples",
            AxiomCheck::Lie => "skew-symmetry and Jacobi identity",
            AxiomCheck::Lsc => "left-symmetric identity on all generator triples",
        }
    }

    fn run(&self, subject: &Subject, options: &CheckOptions) -> Result<CheckOutcome, CheckError> {
        let alg = &subject.algebra;
        let residuals = match self {
            AxiomCheck::Skew => alg.residuals_skew()?,
            AxiomCheck::Jacobi => alg.residuals_jacobi()?,
            AxiomCheck::Lie => {
                let mut r = alg.residuals_skew()?;
                r.extend(alg.residuals_jacobi()?);
                r
            }
            AxiomCheck::Lsc => alg.residuals_left_symmetric()?,
        };
        Ok(from_residuals(self.name(), residuals, alg, options))
    }
}

/// The commutator of the table equals the Lie target entrywise.
pub struct CompatCheck;

impl Check for CompatCheck {
    fn name(&self) -> &'static str {
        "compat"
    }

    fn description(&self) -> &'static str {
        "commutator equals the Lie target (W(a,b) or Virasoro) entrywise"
    }

    fn run(&self, subject: &Subject, options: &CheckOptions) -> Result<CheckOutcome, CheckError> {
        let alg = &subject.algebra;
        let failed = |reason: String, label: &str| CheckOutcome {
            name: self.name(),
            checked: 1,
            failed: 1,
            items: Vec::new(),
            counterexample: Some(Counterexample {
                label: label.to_owned(),
                residual: reason.clone(),
                residual_short: reason,
                point: None,
                value: None,
            }),
        };
        let target = match subject.target() {
            Ok(t) => t,
            Err(CheckError::NotApplicable { reason, .. }) => return Ok(failed(reason, "target")),
            Err(e) => return Err(e),
        };
        let report = alg.is_compatible_structure(&target.algebra)?;
        let rank = alg.rank();
        Ok(CheckOutcome {
            name: self.name(),
            checked: rank * rank,
            failed: report.diffs.len(),
            items: Vec::new(),
            counterexample: report.diffs.first().map(|d| {
                let label = format!("[{} _ {}]", d.pair.0, d.pair.1);
                let u = alg.universe().union(target.algebra.universe());
                let widened = alg.widen(&u).unwrap_or_else(|_| alg.clone());
                element_counterexample(label, &d.difference, &widened, options)
            }),
        })
    }
}

/// The fourteen functional equations of the rank-two ansatz.
pub struct EquationsCheck;

impl EquationsCheck {
    fn ansatz(subject: &Subject) -> Result<(AnsatzStructure, FormalPoly, FormalPoly), CheckError> {
        if let Some(inst) = &subject.family {
            return Ok((inst.ansatz.clone(), inst.a.clone(), inst.b.clone()));
        }
        let not_applicable = |reason: String| CheckError::NotApplicable { check: "equations", reason };
        let s = AnsatzStructure::from_algebra(&subject.algebra).map_err(|e| not_applicable(e.to_string()))?;
        let (a, b) = subject
            .target()?
            .ab
            .ok_or_else(|| not_applicable("the target is not of type W(a,b)".into()))?;
        Ok((s, a, b))
    }
}

impl Check for EquationsCheck {
    fn name(&self) -> &'static str {
        "equations"
    }

    fn description(&self) -> &'static str {
        "the fourteen functional equations E1..E14 of the rank-two ansatz"
    }

    fn run(&self, subject: &Subject, options: &CheckOptions) -> Result<CheckOutcome, CheckError> {
        let (s, a, b) = EquationsCheck::ansatz(subject)?;
        let residuals = equation_residuals(&s, &a, &b)?;
        let items: Vec<CheckItem> = residuals
            .iter()
            .map(|r| CheckItem {
                label: r.label.clone(),
                ok: r.value.is_zero(),
                value: r.value.to_string(),
                value_short: r.value.render_capped(options.max_terms),
            })
            .collect();
        let first = residuals.iter().find(|r| !r.value.is_zero());
        Ok(CheckOutcome {
            name: self.name(),
            checked: residuals.len(),
            failed: items.iter().filter(|i| !i.ok).count(),
            items,
            counterexample: first
                .map(|r| poly_counterexample(r.label.clone(), &r.value, subject.algebra.constraints(), options)),
        })
    }
}

fn product_outcome(name: &'static str, report: &ProductReport) -> CheckOutcome {
    CheckOutcome {
        name,
        checked: report.checked,
        failed: report.mismatches.len(),
        items: Vec::new(),
        counterexample: report.mismatches.first().map(|m| {
            let diff = &m.computed - &m.expected;
            Counterexample {
                label: format!("{} * {}: computed {}, expected {}", m.left, m.right, m.computed, m.expected),
                residual: diff.to_string(),
                residual_short: diff.to_string(),
                point: None,
                value: None,
            }
        }),
    }
}

/// The associator identity on a window of the coefficient algebra.
pub struct CoeffLeftSymmetryCheck;

impl Check for CoeffLeftSymmetryCheck {
    fn name(&self) -> &'static str {
        "coeff-left-symmetry"
    }

    fn description(&self) -> &'static str {
        "associator identity of the coefficient algebra on all basis triples in the window"
    }

    fn run(&self, subject: &Subject, options: &CheckOptions) -> Result<CheckOutcome, CheckError> {
        let report = verify_left_symmetry_window(&subject.algebra, options.window);
        Ok(CheckOutcome {
            name: self.name(),
            checked: report.checked,
            failed: report.failures.len(),
            items: Vec::new(),
            counterexample: report.failures.first().map(|f| {
                let [x, y, z] = &f.triple;
                Counterexample {
                    label: format!("({x}, {y}, {z})"),
                    residual: f.residual.to_string(),
                    residual_short: f.residual.to_string(),
                    point: None,
                    value: None,
                }
            }),
        })
    }
}

/// Shifted coefficient products against a family's closed forms.
pub struct CoeffCorollaryCheck;

impl Check for CoeffCorollaryCheck {
    fn name(&self) -> &'static str {
        "coeff-corollary"
    }

    fn description(&self) -> &'static str {
        "shifted coefficient products equal the family's closed forms"
    }

    fn run(&self, subject: &Subject, options: &CheckOptions) -> Result<CheckOutcome, CheckError> {
        let inst = subject.family.as_ref().ok_or(CheckError::NotApplicable {
            check: "coeff-corollary",
            reason: "closed forms exist only for catalog families".into(),
        })?;
        let report = verify_corollary_instance(inst, -options.window..=options.window);
        Ok(product_outcome(self.name(), &report))
    }
}

/// Coefficient Lie bracket (commutator of the product for non-Lie tables)
/// against the 𝒲(a,b) brackets under the standard shift.
pub struct CoeffLieCheck;

impl Check for CoeffLieCheck {
    fn name(&self) -> &'static str {
        "coeff-lie"
    }

    fn description(&self) -> &'static str {
        "coefficient commutators equal the W(a,b) brackets under the index shift"
    }

    fn run(&self, subject: &Subject, options: &CheckOptions) -> Result<CheckOutcome, CheckError> {
        let target = subject.target()?;
        let (a, b) = target.ab.ok_or(CheckError::NotApplicable {
            check: "coeff-lie",
            reason: "the target is not of type W(a,b)".into(),
        })?;
        let scalar = |p: &FormalPoly| p.as_scalar().unwrap_or_else(Scalar::zero);
        let report = verify_lie_window(&subject.algebra, &scalar(&a), &scalar(&b), -options.window..=options.window)?;
        Ok(product_outcome(self.name(), &report))
    }
}

/// Re-evaluates every refutation witness at its frozen point. The subject
/// is ignored.
pub struct RefuteCheck;

impl Check for RefuteCheck {
    fn name(&self) -> &'static str {
        "refute"
    }

    fn description(&self) -> &'static str {
        "every refutation witness is nonzero at its frozen point"
    }

    fn run(&self, _subject: &Subject, _options: &CheckOptions) -> Result<CheckOutcome, CheckError> {
        let witnesses = list_refutation_witnesses();
        match verify_refutations(witnesses) {
            Ok(report) => Ok(CheckOutcome {
                name: self.name(),
                checked: report.len(),
                failed: 0,
                items: report
                    .outcomes
                    .iter()
                        .map(|o| {
                        let value = format!("{} = {} at {}", o.equation, crate::arith::fmt_rational(&o.value), o.point);
                        CheckItem {
                            label: o.branch.to_owned(),
                            ok: true,
                            value_short: value.clone(),
                            value,
                        }
                    })
                    .collect(),
                counterexample: None,
            }),
            Err(CatalogError::StaleWitness { branch, reason }) => Ok(CheckOutcome {
                name: self.name(),
                checked: witnesses.len(),
                failed: 1,
                items: Vec::new(),
                counterexample: Some(Counterexample {
                    label: branch,
                    residual: reason.clone(),
                    residual_short: reason,
                    point: None,
                    value: None,
                }),
            }),
            Err(e) => Err(e.into()),
        }
    }
}

/// Parameter values parsed from `name=value` strings.
pub fn parse_assignment<'a>(
    pairs: impl IntoIterator<Item = &'a str>,
) -> Result<BTreeMap<String, Rational>, String> {
    let mut out = BTreeMap::new();
    for pair in pairs {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("expected name=value, found `{pair}`"))?;
        let value = parse_rational(value.trim()).ok_or_else(|| format!("`{value}` is not a rational number"))?;
        if out.insert(name.trim().to_owned(), value).is_some() {
            return Err(format!("`{name}` is set twice"));
        }
    }
    Ok(out)
}

/// Parses `n`, `-n` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    use num_bigint::BigInt;
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if den == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(num, den))
}
