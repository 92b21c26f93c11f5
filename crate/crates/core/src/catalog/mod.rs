//! Named structures: the Virasoro algebra, its left-symmetric structures,
//! the rank-two algebras 𝒲(a,b), the eleven left-symmetric families over
//! 𝒲(a,b), the ansatz equation system, and refutation witnesses for the
//! excluded branches of the classification.

mod ansatz;
mod derived;
mod families;
mod refute;

pub use ansatz::{equation_residuals, meta_consistency, AnsatzStructure, EquationResidual, MetaConsistency, EQUATION_COUNT};
pub use derived::{case_b_cleared, case_b_cleared_oracle, case_c_collapse, case_c_collapse_oracle};
pub use families::{
    families, family, make_family, FamilyInstance, FamilySpec, LemmaCase, ParamAssignment,
    ParamValue, Target,
};
pub use refute::{
    list_refutation_witnesses, search_point, search_point_where, verify_refutations, RefutationReport,
    RefutationWitness, WitnessEquation, WitnessOutcome, SEARCH_VALUES,
};

use thiserror::Error;

use crate::arith::{ArithError, FormalPoly, Universe, Var};
use crate::conformal::{AlgebraKind, ConformalAlgebra, ConformalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown family `{0}` (expected T1..T11)")]
    UnknownFamily(String),
    #[error("family {family} has no parameter `{param}`")]
    UnknownParameter { family: String, param: String },
    #[error("family {family} requires {constraint}")]
    InvalidParameter { family: String, constraint: String },
    #[error("structure is not of ansatz shape: {0}")]
    NotAnsatzShaped(String),
    #[error("witness {branch} is stale: {reason}")]
    StaleWitness { branch: String, reason: String },
    #[error(transparent)]
    Conformal(#[from] ConformalError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// The Virasoro conformal algebra `[L_λ L] = (∂+2λ)L`.
pub fn make_virasoro() -> ConformalAlgebra {
    let u = Universe::empty();
    let entry = &u.var(Var::Del) + &(&u.int(2) * &u.var(Var::Lam));
    let mut a = ConformalAlgebra::new("Vir", AlgebraKind::Lie, u, &["L"]).expect("one generator");
    a.set_bracket("L", "L", &[("L", entry)]).expect("valid entry");
    a
}

/// The left-symmetric structure `L_λ L = (∂+λ+c)L` with `c` a constant of
/// its universe.
pub fn make_vir_lsc(c: &FormalPoly) -> Result<ConformalAlgebra, CatalogError> {
    let u = c.universe().clone();
    if c.as_scalar().is_none() {
        return Err(CatalogError::NotAnsatzShaped("c must be free of formal variables".into()));
    }
    let entry = &(&u.var(Var::Del) + &u.var(Var::Lam)) + c;
    let mut a = ConformalAlgebra::new("VirLSC", AlgebraKind::LeftSymmetric, u, &["L"])?;
    a.set_bracket("L", "L", &[("L", entry)])?;
    Ok(a)
}

/// `make_vir_lsc` with `c` a symbolic parameter.
pub fn make_vir_lsc_symbolic() -> ConformalAlgebra {
    let u = Universe::new(["c"]);
    make_vir_lsc(&u.param("c").expect("declared")).expect("constant c")
}

/// The Lie conformal algebra 𝒲(a,b) for constants `a`, `b` of one universe:
/// `[L_λ L] = (∂+2λ)L`, `[L_λ W] = (∂+aλ+b)W`, `[W_λ W] = 0`, and
/// `[W_λ L] = ((a-1)∂+aλ-b)W` as forced by skew-symmetry.
pub fn make_w(a: &FormalPoly, b: &FormalPoly) -> Result<ConformalAlgebra, CatalogError> {
    let u = a.universe().clone();
    if a.as_scalar().is_none() || b.as_scalar().is_none() {
        return Err(CatalogError::NotAnsatzShaped("a and b must be constants".into()));
    }
    let del = u.var(Var::Del);
    let lam = u.var(Var::Lam);
    let ll = &del + &(&u.int(2) * &lam);
    let lw = (&del + &(a * &lam)).try_add(b)?;
    let wl = (&(&(a - &u.one()) * &del) + &(a * &lam)).try_sub(b)?;
    let mut w = ConformalAlgebra::new("W", AlgebraKind::Lie, u, &["L", "W"])?;
    w.set_bracket("L", "L", &[("L", ll)])?;
    w.set_bracket("L", "W", &[("W", lw)])?;
    w.set_bracket("W", "L", &[("W", wl)])?;
    Ok(w)
}

/// 𝒲(a,b) with `a`, `b` symbolic.
pub fn make_w_symbolic() -> ConformalAlgebra {
    let u = Universe::new(["a", "b"]);
    make_w(&u.param("a").expect("declared"), &u.param("b").expect("declared")).expect("constants")
}
