use super::*;
use crate::arith::{rat, Assignment};

fn vir(u: &Universe, entry: FormalPoly, kind: AlgebraKind) -> ConformalAlgebra {
    let mut a = ConformalAlgebra::new("vir", kind, u.clone(), &["L"]).unwrap();
    a.set_bracket("L", "L", &[("L", entry)]).unwrap();
    a
}

fn setup() -> (Universe, FormalPoly, FormalPoly, FormalPoly) {
    let u = Universe::new(["a", "b", "c"]);
    let del = u.var(Var::Del);
    let lam = u.var(Var::Lam);
    let mu = u.var(Var::Mu);
    (u, del, lam, mu)
}

fn virasoro() -> (ConformalAlgebra, Universe, FormalPoly, FormalPoly, FormalPoly) {
    let (u, del, lam, mu) = setup();
    let two = u.int(2);
    let a = vir(&u, &del + &(&two * &lam), AlgebraKind::Lie);
    (a, u, del, lam, mu)
}

#[test]
fn virasoro_brackets_and_sesquilinearity() {
    let (a, u, del, lam, _) = virasoro();
    let l = a.gen("L").unwrap();
    let dl = a.element(&[("L", del.clone())]).unwrap();
    let base = &del + &(&u.int(2) * &lam);
    assert_eq!(a.bracket(&l, &l).unwrap().component(0), &base);
    assert_eq!(a.bracket(&dl, &l).unwrap().component(0), &(&(-&lam) * &base));
    assert_eq!(a.bracket(&l, &dl).unwrap().component(0), &(&(&del + &lam) * &base));
}

#[test]
fn shifted_bracket_renames() {
    let (a, u, del, _, mu) = virasoro();
    let l = a.gen("L").unwrap();
    let s = a.bracket_shifted(&l, &l, Var::Mu).unwrap();
    assert_eq!(s.component(0), &(&del + &(&u.int(2) * &mu)));
    assert_eq!(s.rename(Var::Mu, Var::Lam), a.bracket(&l, &l).unwrap());
    assert_eq!(
        a.bracket_shifted(&l, &l, Var::Del),
        Err(ConformalError::RenameClash("del"))
    );
}

#[test]
fn nested_compositions() {
    let (a, u, del, lam, mu) = virasoro();
    let l = a.gen("L").unwrap();
    let inner = a.bracket(&l, &l).unwrap();
    let two = u.int(2);
    let left = a.compose_left(&inner, &l).unwrap();
    let expected = &(&lam - &mu) * &(&(&del + &(&two * &lam)) + &(&two * &mu));
    assert_eq!(left.component(0), &expected);
    let right = a.compose_right(&l, &inner).unwrap();
    let expected = &(&(&del + &mu) + &(&two * &lam)) * &(&del + &(&two * &mu));
    assert_eq!(right.component(0), &expected);
    // The mirrored nesting [L_λ[L_μ L]].
    let inner_mu = a.bracket_shifted(&l, &l, Var::Mu).unwrap();
    let mirrored = a.bracket_at(&l, &inner_mu, &lam).unwrap();
    let expected = &(&(&del + &lam) + &(&two * &mu)) * &(&del + &(&two * &lam));
    assert_eq!(mirrored.component(0), &expected);
    let zero = ModuleElement::zero(&u, 1);
    assert!(a.compose_left(&zero, &l).unwrap().is_zero());
    assert!(a.compose_right(&l, &zero).unwrap().is_zero());
}

#[test]
fn nth_products() {
    let (a, u, del, lam, _) = virasoro();
    let l = a.gen("L").unwrap();
    assert_eq!(a.nth_product(&l, &l, 1).unwrap().component(0), &u.int(2));
    assert_eq!(a.nth_product(&l, &l, 0).unwrap().component(0), &del);
    assert!(a.nth_product(&l, &l, 2).unwrap().is_zero());
    let c = u.param("c").unwrap();
    let lsc = vir(&u, &(&del + &lam) + &c, AlgebraKind::LeftSymmetric);
    assert_eq!(lsc.nth_product(&l, &l, 0).unwrap().component(0), &(&del + &c));
}

#[test]
fn skew_failure_is_exhibited() {
    let (u, del, lam, _) = setup();
    let a = vir(&u, lam.clone(), AlgebraKind::Raw);
    let r = a.residuals_skew().unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].value.component(0), &-&del);
    assert_eq!(r[0].label.to_string(), "skew(L,L)");
}

#[test]
fn virasoro_is_lie() {
    let (a, ..) = virasoro();
    assert!(a.residuals_skew().unwrap().iter().all(Residual::vanishes));
    assert!(a.residuals_jacobi().unwrap().iter().all(Residual::vanishes));
}

#[test]
fn vir_left_symmetric_structures() {
    let (u, del, lam, _) = setup();
    let c = u.param("c").unwrap();
    let lsc = vir(&u, &(&del + &lam) + &c, AlgebraKind::LeftSymmetric);
    assert!(lsc.residuals_left_symmetric().unwrap().iter().all(Residual::vanishes));
    let lie = lsc.sub_adjacent().unwrap();
    assert_eq!(lie.table().get(0, 0).component(0), &(&del + &(&u.int(2) * &lam)));
    let (v, ..) = virasoro();
    assert!(lsc.is_compatible_structure(&v).unwrap().compatible());

    let bad = vir(&u, &(&del + &(&u.int(2) * &lam)) + &c, AlgebraKind::LeftSymmetric);
    let r = bad.residuals_left_symmetric().unwrap();
    let at = Assignment::new()
        .with_var(Var::Del, rat(1))
        .with_var(Var::Lam, rat(2))
        .with_var(Var::Mu, rat(-1))
        .with_param("c", rat(1));
    assert_ne!(r[0].value.component(0).eval(&at).unwrap(), rat(0));
}

#[test]
fn generator_mismatch_is_an_error() {
    let (u, del, lam, _) = setup();
    let c = u.param("c").unwrap();
    let lsc = vir(&u, &(&del + &lam) + &c, AlgebraKind::LeftSymmetric);
    let w = ConformalAlgebra::new("w", AlgebraKind::Lie, u.clone(), &["L", "W"]).unwrap();
    assert!(matches!(
        lsc.is_compatible_structure(&w),
        Err(ConformalError::GeneratorMismatch { .. })
    ));
}

#[test]
fn abelian_tables() {
    let (u, ..) = setup();
    let a = ConformalAlgebra::new("ab", AlgebraKind::LeftSymmetric, u, &["L", "W"]).unwrap();
    assert!(a.residuals_skew().unwrap().iter().all(Residual::vanishes));
    assert!(a.residuals_left_symmetric().unwrap().iter().all(Residual::vanishes));
    assert_eq!(a.sub_adjacent().unwrap().table(), a.table());
    assert_eq!(a.locality_bound(), -1);
}

#[test]
fn entries_and_elements_are_validated() {
    let (u, del, lam, mu) = setup();
    let mut a = ConformalAlgebra::new("x", AlgebraKind::Raw, u.clone(), &["L"]).unwrap();
    assert!(matches!(
        a.set_bracket("L", "L", &[("L", mu)]),
        Err(ConformalError::BadEntry(_))
    ));
    assert!(matches!(
        a.set_bracket("L", "Q", &[("L", del.clone())]),
        Err(ConformalError::UnknownGenerator(_))
    ));
    assert!(matches!(a.element(&[("L", lam)]), Err(ConformalError::NotAModuleElement(_))));
    assert!(ConformalAlgebra::new("y", AlgebraKind::Raw, u, &["L", "L"]).is_err());
}
