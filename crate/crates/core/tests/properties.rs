//! Randomized kernel properties: ring axioms, substitution commuting with
//! evaluation, and reconstruction of λ-brackets from n-th products.

mod common;

use common::kernel::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(TRIALS))]

    #[test]
    fn ring_axioms_hold(p in poly(), q in poly(), r in poly()) {
        ring_axioms(p, q, r)?;
    }

    #[test]
    fn exact_division_inverts_multiplication(p in poly(), k in 1usize..5) {
        exact_division(p, k)?;
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), at in point()) {
        evaluation_homomorphism(p, q, at)?;
    }

    #[test]
    fn substitution_commutes_with_evaluation(p in poly(), q in poly(), at in point(), lam in any::<bool>()) {
        substitution_commutes(p, q, at, lam)?;
    }

    #[test]
    fn parameter_substitution_commutes_with_evaluation(p in poly(), at in point()) {
        parameter_substitution(p, at)?;
    }

    #[test]
    fn brackets_rebuild_from_nth_products(case in algebra_and_elements()) {
        nth_product_reconstruction(case)?;
    }
}
