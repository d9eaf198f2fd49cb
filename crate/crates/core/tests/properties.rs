mod common;

use num_traits::Zero;
use proptest::prelude::*;

use common::{expr_strategy, finite_op_strategy, op_strategy, polynomial_strategy, symbol_strategy};
use liftcoc::lifting::CocycleSpec;
use liftcoc::parse::{parse_expr, parse_operator};
use liftcoc::rational::int;
use liftcoc::{AugmentedOp, Derivation};

const N: u32 = 8;

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn printed_operators_parse_back(op in op_strategy(2, N)) {
        let back = parse_operator(&op.to_string(), 2, N).unwrap();
        prop_assert_eq!(back, op);
    }

    #[test]
    fn parse_print_parse_is_stable(text in expr_strategy()) {
        let nvars = parse_expr(&text).unwrap().max_variable().max(1);
        let a = parse_operator(&text, nvars, N).unwrap();
        let b = parse_operator(&a.to_string(), nvars, N).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn weyl_product_is_associative(a in polynomial_strategy(2, N), b in polynomial_strategy(2, N), c in polynomial_strategy(2, N)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn residue_kills_brackets(a in symbol_strategy(2, N, 3, 3), b in symbol_strategy(2, N, 3, 3)) {
        prop_assert!(a.bracket(&b).residue().is_zero());
    }

    #[test]
    fn residue_of_product_is_symmetric(a in symbol_strategy(1, N, 3, 3), b in symbol_strategy(1, N, 3, 3)) {
        prop_assert_eq!(a.residue_of_product(&b), (&a * &b).residue());
        prop_assert_eq!(a.residue_of_product(&b), b.residue_of_product(&a));
    }

    #[test]
    fn log_derivations_satisfy_leibniz(a in polynomial_strategy(1, N), b in polynomial_strategy(1, N), which in 0usize..2) {
        let d = if which == 0 { Derivation::LnD(0) } else { Derivation::LnX(0) };
        let lhs = d.apply(&(&a * &b));
        let rhs = &(&d.apply(&a) * &b) + &(&a * &d.apply(&b));
        prop_assert_eq!(lhs.with_depth(N / 2), rhs.with_depth(N / 2));
    }

    #[test]
    fn matrix_bracket_satisfies_jacobi(a in finite_op_strategy(1, N), b in finite_op_strategy(1, N), c in finite_op_strategy(1, N)) {
        let j = &(&a.bracket(&b.bracket(&c)) + &b.bracket(&c.bracket(&a))) + &c.bracket(&a.bracket(&b));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn trace_kills_matrix_brackets(a in op_strategy(1, N), b in finite_op_strategy(1, N)) {
        prop_assert!(a.bracket(&b).trace().unwrap().is_zero());
    }

    #[test]
    fn trace_of_product_matches_product(a in finite_op_strategy(1, N), b in op_strategy(1, N)) {
        prop_assert_eq!(a.trace_of_product(&b).unwrap(), a.product(&b).trace().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn psi3_is_alternating_and_multilinear(
        a in finite_op_strategy(1, N),
        b in finite_op_strategy(1, N),
        c in finite_op_strategy(1, N),
        e in finite_op_strategy(1, N),
        t in -3i64..4,
    ) {
        let spec = CocycleSpec::new(vec![Derivation::LnD(0), Derivation::LnX(0)], 1, N).unwrap();
        let v = spec.psi(&[a.clone(), b.clone(), c.clone()]).unwrap();
        prop_assert_eq!(spec.psi(&[b.clone(), a.clone(), c.clone()]).unwrap(), -v.clone());
        prop_assert_eq!(spec.psi(&[a.clone(), c.clone(), b.clone()]).unwrap(), -v.clone());
        prop_assert!(spec.psi(&[a.clone(), a.clone(), c.clone()]).unwrap().is_zero());
        let combo: AugmentedOp = &a + &e.scale(&int(t));
        let lhs = spec.psi(&[combo, b.clone(), c.clone()]).unwrap();
        prop_assert_eq!(lhs, v + int(t) * spec.psi(&[e, b, c]).unwrap());
    }
}
