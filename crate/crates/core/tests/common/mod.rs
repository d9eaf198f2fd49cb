//! Strategies shared by the property and acceptance suites.

#![allow(dead_code)]

use proptest::prelude::*;

use liftcoc::rational::ratio;
use liftcoc::{AugmentedOp, Monomial, PsiSymbol};

/// Symbol with up to three Laurent terms, exponents in `-lo..=hi`.
pub fn symbol_strategy(nvars: usize, depth: u32, lo: i32, hi: i32) -> impl Strategy<Value = PsiSymbol> {
    let term = (
        proptest::collection::vec(-lo..=hi, nvars),
        proptest::collection::vec(-lo..=hi, nvars),
        -5i64..6,
        1i64..4,
    );
    proptest::collection::vec(term, 1..4).prop_map(move |ts| {
        PsiSymbol::from_terms(
            nvars,
            depth,
            ts.into_iter().map(|(x, d, p, q)| (Monomial::new(&x, &d), ratio(p, q))),
        )
    })
}

/// Polynomial differential operator: nonnegative exponents up to 2.
pub fn polynomial_strategy(nvars: usize, depth: u32) -> impl Strategy<Value = PsiSymbol> {
    symbol_strategy(nvars, depth, 0, 2)
}

/// Finite matrix with up to two entries in a 3×3 window plus an identity part.
pub fn op_strategy(nvars: usize, depth: u32) -> impl Strategy<Value = AugmentedOp> {
    let entry = (1usize..4, 1usize..4, symbol_strategy(nvars, depth, 3, 3));
    (
        proptest::collection::vec(entry, 0..3),
        proptest::option::of(symbol_strategy(nvars, depth, 3, 3)),
    )
        .prop_map(move |(entries, id)| {
            let mut op = match id {
                Some(s) => AugmentedOp::identity(s),
                None => AugmentedOp::zero(nvars, depth),
            };
            for (i, j, s) in entries {
                op = &op + &AugmentedOp::elementary(i, j, s);
            }
            op
        })
}

/// Finite matrix over polynomial entries in a 2×2 window.
pub fn finite_op_strategy(nvars: usize, depth: u32) -> impl Strategy<Value = AugmentedOp> {
    let entry = (1usize..3, 1usize..3, polynomial_strategy(nvars, depth));
    proptest::collection::vec(entry, 1..3).prop_map(move |entries| {
        entries
            .into_iter()
            .fold(AugmentedOp::zero(nvars, depth), |op, (i, j, s)| {
                &op + &AugmentedOp::elementary(i, j, s)
            })
    })
}

/// Expression text generated from the operator grammar.
pub fn expr_strategy() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (1i64..20, 1i64..5).prop_map(|(p, q)| format!("{p}/{q}")),
        (1usize..3, -3i32..4).prop_map(|(v, e)| format!("x{v}^{e}")),
        (1usize..3, -3i32..4).prop_map(|(v, e)| format!("d{v}^{e}")),
        (1usize..3).prop_map(|v| format!("x{v}")),
        (1usize..4, 1usize..4).prop_map(|(i, j)| format!("E[{i},{j}]")),
        Just("ID".to_string()),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} + {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} - {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*{b}")),
            inner.prop_map(|a| format!("({a})")),
        ]
    })
}
