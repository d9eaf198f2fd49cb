//! Standard argument frames: the projective generators `∂_i`,
//! `x_i(Σ x_j∂_j) − λx_i`, the alternating assignment `x₁, ∂₁, x₂, ∂₂, …`
//! used for the grouped terms, and evaluation on matrix cycles.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{interval_word, CocycleSpec, Formula, MarkedInterval, Part, WordEvaluator};
use crate::ce::ChainElement;
use crate::error::{Error, Result};
use crate::matrix::AugmentedOp;
use crate::rational::{factorial, Rational};
use crate::symbol::{Derivation, Monomial, PsiSymbol};

/// `(Id⊗∂₁, …, Id⊗∂_n, Id⊗(x₁Σ_j x_j∂_j − λx₁), …, Id⊗(x_nΣ_j x_j∂_j − λx_n))`.
pub fn twisted_generators(n: usize, lambda: &Rational, depth: u32) -> Vec<AugmentedOp> {
    let mut out: Vec<AugmentedOp> = (0..n)
        .map(|i| AugmentedOp::identity(PsiSymbol::d(n, i, depth)))
        .collect();
    for i in 0..n {
        let mut terms = Vec::new();
        for j in 0..n {
            let mut x = vec![0; n];
            let mut d = vec![0; n];
            x[i] += 1;
            x[j] += 1;
            d[j] = 1;
            terms.push((Monomial::new(&x, &d), Rational::from_integer(1.into())));
        }
        terms.push((Monomial::single(n, i, 1, 0), -lambda.clone()));
        out.push(AugmentedOp::identity(PsiSymbol::from_terms(n, depth, terms)));
    }
    out
}

/// `ad ln ∂₁, ad ln x₁, ad ln ∂₂, ad ln x₂, …`.
pub fn projective_derivations(n: usize) -> Vec<Derivation> {
    (0..n).flat_map(|i| [Derivation::LnD(i), Derivation::LnX(i)]).collect()
}

/// The first `k` of the projective derivations, over `⌈k/2⌉` variables.
pub fn derivations_for(k: usize) -> Vec<Derivation> {
    let mut d = projective_derivations(k.div_ceil(2));
    d.truncate(k);
    d
}

/// `Id⊗x₁, Id⊗∂₁, …, Id⊗x_n, Id⊗∂_n, E₁₁⊗1`.
pub fn projective_arguments(n: usize, depth: u32) -> Vec<AugmentedOp> {
    let mut out: Vec<AugmentedOp> = (0..n)
        .flat_map(|i| {
            [
                AugmentedOp::identity(PsiSymbol::x(n, i, depth)),
                AugmentedOp::identity(PsiSymbol::d(n, i, depth)),
            ]
        })
        .collect();
    out.push(AugmentedOp::elementary(1, 1, PsiSymbol::one(n, depth)));
    out
}

/// `(−1)ⁿ (2n)!`.
pub fn leading_closed_form(n: usize) -> Rational {
    let v = factorial(2 * n as u32);
    Rational::from_integer(if n.is_multiple_of(2) { v } else { -v })
}

/// `(−1)ⁿ (l!)² (2n − 2l)! 2^l`.
pub fn interval_class_closed_form(n: usize, l: usize) -> Rational {
    let lf = factorial(l as u32);
    let v = &lf * &lf * factorial((2 * n - 2 * l) as u32) * BigInt::from(2).pow(l as u32);
    Rational::from_integer(if n.is_multiple_of(2) { v } else { -v })
}

/// `𝒪(t)` for the interval with marks `1, 3, …, 2l − 1` in `Ψ_{2n+1}` on
/// the projective arguments. Every interval with `l` marks reduces to this
/// one by moving the `A·Q·A` blocks to the front.
pub fn interval_class_term(n: usize, l: usize, depth: u32) -> Result<Rational> {
    if l == 0 || l > n {
        return Err(Error::InvalidSpec(format!("interval class l = {l} outside 1..={n}")));
    }
    let marks = (0..l).map(|i| 2 * i + 1).collect();
    let t = MarkedInterval::new(2 * n, marks).expect("marks 1, 3, … are spaced by two");
    WordEvaluator::new(&projective_arguments(n, depth), &projective_derivations(n), depth).evaluate(&interval_word(&t))
}

/// Every summand of `Ψ_{2n+1}` on the projective arguments: the leading
/// word and one `𝒪(t)` per marked interval, with the word as label.
pub fn grouped_terms(n: usize, depth: u32) -> Result<Vec<(Part, String, Rational)>> {
    let spec = CocycleSpec::with_formula(projective_derivations(n), 1, Formula::MarkedIntervals, depth)?;
    let ev = WordEvaluator::new(&projective_arguments(n, depth), spec.derivations(), depth);
    spec.words()
        .into_iter()
        .map(|(part, w)| Ok((part, w.to_string(), ev.evaluate(&w)?)))
        .collect()
}

/// `Σ_i c_i · Ψ(frame, A₁⁽ⁱ⁾, …)` over the terms of a Lie-homology cycle.
pub fn psi_on_matrix_cycle(spec: &CocycleSpec, frame: &[AugmentedOp], cycle: &ChainElement) -> Result<Rational> {
    let boundary = cycle.boundary();
    if !boundary.is_zero() {
        return Err(Error::NotACycle { terms: boundary.len() });
    }
    let expected = spec.arity();
    if frame.len() + cycle.degree() != expected {
        return Err(Error::ArityMismatch {
            expected,
            found: frame.len() + cycle.degree(),
        });
    }
    let mut total = Rational::zero();
    for (word, c) in cycle.terms() {
        let mut args = frame.to_vec();
        args.extend(word.iter().map(|b| b.to_op(spec.depth())));
        total += spec.psi(&args)? * c;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn twisted_generators_in_one_variable() {
        let g = twisted_generators(1, &int(2), 6);
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].to_string(), "ID*(d1)");
        assert_eq!(g[1].to_string(), "ID*(x1^2*d1 - 2*x1)");
    }

    #[test]
    fn untwisted_bracket_closes() {
        let g = twisted_generators(1, &int(0), 6);
        let expected = AugmentedOp::identity(&PsiSymbol::x(1, 0, 6) * &PsiSymbol::d(1, 0, 6)).scale(&int(2));
        assert_eq!(g[0].bracket(&g[1]), expected);
    }

    #[test]
    fn generators_are_polynomial_of_degree_at_most_two() {
        for g in twisted_generators(2, &int(0), 6) {
            let s = g.id_part();
            assert!(s.is_differential_operator());
            assert!(s
                .terms()
                .all(|(m, _)| m.x_exps().iter().chain(m.d_exps()).sum::<i32>() <= 3));
            assert!(s.terms().all(|(m, _)| m.x_exps().iter().sum::<i32>() <= 2));
        }
    }

    #[test]
    fn grouped_terms_at_n2() {
        let terms = grouped_terms(2, 8).unwrap();
        let values: Vec<Rational> = terms.iter().map(|(_, _, v)| v.clone()).collect();
        assert_eq!(values, vec![int(24), int(4), int(4), int(4), int(4)]);
        assert_eq!(interval_class_term(2, 1, 8).unwrap(), int(4));
        assert_eq!(interval_class_term(1, 1, 8).unwrap(), int(-1));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(leading_closed_form(1), int(-2));
        assert_eq!(leading_closed_form(2), int(24));
        assert_eq!(interval_class_closed_form(1, 1), int(-2));
        assert_eq!(interval_class_closed_form(2, 1), int(4));
        assert_eq!(interval_class_closed_form(2, 2), int(16));
    }
}
