use std::collections::BTreeMap;

use num_traits::Zero;

use super::chain::{BasisElem, ChainElement};
use super::linalg::{nullspace, rank};
use crate::error::{Error, Result};
use crate::matrix::AugmentedOp;
use crate::rational::Rational;
use crate::symbol::PsiSymbol;

pub const DEFAULT_DIMENSION_CAP: usize = 20_000;

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Basis of the degree-`p` cycles in `Λ^p(gl_m ⊗ span(coefficients))`.
///
/// The chain space is spanned by wedges of distinct generators
/// `E_{ij} ⊗ b`; fails with [`Error::DimensionTooLarge`] when there are more
/// than `cap` of them.
pub fn find_cycles(m: usize, p: usize, coefficients: &[PsiSymbol], cap: usize) -> Result<Vec<ChainElement>> {
    let generators: Vec<AugmentedOp> = (1..=m)
        .flat_map(|i| (1..=m).map(move |j| (i, j)))
        .flat_map(|(i, j)| {
            coefficients
                .iter()
                .map(move |b| AugmentedOp::elementary(i, j, b.clone()))
        })
        .collect();
    let dimension = binomial(generators.len(), p);
    if dimension > cap {
        return Err(Error::DimensionTooLarge { dimension, cap });
    }
    let chains: Vec<ChainElement> = subsets(generators.len(), p)
        .into_iter()
        .map(|idx| ChainElement::wedge(&idx.iter().map(|&i| generators[i].clone()).collect::<Vec<_>>()))
        .collect();
    if p < 2 {
        return Ok(chains);
    }
    let boundaries: Vec<ChainElement> = chains.iter().map(ChainElement::boundary).collect();
    let mut rows_of: BTreeMap<Vec<BasisElem>, usize> = BTreeMap::new();
    for b in &boundaries {
        for (w, _) in b.terms() {
            let next = rows_of.len();
            rows_of.entry(w.clone()).or_insert(next);
        }
    }
    let mut rows = vec![vec![Rational::zero(); chains.len()]; rows_of.len()];
    for (col, b) in boundaries.iter().enumerate() {
        for (w, c) in b.terms() {
            rows[rows_of[w]][col] = c.clone();
        }
    }
    let depth = chains.first().map_or(1, ChainElement::depth);
    Ok(nullspace(rows, chains.len())
        .into_iter()
        .map(|v| {
            v.iter()
                .zip(&chains)
                .filter(|(c, _)| !c.is_zero())
                .fold(ChainElement::zero(p, depth), |acc, (c, ch)| acc.add(&ch.scale(c)))
        })
        .collect())
}

/// Whether `target` lies in the span of `basis`.
pub fn in_span(basis: &[ChainElement], target: &ChainElement) -> bool {
    let mut index: BTreeMap<Vec<BasisElem>, usize> = BTreeMap::new();
    for ch in basis.iter().chain(std::iter::once(target)) {
        for (w, _) in ch.terms() {
            let next = index.len();
            index.entry(w.clone()).or_insert(next);
        }
    }
    let as_row = |ch: &ChainElement| {
        let mut row = vec![Rational::zero(); index.len()];
        for (w, c) in ch.terms() {
            row[index[w]] = c.clone();
        }
        row
    };
    let rows: Vec<Vec<Rational>> = basis.iter().map(as_row).collect();
    let r = rank(rows.clone(), index.len());
    let mut with = rows;
    with.push(as_row(target));
    rank(with, index.len()) == r
}
