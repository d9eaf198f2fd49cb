//! Trace words and their alternated evaluation.
//!
//! A [`TraceWord`] is a pattern such as `Tr(A · Q₁₂ · A · D₃A · D₄A · A)`: a
//! sequence of argument slots, each optionally hit by one derivation,
//! interleaved with curvature factors `Q_{ij}`. Evaluating the word on
//! arguments `A_1, …, A_m` means alternating over the order of the arguments
//! and over the labels of the derivations, with signs and without
//! normalising factor:
//!
//! `Σ_{τ} Σ_{σ} sgn τ · sgn σ · Tr(A_{σ(1)} · Q_{τ(1)τ(2)} · A_{σ(2)} · D_{τ(3)}A_{σ(3)} ⋯)`.
//!
//! The labels inside a curvature factor are permuted along with the rest,
//! but the two orders `Q_{ij}` and `Q_{ji} = −Q_{ij}` are one term, not two:
//! only relabellings that keep each pair increasing are summed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::AugmentedOp;
use crate::rational::{self, Rational};
use crate::symbol::{curvature, Derivation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    /// An argument slot, optionally hit by the derivation with this
    /// (zero-based) index.
    Arg(Option<usize>),
    /// `Id ⊗ Q_{ij}` for derivation indices `i, j` (zero-based).
    Curvature(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceWord {
    factors: Vec<Factor>,
    weight: Rational,
}

impl TraceWord {
    pub fn new(factors: Vec<Factor>, weight: Rational) -> Self {
        TraceWord { factors, weight }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn arity(&self) -> usize {
        self.factors.iter().filter(|f| matches!(f, Factor::Arg(_))).count()
    }

    /// Derivation indices applied to arguments, sorted.
    pub fn derivations(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .factors
            .iter()
            .filter_map(|f| match f {
                Factor::Arg(d) => *d,
                Factor::Curvature(..) => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Every derivation index occurring in the word, on arguments or in
    /// curvature factors, sorted.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = self.derivations();
        for f in &self.factors {
            if let Factor::Curvature(i, j) = f {
                out.extend([*i, *j]);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Labels in order of appearance; `Q_{ij}` contributes `i` then `j`.
    pub fn label_order(&self) -> Vec<usize> {
        self.factors
            .iter()
            .flat_map(|f| match f {
                Factor::Arg(Some(j)) => vec![*j],
                Factor::Arg(None) => vec![],
                Factor::Curvature(i, j) => vec![*i, *j],
            })
            .collect()
    }

    pub fn curvature_count(&self) -> usize {
        self.factors
            .iter()
            .filter(|f| matches!(f, Factor::Curvature(..)))
            .count()
    }
}

impl fmt::Display for TraceWord {
    /// `2·Tr(D1A·Q12·A·A)` with 1-based derivation indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.weight.is_one() {
            write!(f, "{}·", rational::to_string(&self.weight))?;
        }
        f.write_str("Tr(")?;
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            match fac {
                Factor::Arg(None) => f.write_str("A")?,
                Factor::Arg(Some(j)) => write!(f, "D{}A", j + 1)?,
                Factor::Curvature(i, j) => write!(f, "Q{}{}", i + 1, j + 1)?,
            }
        }
        f.write_str(")")
    }
}

/// Arguments, their derivatives and the curvature operators, shared by all
/// words of one cochain evaluation.
pub struct WordEvaluator {
    args: Vec<AugmentedOp>,
    /// `derived[a][j] = D_j(A_a)`.
    derived: Vec<Vec<AugmentedOp>>,
    curvatures: HashMap<(usize, usize), AugmentedOp>,
}

impl WordEvaluator {
    pub fn new(args: &[AugmentedOp], derivations: &[Derivation], depth: u32) -> Self {
        let args: Vec<AugmentedOp> = args.iter().map(|a| a.with_depth(depth)).collect();
        let nvars = args.first().map_or(1, AugmentedOp::nvars);
        let derived = args
            .par_iter()
            .map(|a| derivations.iter().map(|d| a.derive(d)).collect())
            .collect();
        let mut curvatures = HashMap::new();
        for (i, di) in derivations.iter().enumerate() {
            for (j, dj) in derivations.iter().enumerate() {
                let q = curvature(di, dj, nvars, depth);
                curvatures.insert((i, j), AugmentedOp::identity(q));
            }
        }
        WordEvaluator {
            args,
            derived,
            curvatures,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// Fully alternated value of `word` times its weight.
    ///
    /// The sum runs slot by slot over states `(arguments used, labels
    /// used)`: all orderings reaching the same state are added up before
    /// the next factor is multiplied in, so each state costs one product
    /// per continuation instead of one per ordering.
    pub fn evaluate(&self, word: &TraceWord) -> Result<Rational> {
        let m = self.args.len();
        if word.arity() != m {
            return Err(Error::ArityMismatch {
                expected: word.arity(),
                found: m,
            });
        }
        if word.weight.is_zero() || m == 0 {
            return Ok(Rational::zero());
        }
        let labels = word.labels();
        let order = word.label_order();
        assert_eq!(order.len(), labels.len(), "every label occurs once in {word}");
        let ranks: Vec<usize> = order.iter().map(|l| labels.binary_search(l).expect("label")).collect();
        let base_sign = permutation_sign(&ranks);

        let last = word.factors.last().expect("nonempty word");
        let mut layer: Vec<(State, AugmentedOp)> = Vec::new();
        let mut first = true;
        let mut total = Rational::zero();
        for (pos, factor) in word.factors.iter().enumerate() {
            let closing = pos + 1 == word.factors.len();
            if first {
                let moves = self.moves(factor, &labels, State::default());
                if closing {
                    for (_, sign, op) in moves {
                        total += signed(op.trace()?, sign);
                    }
                    break;
                }
                layer = merge(
                    moves
                        .into_iter()
                        .map(|(st, sign, op)| (st, op.scale(&Rational::from_integer(sign.into())))),
                );
                first = false;
                continue;
            }
            if closing {
                let parts: Vec<Rational> = layer
                    .par_iter()
                    .map(|(st, prefix)| {
                        self.moves(last, &labels, *st)
                            .into_iter()
                            .map(|(_, sign, op)| Ok(signed(prefix.trace_of_product(op)?, sign)))
                            .sum::<Result<Rational>>()
                    })
                    .collect::<Result<_>>()?;
                total = parts.into_iter().fold(Rational::zero(), |a, b| a + b);
                break;
            }
            let products: Vec<Vec<(State, AugmentedOp)>> = layer
                .par_iter()
                .map(|(st, prefix)| {
                    self.moves(factor, &labels, *st)
                        .into_iter()
                        .filter_map(|(next, sign, op)| {
                            let p = prefix.product(op);
                            (!p.is_zero()).then(|| (next, if sign < 0 { p.scale(&-Rational::one()) } else { p }))
                        })
                        .collect()
                })
                .collect();
            layer = merge(products.into_iter().flatten());
            if layer.is_empty() {
                return Ok(Rational::zero());
            }
        }
        Ok(signed(total, base_sign) * &word.weight)
    }

    /// Ways to fill one slot from `state`: the new state, the sign picked
    /// up and the operator placed in the slot. Picking the element of rank
    /// `r` among the unused ones contributes `(−1)^r`.
    fn moves(&self, factor: &Factor, labels: &[usize], st: State) -> Vec<(State, i64, &AugmentedOp)> {
        let free_args = free(st.args, self.args.len());
        let free_labels = free(st.labels, labels.len());
        let mut out = Vec::new();
        match factor {
            Factor::Arg(None) => {
                for (r, &a) in free_args.iter().enumerate() {
                    let op = &self.args[a];
                    if !op.is_zero() {
                        out.push((st.with_arg(a), parity(r), op));
                    }
                }
            }
            Factor::Arg(Some(_)) => {
                for (r, &a) in free_args.iter().enumerate() {
                    for (q, &v) in free_labels.iter().enumerate() {
                        let op = &self.derived[a][labels[v]];
                        if !op.is_zero() {
                            out.push((st.with_arg(a).with_label(v), parity(r + q), op));
                        }
                    }
                }
            }
            Factor::Curvature(..) => {
                for (q1, &v1) in free_labels.iter().enumerate() {
                    // After removing v1, the labels above it shift down one rank.
                    for (q2, &v2) in free_labels.iter().enumerate().skip(q1 + 1) {
                        let op = &self.curvatures[&(labels[v1], labels[v2])];
                        if !op.is_zero() {
                            out.push((st.with_label(v1).with_label(v2), parity(q1 + q2 - 1), op));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Arguments and labels consumed so far, as bit masks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct State {
    args: u32,
    labels: u32,
}

impl State {
    fn with_arg(self, a: usize) -> Self {
        State {
            args: self.args | 1 << a,
            ..self
        }
    }

    fn with_label(self, v: usize) -> Self {
        State {
            labels: self.labels | 1 << v,
            ..self
        }
    }
}

fn free(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) == 0).collect()
}

fn parity(r: usize) -> i64 {
    if r.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn signed(v: Rational, sign: i64) -> Rational {
    if sign < 0 {
        -v
    } else {
        v
    }
}

/// Sums operators landing in the same state, in a fixed order.
fn merge(items: impl Iterator<Item = (State, AugmentedOp)>) -> Vec<(State, AugmentedOp)> {
    let mut acc: BTreeMap<State, AugmentedOp> = BTreeMap::new();
    for (st, op) in items {
        match acc.get_mut(&st) {
            Some(cur) => *cur = &*cur + &op,
            None => {
                acc.insert(st, op);
            }
        }
    }
    acc.into_iter().filter(|(_, op)| !op.is_zero()).collect()
}

/// Sign of a permutation given as a sequence of distinct ranks.
fn permutation_sign(p: &[usize]) -> i64 {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    parity(inversions)
}

/// All permutations of `items` with their signs, in lexicographic order of
/// positions.
pub fn signed_permutations<T: Clone>(items: &[T]) -> Vec<(Vec<T>, i64)> {
    fn go<T: Clone>(rest: &mut Vec<T>, cur: &mut Vec<T>, sign: i64, out: &mut Vec<(Vec<T>, i64)>) {
        if rest.is_empty() {
            out.push((cur.clone(), sign));
            return;
        }
        for r in 0..rest.len() {
            let item = rest.remove(r);
            cur.push(item.clone());
            let s = if r % 2 == 0 { sign } else { -sign };
            go(rest, cur, s, out);
            cur.pop();
            rest.insert(r, item);
        }
    }
    let mut out = Vec::new();
    go(&mut items.to_vec(), &mut Vec::new(), 1, &mut out);
    out
}
