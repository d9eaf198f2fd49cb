//! Lifting cochains built from `k` derivations of `ΨDif_n` and their
//! curvature elements.
//!
//! Every formula is expanded into a list of [`TraceWord`]s tagged with a
//! [`Part`], and the value on a tuple of arguments is the sum of the
//! alternated word values. The available formulas:
//!
//! * [`Formula::Leading`]: `Alt Tr(D₁A₁ ⋯ D_kA_k · A_{k+1})` alone, a cocycle
//!   when all curvatures vanish;
//! * [`Formula::MarkedIntervals`]: the leading word plus, for every marked
//!   interval `t`, the word `𝒪(t)`, giving a `(k+1)`-cocycle;
//! * [`Formula::PairedDerivations`]: the two-derivation family of arity
//!   `2i + 1`;
//! * [`Formula::EvenSequences`]: the sum over even sequences without
//!   curvature corrections;
//! * [`Formula::MarkedCircles`]: the even-sequence sum plus the marked-circle
//!   corrections, a `(k + 2s − 1)`-cocycle.

mod combinatorics;
mod frames;
mod word;

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::AugmentedOp;
use crate::rational::{int, ratio, Rational};
use crate::symbol::{stability_check, Derivation, Stability, TruncationPolicy};

pub use combinatorics::{
    enumerate_even_sequences, enumerate_marked_circles, enumerate_marked_intervals, CompressedSequence, EvenSequence,
    MarkedCircle, MarkedInterval,
};
pub use frames::{
    derivations_for, grouped_terms, interval_class_closed_form, interval_class_term, leading_closed_form,
    projective_arguments, projective_derivations, psi_on_matrix_cycle, twisted_generators,
};
pub use word::{signed_permutations, Factor, TraceWord, WordEvaluator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Leading,
    MarkedIntervals,
    PairedDerivations,
    EvenSequences,
    MarkedCircles,
}

/// Which summand a trace word belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    /// Words without curvature factors.
    Leading,
    /// Words with this many curvature factors.
    Curvature(usize),
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::Leading => f.write_str("leading"),
            Part::Curvature(l) => write!(f, "curvature-{l}"),
        }
    }
}

/// A Lifting cochain: the derivations, the excess parameter `s` and the
/// formula used to expand it into trace words.
#[derive(Clone, Debug)]
pub struct CocycleSpec {
    derivations: Vec<Derivation>,
    s: usize,
    formula: Formula,
    depth: u32,
}

impl CocycleSpec {
    /// The default formula for `(k, s)`: marked intervals for `s = 1`, the
    /// paired-derivation family for `k = 2`, marked circles otherwise.
    pub fn new(derivations: Vec<Derivation>, s: usize, depth: u32) -> Result<Self> {
        let formula = match (derivations.len(), s) {
            (_, 1) => Formula::MarkedIntervals,
            (2, _) => Formula::PairedDerivations,
            _ => Formula::MarkedCircles,
        };
        Self::with_formula(derivations, s, formula, depth)
    }

    pub fn with_formula(derivations: Vec<Derivation>, s: usize, formula: Formula, depth: u32) -> Result<Self> {
        let k = derivations.len();
        if k == 0 || s == 0 {
            return Err(Error::InvalidSpec("need at least one derivation and s ≥ 1".into()));
        }
        match formula {
            Formula::Leading | Formula::MarkedIntervals if s != 1 => {
                return Err(Error::InvalidSpec(format!("{formula:?} is defined for s = 1 only")));
            }
            Formula::PairedDerivations if k != 2 => {
                return Err(Error::InvalidSpec("the paired-derivation family needs k = 2".into()));
            }
            _ => {}
        }
        if depth == 0 {
            return Err(Error::InvalidSpec("truncation depth must be at least 1".into()));
        }
        Ok(CocycleSpec {
            derivations,
            s,
            formula,
            depth,
        })
    }

    pub fn k(&self) -> usize {
        self.derivations.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn formula(&self) -> Formula {
        self.formula
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn derivations(&self) -> &[Derivation] {
        &self.derivations
    }

    /// Same cochain at another truncation depth.
    pub fn at_depth(&self, depth: u32) -> Self {
        CocycleSpec { depth, ..self.clone() }
    }

    /// `k + 2s − 1`.
    pub fn arity(&self) -> usize {
        self.k() + 2 * self.s - 1
    }

    pub fn words(&self) -> Vec<(Part, TraceWord)> {
        let k = self.k();
        match self.formula {
            Formula::Leading => vec![(Part::Leading, leading_word(k))],
            Formula::MarkedIntervals => {
                let mut out = vec![(Part::Leading, leading_word(k))];
                for l in 1..=k / 2 {
                    for t in enumerate_marked_intervals(k, l) {
                        out.push((Part::Curvature(l), interval_word(&t)));
                    }
                }
                out
            }
            Formula::PairedDerivations => paired_words(self.s),
            Formula::EvenSequences => circle_words(k, self.s, false),
            Formula::MarkedCircles => circle_words(k, self.s, true),
        }
    }

    /// Value on `args`, split by part, in part order.
    pub fn psi_parts(&self, args: &[AugmentedOp]) -> Result<Vec<(Part, Rational)>> {
        self.check_arity(args)?;
        let ev = WordEvaluator::new(args, &self.derivations, self.depth);
        let mut parts: Vec<(Part, Rational)> = Vec::new();
        for (part, w) in self.words() {
            let v = ev.evaluate(&w)?;
            match parts.iter_mut().find(|(p, _)| *p == part) {
                Some((_, acc)) => *acc += v,
                None => parts.push((part, v)),
            }
        }
        parts.sort_by_key(|(p, _)| *p);
        Ok(parts)
    }

    pub fn psi(&self, args: &[AugmentedOp]) -> Result<Rational> {
        Ok(self
            .psi_parts(args)?
            .into_iter()
            .fold(Rational::zero(), |acc, (_, v)| acc + v))
    }

    /// The curvature-free summand only.
    pub fn leading_term(&self, args: &[AugmentedOp]) -> Result<Rational> {
        self.check_arity(args)?;
        let ev = WordEvaluator::new(args, &self.derivations, self.depth);
        let mut acc = Rational::zero();
        for (part, w) in self.words() {
            if part == Part::Leading {
                acc += ev.evaluate(&w)?;
            }
        }
        Ok(acc)
    }

    /// `psi` at the spec depth and at `depth + slack`.
    pub fn psi_stable(&self, args: &[AugmentedOp], slack: u32) -> Result<Stability> {
        stability_check(|n| self.at_depth(n).psi(args), TruncationPolicy::new(self.depth, slack))
    }

    fn check_arity(&self, args: &[AugmentedOp]) -> Result<()> {
        if args.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: args.len(),
            });
        }
        Ok(())
    }
}

fn leading_word(k: usize) -> TraceWord {
    let mut factors: Vec<Factor> = (0..k).map(|j| Factor::Arg(Some(j))).collect();
    factors.push(Factor::Arg(None));
    TraceWord::new(factors, Rational::one())
}

/// `𝒪(t)`: a marked point `j` turns `D_jA_j · D_{j+1}A_{j+1}` into
/// `A_j · Q_{j,j+1} · A_{j+1}`.
pub(crate) fn interval_word(t: &MarkedInterval) -> TraceWord {
    let k = t.k();
    let mut factors = Vec::new();
    for j in 1..=k + 1 {
        if t.is_marked(j) {
            factors.push(Factor::Arg(None));
            factors.push(Factor::Curvature(j - 1, j));
        } else if (j > 1 && t.is_marked(j - 1)) || j == k + 1 {
            factors.push(Factor::Arg(None));
        } else {
            factors.push(Factor::Arg(Some(j - 1)));
        }
    }
    TraceWord::new(factors, Rational::one())
}

/// Two derivations, arity `2i + 1`: `Alt Tr(Q₁₂ A₁ ⋯)` plus the words with
/// `D₁` on the first argument and `D₂` on an even position `2, 4, …, s + 1`,
/// where `s = i` for odd `i` and `s = i + 1` for even `i`; in the even case
/// the last word carries weight `1/2`.
fn paired_words(i: usize) -> Vec<(Part, TraceWord)> {
    let m = 2 * i + 1;
    let mut out = Vec::new();
    let (top, last_weight) = if i.is_multiple_of(2) {
        (i + 1, ratio(1, 2))
    } else {
        (i, int(1))
    };
    for pos in (2..=top + 1).step_by(2) {
        let mut factors = vec![Factor::Arg(None); m];
        factors[0] = Factor::Arg(Some(0));
        factors[pos - 1] = Factor::Arg(Some(1));
        let w = if pos == top + 1 { last_weight.clone() } else { int(1) };
        out.push((Part::Leading, TraceWord::new(factors, w)));
    }
    let mut q = vec![Factor::Arg(None), Factor::Curvature(0, 1)];
    q.extend(std::iter::repeat_n(Factor::Arg(None), m - 1));
    out.push((Part::Curvature(1), TraceWord::new(q, int(1))));
    out
}

/// Words of the even-sequence formula: for every even sequence, the word of
/// its compression with derivations `1, …, k` on the ones, signed by
/// `(−1)^{s₁}`, and optionally the marked-circle corrections.
fn circle_words(k: usize, s: usize, corrections: bool) -> Vec<(Part, TraceWord)> {
    let mut out = Vec::new();
    for a in enumerate_even_sequences(k, s) {
        let c = a.compress();
        let bits = c.bits();
        let len = bits.len();
        let mut label = vec![None; len];
        let mut next = 0;
        for (i, &b) in bits.iter().enumerate() {
            if b == 1 {
                label[i] = Some(next);
                next += 1;
            }
        }
        let sign = int(c.sign());
        let base: Vec<Factor> = label.iter().map(|&d| Factor::Arg(d)).collect();
        out.push((Part::Leading, TraceWord::new(base.clone(), sign.clone())));
        if !corrections {
            continue;
        }
        for l in 1..=k / 2 {
            for t in enumerate_marked_circles(&c, l) {
                out.push((Part::Curvature(l), circle_word(&label, &t, sign.clone())));
            }
        }
    }
    out
}

/// Marked position `i` (1-based) becomes `A_i · Q_{j(i), j(i+1)}` followed by
/// an underived `A_{i+1}`, cyclically.
fn circle_word(label: &[Option<usize>], t: &MarkedCircle, weight: Rational) -> TraceWord {
    let len = label.len();
    let mut slots: Vec<Factor> = label.iter().map(|&d| Factor::Arg(d)).collect();
    let mut after: Vec<Option<Factor>> = vec![None; len];
    for &p in t.marks() {
        let i = p - 1;
        let j = (i + 1) % len;
        let (a, b) = (label[i].expect("marked ones"), label[j].expect("marked ones"));
        slots[i] = Factor::Arg(None);
        slots[j] = Factor::Arg(None);
        after[i] = Some(Factor::Curvature(a, b));
    }
    let mut factors = Vec::with_capacity(len + t.marks().len());
    for (slot, q) in slots.into_iter().zip(after) {
        factors.push(slot);
        factors.extend(q);
    }
    TraceWord::new(factors, weight)
}
