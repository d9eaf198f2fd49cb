use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::CochainHandle;
use crate::error::Result;
use crate::matrix::AugmentedOp;
use crate::rational::{self, Rational};
use crate::symbol::{Monomial, PsiSymbol};

/// Unit basis vector of the augmented algebra: `E_{row,col} ⊗ m` or `Id ⊗ m`
/// for a monomial `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisElem {
    Entry { row: usize, col: usize, mono: Monomial },
    Identity(Monomial),
}

impl BasisElem {
    pub fn to_op(&self, depth: u32) -> AugmentedOp {
        match self {
            BasisElem::Entry { row, col, mono } => {
                AugmentedOp::elementary(*row, *col, PsiSymbol::monomial(mono.clone(), Rational::one(), depth))
            }
            BasisElem::Identity(mono) => {
                AugmentedOp::identity(PsiSymbol::monomial(mono.clone(), Rational::one(), depth))
            }
        }
    }

    /// Coordinates of `op` in the unit basis.
    pub fn decompose(op: &AugmentedOp) -> Vec<(BasisElem, Rational)> {
        let mut out = Vec::new();
        for (&(row, col), s) in op.finite().entries() {
            for (m, c) in s.terms() {
                out.push((
                    BasisElem::Entry {
                        row,
                        col,
                        mono: m.clone(),
                    },
                    c.clone(),
                ));
            }
        }
        for (m, c) in op.id_part().terms() {
            out.push((BasisElem::Identity(m.clone()), c.clone()));
        }
        out
    }
}

impl fmt::Display for BasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElem::Entry { row, col, mono } => write!(f, "E[{row},{col}]*({mono})"),
            BasisElem::Identity(mono) => write!(f, "ID*({mono})"),
        }
    }
}

/// Sorts a wedge word, returning the permutation sign, or `None` if a basis
/// element repeats.
fn canonical(mut word: Vec<BasisElem>) -> Option<(Vec<BasisElem>, i64)> {
    let mut sign = 1;
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && word[j - 1] > word[j] {
            word.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if word.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((word, sign))
}

/// Element of `Λ^p` of the augmented algebra: rational combination of sorted
/// wedge words of unit basis elements.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainElement {
    degree: usize,
    depth: u32,
    terms: BTreeMap<Vec<BasisElem>, Rational>,
}

impl ChainElement {
    pub fn zero(degree: usize, depth: u32) -> Self {
        ChainElement {
            degree,
            depth,
            terms: BTreeMap::new(),
        }
    }

    /// `g₁ ∧ … ∧ g_p`, expanded multilinearly.
    pub fn wedge(ops: &[AugmentedOp]) -> Self {
        let depth = ops.iter().map(AugmentedOp::depth).min().unwrap_or(1);
        let mut out = Self::zero(ops.len(), depth);
        let mut partial: Vec<(Vec<BasisElem>, Rational)> = vec![(Vec::new(), Rational::one())];
        for op in ops {
            let parts = BasisElem::decompose(op);
            let mut next = Vec::with_capacity(partial.len() * parts.len());
            for (w, c) in &partial {
                for (b, cb) in &parts {
                    if w.contains(b) {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(b.clone());
                    next.push((w2, c * cb));
                }
            }
            partial = next;
        }
        for (w, c) in partial {
            out.add_word(w, c);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<BasisElem>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &[BasisElem]) -> Rational {
        self.terms.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c · w₁ ∧ … ∧ w_p` for an arbitrary (unsorted) word.
    pub fn add_word(&mut self, word: Vec<BasisElem>, c: Rational) {
        assert_eq!(word.len(), self.degree, "wedge word of the wrong degree");
        if c.is_zero() {
            return;
        }
        let Some((w, sign)) = canonical(word) else {
            return;
        };
        let c = if sign < 0 { -c } else { c };
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "chains of different degree");
        let mut out = self.clone();
        out.depth = self.depth.min(other.depth);
        for (w, c) in &other.terms {
            out.add_word(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.degree, self.depth);
        for (w, v) in &self.terms {
            out.add_word(w.clone(), v * c);
        }
        out
    }

    /// `∂(g₁∧…∧g_p) = Σ_{i<j} (−1)^{i+j} [g_i, g_j] ∧ g₁ … ĝ_i … ĝ_j … g_p`.
    /// Degree-1 chains have zero boundary.
    pub fn boundary(&self) -> ChainElement {
        let p = self.degree;
        if p < 2 {
            return Self::zero(p.saturating_sub(1), self.depth);
        }
        let mut out = Self::zero(p - 1, self.depth);
        for (word, c) in &self.terms {
            let ops: Vec<AugmentedOp> = word.iter().map(|b| b.to_op(self.depth)).collect();
            for i in 0..p {
                for j in i + 1..p {
                    let br = ops[i].bracket(&ops[j]);
                    if br.is_zero() {
                        continue;
                    }
                    // 1-based exponent i + j has the parity of the 0-based one
                    let sign = if (i + j) % 2 == 0 { c.clone() } else { -c.clone() };
                    let rest: Vec<BasisElem> = (0..p).filter(|&t| t != i && t != j).map(|t| word[t].clone()).collect();
                    for (b, cb) in BasisElem::decompose(&br) {
                        let mut w = Vec::with_capacity(p - 1);
                        w.push(b);
                        w.extend(rest.iter().cloned());
                        out.add_word(w, &sign * cb);
                    }
                }
            }
        }
        out
    }

    /// `⟨c, γ⟩ = Σ coefficient · c(word)`.
    pub fn pairing(&self, cochain: &CochainHandle) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (word, c) in &self.terms {
            let ops: Vec<AugmentedOp> = word.iter().map(|b| b.to_op(self.depth)).collect();
            acc += cochain.eval(&ops)? * c;
        }
        Ok(acc)
    }
}

impl fmt::Debug for ChainElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ChainElement {
    /// `c·b₁ ∧ b₂ + …`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}·", rational::to_string(c))?;
            for (t, b) in w.iter().enumerate() {
                if t > 0 {
                    f.write_str(" ∧ ")?;
                }
                write!(f, "{b}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    pub(crate) fn sl2() -> [AugmentedOp; 3] {
        let one = PsiSymbol::one(1, 4);
        let e = AugmentedOp::elementary(1, 2, one.clone());
        let f = AugmentedOp::elementary(2, 1, one.clone());
        let h = &AugmentedOp::elementary(1, 1, one.clone()) - &AugmentedOp::elementary(2, 2, one);
        [e, f, h]
    }

    #[test]
    fn wedge_is_alternating() {
        let [e, f, h] = sl2();
        let a = ChainElement::wedge(&[e.clone(), f.clone(), h.clone()]);
        let b = ChainElement::wedge(&[f.clone(), e.clone(), h]);
        assert_eq!(a.scale(&int(-1)), b);
        assert!(ChainElement::wedge(&[e.clone(), f, e]).is_zero());
    }

    #[test]
    fn sl2_triple_is_a_cycle() {
        let [e, f, h] = sl2();
        assert!(ChainElement::wedge(&[e, f, h]).boundary().is_zero());
    }

    #[test]
    fn boundary_of_a_pair_is_minus_the_bracket() {
        let [e, f, h] = sl2();
        let b = ChainElement::wedge(&[e.clone(), f.clone()]).boundary();
        assert_eq!(b, ChainElement::wedge(&[h]).scale(&int(-1)));
        assert!(ChainElement::wedge(&[e]).boundary().is_zero());
    }

    #[test]
    fn boundary_squares_to_zero() {
        let x = PsiSymbol::x(1, 0, 6);
        let d = PsiSymbol::d(1, 0, 6);
        let ops = [
            AugmentedOp::elementary(1, 2, x.clone()),
            &AugmentedOp::elementary(2, 1, d.clone()) + &AugmentedOp::identity(&x * &d),
            AugmentedOp::elementary(1, 1, &x * &x),
            AugmentedOp::elementary(2, 2, d),
        ];
        let c = ChainElement::wedge(&ops[..3]).add(&ChainElement::wedge(&ops[1..]));
        assert!(!c.boundary().is_zero());
        assert!(c.boundary().boundary().is_zero());
    }
}
