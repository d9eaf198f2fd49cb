//! Finite matrices over `ΨDif_n` with a scalar-identity component.
//!
//! An [`AugmentedOp`] is `F + Id ⊗ d`: a finite matrix `F` (finitely many
//! nonzero entries, unbounded positive indices) plus the infinite diagonal
//! matrix with `d` in every diagonal slot. The set is closed under products
//! and brackets, and a product containing at least one strictly finite factor
//! is finite again.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::symbol::{Derivation, PsiSymbol};

/// Sparse finite matrix; indices are 1-based.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinMatrix {
    entries: BTreeMap<(usize, usize), PsiSymbol>,
}

impl FinMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn elementary(row: usize, col: usize, entry: PsiSymbol) -> Self {
        assert!(row >= 1 && col >= 1, "matrix indices are 1-based");
        let mut m = Self::new();
        m.add_entry(row, col, &entry);
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &PsiSymbol)> {
        self.entries.iter()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&PsiSymbol> {
        self.entries.get(&(row, col))
    }

    /// Largest row or column index holding a nonzero entry.
    pub fn extent(&self) -> usize {
        self.entries.keys().map(|&(i, j)| i.max(j)).max().unwrap_or(0)
    }

    pub fn add_entry(&mut self, row: usize, col: usize, s: &PsiSymbol) {
        if s.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.entries.entry((row, col)) {
            Entry::Vacant(v) => {
                v.insert(s.clone());
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + s;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn map<F: Fn(&PsiSymbol) -> PsiSymbol>(&self, f: F) -> Self {
        let mut out = Self::new();
        for (&(i, j), s) in &self.entries {
            out.add_entry(i, j, &f(s));
        }
        out
    }

    fn row_major_product(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (&(i, j), a) in &self.entries {
            for (&(_, l), b) in other.entries.range((j, 0)..(j + 1, 0)) {
                out.add_entry(i, l, &a.product(b));
            }
        }
        out
    }
}

impl fmt::Debug for FinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AugmentedOp {
    finite: FinMatrix,
    id_part: PsiSymbol,
}

impl AugmentedOp {
    pub fn zero(nvars: usize, depth: u32) -> Self {
        AugmentedOp {
            finite: FinMatrix::new(),
            id_part: PsiSymbol::zero(nvars, depth),
        }
    }

    pub fn new(finite: FinMatrix, id_part: PsiSymbol) -> Self {
        for (_, s) in finite.entries() {
            assert_eq!(s.nvars(), id_part.nvars(), "mixed variable counts");
        }
        AugmentedOp { finite, id_part }
    }

    /// `E_{row,col} ⊗ entry`.
    pub fn elementary(row: usize, col: usize, entry: PsiSymbol) -> Self {
        let zero = PsiSymbol::zero(entry.nvars(), entry.depth());
        AugmentedOp::new(FinMatrix::elementary(row, col, entry), zero)
    }

    /// `Id ⊗ entry`.
    pub fn identity(entry: PsiSymbol) -> Self {
        AugmentedOp {
            finite: FinMatrix::new(),
            id_part: entry,
        }
    }

    pub fn finite(&self) -> &FinMatrix {
        &self.finite
    }

    pub fn id_part(&self) -> &PsiSymbol {
        &self.id_part
    }

    pub fn nvars(&self) -> usize {
        self.id_part.nvars()
    }

    /// Smallest depth among all stored symbols.
    pub fn depth(&self) -> u32 {
        self.finite
            .entries()
            .map(|(_, s)| s.depth())
            .chain(std::iter::once(self.id_part.depth()))
            .min()
            .unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.finite.is_zero() && self.id_part.is_zero()
    }

    /// No identity component.
    pub fn is_finite(&self) -> bool {
        self.id_part.is_zero()
    }

    pub fn with_depth(&self, depth: u32) -> Self {
        AugmentedOp {
            finite: self.finite.map(|s| s.with_depth(depth)),
            id_part: self.id_part.with_depth(depth),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        AugmentedOp {
            finite: self.finite.map(|s| s.scale(c)),
            id_part: self.id_part.scale(c),
        }
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        let mut finite = self.finite.clone();
        let c = Rational::from_integer(sign.into());
        for (&(i, j), s) in other.finite.entries() {
            finite.add_entry(i, j, &s.scale(&c));
        }
        let id_part = if sign < 0 {
            &self.id_part - &other.id_part
        } else {
            &self.id_part + &other.id_part
        };
        AugmentedOp { finite, id_part }
    }

    /// `(F₁ + Id d₁)(F₂ + Id d₂) = F₁F₂ + F₁·d₂ + d₁·F₂ + Id ⊗ d₁d₂`.
    pub fn product(&self, other: &Self) -> Self {
        let mut finite = self.finite.row_major_product(&other.finite);
        if !other.id_part.is_zero() {
            for (&(i, j), a) in self.finite.entries() {
                finite.add_entry(i, j, &a.product(&other.id_part));
            }
        }
        if !self.id_part.is_zero() {
            for (&(i, j), b) in other.finite.entries() {
                finite.add_entry(i, j, &self.id_part.product(b));
            }
        }
        let id_part = self.id_part.product(&other.id_part);
        AugmentedOp { finite, id_part }
    }

    pub fn bracket(&self, other: &Self) -> Self {
        self.product(other).combine(&other.product(self), -1)
    }

    /// `Tr_{ΨDif} ∘ Tr_{gl}`: the sum of residues of the diagonal entries.
    ///
    /// An identity component with zero residue contributes zero; a nonzero
    /// residue would make the infinite diagonal sum diverge.
    pub fn trace(&self) -> Result<Rational> {
        let r = self.id_part.residue();
        if !r.is_zero() {
            return Err(Error::NonTraceClass {
                residue: rational::to_string(&r),
            });
        }
        Ok(self
            .finite
            .entries()
            .filter(|((i, j), _)| i == j)
            .map(|(_, s)| s.residue())
            .fold(Rational::zero(), |acc, r| acc + r))
    }

    /// `trace(self · other)` computed from diagonal residues only.
    pub fn trace_of_product(&self, other: &Self) -> Result<Rational> {
        let r = self.id_part.residue_of_product(&other.id_part);
        if !r.is_zero() {
            return Err(Error::NonTraceClass {
                residue: rational::to_string(&r),
            });
        }
        let mut acc = Rational::zero();
        for (&(i, j), a) in self.finite.entries() {
            if let Some(b) = other.finite.get(j, i) {
                acc += a.residue_of_product(b);
            }
            if i == j {
                acc += a.residue_of_product(&other.id_part);
            }
        }
        for (&(i, j), b) in other.finite.entries() {
            if i == j {
                acc += self.id_part.residue_of_product(b);
            }
        }
        Ok(acc)
    }

    /// Applies `d` entrywise to the finite part and to the identity part.
    pub fn derive(&self, d: &Derivation) -> Self {
        AugmentedOp {
            finite: self.finite.map(|s| d.apply(s)),
            id_part: d.apply(&self.id_part),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = AugmentedOp::identity(PsiSymbol::one(self.nvars(), self.depth()));
        for _ in 0..e {
            out = out.product(self);
        }
        out
    }
}

impl fmt::Debug for AugmentedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AugmentedOp {
    /// `E[i,j]*(symbol) + … + ID*(symbol)`, parseable by
    /// [`crate::parse::parse_operator`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&(i, j), s) in self.finite.entries() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "E[{i},{j}]*({s})")?;
        }
        if !self.id_part.is_zero() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if self.id_part == PsiSymbol::one(self.nvars(), self.id_part.depth()) {
                f.write_str("ID")?;
            } else {
                write!(f, "ID*({})", self.id_part)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Add for &AugmentedOp {
    type Output = AugmentedOp;
    fn add(self, rhs: &AugmentedOp) -> AugmentedOp {
        self.combine(rhs, 1)
    }
}

impl Sub for &AugmentedOp {
    type Output = AugmentedOp;
    fn sub(self, rhs: &AugmentedOp) -> AugmentedOp {
        self.combine(rhs, -1)
    }
}

impl Mul for &AugmentedOp {
    type Output = AugmentedOp;
    fn mul(self, rhs: &AugmentedOp) -> AugmentedOp {
        self.product(rhs)
    }
}

impl Neg for &AugmentedOp {
    type Output = AugmentedOp;
    fn neg(self) -> AugmentedOp {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::symbol::Monomial;

    const N: u32 = 6;

    fn sym(xe: i32, de: i32) -> PsiSymbol {
        PsiSymbol::monomial(Monomial::new(&[xe], &[de]), Rational::one(), N)
    }

    #[test]
    fn elementary_idempotent() {
        let e = AugmentedOp::elementary(1, 1, sym(0, 0));
        assert_eq!(&e * &e, e);
    }

    #[test]
    fn identity_times_finite_is_entrywise() {
        let a = AugmentedOp::identity(sym(0, 1));
        let b = AugmentedOp::elementary(1, 1, sym(1, 0));
        let expected = AugmentedOp::elementary(1, 1, &sym(1, 1) + &sym(0, 0));
        assert_eq!(&a * &b, expected);
        assert!((&a * &b).is_finite());
    }

    #[test]
    fn identity_components_multiply() {
        let p = &AugmentedOp::identity(sym(1, 0)) * &AugmentedOp::identity(sym(0, 1));
        assert_eq!(p, AugmentedOp::identity(sym(1, 1)));
        assert!(!p.is_finite());
    }

    #[test]
    fn traces() {
        assert_eq!(AugmentedOp::elementary(1, 1, sym(-1, -1)).trace().unwrap(), int(1));
        assert_eq!(AugmentedOp::elementary(1, 2, sym(-1, -1)).trace().unwrap(), int(0));
        assert!(matches!(
            AugmentedOp::identity(sym(-1, -1)).trace(),
            Err(Error::NonTraceClass { .. })
        ));
        // zero-residue identity part is admissible
        assert_eq!(AugmentedOp::identity(sym(1, 1)).trace().unwrap(), int(0));
    }

    #[test]
    fn trace_of_product_matches_trace() {
        let a = &AugmentedOp::elementary(1, 2, sym(-2, -1)) + &AugmentedOp::identity(sym(0, 1));
        let b = &AugmentedOp::elementary(2, 1, sym(1, 0)) + &AugmentedOp::elementary(1, 1, sym(-1, -2));
        assert_eq!(a.trace_of_product(&b).unwrap(), (&a * &b).trace().unwrap());
        assert_eq!(b.trace_of_product(&a).unwrap(), (&b * &a).trace().unwrap());
        let bad = AugmentedOp::identity(sym(-1, -1));
        let one = AugmentedOp::identity(sym(0, 0));
        assert!(bad.trace_of_product(&one).is_err());
    }

    #[test]
    fn derivation_entrywise() {
        let d = Derivation::LnD(0);
        assert_eq!(
            AugmentedOp::identity(sym(1, 0)).derive(&d),
            AugmentedOp::identity(sym(0, -1))
        );
        assert!(AugmentedOp::elementary(1, 1, sym(0, 3)).derive(&d).is_zero());
    }

    #[test]
    fn derivation_leibniz_witness() {
        let d = Derivation::LnD(0);
        let a = AugmentedOp::elementary(1, 1, sym(1, 0));
        let lhs = (&a * &a).derive(&d);
        let rhs = &(&a.derive(&d) * &a) + &(&a * &a.derive(&d));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display() {
        let a = &AugmentedOp::elementary(1, 2, sym(1, 0)) + &AugmentedOp::identity(sym(0, 0));
        assert_eq!(a.to_string(), "E[1,2]*(x1) + ID");
    }
}
