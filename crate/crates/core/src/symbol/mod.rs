//! Formal pseudodifferential symbols `ΨDif_n`.
//!
//! A [`PsiSymbol`] is a finite exact-rational combination of normal-ordered
//! monomials `x^a ∂^b` with `a, b ∈ ℤⁿ`. Products of symbols containing
//! negative powers are infinite descending series; they are cut at a
//! truncation depth `N`, dropping every monomial with some exponent below
//! `-N`. Deep terms can climb back into the residue range after
//! multiplication by positive powers, so every reported scalar is re-evaluated
//! at a larger depth (see [`stability_check`]).

mod derivation;
mod monomial;
mod truncation;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

pub use derivation::{curvature, log_series, q_series, standard_derivations, Derivation};
pub use monomial::Monomial;
pub use truncation::{stability_check, Stability, TruncationPolicy};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PsiSymbol {
    nvars: usize,
    depth: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl PsiSymbol {
    pub fn zero(nvars: usize, depth: u32) -> Self {
        PsiSymbol {
            nvars,
            depth,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, depth: u32, c: Rational) -> Self {
        Self::monomial(Monomial::one(nvars), c, depth)
    }

    pub fn one(nvars: usize, depth: u32) -> Self {
        Self::constant(nvars, depth, Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational, depth: u32) -> Self {
        let mut s = Self::zero(m.nvars(), depth);
        s.add_term(m, c);
        s
    }

    /// The coordinate `x_var` (zero-based variable index).
    pub fn x(nvars: usize, var: usize, depth: u32) -> Self {
        Self::monomial(Monomial::single(nvars, var, 1, 0), Rational::one(), depth)
    }

    /// The derivative `∂_var` (zero-based variable index).
    pub fn d(nvars: usize, var: usize, depth: u32) -> Self {
        Self::monomial(Monomial::single(nvars, var, 0, 1), Rational::one(), depth)
    }

    pub fn from_terms<I>(nvars: usize, depth: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut s = Self::zero(nvars, depth);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// All exponents nonnegative: an element of the Weyl algebra `Dif_n`.
    pub fn is_differential_operator(&self) -> bool {
        self.terms.keys().all(|m| m.min_exponent() >= 0)
    }

    /// Largest exponent appearing anywhere, 0 for the zero symbol.
    pub fn max_exponent(&self) -> i32 {
        self.terms.keys().map(Monomial::max_exponent).max().unwrap_or(0)
    }

    /// Same symbol re-cut at `depth`. Lowering the depth drops terms; raising
    /// it only relabels (terms lost earlier are not recovered).
    pub fn with_depth(&self, depth: u32) -> Self {
        PsiSymbol {
            nvars: self.nvars,
            depth,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.retained(depth))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.nvars(), self.nvars, "monomial over the wrong number of variables");
        if c.is_zero() || !m.retained(self.depth) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.depth);
        }
        PsiSymbol {
            nvars: self.nvars,
            depth: self.depth,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn combine(&self, other: &Self, sign: i32) -> Self {
        assert_eq!(self.nvars, other.nvars, "symbols over different variable counts");
        let depth = self.depth.min(other.depth);
        let mut out = if depth == self.depth {
            self.clone()
        } else {
            self.with_depth(depth)
        };
        for (m, c) in &other.terms {
            let c = if sign < 0 { -c.clone() } else { c.clone() };
            out.add_term(m.clone(), c);
        }
        out
    }

    /// Normal-ordered product; the result depth is the smaller operand depth.
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "symbols over different variable counts");
        let depth = self.depth.min(other.depth);
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c12 = c1 * c2;
                for (m, k) in m1.product(m2, depth) {
                    let v = &c12 * Rational::from_integer(k);
                    *acc.entry(m).or_insert_with(Rational::zero) += v;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        PsiSymbol {
            nvars: self.nvars,
            depth,
            terms: acc,
        }
    }

    /// `a·b − b·a`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.product(other).combine(&other.product(self), -1)
    }

    /// Noncommutative residue: the coefficient of `x₁⁻¹…x_n⁻¹∂₁⁻¹…∂_n⁻¹`.
    pub fn residue(&self) -> Rational {
        self.coefficient(&Monomial::residue_monomial(self.nvars))
    }

    /// `residue(self · other)` without forming the product.
    ///
    /// Per variable the product term `x^{a+c-k} ∂^{b+e-k}` hits `x⁻¹∂⁻¹`
    /// only for `k = a + c + 1 = b + e + 1`, so each pair of monomials
    /// contributes at most one coefficient `Π C(b,k)(c)_k`.
    pub fn residue_of_product(&self, other: &Self) -> Rational {
        assert_eq!(self.nvars, other.nvars, "symbols over different variable counts");
        let mut by_shift: HashMap<Vec<i32>, Vec<(&Monomial, &Rational)>> = HashMap::new();
        for (m, c) in &other.terms {
            let shift: Vec<i32> = m.x_exps().iter().zip(m.d_exps()).map(|(x, d)| x - d).collect();
            by_shift.entry(shift).or_default().push((m, c));
        }
        let mut acc = Rational::zero();
        for (m1, c1) in &self.terms {
            let want: Vec<i32> = m1.x_exps().iter().zip(m1.d_exps()).map(|(x, d)| d - x).collect();
            let Some(partners) = by_shift.get(&want) else {
                continue;
            };
            for (m2, c2) in partners {
                if let Some(k) = residue_pairing(m1, m2) {
                    acc += c1 * *c2 * Rational::from_integer(k);
                }
            }
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.nvars, self.depth);
        for _ in 0..e {
            out = out.product(self);
        }
        out
    }
}

/// Coefficient of the residue monomial in `m1 · m2`, given that the exponent
/// differences already match.
fn residue_pairing(m1: &Monomial, m2: &Monomial) -> Option<BigInt> {
    let mut total = BigInt::one();
    for v in 0..m1.nvars() {
        let (a, b) = (m1.x_exps()[v] as i64, m1.d_exps()[v] as i64);
        let (c, e) = (m2.x_exps()[v] as i64, m2.d_exps()[v] as i64);
        let k = a + c + 1;
        if k < 0 || k != b + e + 1 {
            return None;
        }
        let mut binom = BigInt::one();
        let mut falling = BigInt::one();
        for j in 0..k {
            binom = binom * BigInt::from(b - j) / BigInt::from(j + 1);
            falling *= BigInt::from(c - j);
        }
        total *= binom * falling;
        if total.is_zero() {
            return None;
        }
    }
    Some(total)
}

impl fmt::Debug for PsiSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PsiSymbol[n={}, N={}]({self})", self.nvars, self.depth)
    }
}

impl fmt::Display for PsiSymbol {
    /// Canonical text form, e.g. `x1^2*d1 - 3*x1`. The output is accepted by
    /// [`crate::parse::parse_operator`]; a symbol whose terms are all negative
    /// is written as `0 - …` because the grammar has no unary minus.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // positive terms first so the leading sign is implicit
        let (pos, neg): (Vec<_>, Vec<_>) = self.terms.iter().partition(|(_, c)| c.is_positive());
        let mut first = true;
        if pos.is_empty() {
            f.write_str("0")?;
            first = false;
        }
        for (m, c) in pos.into_iter().chain(neg) {
            let abs = c.abs();
            if first {
                first = false;
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let unit = *m == Monomial::one(self.nvars);
            if unit {
                f.write_str(&rational::to_string(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", rational::to_string(&abs))?;
            }
        }
        Ok(())
    }
}

impl Add for &PsiSymbol {
    type Output = PsiSymbol;
    fn add(self, rhs: &PsiSymbol) -> PsiSymbol {
        self.combine(rhs, 1)
    }
}

impl Sub for &PsiSymbol {
    type Output = PsiSymbol;
    fn sub(self, rhs: &PsiSymbol) -> PsiSymbol {
        self.combine(rhs, -1)
    }
}

impl Mul for &PsiSymbol {
    type Output = PsiSymbol;
    fn mul(self, rhs: &PsiSymbol) -> PsiSymbol {
        self.product(rhs)
    }
}

impl Neg for &PsiSymbol {
    type Output = PsiSymbol;
    fn neg(self) -> PsiSymbol {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    const N: u32 = 6;

    fn x() -> PsiSymbol {
        PsiSymbol::x(1, 0, N)
    }

    fn d() -> PsiSymbol {
        PsiSymbol::d(1, 0, N)
    }

    fn mono(xe: i32, de: i32) -> PsiSymbol {
        PsiSymbol::monomial(Monomial::new(&[xe], &[de]), Rational::one(), N)
    }

    #[test]
    fn d_times_x() {
        assert_eq!(&d() * &x(), &mono(1, 1) + &mono(0, 0));
    }

    #[test]
    fn inverse_d_times_x() {
        assert_eq!(&mono(0, -1) * &x(), &mono(1, -1) - &mono(0, -2));
    }

    #[test]
    fn residue_monomial_times_dx_is_one() {
        let dx = &d() * &x();
        assert_eq!(&mono(-1, -1) * &dx, PsiSymbol::one(1, N));
    }

    #[test]
    fn unit_law() {
        let a = &x() + &d();
        assert_eq!(&a * &PsiSymbol::one(1, N), a);
        assert_eq!(&PsiSymbol::one(1, N) * &a, a);
    }

    #[test]
    fn associativity_witness() {
        let left = &(&d() * &x()) * &x();
        let right = &d() * &(&x() * &x());
        let expected = &mono(2, 1) + &mono(1, 0).scale(&int(2));
        assert_eq!(left, expected);
        assert_eq!(right, expected);
    }

    #[test]
    fn brackets() {
        assert_eq!(d().bracket(&x()), PsiSymbol::one(1, N));
        let a = &mono(2, -1) + &mono(-1, 3);
        assert!(a.bracket(&a).is_zero());
        assert_eq!(mono(1, 1).bracket(&x()), x());
        assert_eq!(&(&x() * &d()) - &(&d() * &x()), PsiSymbol::constant(1, N, int(-1)));
    }

    #[test]
    fn residue_of_product_matches_full_product() {
        let samples = [
            &mono(-1, -1) + &mono(2, 1),
            &mono(-2, -3) + &mono(0, -1).scale(&ratio(3, 2)),
            &mono(1, 0) + &mono(-3, -2),
            &mono(3, 1) - &mono(-1, 0),
        ];
        for a in &samples {
            for b in &samples {
                assert_eq!(a.residue_of_product(b), (a * b).residue(), "{a} · {b}");
            }
        }
    }

    #[test]
    fn residues() {
        assert_eq!(mono(-1, -1).residue(), int(1));
        assert_eq!(mono(2, 1).residue(), int(0));
    }

    #[test]
    fn depth_is_minimum_and_additive_ops_keep_it() {
        let a = PsiSymbol::x(1, 0, 3);
        let b = PsiSymbol::d(1, 0, 7);
        assert_eq!((&a * &b).depth(), 3);
        assert_eq!(a.scale(&ratio(1, 2)).depth(), 3);
        assert_eq!((&a + &a).depth(), 3);
    }

    #[test]
    fn terms_below_depth_are_dropped() {
        let s = PsiSymbol::monomial(Monomial::new(&[-4], &[0]), Rational::one(), 3);
        assert!(s.is_zero());
    }

    #[test]
    fn display_round_trip_shape() {
        let s = &(&mono(2, 1) - &x().scale(&int(3))) + &mono(-1, -1).scale(&ratio(-1, 2));
        assert_eq!(s.to_string(), "x1^2*d1 - 1/2*x1^-1*d1^-1 - 3*x1");
        assert_eq!((-&x()).to_string(), "0 - x1");
    }
}
