use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::PsiSymbol;
use crate::rational::{factorial, Rational};

/// A derivation of `ΨDif_n`.
///
/// `LnX(i)` and `LnD(i)` are the outer derivations `ad(ln x_i)` and
/// `ad(ln ∂_i)`; variable indices are zero-based. `Inner(q)` is `ad(q)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Derivation {
    LnX(usize),
    LnD(usize),
    Inner(PsiSymbol),
}

impl Derivation {
    pub fn is_outer(&self) -> bool {
        !matches!(self, Derivation::Inner(_))
    }

    /// Applies the derivation to a symbol. The result has the depth of `a`
    /// (or the smaller depth of `a` and `q` for inner derivations).
    pub fn apply(&self, a: &PsiSymbol) -> PsiSymbol {
        match self {
            Derivation::Inner(q) => q.bracket(a),
            Derivation::LnD(var) => log_conjugation(a, *var, ConjugatingBy::D),
            Derivation::LnX(var) => log_conjugation(a, *var, ConjugatingBy::X),
        }
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::LnX(i) => write!(f, "ad(ln x{})", i + 1),
            Derivation::LnD(i) => write!(f, "ad(ln d{})", i + 1),
            Derivation::Inner(q) => write!(f, "ad({q})"),
        }
    }
}

#[derive(Clone, Copy)]
enum ConjugatingBy {
    X,
    D,
}

/// Coefficient of `s` in the falling factorial `(σ·s)(σ·s − 1)…(σ·s − k + 1)`.
fn falling_linear_coefficient(sigma: i64, k: u32) -> BigInt {
    // the constant term vanishes (the s = 0 factor); the linear coefficient
    // is σ times the product of the remaining constant factors −1, …, −(k−1)
    let rest = factorial(k - 1);
    let sign = if (k - 1).is_multiple_of(2) { 1 } else { -1 };
    BigInt::from(sigma * sign) * rest
}

/// `d/ds [Ad(g^s)(a)]` at `s = 0` for `g = ∂_var` or `g = x_var`.
///
/// On a monomial `x^c ∂^e` (in the variable `var`):
///
/// * `∂^s x^c ∂^{-s} = Σ_k C(s,k) (c)_k x^{c-k} ∂^{-k}`, so the `s`-derivative
///   keeps `(d/ds C(s,k))|₀ · (c)_k`;
/// * `x^s ∂^e x^{-s} = Σ_k C(e,k) (-s)_k x^{-k} ∂^{e-k}`, so the derivative
///   keeps `C(e,k) · (d/ds (-s)_k)|₀`.
///
/// The `k = 0` term is `s`-independent and drops out.
fn log_conjugation(a: &PsiSymbol, var: usize, by: ConjugatingBy) -> PsiSymbol {
    assert!(var < a.nvars(), "derivation variable out of range");
    let depth = a.depth();
    let floor = -(depth as i64);
    let mut out = PsiSymbol::zero(a.nvars(), depth);
    for (m, coeff) in a.terms() {
        let c = m.x_exps()[var] as i64;
        let e = m.d_exps()[var] as i64;
        // polynomial-in-k factor independent of s: (c)_k or C(e,k)
        let mut fixed = BigInt::one();
        let mut k: u32 = 1;
        loop {
            let xe = c - k as i64;
            let de = e - k as i64;
            if xe < floor || de < floor {
                break;
            }
            let km1 = (k - 1) as i64;
            let s_coeff: Rational = match by {
                ConjugatingBy::D => {
                    fixed *= BigInt::from(c - km1);
                    // C(s,k) = (s)_k / k!
                    Rational::new(falling_linear_coefficient(1, k), factorial(k))
                }
                ConjugatingBy::X => {
                    fixed = fixed * BigInt::from(e - km1) / BigInt::from(k);
                    Rational::from_integer(falling_linear_coefficient(-1, k))
                }
            };
            if fixed.is_zero() {
                break;
            }
            let mut x: Vec<i32> = m.x_exps().to_vec();
            let mut d: Vec<i32> = m.d_exps().to_vec();
            x[var] = xe as i32;
            d[var] = de as i32;
            let term = coeff * &s_coeff * Rational::from_integer(fixed.clone());
            out.add_term(Monomial::new(&x, &d), term);
            k += 1;
        }
    }
    out
}

/// `ln ∂ ∘ ln x` curvature series `Σ_{m≥1} ((m−1)!/m) x^{-m} ∂^{-m}` in one
/// variable, up to `m = depth`.
pub fn log_series(nvars: usize, var: usize, depth: u32) -> PsiSymbol {
    let mut q = PsiSymbol::zero(nvars, depth);
    for m in 1..=depth {
        let coeff = Rational::new(factorial(m - 1), BigInt::from(m));
        q.add_term(Monomial::single(nvars, var, -(m as i32), -(m as i32)), coeff);
    }
    q
}

/// The element `Q` with `[a, b] = ad(Q)`, chosen with zero constant term.
///
/// * `[ad ln ∂_i, ad ln x_i] = ad(log_series(i))`, and the reverse order
///   gives the negative;
/// * outer derivations in different variables, or of the same kind, commute;
/// * `[D, ad q] = ad(D q)` for a derivation `D`;
/// * `[ad p, ad q] = ad [p, q]`.
pub fn curvature(a: &Derivation, b: &Derivation, nvars: usize, depth: u32) -> PsiSymbol {
    use Derivation::*;
    match (a, b) {
        (LnD(i), LnX(j)) if i == j => log_series(nvars, *i, depth),
        (LnX(i), LnD(j)) if i == j => -&log_series(nvars, *i, depth),
        (Inner(p), Inner(q)) => p.bracket(q),
        (outer, Inner(q)) => outer.apply(q),
        (Inner(p), outer) => -&outer.apply(p),
        _ => PsiSymbol::zero(nvars, depth),
    }
}

/// The ordered list `ad ln x_1, …, ad ln x_n, ad ln ∂_1, …, ad ln ∂_n`.
pub fn standard_derivations(nvars: usize) -> Vec<Derivation> {
    (0..nvars)
        .map(Derivation::LnX)
        .chain((0..nvars).map(Derivation::LnD))
        .collect()
}

/// `Q_{ij}` for positions `i, j` (zero-based) in [`standard_derivations`].
pub fn q_series(nvars: usize, i: usize, j: usize, depth: u32) -> PsiSymbol {
    let list = standard_derivations(nvars);
    curvature(&list[i], &list[j], nvars, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    const N: u32 = 6;

    fn mono(xe: i32, de: i32) -> PsiSymbol {
        PsiSymbol::monomial(Monomial::new(&[xe], &[de]), Rational::one(), N)
    }

    #[test]
    fn ln_d_kills_powers_of_d() {
        for k in -3..4 {
            assert!(Derivation::LnD(0).apply(&mono(0, k)).is_zero());
        }
    }

    #[test]
    fn ln_d_on_x_and_x_squared() {
        assert_eq!(Derivation::LnD(0).apply(&mono(1, 0)), mono(0, -1));
        let expected = &mono(1, -1).scale(&int(2)) - &mono(0, -2);
        assert_eq!(Derivation::LnD(0).apply(&mono(2, 0)), expected);
    }

    #[test]
    fn ln_x_on_d() {
        assert_eq!(Derivation::LnX(0).apply(&mono(0, 1)), -&mono(-1, 0));
        assert!(Derivation::LnX(0).apply(&mono(3, 0)).is_zero());
    }

    #[test]
    fn displayed_q_coefficients() {
        let q = log_series(1, 0, 4);
        assert_eq!(q.coefficient(&Monomial::new(&[-1], &[-1])), int(1));
        assert_eq!(q.coefficient(&Monomial::new(&[-2], &[-2])), ratio(1, 2));
        assert_eq!(q.coefficient(&Monomial::new(&[-3], &[-3])), ratio(2, 3));
        assert_eq!(q.coefficient(&Monomial::new(&[-4], &[-4])), ratio(6, 4));
        assert_eq!(q.len(), 4);
    }

    #[test]
    fn q_indexing_follows_standard_order() {
        // n = 1: index 0 is ln x, index 1 is ln ∂
        assert_eq!(q_series(1, 1, 0, 4), log_series(1, 0, 4));
        assert_eq!(q_series(1, 0, 1, 4), -&log_series(1, 0, 4));
        assert!(q_series(2, 0, 1, 4).is_zero());
        assert!(q_series(2, 0, 3, 4).is_zero());
        assert_eq!(q_series(2, 3, 1, 4), log_series(2, 1, 4));
    }
}
