use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use smallvec::SmallVec;

pub(crate) type Exponents = SmallVec<[i32; 4]>;

/// Normal-ordered word `x^a ∂^b`: every `x` factor stands to the left of every
/// `∂` factor. Exponents may be any integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    x: Exponents,
    d: Exponents,
}

impl Monomial {
    pub fn new(x: &[i32], d: &[i32]) -> Self {
        assert_eq!(x.len(), d.len(), "x and ∂ exponent vectors differ in length");
        Monomial {
            x: x.iter().copied().collect(),
            d: d.iter().copied().collect(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            x: SmallVec::from_elem(0, nvars),
            d: SmallVec::from_elem(0, nvars),
        }
    }

    /// `x_var^xe ∂_var^de`, all other exponents zero.
    pub fn single(nvars: usize, var: usize, xe: i32, de: i32) -> Self {
        let mut m = Self::one(nvars);
        m.x[var] = xe;
        m.d[var] = de;
        m
    }

    /// `x₁⁻¹…x_n⁻¹ ∂₁⁻¹…∂_n⁻¹`, the monomial read off by the residue.
    pub fn residue_monomial(nvars: usize) -> Self {
        Monomial {
            x: SmallVec::from_elem(-1, nvars),
            d: SmallVec::from_elem(-1, nvars),
        }
    }

    pub fn nvars(&self) -> usize {
        self.x.len()
    }

    pub fn x_exps(&self) -> &[i32] {
        &self.x
    }

    pub fn d_exps(&self) -> &[i32] {
        &self.d
    }

    pub fn min_exponent(&self) -> i32 {
        self.x.iter().chain(self.d.iter()).copied().min().unwrap_or(0)
    }

    pub fn max_exponent(&self) -> i32 {
        self.x.iter().chain(self.d.iter()).copied().max().unwrap_or(0)
    }

    pub fn is_residue_monomial(&self) -> bool {
        self.x.iter().chain(self.d.iter()).all(|&e| e == -1)
    }

    pub(crate) fn retained(&self, depth: u32) -> bool {
        self.min_exponent() >= -(depth as i32)
    }

    /// Normal-ordered expansion of `self · other`, truncated at `depth`.
    ///
    /// Per variable, `∂^b x^c = Σ_k C(b,k) (c)_k x^{c-k} ∂^{b-k}` with the
    /// generalized binomial `C(b,k)` and falling factorial `(c)_k`. Variables
    /// commute with each other, so the full expansion is the Cartesian product
    /// of the per-variable expansions.
    pub fn product(&self, other: &Monomial, depth: u32) -> Vec<(Monomial, BigInt)> {
        let n = self.nvars();
        assert_eq!(n, other.nvars(), "monomials over different variable counts");
        let per_var: Vec<Expansion> = (0..n)
            .map(|i| variable_expansion(self.x[i], self.d[i], other.x[i], other.d[i], depth))
            .collect();
        if per_var.iter().any(|v| v.is_empty()) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            let mut x = Exponents::with_capacity(n);
            let mut d = Exponents::with_capacity(n);
            let mut c = BigInt::one();
            for (v, &j) in idx.iter().enumerate() {
                let (xe, de, ref co) = per_var[v][j];
                x.push(xe);
                d.push(de);
                c *= co;
            }
            out.push((Monomial { x, d }, c));
            // odometer
            let mut v = 0;
            loop {
                if v == n {
                    return out;
                }
                idx[v] += 1;
                if idx[v] < per_var[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
        }
    }
}

type ExpansionKey = (i32, i32, i32, i32, u32);
type Expansion = Rc<[(i32, i32, BigInt)]>;

thread_local! {
    static EXPANSIONS: RefCell<HashMap<ExpansionKey, Expansion>> =
        RefCell::new(HashMap::new());
}

/// One-variable product `x^a ∂^b · x^c ∂^e`, terms with an exponent below
/// `-depth` dropped.
fn variable_expansion(a: i32, b: i32, c: i32, e: i32, depth: u32) -> Expansion {
    let key = (a, b, c, e, depth);
    if let Some(hit) = EXPANSIONS.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let floor = -(depth as i64);
    let mut terms = Vec::new();
    // binom = C(b, k), falling = (c)_k
    let mut binom = BigInt::one();
    let mut falling = BigInt::one();
    let mut k: i64 = 0;
    loop {
        let xe = a as i64 + c as i64 - k;
        let de = b as i64 + e as i64 - k;
        if xe < floor || de < floor {
            break;
        }
        if binom.is_zero() || falling.is_zero() {
            // both factors vanish for every larger k once they hit zero
            break;
        }
        terms.push((xe as i32, de as i32, &binom * &falling));
        binom = binom * BigInt::from(b as i64 - k) / BigInt::from(k + 1);
        falling *= BigInt::from(c as i64 - k);
        k += 1;
    }
    let rc: Expansion = terms.into();
    EXPANSIONS.with(|m| m.borrow_mut().insert(key, rc.clone()));
    rc
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    /// `x1^2*d1^-3`; the unit monomial prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, name: char, i: usize, e: i32| -> fmt::Result {
            if e == 0 {
                return Ok(());
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{name}{}", i + 1)
            } else {
                write!(f, "{name}{}^{e}", i + 1)
            }
        };
        for (i, &e) in self.x.iter().enumerate() {
            put(f, 'x', i, e)?;
        }
        for (i, &e) in self.d.iter().enumerate() {
            put(f, 'd', i, e)?;
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}
