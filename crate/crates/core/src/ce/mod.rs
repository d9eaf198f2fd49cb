//! Chevalley–Eilenberg complex of the augmented matrix algebra with trivial
//! coefficients.
//!
//! Sign conventions, fixed once and checked by the tests below:
//!
//! * `(δc)(g₁, …, g_{p+1}) = Σ_{i<j} (−1)^{i+j} c([g_i, g_j], g₁, …, ĝ_i, …, ĝ_j, …)`;
//! * `∂(g₁∧…∧g_p)` is the dual formula, so `⟨δc, γ⟩ = ⟨c, ∂γ⟩`;
//! * `(ι_t c)(g₁, …) = c(t, g₁, …)`;
//! * `(t·c)(g₁, …, g_p) = −Σ_i c(g₁, …, [t, g_i], …, g_p)`;
//! * `δ ι_t + ι_t δ = t·` (the Cartan identity with sign [`CARTAN_SIGN`]).

mod chain;
mod cycles;
mod linalg;

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lifting::CocycleSpec;
use crate::matrix::AugmentedOp;
use crate::rational::Rational;

pub use chain::{BasisElem, ChainElement};
pub use cycles::{find_cycles, in_span, DEFAULT_DIMENSION_CAP};
pub use linalg::{nullspace, rank, rref};

/// Sign `σ` in `δ∘ι_t + σ·ι_t∘δ = ad(t)` for the conventions above.
pub const CARTAN_SIGN: i64 = 1;

/// A multilinear alternating function of `arity` augmented operators.
pub trait Cochain: Send + Sync {
    fn arity(&self) -> usize;
    fn eval(&self, args: &[AugmentedOp]) -> Result<Rational>;
}

impl Cochain for CocycleSpec {
    fn arity(&self) -> usize {
        CocycleSpec::arity(self)
    }

    fn eval(&self, args: &[AugmentedOp]) -> Result<Rational> {
        self.psi(args)
    }
}

/// Shared, type-erased cochain.
#[derive(Clone)]
pub struct CochainHandle(Arc<dyn Cochain>);

impl CochainHandle {
    pub fn new<C: Cochain + 'static>(c: C) -> Self {
        CochainHandle(Arc::new(c))
    }

    pub fn from_fn<F>(arity: usize, f: F) -> Self
    where
        F: Fn(&[AugmentedOp]) -> Result<Rational> + Send + Sync + 'static,
    {
        Self::new(FnCochain { arity, f })
    }

    pub fn arity(&self) -> usize {
        self.0.arity()
    }

    pub fn eval(&self, args: &[AugmentedOp]) -> Result<Rational> {
        if args.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: args.len(),
            });
        }
        self.0.eval(args)
    }
}

impl fmt::Debug for CochainHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CochainHandle(arity {})", self.arity())
    }
}

struct FnCochain<F> {
    arity: usize,
    f: F,
}

impl<F> Cochain for FnCochain<F>
where
    F: Fn(&[AugmentedOp]) -> Result<Rational> + Send + Sync,
{
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval(&self, args: &[AugmentedOp]) -> Result<Rational> {
        (self.f)(args)
    }
}

/// `(δc)(args)` with `|args| = arity + 1`.
pub fn coboundary_eval(c: &CochainHandle, args: &[AugmentedOp]) -> Result<Rational> {
    let p = c.arity();
    if args.len() != p + 1 {
        return Err(Error::ArityMismatch {
            expected: p + 1,
            found: args.len(),
        });
    }
    let pairs: Vec<(usize, usize)> = (0..args.len())
        .flat_map(|i| (i + 1..args.len()).map(move |j| (i, j)))
        .collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| {
            let br = args[i].bracket(&args[j]);
            if br.is_zero() {
                return Ok(Rational::zero());
            }
            let mut rest = Vec::with_capacity(p);
            rest.push(br);
            rest.extend(
                args.iter()
                    .enumerate()
                    .filter(|&(t, _)| t != i && t != j)
                    .map(|(_, a)| a.clone()),
            );
            let v = c.eval(&rest)?;
            Ok(if (i + j) % 2 == 0 { v } else { -v })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(values.into_iter().fold(Rational::zero(), |a, b| a + b))
}

pub fn coboundary(c: &CochainHandle) -> CochainHandle {
    let c = c.clone();
    CochainHandle::from_fn(c.arity() + 1, move |args| coboundary_eval(&c, args))
}

/// `ι_t c`: `t` substituted for the first argument.
pub fn contraction(c: &CochainHandle, t: &AugmentedOp) -> CochainHandle {
    assert!(c.arity() >= 1, "cannot contract a 0-cochain");
    let (c, t) = (c.clone(), t.clone());
    CochainHandle::from_fn(c.arity() - 1, move |args| {
        let mut full = Vec::with_capacity(args.len() + 1);
        full.push(t.clone());
        full.extend_from_slice(args);
        c.eval(&full)
    })
}

/// Coadjoint action `(t·c)(g₁, …) = −Σ_i c(…, [t, g_i], …)`.
pub fn lie_action(t: &AugmentedOp, c: &CochainHandle) -> CochainHandle {
    let (c, t) = (c.clone(), t.clone());
    CochainHandle::from_fn(c.arity(), move |args| {
        let mut acc = Rational::zero();
        for i in 0..args.len() {
            let mut a = args.to_vec();
            a[i] = t.bracket(&args[i]);
            acc -= c.eval(&a)?;
        }
        Ok(acc)
    })
}
