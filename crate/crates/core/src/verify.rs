//! Seeded random operators and the verification suites: the cocycle
//! identity for Lifting cochains and the algebraic preconditions (trace of
//! brackets, derivations in `Der_Tr`, the curvature identity, the cyclic
//! condition on curvatures).

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ce::{coboundary_eval, CochainHandle};
use crate::error::Result;
use crate::lifting::{signed_permutations, CocycleSpec};
use crate::matrix::AugmentedOp;
use crate::rational::{self, int, Rational};
use crate::symbol::{curvature, Derivation, Monomial, PsiSymbol};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random test operators: finite matrices in a `window × window`
/// block with polynomial entries of total degree at most `max_degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomShape {
    pub nvars: usize,
    pub window: usize,
    pub max_degree: u32,
    pub depth: u32,
    pub entries: usize,
    pub terms: usize,
}

impl RandomShape {
    pub fn new(nvars: usize, window: usize, max_degree: u32, depth: u32) -> Self {
        RandomShape {
            nvars,
            window,
            max_degree,
            depth,
            entries: 2,
            terms: 2,
        }
    }
}

/// Random monomial `x^a ∂^b` with `|a| + |b| ≤ max_degree`, exponents ≥ 0.
fn random_monomial<R: Rng>(rng: &mut R, nvars: usize, max_degree: u32) -> Monomial {
    let total = rng.gen_range(0..=max_degree);
    let mut x = vec![0; nvars];
    let mut d = vec![0; nvars];
    for _ in 0..total {
        let v = rng.gen_range(0..nvars);
        if rng.gen_bool(0.5) {
            x[v] += 1;
        } else {
            d[v] += 1;
        }
    }
    Monomial::new(&x, &d)
}

fn random_coefficient<R: Rng>(rng: &mut R) -> Rational {
    let v = *[-3i64, -2, -1, 1, 2, 3].choose(rng).expect("nonempty");
    int(v)
}

pub fn random_symbol<R: Rng>(rng: &mut R, shape: &RandomShape) -> PsiSymbol {
    let terms = (0..shape.terms.max(1)).map(|_| {
        (
            random_monomial(rng, shape.nvars, shape.max_degree),
            random_coefficient(rng),
        )
    });
    PsiSymbol::from_terms(shape.nvars, shape.depth, terms)
}

/// Random Laurent symbol with exponents in `-spread..=spread`, used where
/// the residue must be able to be nonzero.
pub fn random_laurent_symbol<R: Rng>(rng: &mut R, nvars: usize, spread: i32, terms: usize, depth: u32) -> PsiSymbol {
    let terms = (0..terms).map(|_| {
        let x: Vec<i32> = (0..nvars).map(|_| rng.gen_range(-spread..=spread)).collect();
        let d: Vec<i32> = (0..nvars).map(|_| rng.gen_range(-spread..=spread)).collect();
        (Monomial::new(&x, &d), random_coefficient(rng))
    });
    PsiSymbol::from_terms(nvars, depth, terms)
}

pub fn random_op<R: Rng>(rng: &mut R, shape: &RandomShape) -> AugmentedOp {
    let mut op = AugmentedOp::zero(shape.nvars, shape.depth);
    for _ in 0..shape.entries.max(1) {
        let i = rng.gen_range(1..=shape.window);
        let j = rng.gen_range(1..=shape.window);
        op = &op + &AugmentedOp::elementary(i, j, random_symbol(rng, shape));
    }
    op
}

pub fn random_ops<R: Rng>(rng: &mut R, shape: &RandomShape, count: usize) -> Vec<AugmentedOp> {
    (0..count).map(|_| random_op(rng, shape)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleTrial {
    pub trial: usize,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    pub k: usize,
    pub s: usize,
    pub arity: usize,
    pub depth: u32,
    pub trials: Vec<CocycleTrial>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.trials.iter().all(|t| t.value.is_zero() && t.stable)
    }
}

/// `δΨ` on `trials` random `(arity + 1)`-tuples, each evaluated at the spec
/// depth and at `depth + slack`.
pub fn verify_cocycle(
    spec: &CocycleSpec,
    shape: &RandomShape,
    trials: usize,
    seed: u64,
    slack: u32,
) -> Result<CocycleReport> {
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(trials);
    for trial in 0..trials {
        let args = random_ops(&mut rng, shape, spec.arity() + 1);
        let base = coboundary_eval(&CochainHandle::new(spec.clone()), &args)?;
        let deeper = coboundary_eval(&CochainHandle::new(spec.at_depth(spec.depth() + slack)), &args)?;
        out.push(CocycleTrial {
            trial,
            stable: base == deeper,
            value: base,
        });
    }
    Ok(CocycleReport {
        k: spec.k(),
        s: spec.s(),
        arity: spec.arity(),
        depth: spec.depth(),
        trials: out,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraCheck {
    pub name: String,
    pub instances: usize,
    pub failures: usize,
}

impl AlgebraCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.instances > 0
    }
}

/// `residue([a, b]) = 0` on random Laurent symbols.
pub fn check_trace_of_brackets(seed: u64, instances: usize, nvars: usize, depth: u32) -> AlgebraCheck {
    let mut rng = seeded_rng(seed);
    let failures = (0..instances)
        .filter(|_| {
            let a = random_laurent_symbol(&mut rng, nvars, 3, 3, depth);
            let b = random_laurent_symbol(&mut rng, nvars, 3, 3, depth);
            !a.bracket(&b).residue().is_zero()
        })
        .count();
    AlgebraCheck {
        name: format!("residue of brackets (n={nvars})"),
        instances,
        failures,
    }
}

/// `residue(D a) = 0` for the outer derivations on random Laurent symbols.
pub fn check_derivations_preserve_trace(seed: u64, instances: usize, nvars: usize, depth: u32) -> AlgebraCheck {
    let mut rng = seeded_rng(seed);
    let ders: Vec<Derivation> = (0..nvars)
        .flat_map(|i| [Derivation::LnX(i), Derivation::LnD(i)])
        .collect();
    let failures = (0..instances)
        .filter(|t| {
            let a = random_laurent_symbol(&mut rng, nvars, 3, 3, depth);
            !ders[t % ders.len()].apply(&a).residue().is_zero()
        })
        .count();
    AlgebraCheck {
        name: format!("residue of derivatives (n={nvars})"),
        instances,
        failures,
    }
}

/// `[ad ln ∂, ad ln x](m) = [Q, m]` on every monomial `x^a ∂^b` with
/// `|a|, |b| ≤ depth`, comparing the terms that survive truncation at the
/// working depth `depth`. The derivation commutator is computed at a larger
/// depth so that intermediate truncation does not interfere.
pub fn check_curvature_identity(depth: u32) -> AlgebraCheck {
    let wide = 3 * depth + 2;
    let dl = Derivation::LnD(0);
    let xl = Derivation::LnX(0);
    let q = curvature(&dl, &xl, 1, wide);
    let range = -(depth as i32)..=(depth as i32);
    let mut instances = 0;
    let mut failures = 0;
    for a in range.clone() {
        for b in range.clone() {
            let m = PsiSymbol::monomial(Monomial::new(&[a], &[b]), int(1), wide);
            let lhs = &dl.apply(&xl.apply(&m)) - &xl.apply(&dl.apply(&m));
            let rhs = q.bracket(&m);
            instances += 1;
            if lhs.with_depth(depth) != rhs.with_depth(depth) {
                failures += 1;
            }
        }
    }
    AlgebraCheck {
        name: format!("derivation commutator equals ad Q (depth {depth})"),
        instances,
        failures,
    }
}

/// `Alt_{i,j,l} D_l(Q_{ij}) = 0` over all index triples from the `2n` outer
/// derivations. Triples with a repeated index vanish by alternation alone,
/// so for `n = 1` the check is vacuous.
pub fn check_cyclic_condition(nvars: usize, depth: u32) -> AlgebraCheck {
    let ders: Vec<Derivation> = (0..nvars)
        .flat_map(|i| [Derivation::LnD(i), Derivation::LnX(i)])
        .collect();
    let mut instances = 0;
    let mut failures = 0;
    let m = ders.len();
    for i in 0..m {
        for j in 0..m {
            for l in 0..m {
                instances += 1;
                let mut acc = PsiSymbol::zero(nvars, depth);
                for (p, sign) in signed_permutations(&[i, j, l]) {
                    let t = ders[p[2]].apply(&curvature(&ders[p[0]], &ders[p[1]], nvars, depth));
                    acc = if sign > 0 { &acc + &t } else { &acc - &t };
                }
                if !acc.is_zero() {
                    failures += 1;
                }
            }
        }
    }
    AlgebraCheck {
        name: format!("alternated derivatives of curvatures (n={nvars})"),
        instances,
        failures,
    }
}

/// Every algebra check with the default sizes.
pub fn algebra_suite(seed: u64, instances: usize, depth: u32) -> Vec<AlgebraCheck> {
    vec![
        check_trace_of_brackets(seed, instances, 1, depth),
        check_trace_of_brackets(seed.wrapping_add(1), instances, 2, depth),
        check_derivations_preserve_trace(seed.wrapping_add(2), instances, 1, depth),
        check_derivations_preserve_trace(seed.wrapping_add(3), instances, 2, depth),
        check_curvature_identity(4),
        check_cyclic_condition(1, depth),
        check_cyclic_condition(2, depth),
    ]
}
