use crate::error::Result;
use crate::rational::Rational;

/// Truncation depth plus the extra depth used when re-checking a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationPolicy {
    pub depth: u32,
    pub stability_slack: u32,
}

impl TruncationPolicy {
    pub const DEFAULT_DEPTH: u32 = 8;

    /// Panics if `depth == 0`: the residue monomial needs depth at least 1.
    pub fn new(depth: u32, stability_slack: u32) -> Self {
        assert!(depth >= 1, "truncation depth must be at least 1");
        TruncationPolicy { depth, stability_slack }
    }

    /// Depth large enough for the given inputs: maximal positive exponent,
    /// plus the requested series order, plus 2.
    pub fn for_inputs(max_exponent: i32, series_order: u32) -> Self {
        let depth = max_exponent.max(0) as u32 + series_order + 2;
        Self::new(depth.max(1), 2)
    }

    pub fn deeper(&self) -> u32 {
        self.depth + self.stability_slack
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::new(Self::DEFAULT_DEPTH, 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stability {
    pub value: Rational,
    pub stable: bool,
}

/// Evaluates `computation` at `policy.depth` and at `policy.depth + slack`.
/// The reported value is the one at the base depth.
pub fn stability_check<F>(computation: F, policy: TruncationPolicy) -> Result<Stability>
where
    F: Fn(u32) -> Result<Rational>,
{
    let value = computation(policy.depth)?;
    let deeper = computation(policy.deeper())?;
    Ok(Stability {
        stable: value == deeper,
        value,
    })
}
