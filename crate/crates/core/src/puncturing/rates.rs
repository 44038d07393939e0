use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Fractions of inner systematic and parity bits that survive puncturing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PermeabilityPair {
    /// Interleaver length, the common denominator of both fractions.
    pub n: usize,
    pub rho_s: Rational64,
    pub rho_p: Rational64,
}

impl PermeabilityPair {
    pub fn new(n: usize, rho_s: Rational64, rho_p: Rational64) -> Result<Self> {
        if n == 0 {
            return Err(Error::DegenerateCode("block length N = 0".into()));
        }
        let unit = |r: Rational64| r >= Rational64::zero() && r <= Rational64::one();
        if !unit(rho_s) || !unit(rho_p) {
            return Err(Error::InfeasiblePermeability(format!(
                "rho_s = {rho_s}, rho_p = {rho_p} must both lie in [0, 1]"
            )));
        }
        Ok(Self { n, rho_s, rho_p })
    }

    /// Permeabilities from kept bit counts; `kept_parity` is summed over all
    /// `streams` parity outputs.
    pub fn from_counts(
        n: usize,
        kept_systematic: usize,
        kept_parity: usize,
        streams: usize,
    ) -> Result<Self> {
        if n == 0 || streams == 0 {
            return Err(Error::DegenerateCode(
                "block length or parity streams = 0".into(),
            ));
        }
        Self::new(
            n,
            Rational64::new(kept_systematic as i64, n as i64),
            Rational64::new(kept_parity as i64, (n * streams) as i64),
        )
    }

    pub fn rho_s(&self) -> Rational64 {
        self.rho_s
    }

    pub fn rho_p(&self) -> Rational64 {
        self.rho_p
    }
}

/// Overall rate `R_o' / (rho_s + (n - 1) rho_p)` for an inner mother code of rate `1/n`.
pub fn sccc_rate(r_outer: Rational64, n: usize, rho: &PermeabilityPair) -> Result<Rational64> {
    if n == 0 {
        return Err(Error::DegenerateCode("mother code with no outputs".into()));
    }
    let denom = rho.rho_s() + rho.rho_p() * Rational64::from((n as i64) - 1);
    if denom.is_zero() {
        return Err(Error::DegenerateCode(
            "inner code transmits no bits (rho_s + (n-1) rho_p = 0)".into(),
        ));
    }
    Ok(r_outer / denom)
}

/// Systematic permeability needed to reach `target` given `rho_p`.
pub fn rho_s_for_target(
    target: Rational64,
    r_outer: Rational64,
    n: usize,
    rho_p: Rational64,
) -> Result<Rational64> {
    if target <= Rational64::zero() || n < 2 {
        return Err(Error::InvalidInput(format!(
            "target rate {target} and mother length {n} must be positive and n >= 2"
        )));
    }
    let ratio = r_outer / target;
    let streams = Rational64::from((n as i64) - 1);
    let rho_s = ratio - streams * rho_p;
    if rho_s < Rational64::zero() || rho_s > Rational64::one() {
        let lo = ((ratio - Rational64::one()) / streams).max(Rational64::zero());
        let hi = (ratio / streams).min(Rational64::one());
        let valid = if lo <= hi {
            format!("rho_p must lie in [{lo}, {hi}]")
        } else {
            "no rho_p in [0, 1] reaches it".to_string()
        };
        return Err(Error::InfeasiblePermeability(format!(
            "target rate {target} with rho_p = {rho_p} needs rho_s = {rho_s}; {valid}"
        )));
    }
    Ok(rho_s)
}
