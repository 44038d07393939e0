use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use super::{InnerJointEnumerator, OuterJointEnumerator};
use crate::{Error, Result};

pub(crate) fn big_str<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// A minimum weight and the number of words attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightEntry {
    pub weight: usize,
    #[serde(serialize_with = "big_str")]
    pub multiplicity: BigUint,
}

/// Scalar distance parameters of a concatenated code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceSummary {
    pub n_block: usize,
    /// Free distance of `C_o'`.
    pub d_f_o_prime: usize,
    /// Free distance of `C_o''`.
    pub d_f_o_dprime: usize,
    /// Minimum `j` among `C_o'` words of weight `d_f_o_prime`.
    pub d_odprime_at_dfoprime: usize,
    /// Minimum `j` among `C_o'` words of each weight `l` just above the free distance.
    pub d_odprime_by_l: BTreeMap<usize, Option<usize>>,
    /// Minimum parity weight of single weight-2 events that close before the tail.
    pub d_f_eff_inner: Option<usize>,
    /// Minimum parity weight of weight-3 inputs whose events close before the tail.
    pub h_m3: Option<usize>,
    /// Minimum inner parity weight `d_w` over all frame words of input weight `w`.
    pub inner_d_w: BTreeMap<usize, Option<WeightEntry>>,
    /// Output weight multiplicities of `C_o''` from its free distance upward.
    pub outer_owef: Vec<WeightEntry>,
    /// False iff some `d_w` is zero with nonzero multiplicity.
    pub invertible: bool,
}

/// Extracts every scalar used by the asymptotic analysis and the optimizer.
/// Minima that the enumerator caps cannot certify are reported as errors.
pub fn distance_summary(
    outer: &OuterJointEnumerator,
    inner: &InnerJointEnumerator,
    w_max: usize,
) -> Result<DistanceSummary> {
    if outer.n_block() != inner.n_block() {
        return Err(Error::LengthMismatch {
            expected: outer.n_block(),
            found: inner.n_block(),
        });
    }
    let (d_f_o_prime, _) = outer.free_distance()?;
    let (d_f_o_dprime, _) = outer.free_distance_dprime()?;
    let d_odprime_at_dfoprime = outer
        .min_j_at_l(d_f_o_prime)?
        .ok_or_else(|| Error::Internal("free distance without codewords".into()))?;
    let mut d_odprime_by_l = BTreeMap::new();
    for l in d_f_o_prime..=(d_f_o_prime + 3).min(outer.caps().l) {
        if let Ok(v) = outer.min_j_at_l(l) {
            d_odprime_by_l.insert(l, v);
        }
    }
    let d_f_eff_inner = inner
        .min_m_where(2, |i| i.n == 1 && !i.terminal)?
        .map(|(m, _)| m);
    let h_m3 = inner.min_m_where(3, |i| !i.terminal)?.map(|(m, _)| m);
    let mut inner_d_w = BTreeMap::new();
    let mut invertible = true;
    for w in 1..=w_max {
        let entry = inner
            .min_m_at_l(w)?
            .map(|(weight, multiplicity)| WeightEntry {
                weight,
                multiplicity,
            });
        if let Some(e) = &entry {
            if e.weight == 0 {
                invertible = false;
            }
        }
        inner_d_w.insert(w, entry);
    }
    let top = (d_f_o_dprime + 6).min(outer.j_exact_below_any().saturating_sub(1));
    let outer_owef = outer
        .owef(top)?
        .into_iter()
        .filter(|(j, _)| *j >= d_f_o_dprime)
        .map(|(weight, multiplicity)| WeightEntry {
            weight,
            multiplicity,
        })
        .collect();
    Ok(DistanceSummary {
        n_block: outer.n_block(),
        d_f_o_prime,
        d_f_o_dprime,
        d_odprime_at_dfoprime,
        d_odprime_by_l,
        d_f_eff_inner,
        h_m3,
        inner_d_w,
        outer_owef,
        invertible,
    })
}
