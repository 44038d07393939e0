use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::enumerator::{DistanceSummary, InnerJointEnumerator, OuterJointEnumerator};
use crate::{Error, Result};

/// Which expression attained `h(α_M)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticBranch {
    /// Even outer free distance: `d_f d_eff / 2 + d''(d_f)`.
    Even,
    /// Odd outer free distance above 3: `(d_f - 3) d_eff / 2 + h_m3 + d''(d_f)`.
    Odd,
    /// Free distance 3, one weight-3 outer word: `h_m3 + d''(3)`.
    OuterWeight3,
    /// Free distance 3, weight-4 outer word split in two inner events: `2 d_eff + d''(4)`.
    OuterWeight4,
    /// Free distance 3, two weight-3 outer words over three inner events: `3 d_eff + 2 d''(3)`.
    OuterWeight6,
}

/// Exponent of `N` over the enumerated support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentProfile {
    /// `α(h)`: largest `n° + n^i - l - 1` among terms contributing to `h`,
    /// counting only events that close before the tail.
    pub alpha_of_h: BTreeMap<usize, i64>,
    pub alpha_m: i64,
    /// Smallest `h` attaining `alpha_m`.
    pub h_alpha_m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsymptoticReport {
    pub d_f_o_prime: usize,
    pub d_f_o_prime_even: bool,
    pub alpha_m: i64,
    pub h_alpha_m: usize,
    pub branch: AsymptoticBranch,
    /// Every applicable branch value.
    pub candidates: Vec<(AsymptoticBranch, usize)>,
    /// The same expression with `d_f^{o''}` in place of `d''(d_f)`.
    pub h_alpha_m_lower_bound: usize,
    pub profile: Option<ExponentProfile>,
    pub alpha_at_h_m: Option<i64>,
    /// Whether `α(h_m) <= 1 - d_f^{o'}`.
    pub alpha_at_h_m_within_limit: Option<bool>,
}

/// Closed-form interleaver-gain exponent and the weight attaining it.
pub fn asymptotic_report(summary: &DistanceSummary) -> Result<AsymptoticReport> {
    let d_f = summary.d_f_o_prime;
    if d_f == 0 {
        return Err(Error::DegenerateCode("outer free distance is zero".into()));
    }
    let alpha_m = -(((d_f + 1) / 2) as i64);
    let d_eff = summary
        .d_f_eff_inner
        .ok_or_else(|| Error::CapExceeded("inner effective free distance not available".into()))?;
    let h_m3 = || {
        summary
            .h_m3
            .ok_or_else(|| Error::CapExceeded("h_m3 not available".into()))
    };
    let d_at = summary.d_odprime_at_dfoprime;
    let lower = summary.d_f_o_dprime;
    let mut candidates = Vec::new();
    let mut lower_bound = usize::MAX;
    if d_f % 2 == 0 {
        candidates.push((AsymptoticBranch::Even, d_f * d_eff / 2 + d_at));
        lower_bound = d_f * d_eff / 2 + lower;
    } else if d_f == 3 {
        let h3 = h_m3()?;
        candidates.push((AsymptoticBranch::OuterWeight3, h3 + d_at));
        lower_bound = lower_bound.min(h3 + lower);
        if let Some(Some(d4)) = summary.d_odprime_by_l.get(&4) {
            candidates.push((AsymptoticBranch::OuterWeight4, 2 * d_eff + d4));
            lower_bound = lower_bound.min(2 * d_eff + lower);
        }
        candidates.push((AsymptoticBranch::OuterWeight6, 3 * d_eff + 2 * d_at));
        lower_bound = lower_bound.min(3 * d_eff + 2 * lower);
    } else {
        let h3 = h_m3()?;
        candidates.push((AsymptoticBranch::Odd, (d_f - 3) * d_eff / 2 + h3 + d_at));
        lower_bound = (d_f - 3) * d_eff / 2 + h3 + lower;
    }
    let &(branch, h_alpha_m) = candidates
        .iter()
        .min_by_key(|(_, h)| *h)
        .expect("at least one branch applies");
    Ok(AsymptoticReport {
        d_f_o_prime: d_f,
        d_f_o_prime_even: d_f % 2 == 0,
        alpha_m,
        h_alpha_m,
        branch,
        candidates,
        h_alpha_m_lower_bound: lower_bound,
        profile: None,
        alpha_at_h_m: None,
        alpha_at_h_m_within_limit: None,
    })
}

impl AsymptoticReport {
    /// Attaches the enumerated exponent profile and checks `α(h_m)`.
    pub fn with_profile(mut self, profile: ExponentProfile, h_m: usize) -> Self {
        let a = profile.alpha_of_h.get(&h_m).copied();
        self.alpha_at_h_m = a;
        self.alpha_at_h_m_within_limit = a.map(|a| a <= 1 - self.d_f_o_prime as i64);
        self.profile = Some(profile);
        self
    }
}

/// Maximizes `n° + n^i - l - 1` over every pair of enumerated support points
/// sharing the interleaver weight `l`.
pub fn exponent_profile(
    outer: &OuterJointEnumerator,
    inner: &InnerJointEnumerator,
) -> Result<ExponentProfile> {
    let free = |n: usize, terminal: bool| (n - usize::from(terminal)) as i64;
    let outer_support: BTreeSet<(usize, usize, i64)> = outer
        .coeffs()
        .keys()
        .map(|i| (i.l, i.j, free(i.n, i.terminal)))
        .collect();
    let mut inner_support: BTreeMap<usize, BTreeSet<(usize, i64)>> = BTreeMap::new();
    for i in inner.coeffs().keys() {
        inner_support
            .entry(i.l)
            .or_default()
            .insert((i.m, free(i.n, i.terminal)));
    }
    let mut alpha_of_h: BTreeMap<usize, i64> = BTreeMap::new();
    for &(l, j, fo) in &outer_support {
        let Some(inner_l) = inner_support.get(&l) else {
            continue;
        };
        for &(m, fi) in inner_l {
            let a = fo + fi - l as i64 - 1;
            alpha_of_h
                .entry(j + m)
                .and_modify(|v| *v = (*v).max(a))
                .or_insert(a);
        }
    }
    let alpha_m = *alpha_of_h
        .values()
        .max()
        .ok_or_else(|| Error::InvalidInput("no common interleaver weight".into()))?;
    let h_alpha_m = alpha_of_h
        .iter()
        .find(|(_, &a)| a == alpha_m)
        .map(|(&h, _)| h)
        .expect("maximum is attained");
    Ok(ExponentProfile {
        alpha_of_h,
        alpha_m,
        h_alpha_m,
    })
}
