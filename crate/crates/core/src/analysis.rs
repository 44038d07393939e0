//! End-to-end distance analysis of one concatenated code: both enumerators,
//! the distance summary, the composed spectrum and the asymptotic report.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::bounds::{
    asymptotic_report, compose_uniform, exponent_profile, AsymptoticReport, ComposeMode,
    ScccSpectrum,
};
use crate::enumerator::{
    distance_summary, inner_joint_enumerator, outer_joint_enumerator, Caps, DistanceSummary,
    InnerJointEnumerator, OuterJointEnumerator,
};
use crate::puncturing::{restrict_to_survivors, PunctureLadder, PuncturePattern};
use crate::trellis::TrellisCode;
use crate::{Error, Result};

/// Patterns of one family member: the inner parity pattern keeps the last
/// `kept_parity` entries of the parity ladder, and `P'` deletes the first
/// `N - kept_systematic` entries of the systematic ladder (given over outer
/// mother positions).
pub fn row_patterns(
    parity_ladder: &PunctureLadder,
    systematic_ladder: &PunctureLadder,
    p_o: &PuncturePattern,
    kept_parity: usize,
    kept_systematic: usize,
) -> Result<(PuncturePattern, PuncturePattern)> {
    let n = p_o.num_kept();
    if parity_ladder.base_length() != n || parity_ladder.len() != n {
        return Err(Error::InvalidInput(format!(
            "parity ladder must order all {n} inner parity positions, found {} of {}",
            parity_ladder.len(),
            parity_ladder.base_length()
        )));
    }
    if kept_parity > n || kept_systematic > n {
        return Err(Error::InfeasiblePermeability(format!(
            "kept counts ({kept_systematic}, {kept_parity}) exceed N = {n}"
        )));
    }
    let p_i_p = parity_ladder.step(n - kept_parity)?;
    let deleted = n - kept_systematic;
    if deleted > systematic_ladder.len() {
        return Err(Error::InfeasiblePermeability(format!(
            "{deleted} systematic deletions requested but the ladder has {} steps",
            systematic_ladder.len()
        )));
    }
    let mother = systematic_ladder.step(deleted)?;
    let p_prime = restrict_to_survivors(&mother, p_o)?;
    Ok((p_prime, p_i_p))
}

#[derive(Clone, Debug)]
pub struct RowAnalysis {
    pub outer: OuterJointEnumerator,
    pub inner: InnerJointEnumerator,
    pub summary: DistanceSummary,
    pub spectrum: ScccSpectrum,
    pub asymptotic: AsymptoticReport,
    pub h_m: usize,
    pub n_hm: f64,
    pub n_hm_complete: bool,
}

/// Scalar distance parameters of one analysed code.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowParameters {
    pub h_m3: Option<usize>,
    pub d_odprime_at_dfoprime: usize,
    pub h_alpha_m: usize,
    pub h_m: usize,
    pub n_hm: f64,
    pub n_hm_complete: bool,
    pub d_f_o_prime: usize,
    pub d_f_o_dprime: usize,
    pub d_f_eff_inner: Option<usize>,
    pub alpha_m: i64,
    pub invertible: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn analyze(
    outer: &TrellisCode,
    p_o: &PuncturePattern,
    inner: &TrellisCode,
    k: usize,
    p_prime: &PuncturePattern,
    p_i_p: &PuncturePattern,
    caps: &Caps,
    w_max: usize,
    mode: ComposeMode,
) -> Result<RowAnalysis> {
    let outer_enum = outer_joint_enumerator(outer, p_o, p_prime, k, caps)?;
    let n = p_o.num_kept();
    let inner_enum = inner_joint_enumerator(inner, p_i_p, n, caps)?;
    let summary = distance_summary(&outer_enum, &inner_enum, w_max)?;
    let spectrum = compose_uniform(&outer_enum, &inner_enum, mode)?;
    let h_m = spectrum.h_m()?;
    let n_hm = spectrum
        .n_hm()?
        .to_f64()
        .ok_or_else(|| Error::Internal("multiplicity not representable".into()))?;
    let profile = exponent_profile(&outer_enum, &inner_enum)?;
    let asymptotic = asymptotic_report(&summary)?.with_profile(profile, h_m);
    let n_hm_complete = spectrum.n_hm_complete();
    Ok(RowAnalysis {
        outer: outer_enum,
        inner: inner_enum,
        summary,
        spectrum,
        asymptotic,
        h_m,
        n_hm,
        n_hm_complete,
    })
}

impl RowAnalysis {
    pub fn parameters(&self) -> RowParameters {
        RowParameters {
            h_m3: self.summary.h_m3,
            d_odprime_at_dfoprime: self.summary.d_odprime_at_dfoprime,
            h_alpha_m: self.asymptotic.h_alpha_m,
            h_m: self.h_m,
            n_hm: self.n_hm,
            n_hm_complete: self.n_hm_complete,
            d_f_o_prime: self.summary.d_f_o_prime,
            d_f_o_dprime: self.summary.d_f_o_dprime,
            d_f_eff_inner: self.summary.d_f_eff_inner,
            alpha_m: self.asymptotic.alpha_m,
            invertible: self.summary.invertible,
        }
    }
}
