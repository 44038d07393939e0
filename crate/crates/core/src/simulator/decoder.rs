use serde::{Deserialize, Serialize};

use super::siso::{siso_decode, SisoKind};
use crate::puncturing::ScccConfig;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stopping {
    /// Always run the configured number of iterations.
    #[default]
    Fixed,
    /// Stop once the decided information word re-encodes to the hard
    /// decisions of the outer code bits.
    EarlyExit,
}

impl std::str::FromStr for Stopping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(Stopping::Fixed),
            "early-exit" => Ok(Stopping::EarlyExit),
            _ => Err(Error::InvalidInput(format!(
                "unknown stopping rule {s:?} (expected fixed or early-exit)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecoderConfig {
    pub iterations: usize,
    pub siso: SisoKind,
    pub llr_clip: f64,
    pub stopping: Stopping,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            iterations: 10,
            siso: SisoKind::LogMap,
            llr_clip: 30.0,
            stopping: Stopping::Fixed,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidInput(
                "at least one iteration is required".into(),
            ));
        }
        if !(self.llr_clip > 0.0 && self.llr_clip.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "LLR clip {} must be positive and finite",
                self.llr_clip
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub info: Vec<u8>,
    pub iterations: usize,
    /// Mean magnitude of the outer-to-inner extrinsics after each iteration.
    pub extrinsic_magnitude: Vec<f64>,
}

/// Iterative decoding of one frame from LLRs over the inner mother codeword
/// (tail included, zero on punctured positions).
///
/// The inner SISO sees the channel on its output bits; its input extrinsics,
/// which carry the systematic channel observations, are deinterleaved into
/// priors on the surviving outer code bits. The outer SISO returns output
/// extrinsics, interleaved back as inner input priors. Decisions come from the
/// outer a-posteriori LLRs of the information bits.
pub fn sccc_iterative_decode(
    cfg: &ScccConfig,
    channel: &[f64],
    dec: &DecoderConfig,
) -> Result<DecodeResult> {
    sccc_iterative_decode_traced(cfg, channel, dec, |_, _| {})
}

/// Like [`sccc_iterative_decode`], calling `on_iteration(i, decisions)` after
/// every iteration `i = 1, 2, ...`.
pub fn sccc_iterative_decode_traced(
    cfg: &ScccConfig,
    channel: &[f64],
    dec: &DecoderConfig,
    mut on_iteration: impl FnMut(usize, &[u8]),
) -> Result<DecodeResult> {
    dec.validate()?;
    let (inner, outer) = (cfg.inner(), cfg.outer());
    let n = cfg.n();
    let expected = (n + inner.termination_length()) * inner.outputs_per_step();
    if channel.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            found: channel.len(),
        });
    }
    let kept = cfg.p_o().kept_positions();
    let mother_len = cfg.p_o().length();
    let info_bits = cfg.info_bits();
    let clip = dec.llr_clip;

    let mut inner_prior = vec![0.0; n];
    let mut info = vec![0u8; info_bits];
    let mut extrinsic_magnitude = Vec::with_capacity(dec.iterations);
    let mut done = 0;
    for it in 1..=dec.iterations {
        let inner_out = siso_decode(inner, n, true, &inner_prior, channel, dec.siso, clip)?;
        let code_prior = cfg.perm().deinterleave(&inner_out.input_extrinsic)?;
        let mut outer_prior = vec![0.0; mother_len];
        for (c, &pos) in kept.iter().enumerate() {
            outer_prior[pos] = code_prior[c];
        }
        let zero = vec![0.0; info_bits];
        let outer_out = siso_decode(outer, info_bits, true, &zero, &outer_prior, dec.siso, clip)?;
        for (b, &l) in info.iter_mut().zip(&outer_out.input_posterior) {
            *b = u8::from(l < 0.0);
        }
        let code_ext: Vec<f64> = kept
            .iter()
            .map(|&p| outer_out.output_extrinsic[p])
            .collect();
        inner_prior = cfg.perm().interleave(&code_ext)?;
        extrinsic_magnitude.push(inner_prior.iter().map(|v| v.abs()).sum::<f64>() / n as f64);
        on_iteration(it, &info);
        done = it;
        if dec.stopping == Stopping::EarlyExit {
            let reencoded = cfg.p_o().apply(&outer.encode(&info, true)?.bits)?;
            let matches = kept.iter().zip(&reencoded).all(|(&p, &b)| {
                let total = outer_out.output_posterior[p];
                u8::from(total < 0.0) == b
            });
            if matches {
                break;
            }
        }
    }
    Ok(DecodeResult {
        info,
        iterations: done,
        extrinsic_magnitude,
    })
}
