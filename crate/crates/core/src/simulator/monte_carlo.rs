use std::io::{self, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::channel::{bpsk_awgn, frame_rng, noiseless_llrs, GaussianSource};
use super::decoder::{sccc_iterative_decode, DecoderConfig};
use crate::puncturing::ScccConfig;
use crate::{Error, Exec, Result};

/// Frames simulated between two checks of the stopping rule. Batches are
/// fixed, so the number of frames run does not depend on scheduling.
pub const BATCH_FRAMES: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_frame_errors: 100,
            max_frames: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimPoint {
    pub ebno_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    /// 95% Wald interval on the FER, clamped to `[0, 1]`.
    pub ci_low: f64,
    pub ci_high: f64,
    pub avg_iterations: f64,
    /// No frame error was observed, so the FER estimate is an exact zero.
    pub zero_errors: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub seed: u64,
    pub rate: String,
    pub effective_rate: f64,
    pub info_bits: usize,
    pub interleaver_length: usize,
    pub ci_method: String,
    pub decoder: DecoderConfig,
    pub stop: StopRule,
    pub points: Vec<SimPoint>,
}

impl SimReport {
    /// CSV with columns `ebno_db,frames,bit_errors,frame_errors,ber,fer,ci_low,ci_high`.
    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(
            out,
            "ebno_db,frames,bit_errors,frame_errors,ber,fer,ci_low,ci_high"
        )?;
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e}",
                p.ebno_db,
                p.frames,
                p.bit_errors,
                p.frame_errors,
                p.ber,
                p.fer,
                p.ci_low,
                p.ci_high
            )?;
        }
        Ok(())
    }

    pub fn write_json(&self, out: impl Write) -> io::Result<()> {
        serde_json::to_writer_pretty(out, self).map_err(io::Error::other)
    }
}

struct FrameOutcome {
    bit_errors: u64,
    iterations: u64,
}

fn simulate_frame(
    cfg: &ScccConfig,
    dec: &DecoderConfig,
    rate: f64,
    ebno_db: f64,
    seed: u64,
    point: usize,
    frame: u64,
) -> Result<FrameOutcome> {
    let mut rng = frame_rng(seed, point, frame);
    let info: Vec<u8> = (0..cfg.info_bits())
        .map(|_| u8::from(rng.random::<bool>()))
        .collect();
    let encoded = cfg.encode(&info)?;
    let llr = if ebno_db == f64::INFINITY {
        noiseless_llrs(&encoded.inner_mother, cfg.transmit_mask(), dec.llr_clip)
    } else {
        let mut noise = GaussianSource::new(rng);
        bpsk_awgn(
            &encoded.inner_mother,
            cfg.transmit_mask(),
            ebno_db,
            rate,
            &mut noise,
        )?
    };
    let out = sccc_iterative_decode(cfg, &llr, dec)?;
    let bit_errors = out.info.iter().zip(&info).filter(|(a, b)| a != b).count() as u64;
    Ok(FrameOutcome {
        bit_errors,
        iterations: out.iterations as u64,
    })
}

/// Simulates every Eb/N0 point of `grid` until `stop.min_frame_errors` frame
/// errors or `stop.max_frames` frames, checked after each batch of
/// [`BATCH_FRAMES`]. Frames of a batch run through `exec`. LLRs are scaled
/// with the nominal rate; `+inf` dB gives noiseless observations.
pub fn run_monte_carlo(
    cfg: &ScccConfig,
    dec: &DecoderConfig,
    grid: &[f64],
    stop: &StopRule,
    seed: u64,
    exec: Exec,
) -> Result<SimReport> {
    dec.validate()?;
    if stop.min_frame_errors == 0 || stop.max_frames == 0 {
        return Err(Error::InvalidInput(
            "stop thresholds must be positive".into(),
        ));
    }
    if let Some(e) = grid.iter().find(|e| e.is_nan() || **e == f64::NEG_INFINITY) {
        return Err(Error::InvalidInput(format!("invalid Eb/N0 point {e}")));
    }
    let rate_q = cfg.rate()?;
    let rate = *rate_q.numer() as f64 / *rate_q.denom() as f64;
    let info_bits = cfg.info_bits() as u64;
    let mut points = Vec::with_capacity(grid.len());
    for (pi, &ebno_db) in grid.iter().enumerate() {
        let (mut frames, mut bit_errors, mut frame_errors, mut iterations) =
            (0u64, 0u64, 0u64, 0u64);
        while frame_errors < stop.min_frame_errors && frames < stop.max_frames {
            let batch = BATCH_FRAMES.min(stop.max_frames - frames);
            let outcomes = exec.map(batch as usize, |i| {
                simulate_frame(cfg, dec, rate, ebno_db, seed, pi, frames + i as u64)
            });
            for o in outcomes {
                let o = o?;
                bit_errors += o.bit_errors;
                frame_errors += u64::from(o.bit_errors > 0);
                iterations += o.iterations;
            }
            frames += batch;
        }
        let fer = frame_errors as f64 / frames as f64;
        let half = 1.96 * (fer * (1.0 - fer) / frames as f64).sqrt();
        points.push(SimPoint {
            ebno_db,
            frames,
            bit_errors,
            frame_errors,
            ber: bit_errors as f64 / (frames * info_bits) as f64,
            fer,
            ci_low: (fer - half).max(0.0),
            ci_high: (fer + half).min(1.0),
            avg_iterations: iterations as f64 / frames as f64,
            zero_errors: frame_errors == 0,
        });
    }
    Ok(SimReport {
        seed,
        rate: rate_q.to_string(),
        effective_rate: cfg.effective_rate(),
        info_bits: cfg.info_bits(),
        interleaver_length: cfg.n(),
        ci_method: "wald-95".into(),
        decoder: *dec,
        stop: *stop,
        points,
    })
}
