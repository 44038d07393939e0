use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Random stream of one simulated frame: ChaCha8 keyed by the master seed,
/// with stream number `point << 40 | frame`. Frames therefore never share
/// randomness, and results do not depend on scheduling.
pub fn frame_rng(master_seed: u64, point: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((point as u64) << 40) | (frame & ((1 << 40) - 1)));
    rng
}

/// Standard normal deviates by the Marsaglia polar method. Each accepted pair
/// yields two deviates, the first returned before the second.
#[derive(Clone, Debug)]
pub struct GaussianSource<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> GaussianSource<R> {
    pub fn new(rng: R) -> Self {
        Self { rng, spare: None }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.rng.random::<f64>() - 1.0;
            let v = 2.0 * self.rng.random::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }

    pub fn rng_mut(&mut self) -> &mut R {
        &mut self.rng
    }
}

/// BPSK over AWGN: bit `b` is sent as `1 - 2b` with unit energy, and the
/// returned LLR `4 R Eb/N0 y` is positive for bit 0. Positions with
/// `transmitted[i] = false` get an exact zero and draw no noise.
pub fn bpsk_awgn<R: Rng>(
    bits: &[u8],
    transmitted: &[bool],
    ebno_db: f64,
    rate: f64,
    noise: &mut GaussianSource<R>,
) -> Result<Vec<f64>> {
    if !ebno_db.is_finite() {
        return Err(Error::InvalidInput(format!(
            "Eb/N0 = {ebno_db} dB is not finite"
        )));
    }
    if bits.len() != transmitted.len() {
        return Err(Error::LengthMismatch {
            expected: bits.len(),
            found: transmitted.len(),
        });
    }
    if !(rate > 0.0) {
        return Err(Error::InvalidInput(format!("rate {rate} is not positive")));
    }
    let es_n0 = rate * 10f64.powf(ebno_db / 10.0);
    let sigma = (1.0 / (2.0 * es_n0)).sqrt();
    let scale = 4.0 * es_n0;
    Ok(bits
        .iter()
        .zip(transmitted)
        .map(|(&b, &tx)| {
            if tx {
                let x = 1.0 - 2.0 * f64::from(b);
                scale * (x + sigma * noise.sample())
            } else {
                0.0
            }
        })
        .collect())
}

/// Noise-free observation: `±magnitude` on transmitted positions.
pub fn noiseless_llrs(bits: &[u8], transmitted: &[bool], magnitude: f64) -> Vec<f64> {
    bits.iter()
        .zip(transmitted)
        .map(|(&b, &tx)| {
            if tx {
                magnitude * (1.0 - 2.0 * f64::from(b))
            } else {
                0.0
            }
        })
        .collect()
}
