//! Link-level Monte Carlo verification: BPSK over AWGN, puncture-aware LLR
//! assembly, log-MAP SISO decoding of each constituent code and iterative
//! decoding of the concatenation.
//!
//! Randomness is drawn from ChaCha8 with one stream per `(point, frame)`, and
//! Gaussian samples come from the Marsaglia polar method, so a report depends
//! only on the configuration and the master seed.

mod channel;
mod decoder;
mod monte_carlo;
mod siso;

pub use channel::{bpsk_awgn, frame_rng, noiseless_llrs, GaussianSource};
pub use decoder::{
    sccc_iterative_decode, sccc_iterative_decode_traced, DecodeResult, DecoderConfig, Stopping,
};
pub use monte_carlo::{run_monte_carlo, SimPoint, SimReport, StopRule, BATCH_FRAMES};
pub use siso::{siso_decode, SisoKind, SisoOutput};
