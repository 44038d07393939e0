//! Design and analysis toolkit for rate-compatible serially concatenated
//! convolutional codes (SCCC) whose inner encoder is punctured beyond unit
//! rate.
//!
//! The crate is organised bottom-up:
//!
//! - [`trellis`]: systematic recursive convolutional encoders and their trellises.
//! - [`puncturing`]: deletion patterns, rate-compatible ladders, exact rate arithmetic
//!   and the [`puncturing::ScccConfig`] that ties an outer code, interleaver and inner
//!   code together.
//! - [`enumerator`]: truncated joint weight enumerators of the punctured constituent
//!   codes, scalar distance parameters and a brute-force all-interleaver oracle.
//! - [`bounds`]: uniform-interleaver composition, union bounds, exponent analysis and
//!   cumulative spectra.
//! - [`optimizer`]: greedy one-bit-at-a-time search for parity and systematic ladders.
//! - [`simulator`]: BPSK/AWGN Monte Carlo with log-MAP SISO iterative decoding.
//!
//! Data-parallel loops (Monte Carlo frames, optimizer candidates, bound grid points)
//! go through [`exec::Exec`]; with the `parallel` feature disabled every loop runs
//! sequentially and produces identical results.

pub mod analysis;
pub mod bounds;
pub mod enumerator;
mod error;
pub mod exec;
pub mod optimizer;
pub mod puncturing;
pub mod simulator;
pub mod trellis;

pub use error::{Error, Result};
pub use exec::Exec;
pub use num_rational::Rational64;
