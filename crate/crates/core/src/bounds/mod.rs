//! Uniform-interleaver composition of the constituent enumerators, union
//! bounds on bit and frame error probability, and asymptotic exponents.

mod asymptotic;
mod compose;
mod curves;
mod sum;

pub use asymptotic::{
    asymptotic_report, exponent_profile, AsymptoticBranch, AsymptoticReport, ExponentProfile,
};
pub use compose::{compose_uniform, ComposeMode, ScccSpectrum};
pub use curves::{
    cumulative_spectrum, db_to_linear, union_bound_bit, union_bound_frame, BoundCurve, BoundKind,
    Kernel,
};
pub use sum::CompensatedSum;
