//! Puncturing patterns, rate-compatible ladders, permeabilities and the
//! serially concatenated frame layout.
//!
//! Position indices are zero-based. Outer mother positions serialize each
//! trellis section as (systematic, parity), so section `t` owns positions
//! `2t` and `2t + 1` for a rate-1/2 outer code. Inner parity positions index
//! the `N` parity bits of the inner encoder directly.

mod pattern;
mod permutation;
mod rates;
mod scheme;

pub use pattern::{
    apply_pattern, check_rate_compatible, ladder_step, PatternFile, PatternKind, PunctureLadder,
    PuncturePattern, RateCompatibility,
};
pub use permutation::{interleave_pattern, Permutation};
pub use rates::{rho_s_for_target, sccc_rate, PermeabilityPair};
pub use scheme::{restrict_to_survivors, ScccConfig, ScccFrame};
