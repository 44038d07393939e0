//! Truncated joint weight enumerators of the punctured constituent codes.
//!
//! Both enumerators run a forward dynamic program over the terminated,
//! position-dependent trellis. Every weight coordinate is non-decreasing along
//! a path, so every coefficient inside the caps is exact; paths leaving the
//! caps are dropped and the smallest weights they had reached are recorded so
//! that minima can be certified against them.
//!
//! An error event starts whenever a unit step leaves the zero state with a
//! nonzero input bit, and `n` counts those starts. An event still open when
//! the termination tail begins is marked `terminal`.

mod caps;
mod count;
mod inner;
mod oracle;
mod outer;
mod summary;

pub use caps::Caps;
pub use inner::{inner_joint_enumerator, InnerIndex, InnerJointEnumerator};
pub use oracle::{brute_force_spectrum, BruteForceSpectrum};
pub use outer::{outer_joint_enumerator, OuterIndex, OuterJointEnumerator};
pub use summary::{distance_summary, DistanceSummary, WeightEntry};
