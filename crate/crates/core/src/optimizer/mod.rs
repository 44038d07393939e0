//! Greedy one-bit-at-a-time construction of rate-compatible puncturing ladders.
//!
//! The parity ladder deletes inner parity positions in the order that keeps the
//! best `(d_w, N_w)` profile; the systematic ladder deletes outer code bits in
//! the order that keeps the best truncated output weight distribution while the
//! outer code stays invertible. Candidate evaluation within a step runs through
//! [`Exec`](crate::Exec); the winner is chosen by a sequential scan, so ladders
//! do not depend on the thread count.

mod metric;
mod parity;
mod systematic;

use std::io::{self, Write};

use serde::Serialize;

use crate::puncturing::PunctureLadder;

pub use metric::{compare_metrics, Metric, OwefMetric, ParityMetric, WeightEntry};
pub use parity::{optimize_parity_ladder, parity_metric};
pub use systematic::{
    is_invertible, optimize_systematic_ladder, outer_free_distance, owef_distribution, owef_metric,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrajectoryStep<M> {
    pub step: usize,
    pub position: usize,
    pub metric: M,
}

/// Metric after every greedy step, starting from the unpunctured code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trajectory<M> {
    pub initial: M,
    pub steps: Vec<TrajectoryStep<M>>,
    /// Why the search ended before the requested number of steps.
    pub stop_reason: Option<String>,
}

impl<M: Serialize> Trajectory<M> {
    pub fn write_json(&self, out: impl Write) -> io::Result<()> {
        serde_json::to_writer_pretty(out, self).map_err(io::Error::other)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderOutcome<M> {
    pub ladder: PunctureLadder,
    pub trajectory: Trajectory<M>,
}
