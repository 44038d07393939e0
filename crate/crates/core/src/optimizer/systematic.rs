use std::cmp::Ordering;

use super::metric::{Metric, OwefMetric};
use super::{LadderOutcome, Trajectory, TrajectoryStep};
use crate::puncturing::{PunctureLadder, PuncturePattern};
use crate::trellis::TrellisCode;
use crate::{Error, Exec, Result};

/// Outer trellis over `K` sections (tail included) with one counting flag per
/// mother output position.
struct Frame<'a> {
    t: &'a TrellisCode,
    k: usize,
    boundary: usize,
    d_max: usize,
}

impl<'a> Frame<'a> {
    fn new(t: &'a TrellisCode, p_o: &PuncturePattern, k: usize, d_max: usize) -> Result<Self> {
        let ops = t.outputs_per_step();
        if p_o.length() != k * ops {
            return Err(Error::LengthMismatch {
                expected: k * ops,
                found: p_o.length(),
            });
        }
        let tail = t.termination_length();
        if k <= tail {
            return Err(Error::InvalidInput(format!(
                "{k} sections leave no information section after a tail of {tail}"
            )));
        }
        Ok(Self {
            t,
            k,
            boundary: k - tail,
            d_max,
        })
    }

    fn inputs(&self, sec: usize, s: usize) -> Vec<usize> {
        if sec < self.boundary {
            (0..self.t.num_inputs()).collect()
        } else {
            vec![self.t.tail_input(s)]
        }
    }

    fn weight(&self, sec: usize, out: u32, counted: &[bool], extra: Option<usize>) -> usize {
        let ops = self.t.outputs_per_step();
        (0..ops)
            .filter(|&b| {
                let pos = sec * ops + b;
                (out >> b) & 1 == 1 && counted[pos] && extra != Some(pos)
            })
            .count()
    }

    fn width(&self) -> usize {
        self.t.num_states() * (self.d_max + 1)
    }

    fn forward(&self, counted: &[bool]) -> Vec<u128> {
        let (d1, width) = (self.d_max + 1, self.width());
        let mut alpha = vec![0u128; (self.k + 1) * width];
        alpha[0] = 1;
        for sec in 0..self.k {
            let (cur, next) = alpha.split_at_mut((sec + 1) * width);
            let cur = &cur[sec * width..];
            let next = &mut next[..width];
            for s in 0..self.t.num_states() {
                for x in self.inputs(sec, s) {
                    let wt = self.weight(sec, self.t.output(s, x), counted, None);
                    let ns = self.t.next_state(s, x);
                    for j in 0..d1.saturating_sub(wt) {
                        let c = cur[s * d1 + j];
                        if c > 0 {
                            let slot = &mut next[ns * d1 + j + wt];
                            *slot = slot.saturating_add(c);
                        }
                    }
                }
            }
        }
        alpha
    }

    fn backward(&self, counted: &[bool]) -> Vec<u128> {
        let (d1, width) = (self.d_max + 1, self.width());
        let mut beta = vec![0u128; (self.k + 1) * width];
        beta[self.k * width] = 1;
        for sec in (0..self.k).rev() {
            let (cur, next) = beta.split_at_mut((sec + 1) * width);
            let cur = &mut cur[sec * width..];
            let next = &next[..width];
            for s in 0..self.t.num_states() {
                for x in self.inputs(sec, s) {
                    let wt = self.weight(sec, self.t.output(s, x), counted, None);
                    let ns = self.t.next_state(s, x);
                    for j in 0..d1.saturating_sub(wt) {
                        let c = next[ns * d1 + j];
                        if c > 0 {
                            let slot = &mut cur[s * d1 + j + wt];
                            *slot = slot.saturating_add(c);
                        }
                    }
                }
            }
        }
        beta
    }

    /// `A_0..=A_dmax` with mother position `extra` also removed.
    fn combine(&self, alpha: &[u128], beta: &[u128], counted: &[bool], extra: usize) -> Vec<u128> {
        let ops = self.t.outputs_per_step();
        let (d1, width) = (self.d_max + 1, self.width());
        let sec = extra / ops;
        let a_sec = &alpha[sec * width..(sec + 1) * width];
        let b_next = &beta[(sec + 1) * width..(sec + 2) * width];
        let mut out = vec![0u128; d1];
        for s in 0..self.t.num_states() {
            for x in self.inputs(sec, s) {
                let wt = self.weight(sec, self.t.output(s, x), counted, Some(extra));
                let ns = self.t.next_state(s, x);
                for j1 in 0..d1 {
                    let a = a_sec[s * d1 + j1];
                    if a == 0 {
                        continue;
                    }
                    for j2 in 0..d1 {
                        let d = j1 + wt + j2;
                        if d > self.d_max {
                            break;
                        }
                        let b = b_next[ns * d1 + j2];
                        if b > 0 {
                            out[d] = out[d].saturating_add(a.saturating_mul(b));
                        }
                    }
                }
            }
        }
        out
    }

    fn distribution(&self, counted: &[bool]) -> Vec<u128> {
        let alpha = self.forward(counted);
        let d1 = self.d_max + 1;
        alpha[self.k * self.width()..][..d1].to_vec()
    }
}

fn counted_mask(p_o: &PuncturePattern, deleted: &PuncturePattern) -> Result<Vec<bool>> {
    if deleted.length() != p_o.length() {
        return Err(Error::LengthMismatch {
            expected: p_o.length(),
            found: deleted.length(),
        });
    }
    Ok((0..p_o.length())
        .map(|i| !p_o.is_deleted(i) && !deleted.is_deleted(i))
        .collect())
}

/// Output weight distribution `A_0..=A_dmax` of the outer code after `p_o`
/// and the extra deletion `p_prime_mother`, both over mother positions.
/// `A_0 = 1` exactly when the information is recoverable.
pub fn owef_distribution(
    outer: &TrellisCode,
    p_o: &PuncturePattern,
    p_prime_mother: &PuncturePattern,
    k: usize,
    d_max: usize,
) -> Result<Vec<u128>> {
    let frame = Frame::new(outer, p_o, k, d_max)?;
    Ok(frame.distribution(&counted_mask(p_o, p_prime_mother)?))
}

pub fn owef_metric(
    outer: &TrellisCode,
    p_o: &PuncturePattern,
    p_prime_mother: &PuncturePattern,
    k: usize,
    d_max: usize,
) -> Result<OwefMetric> {
    owef_distribution(outer, p_o, p_prime_mother, k, d_max)
        .map(|a| OwefMetric::from_distribution(&a))
}

/// Free distance of the outer code with only `p_o` applied.
pub fn outer_free_distance(outer: &TrellisCode, p_o: &PuncturePattern, k: usize) -> Result<usize> {
    let none = PuncturePattern::none(p_o.length());
    let mut d_max = 8;
    loop {
        let a = owef_distribution(outer, p_o, &none, k, d_max)?;
        if let Some(d) = (1..a.len()).find(|&d| a[d] > 0) {
            return Ok(d);
        }
        if d_max >= p_o.length() {
            return Err(Error::DegenerateCode("no nonzero outer codeword".into()));
        }
        d_max *= 2;
    }
}

/// GF(2) rank test: the map from information bits to the positions kept by
/// both `p_o` and `p_prime_mother` has full row rank.
pub fn is_invertible(
    outer: &TrellisCode,
    p_o: &PuncturePattern,
    p_prime_mother: &PuncturePattern,
    k: usize,
) -> Result<bool> {
    let counted = counted_mask(p_o, p_prime_mother)?;
    let tail = outer.termination_length();
    if k <= tail {
        return Err(Error::InvalidInput(format!(
            "{k} sections leave no information"
        )));
    }
    let info = (k - tail) * outer.bits_per_step();
    let kept: Vec<usize> = (0..counted.len()).filter(|&i| counted[i]).collect();
    if kept.len() < info {
        return Ok(false);
    }
    let words = kept.len().div_ceil(64);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(info);
    for i in 0..info {
        let mut u = vec![0u8; info];
        u[i] = 1;
        let cw = outer.encode(&u, true)?;
        let mut row = vec![0u64; words];
        for (c, &pos) in kept.iter().enumerate() {
            if cw.bits[pos] == 1 {
                row[c / 64] |= 1 << (c % 64);
            }
        }
        rows.push(row);
    }
    Ok(gf2_rank(rows, kept.len()) == info)
}

fn gf2_rank(mut rows: Vec<Vec<u64>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let (w, bit) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & bit != 0 {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Greedy systematic ladder over outer mother positions: each step deletes
/// the position giving the best [`OwefMetric`] among those that keep the outer
/// code invertible. Stops early when no candidate qualifies.
pub fn optimize_systematic_ladder(
    outer: &TrellisCode,
    p_o: &PuncturePattern,
    k: usize,
    d_max: Option<usize>,
    steps: usize,
    restrict_to_parity: bool,
    exec: Exec,
) -> Result<LadderOutcome<OwefMetric>> {
    if steps > k / 2 {
        return Err(Error::InfeasiblePermeability(format!(
            "{steps} steps exceed K/2 = {}, which brings the outer rate to 1",
            k / 2
        )));
    }
    let d_max = match d_max {
        Some(d) => d,
        None => outer_free_distance(outer, p_o, k)? + 6,
    };
    let frame = Frame::new(outer, p_o, k, d_max)?;
    let ops = outer.outputs_per_step();
    let none = PuncturePattern::none(p_o.length());
    let mut counted = counted_mask(p_o, &none)?;
    let info = frame.boundary * outer.bits_per_step();
    let mut ladder = PunctureLadder::empty(p_o.length());
    let mut trajectory = Trajectory {
        initial: OwefMetric::from_distribution(&frame.distribution(&counted)),
        steps: Vec::with_capacity(steps),
        stop_reason: None,
    };
    for step in 1..=steps {
        let kept = counted.iter().filter(|&&c| c).count();
        if kept <= info {
            trajectory.stop_reason = Some(format!("outer rate reached 1 after {} steps", step - 1));
            break;
        }
        let alpha = frame.forward(&counted);
        let beta = frame.backward(&counted);
        let candidates: Vec<usize> = (0..counted.len())
            .filter(|&q| counted[q] && !(restrict_to_parity && outer.is_systematic_output(q % ops)))
            .collect();
        let dists = exec.map_slice(&candidates, |&q| frame.combine(&alpha, &beta, &counted, q));
        let mut ranked: Vec<(usize, OwefMetric)> = candidates
            .iter()
            .zip(&dists)
            .filter(|(_, a)| a[0] == 1)
            .map(|(&q, a)| (q, OwefMetric::from_distribution(a)))
            .collect();
        let mut order_err = None;
        ranked.sort_by(|(qa, a), (qb, b)| match b.compare(a) {
            Ok(o) => o.then(qa.cmp(qb)),
            Err(e) => {
                order_err = Some(e);
                Ordering::Equal
            }
        });
        if let Some(e) = order_err {
            return Err(e);
        }
        let mut chosen = None;
        for (q, m) in ranked {
            let mut deleted = ladder.positions().to_vec();
            deleted.push(q);
            let pat = PuncturePattern::from_deleted(p_o.length(), deleted)?;
            if is_invertible(outer, p_o, &pat, k)? {
                chosen = Some((q, m));
                break;
            }
        }
        let Some((q, metric)) = chosen else {
            trajectory.stop_reason = Some(format!(
                "no deletion keeps the outer code invertible after {} steps",
                step - 1
            ));
            break;
        };
        counted[q] = false;
        ladder.push(q)?;
        trajectory.steps.push(TrajectoryStep {
            step,
            position: q,
            metric,
        });
    }
    Ok(LadderOutcome { ladder, trajectory })
}
