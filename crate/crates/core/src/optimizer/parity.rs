use std::cmp::Ordering;

use super::metric::{Metric, ParityMetric, WeightEntry};
use super::{LadderOutcome, Trajectory, TrajectoryStep};
use crate::puncturing::{PunctureLadder, PuncturePattern};
use crate::trellis::TrellisCode;
use crate::{Error, Exec, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cell {
    d: usize,
    n: u128,
}

const EMPTY: Cell = Cell {
    d: usize::MAX,
    n: 0,
};

impl Cell {
    #[inline]
    fn merge(&mut self, d: usize, n: u128) {
        if n == 0 {
            return;
        }
        match d.cmp(&self.d) {
            Ordering::Less => *self = Cell { d, n },
            Ordering::Equal => self.n = self.n.saturating_add(n),
            Ordering::Greater => {}
        }
    }
}

/// Inner trellis over `N` free sections and the tail, with the parity
/// position carried by every output bit. Tail outputs always count.
struct Frame<'a> {
    t: &'a TrellisCode,
    free: usize,
    sections: usize,
    w_max: usize,
    parity_of: Vec<Option<usize>>,
    section_of: Vec<usize>,
}

impl<'a> Frame<'a> {
    fn new(t: &'a TrellisCode, n: usize, w_max: usize) -> Result<Self> {
        let p = t.bits_per_step();
        if n == 0 || n % p != 0 {
            return Err(Error::InvalidInput(format!(
                "N = {n} is not a positive multiple of {p} bits per section"
            )));
        }
        if w_max < 2 {
            return Err(Error::InvalidInput(format!(
                "w_max = {w_max} must be at least 2"
            )));
        }
        let n_out = t.n_out();
        let sys = usize::from(t.spec().is_systematic());
        let streams = n_out - sys;
        if streams == 0 {
            return Err(Error::DegenerateCode(
                "inner code has no parity output".into(),
            ));
        }
        let ops = t.outputs_per_step();
        let free = n / p;
        let sections = free + t.termination_length();
        let mut parity_of = vec![None; sections * ops];
        let mut section_of = vec![0; n * streams];
        for sec in 0..free {
            for k in 0..ops {
                let r = k % n_out;
                if r >= sys {
                    let q = (sec * p + k / n_out) * streams + r - sys;
                    parity_of[sec * ops + k] = Some(q);
                    section_of[q] = sec;
                }
            }
        }
        Ok(Self {
            t,
            free,
            sections,
            w_max,
            parity_of,
            section_of,
        })
    }

    fn positions(&self) -> usize {
        self.section_of.len()
    }

    fn width(&self) -> usize {
        self.t.num_states() * (self.w_max + 1)
    }

    fn inputs(&self, sec: usize, s: usize) -> Vec<usize> {
        if sec < self.free {
            (0..self.t.num_inputs()).collect()
        } else {
            vec![self.t.tail_input(s)]
        }
    }

    fn input_weight(&self, sec: usize, x: usize) -> usize {
        if sec < self.free {
            x.count_ones() as usize
        } else {
            0
        }
    }

    fn weight(&self, sec: usize, out: u32, deleted: &[bool], extra: Option<usize>) -> usize {
        let ops = self.t.outputs_per_step();
        (0..ops)
            .filter(|&k| {
                (out >> k) & 1 == 1
                    && match self.parity_of[sec * ops + k] {
                        None => sec >= self.free,
                        Some(q) => !deleted[q] && extra != Some(q),
                    }
            })
            .count()
    }

    fn forward(&self, deleted: &[bool]) -> Vec<Cell> {
        let (w1, width) = (self.w_max + 1, self.width());
        let mut alpha = vec![EMPTY; (self.sections + 1) * width];
        alpha[0] = Cell { d: 0, n: 1 };
        for sec in 0..self.sections {
            let (cur, next) = alpha.split_at_mut((sec + 1) * width);
            let cur = &cur[sec * width..];
            let next = &mut next[..width];
            for s in 0..self.t.num_states() {
                for l in 0..w1 {
                    let a = cur[s * w1 + l];
                    if a.n == 0 {
                        continue;
                    }
                    for x in self.inputs(sec, s) {
                        let l2 = l + self.input_weight(sec, x);
                        if l2 > self.w_max {
                            continue;
                        }
                        let wt = self.weight(sec, self.t.output(s, x), deleted, None);
                        next[self.t.next_state(s, x) * w1 + l2].merge(a.d + wt, a.n);
                    }
                }
            }
        }
        alpha
    }

    fn backward(&self, deleted: &[bool]) -> Vec<Cell> {
        let (w1, width) = (self.w_max + 1, self.width());
        let mut beta = vec![EMPTY; (self.sections + 1) * width];
        beta[self.sections * width] = Cell { d: 0, n: 1 };
        for sec in (0..self.sections).rev() {
            let (cur, next) = beta.split_at_mut((sec + 1) * width);
            let cur = &mut cur[sec * width..];
            let next = &next[..width];
            for s in 0..self.t.num_states() {
                for x in self.inputs(sec, s) {
                    let dl = self.input_weight(sec, x);
                    let wt = self.weight(sec, self.t.output(s, x), deleted, None);
                    let ns = self.t.next_state(s, x);
                    for l in 0..w1 - dl.min(w1) {
                        let b = next[ns * w1 + l];
                        if b.n > 0 {
                            cur[s * w1 + l + dl].merge(b.d + wt, b.n);
                        }
                    }
                }
            }
        }
        beta
    }

    /// Per-`w` minima with position `extra` also deleted, joined at its section.
    fn combine(&self, alpha: &[Cell], beta: &[Cell], deleted: &[bool], extra: usize) -> Vec<Cell> {
        let (w1, width) = (self.w_max + 1, self.width());
        let sec = self.section_of[extra];
        let a_sec = &alpha[sec * width..(sec + 1) * width];
        let b_next = &beta[(sec + 1) * width..(sec + 2) * width];
        let mut out = vec![EMPTY; w1];
        for s in 0..self.t.num_states() {
            for x in self.inputs(sec, s) {
                let dl = self.input_weight(sec, x);
                let wt = self.weight(sec, self.t.output(s, x), deleted, Some(extra));
                let ns = self.t.next_state(s, x);
                for l1 in 0..w1 {
                    let a = a_sec[s * w1 + l1];
                    if a.n == 0 {
                        continue;
                    }
                    for l2 in 0..w1 {
                        let l = l1 + dl + l2;
                        if l > self.w_max {
                            break;
                        }
                        let b = b_next[ns * w1 + l2];
                        if b.n > 0 {
                            out[l].merge(a.d + wt + b.d, a.n.saturating_mul(b.n));
                        }
                    }
                }
            }
        }
        out
    }

    fn metric_of(&self, totals: &[Cell]) -> ParityMetric {
        let entries = (2..=self.w_max)
            .map(|w| {
                let c = totals[w];
                WeightEntry {
                    w,
                    d: (c.n > 0).then_some(c.d),
                    n: c.n,
                }
            })
            .collect();
        ParityMetric { entries }
    }

    fn metric(&self, deleted: &[bool]) -> ParityMetric {
        let alpha = self.forward(deleted);
        let width = self.width();
        let end = &alpha[self.sections * width..];
        self.metric_of(&end[..self.w_max + 1])
    }
}

/// `(d_w, N_w)` for `w = 2..=w_max` over all terminated frame words of the
/// inner code whose parity outputs are punctured by `p_i_p`. Weights count
/// surviving parity bits and every tail output.
pub fn parity_metric(
    inner: &TrellisCode,
    p_i_p: &PuncturePattern,
    n: usize,
    w_max: usize,
) -> Result<ParityMetric> {
    let frame = Frame::new(inner, n, w_max)?;
    if p_i_p.length() != frame.positions() {
        return Err(Error::LengthMismatch {
            expected: frame.positions(),
            found: p_i_p.length(),
        });
    }
    Ok(frame.metric(
        p_i_p
            .keep_mask()
            .iter()
            .map(|k| !k)
            .collect::<Vec<_>>()
            .as_slice(),
    ))
}

/// Greedy parity ladder: each step deletes the surviving parity position whose
/// deletion leaves the best [`ParityMetric`], lowest position on ties.
pub fn optimize_parity_ladder(
    inner: &TrellisCode,
    n: usize,
    w_max: usize,
    steps: usize,
    exec: Exec,
) -> Result<LadderOutcome<ParityMetric>> {
    let frame = Frame::new(inner, n, w_max)?;
    let total = frame.positions();
    if steps > total {
        return Err(Error::InvalidInput(format!(
            "{steps} steps requested but only {total} parity positions exist"
        )));
    }
    let mut deleted = vec![false; total];
    let mut ladder = PunctureLadder::empty(total);
    let initial = frame.metric(&deleted);
    let mut trajectory = Trajectory {
        initial,
        steps: Vec::with_capacity(steps),
        stop_reason: None,
    };
    for step in 1..=steps {
        let alpha = frame.forward(&deleted);
        let beta = frame.backward(&deleted);
        let candidates: Vec<usize> = (0..total).filter(|&q| !deleted[q]).collect();
        let metrics = exec.map_slice(&candidates, |&q| {
            frame.metric_of(&frame.combine(&alpha, &beta, &deleted, q))
        });
        let mut best = 0;
        for i in 1..metrics.len() {
            if metrics[i].compare(&metrics[best])? == Ordering::Greater {
                best = i;
            }
        }
        let q = candidates[best];
        deleted[q] = true;
        ladder.push(q)?;
        trajectory.steps.push(TrajectoryStep {
            step,
            position: q,
            metric: metrics[best].clone(),
        });
    }
    Ok(LadderOutcome { ladder, trajectory })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rsc() -> TrellisCode {
        TrellisCode::new(&"1,5/7".parse().unwrap()).unwrap()
    }

    #[test]
    fn matches_exhaustive_encoding() {
        let t = rsc();
        let n = 12;
        let p_i_p = PuncturePattern::from_deleted(n, [1, 5, 6]).unwrap();
        let m = parity_metric(&t, &p_i_p, n, 3).unwrap();
        for w in 2..=3usize {
            let mut best: Option<(usize, u128)> = None;
            for word in 0u32..1 << n {
                if word.count_ones() as usize != w {
                    continue;
                }
                let info: Vec<u8> = (0..n).map(|i| (word >> i & 1) as u8).collect();
                let cw = t.encode(&info, true).unwrap();
                let h = (0..cw.bits.len())
                    .filter(|&i| {
                        let (sec, r) = (i / 2, i % 2);
                        cw.bits[i] == 1 && (sec >= n || (r == 1 && !p_i_p.is_deleted(sec)))
                    })
                    .count();
                best = match best {
                    Some((d, c)) if d == h => Some((d, c + 1)),
                    Some((d, c)) if d < h => Some((d, c)),
                    _ => Some((h, 1)),
                };
            }
            let (d, c) = best.unwrap();
            let e = m.get(w).unwrap();
            assert_eq!((e.d, e.n), (Some(d), c), "w = {w}");
        }
    }

    #[test]
    fn combine_matches_full_recomputation() {
        let t = rsc();
        let frame = Frame::new(&t, 16, 4).unwrap();
        let mut deleted = vec![false; 16];
        deleted[3] = true;
        deleted[9] = true;
        let alpha = frame.forward(&deleted);
        let beta = frame.backward(&deleted);
        for q in (0..16).filter(|&q| !deleted[q]) {
            let fast = frame.metric_of(&frame.combine(&alpha, &beta, &deleted, q));
            let mut d2 = deleted.clone();
            d2[q] = true;
            assert_eq!(fast, frame.metric(&d2), "position {q}");
        }
    }

    #[test]
    fn zero_steps_is_empty() {
        let out = optimize_parity_ladder(&rsc(), 12, 4, 0, Exec::Sequential).unwrap();
        assert!(out.ladder.is_empty());
        assert!(out.trajectory.steps.is_empty());
    }

    #[test]
    fn too_many_steps() {
        assert!(optimize_parity_ladder(&rsc(), 12, 4, 13, Exec::Sequential).is_err());
    }
}
