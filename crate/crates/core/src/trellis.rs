//! Trellises of systematic recursive convolutional encoders.
//!
//! Generator polynomials are given in octal with bit `i` of the integer holding
//! the coefficient of `D^i`, so an odd polynomial has its delay-free tap set.
//! The encoder is realised in controller form: the feedback register value is
//! `a_t = u_t + sum_{i>=1} f_i a_{t-i}` and every forward polynomial `g`
//! emits `sum_i g_i a_{t-i}`. With a systematic spec the input bit is emitted
//! first in every trellis section, followed by one bit per forward polynomial.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const MAX_MEMORY: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSpec {
    feedback: u32,
    forward: Vec<u32>,
    systematic: bool,
}

fn degree(poly: u32) -> usize {
    if poly == 0 {
        0
    } else {
        31 - poly.leading_zeros() as usize
    }
}

impl GeneratorSpec {
    pub fn new(feedback: u32, forward: Vec<u32>, systematic: bool) -> Result<Self> {
        if feedback % 2 == 0 {
            return Err(Error::InvalidSpec(format!(
                "feedback polynomial {feedback:o} has no delay-free tap (must be odd)"
            )));
        }
        if forward.is_empty() {
            return Err(Error::InvalidSpec("no forward polynomial".into()));
        }
        if forward.iter().any(|&g| g == 0) {
            return Err(Error::InvalidSpec("forward polynomial 0".into()));
        }
        let spec = Self {
            feedback,
            forward,
            systematic,
        };
        if spec.memory() > MAX_MEMORY {
            return Err(Error::InvalidSpec(format!(
                "memory {} exceeds the supported maximum {MAX_MEMORY}",
                spec.memory()
            )));
        }
        Ok(spec)
    }

    /// Systematic recursive spec with one feedback and the given forward polynomials.
    pub fn rsc(feedback: u32, forward: &[u32]) -> Result<Self> {
        Self::new(feedback, forward.to_vec(), true)
    }

    pub fn feedback(&self) -> u32 {
        self.feedback
    }

    pub fn forward(&self) -> &[u32] {
        &self.forward
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic
    }

    pub fn is_recursive(&self) -> bool {
        self.feedback != 1
    }

    /// Register length: the largest degree among feedback and forward polynomials.
    pub fn memory(&self) -> usize {
        self.forward
            .iter()
            .map(|&g| degree(g))
            .chain(std::iter::once(degree(self.feedback)))
            .max()
            .unwrap_or(0)
    }

    /// Output bits per input bit; the mother code rate is `1 / n_out`.
    pub fn n_out(&self) -> usize {
        self.forward.len() + usize::from(self.systematic)
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    /// Parses specs such as `"1,5/7"` (systematic, forward 5, feedback 7),
    /// `"1,15/13,17/13"` or `"1,1"`. A leading `1` marks the systematic output.
    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split(',').map(str::trim).collect();
        if tokens.iter().any(|t| t.is_empty()) {
            return Err(Error::InvalidSpec(format!("malformed spec {s:?}")));
        }
        let (systematic, polys) = if tokens.len() > 1 && tokens[0] == "1" {
            (true, &tokens[1..])
        } else {
            (false, &tokens[..])
        };
        let octal = |t: &str| {
            u32::from_str_radix(t, 8)
                .map_err(|_| Error::InvalidSpec(format!("{t:?} is not an octal polynomial")))
        };
        let mut feedback = None;
        let mut forward = Vec::with_capacity(polys.len());
        for tok in polys {
            let (num, den) = match tok.split_once('/') {
                Some((n, d)) => (octal(n)?, octal(d)?),
                None => (octal(tok)?, 1),
            };
            match feedback {
                None => feedback = Some(den),
                Some(f) if f != den => {
                    return Err(Error::InvalidSpec(format!(
                        "forward polynomials share no common feedback in {s:?}"
                    )))
                }
                _ => {}
            }
            forward.push(num);
        }
        let feedback = feedback.ok_or_else(|| Error::InvalidSpec(format!("empty spec {s:?}")))?;
        Self::new(feedback, forward, systematic)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.systematic {
            parts.push("1".to_string());
        }
        for g in &self.forward {
            if self.feedback == 1 {
                parts.push(format!("{g:o}"));
            } else {
                parts.push(format!("{g:o}/{:o}", self.feedback));
            }
        }
        write!(f, "{}", parts.join(","))
    }
}

/// Deterministic, total state machine of an encoder, possibly blocked so that
/// one trellis section consumes `bits_per_step` input bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrellisCode {
    spec: GeneratorSpec,
    num_states: usize,
    bits_per_step: usize,
    outputs_per_step: usize,
    next_state: Vec<usize>,
    output: Vec<u32>,
    event_starts: Vec<u8>,
    tail_input: Vec<usize>,
    termination_length: usize,
}

/// One encoded frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    /// Output bits, one section after the other, systematic bit first.
    pub bits: Vec<u8>,
    /// Trellis input including the forced termination tail.
    pub inputs: Vec<u8>,
    /// Number of information bits `K`.
    pub frame_length: usize,
    /// Output bits before puncturing.
    pub block_length: usize,
    pub final_state: usize,
}

/// Outcome of the minimum event weight search for one input weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventWeight {
    Found {
        weight: usize,
        multiplicity: u128,
    },
    /// No error event with this input weight exists at any output weight.
    Unbounded,
    /// Events exist but none was witnessed below the output weight cap.
    CapExceeded,
}

/// Builds the unit-section trellis of `spec`.
pub fn build_trellis(spec: &GeneratorSpec) -> Result<TrellisCode> {
    TrellisCode::new(spec)
}

impl TrellisCode {
    pub fn new(spec: &GeneratorSpec) -> Result<Self> {
        let spec = GeneratorSpec::new(spec.feedback, spec.forward.clone(), spec.systematic)?;
        let memory = spec.memory();
        let num_states = 1usize << memory;
        let mask = num_states - 1;
        let n_out = spec.n_out();
        let mut next_state = vec![0; num_states * 2];
        let mut output = vec![0u32; num_states * 2];
        let mut tail_input = vec![0; num_states];
        let mut event_starts = vec![0u8; num_states * 2];
        event_starts[1] = 1;
        for s in 0..num_states {
            let fb = ((spec.feedback >> 1) as usize & s).count_ones() as usize & 1;
            tail_input[s] = fb;
            for u in 0..2usize {
                let a = u ^ fb;
                let mut bits = 0u32;
                let mut k = 0;
                if spec.systematic {
                    bits |= u as u32;
                    k = 1;
                }
                for &g in &spec.forward {
                    let b =
                        ((g as usize & 1) * a) ^ (((g >> 1) as usize & s).count_ones() as usize & 1);
                    bits |= (b as u32) << k;
                    k += 1;
                }
                next_state[s * 2 + u] = ((s << 1) | a) & mask;
                output[s * 2 + u] = bits;
            }
        }
        Ok(Self {
            spec,
            num_states,
            bits_per_step: 1,
            outputs_per_step: n_out,
            next_state,
            output,
            event_starts,
            tail_input,
            termination_length: memory,
        })
    }

    /// Trellis whose sections each consume `bits_per_step` consecutive input bits
    /// of the unit encoder; outputs of the merged steps are concatenated in time order.
    pub fn blocked(spec: &GeneratorSpec, bits_per_step: usize) -> Result<Self> {
        if bits_per_step == 0 || bits_per_step > 8 {
            return Err(Error::InvalidInput(format!(
                "bits_per_step {bits_per_step} outside 1..=8"
            )));
        }
        let unit = Self::new(spec)?;
        if bits_per_step == 1 {
            return Ok(unit);
        }
        let p = bits_per_step;
        let n_out = unit.outputs_per_step;
        let num_inputs = 1usize << p;
        let mut next_state = vec![0; unit.num_states * num_inputs];
        let mut output = vec![0u32; unit.num_states * num_inputs];
        let mut event_starts = vec![0u8; unit.num_states * num_inputs];
        let mut tail_input = vec![0; unit.num_states];
        for s in 0..unit.num_states {
            for x in 0..num_inputs {
                let mut st = s;
                let mut bits = 0u32;
                let mut starts = 0;
                for sub in 0..p {
                    let u = (x >> sub) & 1;
                    bits |= unit.output[st * 2 + u] << (sub * n_out);
                    starts += unit.event_starts[st * 2 + u];
                    st = unit.next_state[st * 2 + u];
                }
                next_state[s * num_inputs + x] = st;
                output[s * num_inputs + x] = bits;
                event_starts[s * num_inputs + x] = starts;
            }
            let mut st = s;
            let mut x = 0;
            for sub in 0..p {
                let u = unit.tail_input[st];
                x |= u << sub;
                st = unit.next_state[st * 2 + u];
            }
            tail_input[s] = x;
        }
        Ok(Self {
            spec: unit.spec,
            num_states: unit.num_states,
            bits_per_step: p,
            outputs_per_step: n_out * p,
            next_state,
            output,
            event_starts,
            tail_input,
            termination_length: unit.termination_length.div_ceil(p),
        })
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn memory(&self) -> usize {
        self.spec.memory()
    }

    pub fn bits_per_step(&self) -> usize {
        self.bits_per_step
    }

    pub fn num_inputs(&self) -> usize {
        1 << self.bits_per_step
    }

    /// Output bits per trellis section.
    pub fn outputs_per_step(&self) -> usize {
        self.outputs_per_step
    }

    /// Output bits per unit input bit.
    pub fn n_out(&self) -> usize {
        self.spec.n_out()
    }

    /// Number of tail sections needed to drive any state to zero.
    pub fn termination_length(&self) -> usize {
        self.termination_length
    }

    #[inline]
    pub fn next_state(&self, state: usize, input: usize) -> usize {
        self.next_state[state * self.num_inputs() + input]
    }

    /// Output bits of a transition packed little-endian in serialization order.
    #[inline]
    pub fn output(&self, state: usize, input: usize) -> u32 {
        self.output[state * self.num_inputs() + input]
    }

    /// Number of error events opened by this transition: unit steps that
    /// leave the zero state with a nonzero input bit.
    #[inline]
    pub fn event_starts(&self, state: usize, input: usize) -> usize {
        self.event_starts[state * self.num_inputs() + input] as usize
    }

    /// Forced input symbol applied in a termination section.
    #[inline]
    pub fn tail_input(&self, state: usize) -> usize {
        self.tail_input[state]
    }

    /// Whether output bit `k` of a section is a systematic copy of an input bit.
    pub fn is_systematic_output(&self, k: usize) -> bool {
        self.spec.systematic && k % self.spec.n_out() == 0
    }

    /// Encodes `info`, optionally appending the termination tail.
    pub fn encode(&self, info: &[u8], terminate: bool) -> Result<Codeword> {
        if info.is_empty() {
            return Err(Error::InvalidInput("empty information sequence".into()));
        }
        let p = self.bits_per_step;
        if info.len() % p != 0 {
            return Err(Error::InvalidInput(format!(
                "information length {} is not a multiple of {p} bits per section",
                info.len()
            )));
        }
        if let Some(&b) = info.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidInput(format!("non-binary input symbol {b}")));
        }
        let sections = info.len() / p
            + if terminate {
                self.termination_length
            } else {
                0
            };
        let mut bits = Vec::with_capacity(sections * self.outputs_per_step);
        let mut inputs = Vec::with_capacity(sections * p);
        let mut state = 0;
        let push = |state: usize, x: usize, bits: &mut Vec<u8>, inputs: &mut Vec<u8>| {
            let out = self.output(state, x);
            bits.extend((0..self.outputs_per_step).map(|k| ((out >> k) & 1) as u8));
            inputs.extend((0..p).map(|k| ((x >> k) & 1) as u8));
            self.next_state(state, x)
        };
        for chunk in info.chunks(p) {
            let x = chunk
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, &b)| acc | ((b as usize) << k));
            state = push(state, x, &mut bits, &mut inputs);
        }
        if terminate {
            for _ in 0..self.termination_length {
                let x = self.tail_input(state);
                state = push(state, x, &mut bits, &mut inputs);
            }
        }
        Ok(Codeword {
            block_length: bits.len(),
            bits,
            inputs,
            frame_length: info.len(),
            final_state: state,
        })
    }

    /// Minimum output weight `d_w` and multiplicity `N_w` of single error
    /// events with input weight `w`, for `w = 1..=w_max`.
    pub fn min_event_weights(
        &self,
        w_max: usize,
        h_cap: usize,
    ) -> Result<BTreeMap<usize, EventWeight>> {
        let keep = vec![true; self.outputs_per_step];
        self.min_event_weights_masked(&keep, w_max, h_cap)
    }

    /// As [`TrellisCode::min_event_weights`] under a periodic keep mask covering
    /// `keep.len() / outputs_per_step` sections. Weights count only kept outputs;
    /// the minimum is taken over all starting phases and the multiplicity counts
    /// events per mask period.
    pub fn min_event_weights_masked(
        &self,
        keep: &[bool],
        w_max: usize,
        h_cap: usize,
    ) -> Result<BTreeMap<usize, EventWeight>> {
        if w_max < 2 {
            return Err(Error::InvalidInput(format!(
                "w_max = {w_max} must be at least 2"
            )));
        }
        let ops = self.outputs_per_step;
        if keep.is_empty() || keep.len() % ops != 0 {
            return Err(Error::InvalidInput(format!(
                "keep mask length {} is not a positive multiple of {ops}",
                keep.len()
            )));
        }
        let period = keep.len() / ops;
        let reachable = self.event_input_weights(w_max);
        let s_count = self.num_states;
        let cell = |s: usize, w: usize, h: usize| (s * (w_max + 1) + w) * (h_cap + 1) + h;
        let size = s_count * (w_max + 1) * (h_cap + 1);
        let mut best: Vec<Option<(usize, u128)>> = vec![None; w_max + 1];
        let mut stalled_min_w = usize::MAX;
        let max_steps = (h_cap + w_max + 2) * s_count * period + period;

        let record =
            |best: &mut Vec<Option<(usize, u128)>>, w: usize, h: usize, c: u128| match best[w] {
                Some((d, ref mut n)) if d == h => *n = n.saturating_add(c),
                Some((d, _)) if d < h => {}
                _ => best[w] = Some((h, c)),
            };

        for phase in 0..period {
            let weight_of = |t: usize, out: u32| {
                let base = ((phase + t) % period) * ops;
                (0..ops)
                    .filter(|&k| keep[base + k] && (out >> k) & 1 == 1)
                    .count()
            };
            let mut live = vec![0u128; size];
            let mut any = false;
            for x in 1..self.num_inputs() {
                let w = x.count_ones() as usize;
                let h = weight_of(0, self.output(0, x));
                if w > w_max || h > h_cap {
                    continue;
                }
                let ns = self.next_state(0, x);
                if ns == 0 {
                    record(&mut best, w, h, 1);
                } else {
                    live[cell(ns, w, h)] += 1;
                    any = true;
                }
            }
            let mut t = 1;
            while any {
                if t > max_steps {
                    for s in 1..s_count {
                        for w in 0..=w_max {
                            if (0..=h_cap).any(|h| live[cell(s, w, h)] != 0) {
                                stalled_min_w = stalled_min_w.min(w);
                            }
                        }
                    }
                    break;
                }
                let mut next = vec![0u128; size];
                any = false;
                for s in 1..s_count {
                    for w in 0..=w_max {
                        for h in 0..=h_cap {
                            let c = live[cell(s, w, h)];
                            if c == 0 {
                                continue;
                            }
                            for x in 0..self.num_inputs() {
                                let nw = w + x.count_ones() as usize;
                                let nh = h + weight_of(t, self.output(s, x));
                                if nw > w_max || nh > h_cap {
                                    continue;
                                }
                                let ns = self.next_state(s, x);
                                if ns == 0 {
                                    record(&mut best, nw, nh, c);
                                } else {
                                    let slot = &mut next[cell(ns, nw, nh)];
                                    *slot = slot.saturating_add(c);
                                    any = true;
                                }
                            }
                        }
                    }
                }
                live = next;
                t += 1;
            }
        }

        let mut out = BTreeMap::new();
        for w in 1..=w_max {
            let v = if !reachable.contains(&w) {
                EventWeight::Unbounded
            } else {
                match best[w] {
                    Some((d, n)) if w < stalled_min_w => EventWeight::Found {
                        weight: d,
                        multiplicity: n,
                    },
                    _ => EventWeight::CapExceeded,
                }
            };
            out.insert(w, v);
        }
        Ok(out)
    }

    /// Input weights `<= w_max` for which some error event exists.
    fn event_input_weights(&self, w_max: usize) -> HashSet<usize> {
        let mut seen = HashSet::new();
        let mut stack = Vec::new();
        let mut found = HashSet::new();
        for x in 1..self.num_inputs() {
            let w = x.count_ones() as usize;
            if w > w_max {
                continue;
            }
            let ns = self.next_state(0, x);
            if ns == 0 {
                found.insert(w);
            } else if seen.insert((ns, w)) {
                stack.push((ns, w));
            }
        }
        while let Some((s, w)) = stack.pop() {
            for x in 0..self.num_inputs() {
                let nw = w + x.count_ones() as usize;
                if nw > w_max {
                    continue;
                }
                let ns = self.next_state(s, x);
                if ns == 0 {
                    found.insert(nw);
                } else if seen.insert((ns, nw)) {
                    stack.push((ns, nw));
                }
            }
        }
        found
    }
}
