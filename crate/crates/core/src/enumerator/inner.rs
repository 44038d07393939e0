use std::collections::BTreeMap;
use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::count::{run_with_fallback, Count};
use super::Caps;
use crate::puncturing::PuncturePattern;
use crate::trellis::TrellisCode;
use crate::{Error, Result};

/// Coefficient index of the inner enumerator: input weight `l`, weight `m` of
/// the surviving parity bits plus the tail, event count `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct InnerIndex {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub terminal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerJointEnumerator {
    caps: Caps,
    n_block: usize,
    bits_per_step: usize,
    coeffs: BTreeMap<InnerIndex, BigUint>,
    drop_m_by_l: Vec<Option<usize>>,
}

/// Enumerates the parity-only inner code over `n` free input bits followed by
/// the termination tail. Systematic outputs of the free sections are excluded
/// from `m`; all tail outputs are included.
pub fn inner_joint_enumerator(
    inner: &TrellisCode,
    p_i_p: &PuncturePattern,
    n: usize,
    caps: &Caps,
) -> Result<InnerJointEnumerator> {
    let p = inner.bits_per_step();
    if n == 0 || n % p != 0 {
        return Err(Error::InvalidInput(format!(
            "N = {n} is not a positive multiple of {p} bits per section"
        )));
    }
    let n_out = inner.n_out();
    let sys = usize::from(inner.spec().is_systematic());
    let streams = n_out - sys;
    if p_i_p.length() != n * streams {
        return Err(Error::LengthMismatch {
            expected: n * streams,
            found: p_i_p.length(),
        });
    }
    let ops = inner.outputs_per_step();
    let free = n / p;
    let sections = free + inner.termination_length();
    let mut labels = Vec::with_capacity(sections * ops);
    for sec in 0..free {
        for k in 0..ops {
            let step = sec * p + k / n_out;
            let r = k % n_out;
            labels.push(if r < sys {
                false
            } else {
                !p_i_p.is_deleted(step * streams + r - sys)
            });
        }
    }
    labels.resize(sections * ops, true);
    let job = Job {
        trellis: inner,
        labels: &labels,
        free,
        sections,
        caps: *caps,
    };
    let (coeffs, drop_m_by_l) = run_with_fallback(
        || job.run::<u128>(),
        || {
            job.run::<BigUint>()
                .expect("arbitrary precision never overflows")
        },
    );
    Ok(InnerJointEnumerator {
        caps: *caps,
        bits_per_step: inner.bits_per_step(),
        n_block: n,
        coeffs,
        drop_m_by_l,
    })
}

struct Job<'a> {
    trellis: &'a TrellisCode,
    labels: &'a [bool],
    free: usize,
    sections: usize,
    caps: Caps,
}

type Table = (BTreeMap<InnerIndex, BigUint>, Vec<Option<usize>>);

impl Job<'_> {
    fn run<C: Count>(&self) -> Option<Table> {
        let t = self.trellis;
        let caps = self.caps;
        let (nl, nm, nn) = (caps.l + 1, caps.m + 1, caps.n + 1);
        let per_state = 2 * nl * nm * nn;
        let idx = |tau: usize, l: usize, m: usize, n: usize| ((tau * nl + l) * nm + m) * nn + n;
        let states = t.num_states();
        let mut cur = vec![C::nil(); states * per_state];
        cur[0] = C::unit();
        let mut drops: Vec<Option<usize>> = vec![None; caps.l + 2];
        let ops = t.outputs_per_step();
        let rest = self.remaining_weights();

        for sec in 0..self.sections {
            if sec == self.free {
                let half = per_state / 2;
                for s in 1..states {
                    let base = s * per_state;
                    for i in 0..half {
                        let v = std::mem::replace(&mut cur[base + i], C::nil());
                        cur[base + half + i] = v;
                    }
                }
            }
            let forced = sec >= self.free;
            let labels = &self.labels[sec * ops..(sec + 1) * ops];
            let mut next = vec![C::nil(); states * per_state];
            for s in 0..states {
                let inputs: Vec<usize> = if forced {
                    vec![t.tail_input(s)]
                } else {
                    (0..t.num_inputs()).collect()
                };
                let moves: Vec<_> = inputs
                    .iter()
                    .map(|&x| {
                        let dm = weight(labels, t.output(s, x));
                        let dl = if forced { 0 } else { x.count_ones() as usize };
                        let dn = if forced { 0 } else { t.event_starts(s, x) };
                        (t.next_state(s, x), dl, dm, dn)
                    })
                    .collect();
                let src = &cur[s * per_state..(s + 1) * per_state];
                for tau in 0..2 {
                    for l in 0..nl {
                        for m in 0..nm {
                            for n in 0..nn {
                                let c = &src[idx(tau, l, m, n)];
                                if c.is_nil() {
                                    continue;
                                }
                                for &(ns, dl, dm, dn) in &moves {
                                    let (l2, m2, n2) = (l + dl, m + dm, n + dn);
                                    if l2 > caps.l || m2 > caps.m || n2 > caps.n {
                                        let (rl, rm) = rest[sec + 1][ns];
                                        let lb = (l2 + rl).min(caps.l + 1);
                                        let mb = m2 + rm;
                                        let slot = &mut drops[lb];
                                        *slot = Some(slot.map_or(mb, |v| v.min(mb)));
                                        continue;
                                    }
                                    if !next[ns * per_state + idx(tau, l2, m2, n2)].accumulate(c) {
                                        return None;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            cur = next;
        }

        let mut coeffs = BTreeMap::new();
        for tau in 0..2 {
            for l in 0..nl {
                for m in 0..nm {
                    for n in 0..nn {
                        let c = &cur[idx(tau, l, m, n)];
                        if c.is_nil() || (l == 0 && m == 0 && n == 0) {
                            continue;
                        }
                        coeffs.insert(
                            InnerIndex {
                                l,
                                m,
                                n,
                                terminal: tau == 1,
                            },
                            c.to_big(),
                        );
                    }
                }
            }
        }
        Some((coeffs, drops))
    }
}

fn weight(labels: &[bool], out: u32) -> usize {
    labels
        .iter()
        .enumerate()
        .filter(|&(k, &keep)| keep && (out >> k) & 1 == 1)
        .count()
}

impl Job<'_> {
    /// Smallest `l` and `m` (each minimized separately) that any path from
    /// state `s` at section `t` still accumulates before terminating.
    fn remaining_weights(&self) -> Vec<Vec<(usize, usize)>> {
        let t = self.trellis;
        let ops = t.outputs_per_step();
        let inf = usize::MAX / 4;
        let mut rest = vec![vec![(inf, inf); t.num_states()]; self.sections + 1];
        rest[self.sections][0] = (0, 0);
        for sec in (0..self.sections).rev() {
            let labels = &self.labels[sec * ops..(sec + 1) * ops];
            let forced = sec >= self.free;
            for s in 0..t.num_states() {
                let mut best = (inf, inf);
                let inputs: Vec<usize> = if forced {
                    vec![t.tail_input(s)]
                } else {
                    (0..t.num_inputs()).collect()
                };
                for x in inputs {
                    let dl = if forced { 0 } else { x.count_ones() as usize };
                    let dm = weight(labels, t.output(s, x));
                    let (rl, rm) = rest[sec + 1][t.next_state(s, x)];
                    best.0 = best.0.min(dl + rl);
                    best.1 = best.1.min(dm + rm);
                }
                rest[sec][s] = best;
            }
        }
        rest
    }
}

impl InnerJointEnumerator {
    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn n_block(&self) -> usize {
        self.n_block
    }

    /// Input bits per trellis section of the enumerated code.
    pub fn bits_per_step(&self) -> usize {
        self.bits_per_step
    }

    pub fn coeffs(&self) -> &BTreeMap<InnerIndex, BigUint> {
        &self.coeffs
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Counts summed over `n` and the terminal flag, keyed by `(l, m)`.
    pub fn marginal(&self) -> BTreeMap<(usize, usize), BigUint> {
        let mut out: BTreeMap<_, BigUint> = BTreeMap::new();
        for (i, c) in &self.coeffs {
            *out.entry((i.l, i.m)).or_default() += c;
        }
        out
    }

    /// Every word of input weight `l` with `m` below this value is counted.
    pub fn m_exact_below(&self, l: usize) -> usize {
        self.drop_m_by_l[..=l.min(self.caps.l + 1)]
            .iter()
            .flatten()
            .copied()
            .min()
            .unwrap_or(usize::MAX)
    }

    /// Minimum `m` and multiplicity over words of input weight `l` selected by
    /// `keep`; `None` if no selected word exists.
    pub fn min_m_where(
        &self,
        l: usize,
        keep: impl Fn(&InnerIndex) -> bool,
    ) -> Result<Option<(usize, BigUint)>> {
        if l > self.caps.l {
            return Err(Error::CapExceeded(format!(
                "l = {l} beyond cap {}",
                self.caps.l
            )));
        }
        let bound = self.m_exact_below(l);
        let selected = || self.coeffs.iter().filter(|(i, _)| i.l == l && keep(i));
        match selected().map(|(i, _)| i.m).min() {
            Some(d) if d < bound => Ok(Some((
                d,
                selected()
                    .filter(|(i, _)| i.m == d)
                    .fold(BigUint::zero(), |a, (_, c)| a + c),
            ))),
            None if bound == usize::MAX => Ok(None),
            _ => Err(Error::CapExceeded(format!(
                "minimum m at l = {l} not witnessed below m = {}",
                bound.min(self.caps.m + 1)
            ))),
        }
    }

    /// Minimum weight `d_l` over all words of input weight `l` and its multiplicity.
    pub fn min_m_at_l(&self, l: usize) -> Result<Option<(usize, BigUint)>> {
        self.min_m_where(l, |_| true)
    }

    pub fn total_at_l(&self, l: usize) -> BigUint {
        self.coeffs
            .iter()
            .filter(|(i, _)| i.l == l)
            .fold(BigUint::zero(), |a, (_, c)| a + c)
    }

    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "l,m,n,terminal,count")?;
        for (i, c) in &self.coeffs {
            writeln!(out, "{},{},{},{},{}", i.l, i.m, i.n, i.terminal as u8, c)?;
        }
        Ok(())
    }
}
