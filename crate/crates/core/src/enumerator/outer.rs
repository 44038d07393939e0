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

/// Coefficient index of the outer enumerator: information weight `w`,
/// weight `l` of the `C_o'` codeword, weight `j` on the positions kept by
/// `P'`, event count `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OuterIndex {
    pub w: usize,
    pub l: usize,
    pub j: usize,
    pub n: usize,
    pub terminal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterJointEnumerator {
    caps: Caps,
    n_block: usize,
    bits_per_step: usize,
    sections: usize,
    info_bits: usize,
    coeffs: BTreeMap<OuterIndex, BigUint>,
    drop_j_by_l: Vec<Option<usize>>,
}

/// Enumerates the outer code over `k` trellis sections (tail included) with
/// mother-code puncturing `p_o` and the systematic deletion `p_prime`, given
/// over the `N` surviving positions.
pub fn outer_joint_enumerator(
    outer: &TrellisCode,
    p_o: &PuncturePattern,
    p_prime: &PuncturePattern,
    k: usize,
    caps: &Caps,
) -> Result<OuterJointEnumerator> {
    let ops = outer.outputs_per_step();
    if p_o.length() != k * ops {
        return Err(Error::LengthMismatch {
            expected: k * ops,
            found: p_o.length(),
        });
    }
    if p_prime.length() != p_o.num_kept() {
        return Err(Error::LengthMismatch {
            expected: p_o.num_kept(),
            found: p_prime.length(),
        });
    }
    let tail = outer.termination_length();
    if k <= tail {
        return Err(Error::InvalidInput(format!(
            "{k} sections leave no information section after a tail of {tail}"
        )));
    }
    // (counts toward l, counts toward j) per mother position
    let mut labels = Vec::with_capacity(p_o.length());
    let mut code_index = 0;
    for pos in 0..p_o.length() {
        if p_o.is_deleted(pos) {
            labels.push((false, false));
        } else {
            labels.push((true, !p_prime.is_deleted(code_index)));
            code_index += 1;
        }
    }
    let job = Job {
        trellis: outer,
        labels: &labels,
        sections: k,
        caps: *caps,
    };
    let (coeffs, drop_j_by_l) = run_with_fallback(
        || job.run::<u128>(),
        || {
            job.run::<BigUint>()
                .expect("arbitrary precision never overflows")
        },
    );
    Ok(OuterJointEnumerator {
        caps: *caps,
        bits_per_step: outer.bits_per_step(),
        n_block: p_o.num_kept(),
        sections: k,
        info_bits: (k - tail) * outer.bits_per_step(),
        coeffs,
        drop_j_by_l,
    })
}

struct Job<'a> {
    trellis: &'a TrellisCode,
    labels: &'a [(bool, bool)],
    sections: usize,
    caps: Caps,
}

type Table = (BTreeMap<OuterIndex, BigUint>, Vec<Option<usize>>);

impl Job<'_> {
    fn run<C: Count>(&self) -> Option<Table> {
        let t = self.trellis;
        let caps = self.caps;
        let (nw, nl, nj, nn) = (caps.w + 1, caps.l + 1, caps.j + 1, caps.n + 1);
        let per_state = 2 * nw * nl * nj * nn;
        let idx = |tau: usize, w: usize, l: usize, j: usize, n: usize| {
            (((tau * nw + w) * nl + l) * nj + j) * nn + n
        };
        let states = t.num_states();
        let mut cur = vec![C::nil(); states * per_state];
        cur[0] = C::unit();
        let mut drops: Vec<Option<usize>> = vec![None; caps.l + 2];
        let ops = t.outputs_per_step();
        let boundary = self.sections - t.termination_length();
        let rest = self.remaining_weights(boundary);

        for sec in 0..self.sections {
            if sec == boundary {
                for s in 1..states {
                    let base = s * per_state;
                    let half = per_state / 2;
                    for i in 0..half {
                        let v = std::mem::replace(&mut cur[base + i], C::nil());
                        cur[base + half + i] = v;
                    }
                }
            }
            let forced = sec >= boundary;
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
                        let (dl, dj) = self.weights(labels, t.output(s, x));
                        let dw = if forced { 0 } else { x.count_ones() as usize };
                        let dn = if forced { 0 } else { t.event_starts(s, x) };
                        (t.next_state(s, x), dw, dl, dj, dn)
                    })
                    .collect();
                let src = &cur[s * per_state..(s + 1) * per_state];
                for tau in 0..2 {
                    for w in 0..nw {
                        for l in 0..nl {
                            for j in 0..nj {
                                for n in 0..nn {
                                    let c = &src[idx(tau, w, l, j, n)];
                                    if c.is_nil() {
                                        continue;
                                    }
                                    for &(ns, dw, dl, dj, dn) in &moves {
                                        let (w2, l2, j2, n2) = (w + dw, l + dl, j + dj, n + dn);
                                        if w2 > caps.w || l2 > caps.l || j2 > caps.j || n2 > caps.n
                                        {
                                            let (rl, rj) = rest[sec + 1][ns];
                                            let lb = (l2 + rl).min(caps.l + 1);
                                            let jb = j2 + rj;
                                            let slot = &mut drops[lb];
                                            *slot = Some(slot.map_or(jb, |v| v.min(jb)));
                                            continue;
                                        }
                                        let dst =
                                            &mut next[ns * per_state + idx(tau, w2, l2, j2, n2)];
                                        if !dst.accumulate(c) {
                                            return None;
                                        }
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
            for w in 0..nw {
                for l in 0..nl {
                    for j in 0..nj {
                        for n in 0..nn {
                            let c = &cur[idx(tau, w, l, j, n)];
                            if c.is_nil() || (w == 0 && l == 0 && j == 0 && n == 0) {
                                continue;
                            }
                            coeffs.insert(
                                OuterIndex {
                                    w,
                                    l,
                                    j,
                                    n,
                                    terminal: tau == 1,
                                },
                                c.to_big(),
                            );
                        }
                    }
                }
            }
        }
        Some((coeffs, drops))
    }
}

impl Job<'_> {
    fn weights(&self, labels: &[(bool, bool)], out: u32) -> (usize, usize) {
        let (mut dl, mut dj) = (0, 0);
        for (k, &(cl, cj)) in labels.iter().enumerate() {
            if (out >> k) & 1 == 1 {
                dl += cl as usize;
                dj += cj as usize;
            }
        }
        (dl, dj)
    }

    /// Smallest `l` and `j` (each minimized separately) that any path from
    /// state `s` at section `t` still accumulates before terminating.
    fn remaining_weights(&self, boundary: usize) -> Vec<Vec<(usize, usize)>> {
        let t = self.trellis;
        let ops = t.outputs_per_step();
        let inf = usize::MAX / 4;
        let mut rest = vec![vec![(inf, inf); t.num_states()]; self.sections + 1];
        rest[self.sections][0] = (0, 0);
        for sec in (0..self.sections).rev() {
            let labels = &self.labels[sec * ops..(sec + 1) * ops];
            for s in 0..t.num_states() {
                let mut best = (inf, inf);
                let inputs: Vec<usize> = if sec >= boundary {
                    vec![t.tail_input(s)]
                } else {
                    (0..t.num_inputs()).collect()
                };
                for x in inputs {
                    let (dl, dj) = self.weights(labels, t.output(s, x));
                    let (rl, rj) = rest[sec + 1][t.next_state(s, x)];
                    best.0 = best.0.min(dl + rl);
                    best.1 = best.1.min(dj + rj);
                }
                rest[sec][s] = best;
            }
        }
        rest
    }
}

impl OuterJointEnumerator {
    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    /// Length `N` of the `C_o'` codeword.
    pub fn n_block(&self) -> usize {
        self.n_block
    }

    /// Input bits per trellis section of the enumerated code.
    pub fn bits_per_step(&self) -> usize {
        self.bits_per_step
    }

    /// Trellis sections `K`, tail included, so that `K / N` is the outer rate.
    pub fn sections(&self) -> usize {
        self.sections
    }

    pub fn info_bits(&self) -> usize {
        self.info_bits
    }

    pub fn coeffs(&self) -> &BTreeMap<OuterIndex, BigUint> {
        &self.coeffs
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Counts summed over `n` and the terminal flag, keyed by `(w, l, j)`.
    pub fn marginal(&self) -> BTreeMap<(usize, usize, usize), BigUint> {
        let mut out: BTreeMap<_, BigUint> = BTreeMap::new();
        for (i, c) in &self.coeffs {
            *out.entry((i.w, i.l, i.j)).or_default() += c;
        }
        out
    }

    /// Every word with `l` below this value is counted (usize::MAX if no path
    /// ever left the caps).
    pub fn l_exact_below(&self) -> usize {
        self.drop_j_by_l
            .iter()
            .position(Option::is_some)
            .unwrap_or(usize::MAX)
    }

    /// Every word of weight `l` with `j` below this value is counted.
    pub fn j_exact_below(&self, l: usize) -> usize {
        self.drop_j_by_l[..=l.min(self.caps.l + 1)]
            .iter()
            .flatten()
            .copied()
            .min()
            .unwrap_or(usize::MAX)
    }

    /// Every word with `j` below this value is counted, whatever its `l`.
    pub fn j_exact_below_any(&self) -> usize {
        self.drop_j_by_l
            .iter()
            .flatten()
            .copied()
            .min()
            .unwrap_or(usize::MAX)
    }

    /// Free distance `d_f^{o'}` and its multiplicity.
    pub fn free_distance(&self) -> Result<(usize, BigUint)> {
        let bound = self.l_exact_below();
        let d = self.coeffs.keys().map(|i| i.l).min();
        match d {
            Some(d) if d < bound => Ok((d, self.sum_where(|i| i.l == d))),
            _ => Err(Error::CapExceeded(format!(
                "outer free distance not witnessed below l = {}",
                bound.min(self.caps.l + 1)
            ))),
        }
    }

    /// Minimum `j` over words of weight `l`, or `None` if no such word exists.
    pub fn min_j_at_l(&self, l: usize) -> Result<Option<usize>> {
        let bound = self.j_exact_below(l);
        let d = self.coeffs.keys().filter(|i| i.l == l).map(|i| i.j).min();
        match d {
            Some(d) if d <= bound => Ok(Some(d)),
            None if bound == usize::MAX && l <= self.caps.l => Ok(None),
            _ => Err(Error::CapExceeded(format!(
                "minimum j at l = {l} not witnessed below j = {}",
                bound.min(self.caps.j + 1)
            ))),
        }
    }

    /// Free distance `d_f^{o''}` of the code after `P'`, with its multiplicity
    /// when the caps certify it.
    pub fn free_distance_dprime(&self) -> Result<(usize, Option<BigUint>)> {
        let bound = self.j_exact_below_any();
        match self.coeffs.keys().map(|i| i.j).min() {
            Some(d) if d <= bound => {
                let mult = (d < bound).then(|| self.sum_where(|i| i.j == d));
                Ok((d, mult))
            }
            _ => Err(Error::CapExceeded(format!(
                "free distance after P' not witnessed below j = {}",
                bound.min(self.caps.j + 1)
            ))),
        }
    }

    /// Output weight multiplicities `A_j` of `C_o''` for `j <= d_max`.
    pub fn owef(&self, d_max: usize) -> Result<Vec<(usize, BigUint)>> {
        let bound = self.j_exact_below_any();
        if d_max >= bound {
            return Err(Error::CapExceeded(format!(
                "output weights up to {d_max} requested but only j < {bound} are complete"
            )));
        }
        Ok((0..=d_max)
            .map(|j| (j, self.sum_where(|i| i.j == j)))
            .collect())
    }

    /// Total count at information weight `w`.
    pub fn total_at_w(&self, w: usize) -> BigUint {
        self.sum_where(|i| i.w == w)
    }

    fn sum_where(&self, f: impl Fn(&OuterIndex) -> bool) -> BigUint {
        self.coeffs
            .iter()
            .filter(|(i, _)| f(i))
            .fold(BigUint::zero(), |acc, (_, c)| acc + c)
    }

    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "w,l,j,n,terminal,count")?;
        for (i, c) in &self.coeffs {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                i.w, i.l, i.j, i.n, i.terminal as u8, c
            )?;
        }
        Ok(())
    }
}
