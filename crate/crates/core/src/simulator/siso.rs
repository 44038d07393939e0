use serde::{Deserialize, Serialize};

use crate::trellis::TrellisCode;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SisoKind {
    /// Exact Jacobian logarithm.
    #[default]
    LogMap,
    /// Max approximation of the Jacobian logarithm.
    MaxLogMap,
}

impl std::str::FromStr for SisoKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log-map" => Ok(SisoKind::LogMap),
            "max-log-map" => Ok(SisoKind::MaxLogMap),
            _ => Err(Error::InvalidInput(format!(
                "unknown SISO kind {s:?} (expected log-map or max-log-map)"
            ))),
        }
    }
}

#[inline]
fn max_star(kind: SisoKind, a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    match kind {
        SisoKind::LogMap => m + (-(a - b).abs()).exp().ln_1p(),
        SisoKind::MaxLogMap => m,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SisoOutput {
    /// Extrinsic LLRs of the free input bits.
    pub input_extrinsic: Vec<f64>,
    /// Extrinsic LLRs of every output bit, tail included.
    pub output_extrinsic: Vec<f64>,
    /// A-posteriori LLRs of the free input bits.
    pub input_posterior: Vec<f64>,
    /// A-posteriori LLRs of every output bit.
    pub output_posterior: Vec<f64>,
}

/// Forward-backward SISO over `free` information sections starting in state 0.
/// With `terminated`, the trellis continues through the forced tail and ends in
/// state 0. LLRs are `ln P(0) / P(1)`; extrinsics are clipped to `±clip`.
pub fn siso_decode(
    t: &TrellisCode,
    free: usize,
    terminated: bool,
    prior_input: &[f64],
    prior_output: &[f64],
    kind: SisoKind,
    clip: f64,
) -> Result<SisoOutput> {
    let p = t.bits_per_step();
    let ops = t.outputs_per_step();
    let sections = free
        + if terminated {
            t.termination_length()
        } else {
            0
        };
    if prior_input.len() != free * p {
        return Err(Error::LengthMismatch {
            expected: free * p,
            found: prior_input.len(),
        });
    }
    if prior_output.len() != sections * ops {
        return Err(Error::LengthMismatch {
            expected: sections * ops,
            found: prior_output.len(),
        });
    }
    if prior_input
        .iter()
        .chain(prior_output)
        .any(|v| !v.is_finite())
    {
        return Err(Error::InvalidInput("non-finite prior LLR".into()));
    }
    if !(clip > 0.0) {
        return Err(Error::InvalidInput(format!("clip {clip} must be positive")));
    }
    let states = t.num_states();
    let ni = t.num_inputs();
    let width = states * ni;
    let next: Vec<usize> = (0..width).map(|i| t.next_state(i / ni, i % ni)).collect();
    let label: Vec<usize> = (0..width)
        .map(|i| t.output(i / ni, i % ni) as usize)
        .collect();
    let tail: Vec<usize> = (0..states).map(|s| t.tail_input(s)).collect();
    let inputs = |sec: usize, s: usize| -> std::ops::Range<usize> {
        if sec < free {
            0..ni
        } else {
            tail[s]..tail[s] + 1
        }
    };

    // Branch metrics, split into the input and output halves of each section.
    let mut gamma = vec![0.0; sections * width];
    let mut g_in = vec![0.0; ni];
    let mut g_out = vec![0.0; 1 << ops];
    for sec in 0..sections {
        for (x, g) in g_in.iter_mut().enumerate() {
            *g = if sec < free {
                (0..p).map(|i| half(x >> i, prior_input[sec * p + i])).sum()
            } else {
                0.0
            };
        }
        for (o, g) in g_out.iter_mut().enumerate() {
            *g = (0..ops)
                .map(|k| half(o >> k, prior_output[sec * ops + k]))
                .sum();
        }
        let row = &mut gamma[sec * width..(sec + 1) * width];
        for (i, g) in row.iter_mut().enumerate() {
            *g = g_in[i % ni] + g_out[label[i]];
        }
    }

    let ninf = f64::NEG_INFINITY;
    let mut alpha = vec![ninf; (sections + 1) * states];
    alpha[0] = 0.0;
    for sec in 0..sections {
        let (cur, nxt) = alpha.split_at_mut((sec + 1) * states);
        let cur = &cur[sec * states..];
        let nxt = &mut nxt[..states];
        let g = &gamma[sec * width..];
        for s in 0..states {
            if cur[s] == ninf {
                continue;
            }
            for x in inputs(sec, s) {
                let ns = next[s * ni + x];
                nxt[ns] = max_star(kind, nxt[ns], cur[s] + g[s * ni + x]);
            }
        }
        normalize(nxt);
    }
    let mut beta = vec![ninf; (sections + 1) * states];
    if terminated {
        beta[sections * states] = 0.0;
    } else {
        beta[sections * states..].fill(0.0);
    }
    for sec in (0..sections).rev() {
        let (cur, nxt) = beta.split_at_mut((sec + 1) * states);
        let cur = &mut cur[sec * states..];
        let nxt = &nxt[..states];
        let g = &gamma[sec * width..];
        for s in 0..states {
            let mut acc = ninf;
            for x in inputs(sec, s) {
                let b = nxt[next[s * ni + x]];
                if b > ninf {
                    acc = max_star(kind, acc, b + g[s * ni + x]);
                }
            }
            cur[s] = acc;
        }
        normalize(cur);
    }

    let mut input_posterior = vec![0.0; free * p];
    let mut output_posterior = vec![0.0; sections * ops];
    let mut metric = vec![ninf; width];
    let mut acc_in = vec![[0.0; 2]; p];
    let mut acc_out = vec![[0.0; 2]; ops];
    for sec in 0..sections {
        let g = &gamma[sec * width..];
        metric.fill(ninf);
        for s in 0..states {
            let a = alpha[sec * states + s];
            if a == ninf {
                continue;
            }
            for x in inputs(sec, s) {
                let i = s * ni + x;
                let b = beta[(sec + 1) * states + next[i]];
                if b > ninf {
                    metric[i] = a + g[i] + b;
                }
            }
        }
        // Log-sum-exp per bit value against the section maximum (exact
        // log-MAP), or the plain maximum (max-log-MAP).
        let top = metric.iter().copied().fold(ninf, f64::max);
        let init = match kind {
            SisoKind::LogMap => 0.0,
            SisoKind::MaxLogMap => ninf,
        };
        acc_in.iter_mut().for_each(|a| *a = [init; 2]);
        acc_out.iter_mut().for_each(|a| *a = [init; 2]);
        for (i, &m) in metric.iter().enumerate() {
            if m == ninf {
                continue;
            }
            let v = match kind {
                SisoKind::LogMap => (m - top).exp(),
                SisoKind::MaxLogMap => m,
            };
            let add = |slot: &mut f64| match kind {
                SisoKind::LogMap => *slot += v,
                SisoKind::MaxLogMap => *slot = slot.max(v),
            };
            let x = i % ni;
            for (j, acc) in acc_in.iter_mut().enumerate() {
                add(&mut acc[(x >> j) & 1]);
            }
            for (k, acc) in acc_out.iter_mut().enumerate() {
                add(&mut acc[(label[i] >> k) & 1]);
            }
        }
        let to_log = |acc: &[f64; 2]| -> [f64; 2] {
            match kind {
                SisoKind::LogMap => [acc[0].ln(), acc[1].ln()],
                SisoKind::MaxLogMap => *acc,
            }
        };
        if sec < free {
            for (j, acc) in acc_in.iter().enumerate() {
                input_posterior[sec * p + j] = llr(&to_log(acc));
            }
        }
        for (k, acc) in acc_out.iter().enumerate() {
            output_posterior[sec * ops + k] = llr(&to_log(acc));
        }
    }
    let extrinsic = |post: &[f64], prior: &[f64]| -> Vec<f64> {
        post.iter()
            .zip(prior)
            .map(|(a, b)| (a - b).clamp(-clip, clip))
            .collect()
    };
    Ok(SisoOutput {
        input_extrinsic: extrinsic(&input_posterior, prior_input),
        output_extrinsic: extrinsic(&output_posterior, prior_output),
        input_posterior,
        output_posterior,
    })
}

#[inline]
fn half(bit: usize, l: f64) -> f64 {
    if bit & 1 == 0 {
        0.5 * l
    } else {
        -0.5 * l
    }
}

fn normalize(v: &mut [f64]) {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m > f64::NEG_INFINITY {
        v.iter_mut().for_each(|x| *x -= m);
    }
}

/// `ln P(0) - ln P(1)` from the two accumulated log-likelihoods; a bit value
/// that no surviving path takes gives an infinite LLR, which is capped.
fn llr(acc: &[f64; 2]) -> f64 {
    const CAP: f64 = 1e6;
    match (acc[0] == f64::NEG_INFINITY, acc[1] == f64::NEG_INFINITY) {
        (true, true) => 0.0,
        (false, true) => CAP,
        (true, false) => -CAP,
        (false, false) => acc[0] - acc[1],
    }
}
