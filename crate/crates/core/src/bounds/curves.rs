use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{CompensatedSum, ScccSpectrum};
use crate::{Error, Exec, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// `exp(-x)`
    #[default]
    #[serde(rename = "exp", alias = "exponential")]
    Exponential,
    /// `erfc(sqrt(x)) / 2`
    Erfc,
}

impl Kernel {
    #[inline]
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Kernel::Exponential => (-x).exp(),
            Kernel::Erfc => 0.5 * libm::erfc(x.sqrt()),
        }
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" | "exponential" => Ok(Kernel::Exponential),
            "erfc" => Ok(Kernel::Erfc),
            _ => Err(Error::InvalidInput(format!(
                "unknown kernel {s:?} (expected exp or erfc)"
            ))),
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kernel::Exponential => "exp",
            Kernel::Erfc => "erfc",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Bit,
    Frame,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCurve {
    pub kind: BoundKind,
    pub kernel: Kernel,
    /// `(Eb/N0 in dB, probability bound)`
    pub points: Vec<(f64, f64)>,
}

impl BoundCurve {
    pub fn value_at(&self, ebno_db: f64) -> Option<f64> {
        self.points
            .iter()
            .find(|(x, _)| (*x - ebno_db).abs() < 1e-12)
            .map(|&(_, y)| y)
    }

    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "ebno_db,value")?;
        for (x, y) in &self.points {
            writeln!(out, "{x},{y:.16e}")?;
        }
        Ok(())
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn union_bound(
    spec: &ScccSpectrum,
    rate: Rational64,
    grid: &[f64],
    kernel: Kernel,
    kind: BoundKind,
    exec: Exec,
) -> Result<BoundCurve> {
    if spec.is_empty() {
        return Err(Error::InvalidInput("empty spectrum".into()));
    }
    let r = rate
        .to_f64()
        .filter(|r| *r > 0.0)
        .ok_or_else(|| Error::InvalidInput(format!("rate {rate} is not positive")))?;
    let terms: Vec<(f64, f64)> = spec
        .terms_f64()
        .into_iter()
        .map(|(w, h, a)| {
            let weight = match kind {
                BoundKind::Bit => spec.bit_weight(w),
                BoundKind::Frame => 1.0,
            };
            (h as f64, weight * a)
        })
        .collect();
    let points = exec.map_slice(grid, |&db| {
        let snr = r * db_to_linear(db);
        let sum: CompensatedSum = terms
            .iter()
            .map(|&(h, c)| c * kernel.eval(h * snr))
            .collect();
        (db, sum.value())
    });
    Ok(BoundCurve {
        kind,
        kernel,
        points,
    })
}

/// Union bound on the bit error probability.
pub fn union_bound_bit(
    spec: &ScccSpectrum,
    rate: Rational64,
    grid: &[f64],
    kernel: Kernel,
    exec: Exec,
) -> Result<BoundCurve> {
    union_bound(spec, rate, grid, kernel, BoundKind::Bit, exec)
}

/// Union bound on the frame error probability.
pub fn union_bound_frame(
    spec: &ScccSpectrum,
    rate: Rational64,
    grid: &[f64],
    kernel: Kernel,
    exec: Exec,
) -> Result<BoundCurve> {
    union_bound(spec, rate, grid, kernel, BoundKind::Frame, exec)
}

/// Cumulative distance spectrum `sum_{h <= d} sum_w Ā[w, h]` for every `d`
/// up to the largest complete output weight.
pub fn cumulative_spectrum(spec: &ScccSpectrum) -> Result<BTreeMap<usize, BigRational>> {
    let top = spec
        .h_max_exact()
        .ok_or_else(|| Error::InvalidInput("empty spectrum".into()))?;
    let mut by_h: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (&(_, h), v) in spec.coeffs() {
        *by_h.entry(h).or_insert_with(BigRational::zero) += v;
    }
    let mut acc = BigRational::zero();
    let mut out = BTreeMap::new();
    for d in 0..=top {
        if let Some(v) = by_h.get(&d) {
            acc += v;
        }
        out.insert(d, acc.clone());
    }
    Ok(out)
}
