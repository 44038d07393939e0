use std::collections::BTreeMap;
use std::io::{self, Write};

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::enumerator::{InnerJointEnumerator, OuterJointEnumerator};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComposeMode {
    /// Literal uniform-interleaver average: `A° A^i / C(N, l)`.
    #[default]
    ExactBinomial,
    /// Event-placement approximation with the `N^(n°+n^i-l) l^l l!` factor;
    /// an upper bound on the exact coefficients.
    EventApprox,
}

/// Interleaver-averaged input-output spectrum `Ā[w, h]` of the concatenation.
#[derive(Clone, Debug, PartialEq)]
pub struct ScccSpectrum {
    coeffs: BTreeMap<(usize, usize), BigRational>,
    n_block: usize,
    sections: usize,
    info_bits: usize,
    h_exact_below: usize,
    mode: ComposeMode,
}

fn big(v: &BigUint) -> BigInt {
    BigInt::from(v.clone())
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Composes outer and inner enumerators through a uniform interleaver of
/// length `N`. Every surviving `C_o''` bit contributes to `j`, every inner
/// parity and tail bit to `m`, and `h = j + m`.
pub fn compose_uniform(
    outer: &OuterJointEnumerator,
    inner: &InnerJointEnumerator,
    mode: ComposeMode,
) -> Result<ScccSpectrum> {
    let n = outer.n_block();
    if n != inner.n_block() {
        return Err(Error::LengthMismatch {
            expected: n,
            found: inner.n_block(),
        });
    }
    if outer.is_empty() || inner.is_empty() {
        return Err(Error::InvalidInput("empty enumerator".into()));
    }
    let mut coeffs: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
    match mode {
        ComposeMode::ExactBinomial => {
            let mut inner_by_l: BTreeMap<usize, Vec<(usize, BigUint)>> = BTreeMap::new();
            // the all-zero inner word, paired with outer words that lose every bit
            inner_by_l.insert(0, vec![(0, BigUint::one())]);
            for ((l, m), c) in inner.marginal() {
                inner_by_l.entry(l).or_default().push((m, c));
            }
            let mut outer_by_l: BTreeMap<usize, Vec<(usize, usize, BigUint)>> = BTreeMap::new();
            for ((w, l, j), c) in outer.marginal() {
                outer_by_l.entry(l).or_default().push((w, j, c));
            }
            for (l, words) in &outer_by_l {
                let Some(parities) = inner_by_l.get(l) else {
                    continue;
                };
                let mut sums: BTreeMap<(usize, usize), BigUint> = BTreeMap::new();
                for (w, j, a) in words {
                    for (m, b) in parities {
                        *sums.entry((*w, j + m)).or_default() += a * b;
                    }
                }
                let denom = BigInt::from(binomial(BigUint::from(n), BigUint::from(*l)));
                for (key, s) in sums {
                    *coeffs.entry(key).or_insert_with(BigRational::zero) +=
                        ratio(BigInt::from(s), denom.clone());
                }
            }
        }
        ComposeMode::EventApprox => {
            let free = |n: usize, terminal: bool| n - usize::from(terminal);
            let mut outer_g: BTreeMap<(usize, usize, usize, usize), BigUint> = BTreeMap::new();
            for (i, c) in outer.coeffs() {
                *outer_g
                    .entry((i.l, i.w, i.j, free(i.n, i.terminal)))
                    .or_default() += c;
            }
            let mut inner_g: BTreeMap<(usize, usize, usize), BigUint> = BTreeMap::new();
            inner_g.insert((0, 0, 0), BigUint::one());
            for (i, c) in inner.coeffs() {
                *inner_g
                    .entry((i.l, i.m, free(i.n, i.terminal)))
                    .or_default() += c;
            }
            let (po, pi) = (outer.bits_per_step(), inner.bits_per_step());
            let placements = |p: usize, f: usize| {
                let c = binomial(BigUint::from(n / p), BigUint::from(f));
                if c.is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "{f} events do not fit in {} placements",
                        n / p
                    )));
                }
                Ok(BigInt::from(c))
            };
            let nn = BigInt::from(n);
            for (&(l, w, j, fo), a) in &outer_g {
                let shape_o = ratio(big(a), placements(po, fo)?);
                let ll = BigInt::from(l).pow(l as u32) * factorial(l);
                for (&(_, m, fi), b) in inner_g.range((l, 0, 0)..(l + 1, 0, 0)) {
                    let shape_i = ratio(big(b), placements(pi, fi)?);
                    let exp = (fo + fi) as i64 - l as i64;
                    let npow = if exp >= 0 {
                        ratio(nn.pow(exp as u32), BigInt::one())
                    } else {
                        ratio(BigInt::one(), nn.pow((-exp) as u32))
                    };
                    let pden = BigInt::from(po).pow(fo as u32)
                        * BigInt::from(pi).pow(fi as u32)
                        * factorial(fo)
                        * factorial(fi);
                    let factor = npow * ratio(ll.clone(), pden);
                    *coeffs.entry((w, j + m)).or_insert_with(BigRational::zero) +=
                        &shape_o * &shape_i * factor;
                }
            }
        }
    }
    coeffs.retain(|_, v| !v.is_zero());

    let mut h_exact_below = outer.j_exact_below_any();
    for i in outer.coeffs().keys() {
        let m_bound = inner.m_exact_below(i.l);
        h_exact_below = h_exact_below.min(i.j.saturating_add(m_bound));
    }
    Ok(ScccSpectrum {
        coeffs,
        n_block: n,
        sections: outer.sections() * outer.bits_per_step(),
        info_bits: outer.info_bits(),
        h_exact_below,
        mode,
    })
}

impl ScccSpectrum {
    /// Builds a spectrum from explicit coefficients, complete below `h_exact_below`.
    pub fn from_coeffs(
        coeffs: BTreeMap<(usize, usize), BigRational>,
        n_block: usize,
        sections: usize,
        h_exact_below: usize,
    ) -> Result<Self> {
        if n_block == 0 || sections == 0 {
            return Err(Error::InvalidInput("empty block".into()));
        }
        if coeffs.values().any(|v| *v < BigRational::zero()) {
            return Err(Error::InvalidInput("negative spectrum coefficient".into()));
        }
        Ok(Self {
            coeffs,
            n_block,
            sections,
            info_bits: sections,
            h_exact_below,
            mode: ComposeMode::ExactBinomial,
        })
    }

    pub fn coeffs(&self) -> &BTreeMap<(usize, usize), BigRational> {
        &self.coeffs
    }

    pub fn n_block(&self) -> usize {
        self.n_block
    }

    pub fn info_bits(&self) -> usize {
        self.info_bits
    }

    pub fn mode(&self) -> ComposeMode {
        self.mode
    }

    /// `R_c^{o'} = K / N`.
    pub fn r_outer_prime(&self) -> Rational64 {
        Rational64::new(self.sections as i64, self.n_block as i64)
    }

    /// Bit-error weight `w / (N R_c^{o'})` of information weight `w`.
    pub fn bit_weight(&self, w: usize) -> f64 {
        w as f64 / self.sections as f64
    }

    /// All coefficients with `h` below this value are exact.
    pub fn h_exact_below(&self) -> usize {
        self.h_exact_below
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total mass at output weight `h`, summed over `w`.
    pub fn mass_at(&self, h: usize) -> BigRational {
        self.coeffs
            .iter()
            .filter(|((_, hh), _)| *hh == h)
            .fold(BigRational::zero(), |acc, (_, v)| acc + v)
    }

    /// Minimum output weight `h_m` with nonzero mass.
    pub fn h_m(&self) -> Result<usize> {
        let h = self.coeffs.keys().map(|&(_, h)| h).min();
        match h {
            Some(h) if h <= self.h_exact_below => Ok(h),
            _ => Err(Error::CapExceeded(format!(
                "minimum output weight not certified below h = {}",
                self.h_exact_below
            ))),
        }
    }

    /// Multiplicity `N_{h_m}` within the caps.
    pub fn n_hm(&self) -> Result<BigRational> {
        Ok(self.mass_at(self.h_m()?))
    }

    /// Whether no truncated term can add to the mass at `h_m`.
    pub fn n_hm_complete(&self) -> bool {
        self.h_m().is_ok_and(|h| h < self.h_exact_below)
    }

    /// Largest `h` whose mass is complete.
    pub fn h_max_exact(&self) -> Option<usize> {
        let top = self.coeffs.keys().map(|&(_, h)| h).max()?;
        Some(top.min(self.h_exact_below.saturating_sub(1)))
    }

    /// Coefficients as `f64`, in `(w, h)` order.
    pub fn terms_f64(&self) -> Vec<(usize, usize, f64)> {
        self.coeffs
            .iter()
            .map(|(&(w, h), v)| (w, h, v.to_f64().unwrap_or(f64::INFINITY)))
            .collect()
    }

    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "w,h,coefficient")?;
        for (w, h, v) in self.terms_f64() {
            writeln!(out, "{w},{h},{v:.16e}")?;
        }
        Ok(())
    }
}
