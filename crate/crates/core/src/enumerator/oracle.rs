use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::puncturing::{Permutation, ScccConfig};
use crate::{Error, Result};

const MAX_N: usize = 8;
const MAX_INFO: usize = 8;

/// Exact interleaver-averaged spectrum obtained by literal enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceSpectrum {
    /// Average number of frames with information weight `w` and transmitted weight `h`.
    pub average: BTreeMap<(usize, usize), BigRational>,
    pub permutations: usize,
}

/// Encodes every nonzero information word through every interleaver of
/// length `N` and averages the `(w, h)` histogram of the transmitted frames.
/// The interleaver stored in `config` is ignored.
pub fn brute_force_spectrum(config: &ScccConfig) -> Result<BruteForceSpectrum> {
    let n = config.n();
    let k = config.info_bits();
    if n > MAX_N || k > MAX_INFO {
        return Err(Error::TooLarge(format!(
            "N = {n}, K = {k} exceed the limits N <= {MAX_N}, K <= {MAX_INFO}"
        )));
    }
    let mut hist: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut permutations = 0;
    for perm in (0..n).permutations(n) {
        permutations += 1;
        let cfg = ScccConfig::new(
            config.outer().clone(),
            config.p_o().clone(),
            config.inner().clone(),
            config.k(),
            config.p_prime().clone(),
            Permutation::new(perm)?,
            config.p_i_p().clone(),
        )?;
        let mask = cfg.transmit_mask();
        for word in 1u32..(1 << k) {
            let info: Vec<u8> = (0..k).map(|b| ((word >> b) & 1) as u8).collect();
            let frame = cfg.encode(&info)?;
            let h = frame
                .inner_mother
                .iter()
                .zip(mask)
                .filter(|(&b, &keep)| keep && b == 1)
                .count();
            *hist.entry((word.count_ones() as usize, h)).or_default() += 1;
        }
    }
    let denom = BigInt::from(permutations as u64);
    let average = hist
        .into_iter()
        .map(|(key, c)| {
            (
                key,
                BigRational::new(BigInt::from(BigUint::from(c)), denom.clone()),
            )
        })
        .collect();
    Ok(BruteForceSpectrum {
        average,
        permutations,
    })
}
