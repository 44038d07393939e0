use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PuncturePattern;
use crate::{Error, Result};

/// Interleaver on `[0, N)`. Element `k` of the input lands at output position
/// `perm[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn new(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (k, &q) in forward.iter().enumerate() {
            if q >= n {
                return Err(Error::NotAPermutation(format!(
                    "image {q} out of range 0..{n}"
                )));
            }
            if inverse[q] != usize::MAX {
                return Err(Error::NotAPermutation(format!("image {q} repeated")));
            }
            inverse[q] = k;
        }
        Ok(Self { forward, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            forward: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    /// Fisher-Yates shuffle driven by ChaCha8 seeded with `seed`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut forward: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            forward.swap(i, j);
        }
        Self::new(forward).expect("a shuffle is a bijection")
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    #[inline]
    pub fn map(&self, k: usize) -> usize {
        self.forward[k]
    }

    #[inline]
    pub fn map_inverse(&self, q: usize) -> usize {
        self.inverse[q]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> Self {
        Self {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    pub fn interleave<T: Copy + Default>(&self, input: &[T]) -> Result<Vec<T>> {
        self.check_len(input.len())?;
        let mut out = vec![T::default(); input.len()];
        for (k, &v) in input.iter().enumerate() {
            out[self.forward[k]] = v;
        }
        Ok(out)
    }

    pub fn deinterleave<T: Copy + Default>(&self, input: &[T]) -> Result<Vec<T>> {
        self.check_len(input.len())?;
        Ok(self.forward.iter().map(|&q| input[q]).collect())
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.forward.len() {
            return Err(Error::LengthMismatch {
                expected: self.forward.len(),
                found: n,
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.forward
    }
}

/// Image of `p_prime` under the interleaver: output position `q` is deleted
/// iff input position `perm⁻¹(q)` is deleted. Deletion order is preserved.
pub fn interleave_pattern(
    p_prime: &PuncturePattern,
    perm: &Permutation,
) -> Result<PuncturePattern> {
    if p_prime.length() != perm.len() {
        return Err(Error::LengthMismatch {
            expected: perm.len(),
            found: p_prime.length(),
        });
    }
    PuncturePattern::from_deleted(perm.len(), p_prime.deleted().iter().map(|&k| perm.map(k)))
}
