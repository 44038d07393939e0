use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Multiplicity arithmetic of the dynamic programs.
pub(crate) trait Count: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    /// Adds `other`; returns `false` if the fixed-width type overflowed.
    fn accumulate(&mut self, other: &Self) -> bool;
    fn to_big(&self) -> BigUint;
}

impl Count for u128 {
    fn nil() -> Self {
        0
    }

    fn unit() -> Self {
        1
    }

    fn is_nil(&self) -> bool {
        *self == 0
    }

    #[inline]
    fn accumulate(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }

    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Count for BigUint {
    fn nil() -> Self {
        Zero::zero()
    }

    fn unit() -> Self {
        One::one()
    }

    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }

    fn accumulate(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }

    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

/// Runs `u128` arithmetic first and repeats with arbitrary precision if any
/// addition overflowed.
pub(crate) fn run_with_fallback<R>(
    fast: impl FnOnce() -> Option<R>,
    exact: impl FnOnce() -> R,
) -> R {
    fast().unwrap_or_else(exact)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_detected() {
        let mut a = u128::MAX;
        assert!(!a.accumulate(&1));
        let mut b = BigUint::from(u128::MAX);
        assert!(b.accumulate(&BigUint::from(1u8)));
        assert_eq!(b, BigUint::from(u128::MAX) + 1u8);
    }
}
