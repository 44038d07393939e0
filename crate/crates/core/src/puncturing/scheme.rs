use num_rational::Rational64;

use super::{interleave_pattern, sccc_rate, PermeabilityPair, Permutation, PuncturePattern};
use crate::trellis::TrellisCode;
use crate::{Error, Result};

/// A complete serially concatenated code: punctured outer code `C_o'`,
/// systematic deletion `P'`, interleaver, and inner code punctured by
/// `P_i^s = Π[P']` and `P_i^p`.
///
/// The outer encoder runs `k` trellis sections, the last `termination_length`
/// of which carry the forced tail, so it accepts `k - ν` information bits.
/// The inner encoder receives the `N` interleaved bits and appends its own
/// tail, which is transmitted unpunctured.
#[derive(Clone, Debug)]
pub struct ScccConfig {
    outer: TrellisCode,
    inner: TrellisCode,
    k: usize,
    p_o: PuncturePattern,
    p_prime: PuncturePattern,
    perm: Permutation,
    p_i_s: PuncturePattern,
    p_i_p: PuncturePattern,
    transmit: Vec<bool>,
}

/// Every intermediate sequence of one encoded frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScccFrame {
    pub info: Vec<u8>,
    /// Outer mother codeword including its tail, before `P_o`.
    pub outer_mother: Vec<u8>,
    /// The `N` bits of `C_o'`.
    pub outer_code: Vec<u8>,
    /// Interleaved `C_o'` bits fed to the inner encoder.
    pub inner_input: Vec<u8>,
    /// Inner mother codeword including its tail, before `P_i^s` and `P_i^p`.
    pub inner_mother: Vec<u8>,
}

impl ScccConfig {
    pub fn new(
        outer: TrellisCode,
        p_o: PuncturePattern,
        inner: TrellisCode,
        k: usize,
        p_prime: PuncturePattern,
        perm: Permutation,
        p_i_p: PuncturePattern,
    ) -> Result<Self> {
        if outer.bits_per_step() != 1 || inner.bits_per_step() != 1 {
            return Err(Error::InvalidInput(
                "concatenation uses unit trellis sections".into(),
            ));
        }
        if !inner.spec().is_systematic() {
            return Err(Error::InvalidSpec("inner code must be systematic".into()));
        }
        if k <= outer.termination_length() {
            return Err(Error::InvalidInput(format!(
                "K = {k} sections leave no room for information beyond the tail of {}",
                outer.termination_length()
            )));
        }
        let mother_len = k * outer.outputs_per_step();
        if p_o.length() != mother_len {
            return Err(Error::LengthMismatch {
                expected: mother_len,
                found: p_o.length(),
            });
        }
        let n = p_o.num_kept();
        if n == 0 {
            return Err(Error::DegenerateCode(
                "outer puncturing deletes every bit".into(),
            ));
        }
        if p_prime.length() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: p_prime.length(),
            });
        }
        let streams = inner.n_out() - 1;
        if p_i_p.length() != n * streams {
            return Err(Error::LengthMismatch {
                expected: n * streams,
                found: p_i_p.length(),
            });
        }
        let p_i_s = interleave_pattern(&p_prime, &perm)?;
        let n_i = inner.n_out();
        let sections = n + inner.termination_length();
        let mut transmit = vec![true; sections * n_i];
        for t in 0..n {
            transmit[t * n_i] = !p_i_s.is_deleted(t);
            for r in 0..streams {
                transmit[t * n_i + 1 + r] = !p_i_p.is_deleted(t * streams + r);
            }
        }
        Ok(Self {
            outer,
            inner,
            k,
            p_o,
            p_prime,
            perm,
            p_i_s,
            p_i_p,
            transmit,
        })
    }

    pub fn outer(&self) -> &TrellisCode {
        &self.outer
    }

    pub fn inner(&self) -> &TrellisCode {
        &self.inner
    }

    /// Outer trellis sections including the tail.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn info_bits(&self) -> usize {
        self.k - self.outer.termination_length()
    }

    /// Interleaver length.
    pub fn n(&self) -> usize {
        self.p_o.num_kept()
    }

    pub fn p_o(&self) -> &PuncturePattern {
        &self.p_o
    }

    pub fn p_prime(&self) -> &PuncturePattern {
        &self.p_prime
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn p_i_s(&self) -> &PuncturePattern {
        &self.p_i_s
    }

    pub fn p_i_p(&self) -> &PuncturePattern {
        &self.p_i_p
    }

    /// Keep flags over the inner mother codeword, tail included.
    pub fn transmit_mask(&self) -> &[bool] {
        &self.transmit
    }

    pub fn num_transmitted(&self) -> usize {
        self.transmit.iter().filter(|&&t| t).count()
    }

    /// `R_c^{o'} = K / N`.
    pub fn r_outer_prime(&self) -> Rational64 {
        Rational64::new(self.k as i64, self.n() as i64)
    }

    /// Rate of `C_o''`, the outer code after `P'`.
    pub fn r_outer_dprime(&self) -> Result<Rational64> {
        let kept = self.p_prime.num_kept();
        if kept == 0 {
            return Err(Error::DegenerateCode("P' deletes every outer bit".into()));
        }
        Ok(Rational64::new(self.k as i64, kept as i64))
    }

    /// Rate of the punctured inner code `C_i`.
    pub fn r_inner(&self) -> Result<Rational64> {
        sccc_rate(
            Rational64::from(1),
            self.inner.n_out(),
            &self.permeability()?,
        )
    }

    pub fn permeability(&self) -> Result<PermeabilityPair> {
        PermeabilityPair::from_counts(
            self.n(),
            self.n() - self.p_i_s.num_deleted(),
            self.p_i_p.num_kept(),
            self.inner.n_out() - 1,
        )
    }

    /// Nominal overall rate, ignoring the inner tail.
    pub fn rate(&self) -> Result<Rational64> {
        sccc_rate(
            self.r_outer_prime(),
            self.inner.n_out(),
            &self.permeability()?,
        )
    }

    /// Information bits per transmitted bit, tail included.
    pub fn effective_rate(&self) -> f64 {
        self.info_bits() as f64 / self.num_transmitted() as f64
    }

    pub fn encode(&self, info: &[u8]) -> Result<ScccFrame> {
        if info.len() != self.info_bits() {
            return Err(Error::LengthMismatch {
                expected: self.info_bits(),
                found: info.len(),
            });
        }
        let outer_mother = self.outer.encode(info, true)?.bits;
        let outer_code = self.p_o.apply(&outer_mother)?;
        let inner_input = self.perm.interleave(&outer_code)?;
        let inner_mother = self.inner.encode(&inner_input, true)?.bits;
        Ok(ScccFrame {
            info: info.to_vec(),
            outer_mother,
            outer_code,
            inner_input,
            inner_mother,
        })
    }
}

/// Re-indexes the positions of `pattern`, given over the same sequence as
/// `base`, onto the survivors of `base`. Fails if `pattern` deletes a position
/// that `base` already removed.
pub fn restrict_to_survivors(
    pattern: &PuncturePattern,
    base: &PuncturePattern,
) -> Result<PuncturePattern> {
    if pattern.length() != base.length() {
        return Err(Error::LengthMismatch {
            expected: base.length(),
            found: pattern.length(),
        });
    }
    let mut index = vec![usize::MAX; base.length()];
    for (i, p) in base.kept_positions().into_iter().enumerate() {
        index[p] = i;
    }
    let mapped = pattern
        .deleted()
        .iter()
        .map(|&p| {
            if base.is_deleted(p) {
                Err(Error::InvalidInput(format!(
                    "position {p} is already removed by the outer puncturing"
                )))
            } else {
                Ok(index[p])
            }
        })
        .collect::<Result<Vec<_>>>()?;
    PuncturePattern::from_deleted(base.num_kept(), mapped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trellis::GeneratorSpec;

    fn rsc() -> TrellisCode {
        TrellisCode::new(&"1,5/7".parse::<GeneratorSpec>().unwrap()).unwrap()
    }

    fn po1(k: usize) -> PuncturePattern {
        PuncturePattern::periodic(&[true, true, true, false], 2 * k).unwrap()
    }

    #[test]
    fn rate_two_thirds_frame() {
        let k = 200;
        let cfg = ScccConfig::new(
            rsc(),
            po1(k),
            rsc(),
            k,
            PuncturePattern::none(300),
            Permutation::random(300, 1),
            PuncturePattern::none(300),
        )
        .unwrap();
        assert_eq!(cfg.n(), 300);
        assert_eq!(cfg.info_bits(), 198);
        assert_eq!(cfg.r_outer_prime(), Rational64::new(2, 3));
        assert_eq!(cfg.rate().unwrap(), Rational64::new(1, 3));
        assert_eq!(cfg.num_transmitted(), 604);
        let info: Vec<u8> = (0..198).map(|i| (i % 3 == 0) as u8).collect();
        let f = cfg.encode(&info).unwrap();
        assert_eq!(f.outer_code.len(), 300);
        assert_eq!(f.inner_mother.len(), 604);
        for t in 0..300 {
            assert_eq!(f.inner_mother[2 * t], f.inner_input[t]);
        }
    }

    #[test]
    fn restrict_maps_onto_survivors() {
        let base = po1(4);
        let mother = PuncturePattern::from_deleted(8, [4, 0]).unwrap();
        let p = restrict_to_survivors(&mother, &base).unwrap();
        assert_eq!(p.length(), 6);
        assert_eq!(p.deleted(), &[3, 0]);
        let bad = PuncturePattern::from_deleted(8, [3]).unwrap();
        assert!(restrict_to_survivors(&bad, &base).is_err());
    }

    #[test]
    fn unit_rate_inner_keeps_outer_rate() {
        let k = 200;
        let p_prime = restrict_to_survivors(
            &PuncturePattern::from_deleted(400, (0..40).map(|t| 4 * t)).unwrap(),
            &po1(k),
        )
        .unwrap();
        let p_i_p = PuncturePattern::from_deleted(300, 40..300).unwrap();
        let cfg = ScccConfig::new(
            rsc(),
            po1(k),
            rsc(),
            k,
            p_prime,
            Permutation::random(300, 3),
            p_i_p,
        )
        .unwrap();
        let rho = cfg.permeability().unwrap();
        assert_eq!(rho.rho_p, Rational64::new(40, 300));
        assert_eq!(rho.rho_s, Rational64::new(260, 300));
        assert_eq!(cfg.rate().unwrap(), Rational64::new(2, 3));
        assert_eq!(cfg.r_inner().unwrap(), Rational64::from(1));
    }
}
