use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternKind {
    Periodic,
    List,
}

/// A set of deleted positions over a sequence of fixed length.
///
/// The deletion order is preserved, so a list pattern read from a ladder keeps
/// the order in which positions were removed. Periodic patterns also remember
/// their generating mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuncturePattern {
    length: usize,
    deleted: Vec<usize>,
    keep: Vec<bool>,
    kind: PatternKind,
    period: Option<Vec<bool>>,
}

impl PuncturePattern {
    /// Pattern that deletes nothing.
    pub fn none(length: usize) -> Self {
        Self {
            length,
            deleted: Vec::new(),
            keep: vec![true; length],
            kind: PatternKind::List,
            period: None,
        }
    }

    pub fn from_deleted(length: usize, deleted: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut keep = vec![true; length];
        let mut order = Vec::new();
        for p in deleted {
            if p >= length {
                return Err(Error::OutOfRange {
                    index: p,
                    bound: length,
                });
            }
            if !keep[p] {
                return Err(Error::InvalidInput(format!("position {p} deleted twice")));
            }
            keep[p] = false;
            order.push(p);
        }
        Ok(Self {
            length,
            deleted: order,
            keep,
            kind: PatternKind::List,
            period: None,
        })
    }

    /// Tiles a keep mask (`true` = keep) of period `mask.len()` over `length` positions.
    pub fn periodic(mask: &[bool], length: usize) -> Result<Self> {
        if mask.is_empty() {
            return Err(Error::PatternFormat("empty periodic mask".into()));
        }
        let keep: Vec<bool> = (0..length).map(|i| mask[i % mask.len()]).collect();
        Ok(Self {
            length,
            deleted: (0..length).filter(|&i| !keep[i]).collect(),
            keep,
            kind: PatternKind::Periodic,
            period: Some(mask.to_vec()),
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Deleted positions in deletion order.
    pub fn deleted(&self) -> &[usize] {
        &self.deleted
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    /// Generating mask of a periodic pattern.
    pub fn period(&self) -> Option<&[bool]> {
        self.period.as_deref()
    }

    /// Per-position keep flags.
    pub fn keep_mask(&self) -> &[bool] {
        &self.keep
    }

    #[inline]
    pub fn is_deleted(&self, position: usize) -> bool {
        !self.keep[position]
    }

    pub fn num_deleted(&self) -> usize {
        self.deleted.len()
    }

    pub fn num_kept(&self) -> usize {
        self.length - self.deleted.len()
    }

    pub fn kept_positions(&self) -> Vec<usize> {
        (0..self.length).filter(|&i| self.keep[i]).collect()
    }

    /// Surviving elements of `seq` in their original order.
    pub fn apply<T: Copy>(&self, seq: &[T]) -> Result<Vec<T>> {
        if seq.len() != self.length {
            return Err(Error::LengthMismatch {
                expected: self.length,
                found: seq.len(),
            });
        }
        Ok(seq
            .iter()
            .zip(&self.keep)
            .filter(|(_, &k)| k)
            .map(|(&v, _)| v)
            .collect())
    }

    /// Periodic extension over `copies` consecutive blocks.
    pub fn tile(&self, copies: usize) -> Self {
        let keep: Vec<bool> = (0..copies)
            .flat_map(|_| self.keep.iter().copied())
            .collect();
        let period = self.period.clone().or_else(|| Some(self.keep.clone()));
        Self {
            length: keep.len(),
            deleted: (0..keep.len()).filter(|&i| !keep[i]).collect(),
            keep,
            kind: PatternKind::Periodic,
            period,
        }
    }

    /// Ladder that deletes the positions of this pattern in deletion order.
    pub fn to_ladder(&self) -> PunctureLadder {
        PunctureLadder {
            base_length: self.length,
            positions: self.deleted.clone(),
        }
    }
}

/// Removes the positions deleted by `pat` from `seq`.
pub fn apply_pattern<T: Copy>(seq: &[T], pat: &PuncturePattern) -> Result<Vec<T>> {
    pat.apply(seq)
}

/// Ordered positions whose first `M` entries form the deletion set of step `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PunctureLadder {
    base_length: usize,
    positions: Vec<usize>,
}

impl PunctureLadder {
    pub fn new(base_length: usize, positions: Vec<usize>) -> Result<Self> {
        PuncturePattern::from_deleted(base_length, positions.iter().copied())?;
        Ok(Self {
            base_length,
            positions,
        })
    }

    pub fn empty(base_length: usize) -> Self {
        Self {
            base_length,
            positions: Vec::new(),
        }
    }

    pub fn base_length(&self) -> usize {
        self.base_length
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Pattern deleting the first `m` positions.
    pub fn step(&self, m: usize) -> Result<PuncturePattern> {
        if m > self.positions.len() {
            return Err(Error::OutOfRange {
                index: m,
                bound: self.positions.len() + 1,
            });
        }
        PuncturePattern::from_deleted(self.base_length, self.positions[..m].iter().copied())
    }

    /// Pattern keeping all but the last `m` positions of the ladder, i.e. the
    /// complement view used when a ladder is read from its far end.
    pub fn keep_last(&self, m: usize) -> Result<PuncturePattern> {
        let m = self
            .positions
            .len()
            .checked_sub(m)
            .ok_or(Error::OutOfRange {
                index: m,
                bound: self.positions.len() + 1,
            })?;
        self.step(m)
    }

    pub fn push(&mut self, position: usize) -> Result<()> {
        if position >= self.base_length {
            return Err(Error::OutOfRange {
                index: position,
                bound: self.base_length,
            });
        }
        if self.positions.contains(&position) {
            return Err(Error::InvalidInput(format!(
                "position {position} already in ladder"
            )));
        }
        self.positions.push(position);
        Ok(())
    }

    /// Extends the ladder over `copies` blocks. Each entry expands to the same
    /// offset in every block, so step `M * copies` of the tiled ladder equals
    /// step `M` of this ladder tiled.
    pub fn tile(&self, copies: usize) -> Self {
        Self {
            base_length: self.base_length * copies,
            positions: self
                .positions
                .iter()
                .flat_map(|&p| (0..copies).map(move |r| p + r * self.base_length))
                .collect(),
        }
    }
}

/// Deletion set of step `m` of `ladder`.
pub fn ladder_step(ladder: &PunctureLadder, m: usize) -> Result<PuncturePattern> {
    ladder.step(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RateCompatibility {
    Compatible,
    /// Pattern `first` deletes `position`, which pattern `second` keeps although
    /// `second` deletes at least as many positions.
    Violation {
        first: usize,
        second: usize,
        position: usize,
    },
}

impl RateCompatibility {
    pub fn is_compatible(&self) -> bool {
        matches!(self, Self::Compatible)
    }
}

/// Checks that the deletion sets are totally ordered by inclusion.
pub fn check_rate_compatible(patterns: &[PuncturePattern]) -> Result<RateCompatibility> {
    if let Some(first) = patterns.first() {
        if let Some(p) = patterns.iter().find(|p| p.length != first.length) {
            return Err(Error::LengthMismatch {
                expected: first.length,
                found: p.length,
            });
        }
    }
    let mut order: Vec<usize> = (0..patterns.len()).collect();
    order.sort_by_key(|&i| (patterns[i].num_deleted(), i));
    for pair in order.windows(2) {
        let (a, b) = (&patterns[pair[0]], &patterns[pair[1]]);
        let mut missing: Vec<usize> = a
            .deleted
            .iter()
            .copied()
            .filter(|&p| !b.is_deleted(p))
            .collect();
        missing.sort_unstable();
        if let Some(&position) = missing.first() {
            return Ok(RateCompatibility::Violation {
                first: pair[0].min(pair[1]),
                second: pair[0].max(pair[1]),
                position,
            });
        }
    }
    Ok(RateCompatibility::Compatible)
}

/// Contents of a pattern file.
///
/// ```text
/// length=<L> kind=list        length=<L> kind=periodic
/// <position>                  <mask of 0/1, 1 = keep>
/// ...
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternFile {
    List(PunctureLadder),
    Periodic { length: usize, mask: Vec<bool> },
}

impl PatternFile {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::PatternFormat(format!("{}: {e}", path.display())))?;
        text.parse()
            .map_err(|e| Error::PatternFormat(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_string())
            .map_err(|e| Error::PatternFormat(format!("{}: {e}", path.display())))
    }

    pub fn length(&self) -> usize {
        match self {
            Self::List(l) => l.base_length(),
            Self::Periodic { length, .. } => *length,
        }
    }

    /// Full pattern: every listed position deleted, or the tiled mask.
    pub fn to_pattern(&self) -> Result<PuncturePattern> {
        match self {
            Self::List(l) => l.step(l.len()),
            Self::Periodic { length, mask } => PuncturePattern::periodic(mask, *length),
        }
    }

    pub fn into_ladder(self) -> Result<PunctureLadder> {
        match self {
            Self::List(l) => Ok(l),
            Self::Periodic { .. } => Err(Error::PatternFormat(
                "expected a list pattern (ladder), found a periodic mask".into(),
            )),
        }
    }
}

impl From<&PuncturePattern> for PatternFile {
    fn from(p: &PuncturePattern) -> Self {
        match p.period() {
            Some(mask) => Self::Periodic {
                length: p.length(),
                mask: mask.to_vec(),
            },
            None => Self::List(p.to_ladder()),
        }
    }
}

impl fmt::Display for PatternFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::List(l) => {
                writeln!(f, "length={} kind=list", l.base_length())?;
                for p in l.positions() {
                    writeln!(f, "{p}")?;
                }
                Ok(())
            }
            Self::Periodic { length, mask } => {
                writeln!(f, "length={length} kind=periodic")?;
                let s: String = mask.iter().map(|&k| if k { '1' } else { '0' }).collect();
                writeln!(f, "{s}")
            }
        }
    }
}

impl FromStr for PatternFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::PatternFormat("missing header line".into()))?;
        let mut length = None;
        let mut kind = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("length", v)) => {
                    length = Some(
                        v.parse::<usize>()
                            .map_err(|_| Error::PatternFormat(format!("bad length {v:?}")))?,
                    )
                }
                Some(("kind", v)) => kind = Some(v.to_string()),
                _ => return Err(Error::PatternFormat(format!("bad header field {field:?}"))),
            }
        }
        let length = length.ok_or_else(|| Error::PatternFormat("header lacks length=".into()))?;
        match kind.as_deref() {
            Some("list") => {
                let positions = lines
                    .map(|l| {
                        l.parse::<usize>()
                            .map_err(|_| Error::PatternFormat(format!("bad position {l:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::List(PunctureLadder::new(length, positions)?))
            }
            Some("periodic") => {
                let body = lines
                    .next()
                    .ok_or_else(|| Error::PatternFormat("periodic pattern lacks a mask".into()))?;
                if lines.next().is_some() {
                    return Err(Error::PatternFormat("trailing data after mask".into()));
                }
                let mask = body
                    .chars()
                    .map(|c| match c {
                        '1' => Ok(true),
                        '0' => Ok(false),
                        _ => Err(Error::PatternFormat(format!("bad mask character {c:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                if mask.is_empty() {
                    return Err(Error::PatternFormat("empty mask".into()));
                }
                Ok(Self::Periodic { length, mask })
            }
            other => Err(Error::PatternFormat(format!("unknown kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_keeps_order() {
        let p = PuncturePattern::from_deleted(6, [4, 1]).unwrap();
        assert_eq!(p.apply(&[0, 1, 2, 3, 4, 5]).unwrap(), vec![0, 2, 3, 5]);
        assert_eq!(p.deleted(), &[4, 1]);
        assert!(p.apply(&[0, 1]).is_err());
        let all = PuncturePattern::from_deleted(3, [0, 1, 2]).unwrap();
        assert!(all.apply(&[7, 8, 9]).unwrap().is_empty());
    }

    #[test]
    fn rejects_duplicates_and_range() {
        assert!(PuncturePattern::from_deleted(4, [1, 1]).is_err());
        assert!(PuncturePattern::from_deleted(4, [4]).is_err());
        assert!(PunctureLadder::new(4, vec![0, 3, 0]).is_err());
    }

    #[test]
    fn periodic_mask_deletes_residues() {
        let p = PuncturePattern::periodic(&[true, true, true, false], 12).unwrap();
        assert_eq!(p.deleted(), &[3, 7, 11]);
        assert_eq!(p.kind(), PatternKind::Periodic);
    }

    #[test]
    fn ladder_steps() {
        let l = PunctureLadder::new(10, vec![3, 7, 1]).unwrap();
        assert_eq!(l.step(0).unwrap().num_deleted(), 0);
        assert_eq!(l.step(2).unwrap().deleted(), &[3, 7]);
        assert_eq!(l.keep_last(1).unwrap().deleted(), &[3, 7]);
        assert!(l.step(4).is_err());
    }

    #[test]
    fn tiled_ladder_matches_tiled_pattern() {
        let l = PunctureLadder::new(5, vec![4, 0, 2]).unwrap();
        let t = l.tile(3);
        assert_eq!(t.base_length(), 15);
        for m in 0..=3 {
            let mut a = t.step(3 * m).unwrap().deleted().to_vec();
            let mut b = l.step(m).unwrap().tile(3).deleted().to_vec();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rate_compatibility_verdicts() {
        let p = |d: &[usize]| PuncturePattern::from_deleted(10, d.iter().copied()).unwrap();
        assert!(check_rate_compatible(&[p(&[4])]).unwrap().is_compatible());
        assert!(check_rate_compatible(&[p(&[]), p(&[3]), p(&[3, 7])])
            .unwrap()
            .is_compatible());
        assert_eq!(
            check_rate_compatible(&[p(&[3]), p(&[7])]).unwrap(),
            RateCompatibility::Violation {
                first: 0,
                second: 1,
                position: 3
            }
        );
    }

    #[test]
    fn file_round_trip() {
        let text = "length=10 kind=list\n9\n0\n5\n";
        let f: PatternFile = text.parse().unwrap();
        assert_eq!(f.to_string(), text);
        let text = "length=400 kind=periodic\n1110\n";
        let f: PatternFile = text.parse().unwrap();
        assert_eq!(f.to_string(), text);
        assert_eq!(f.to_pattern().unwrap().num_deleted(), 100);
        assert!("length=4 kind=list\n4\n".parse::<PatternFile>().is_err());
        assert!("kind=list\n1\n".parse::<PatternFile>().is_err());
        assert!("length=4 kind=periodic\n10x1\n"
            .parse::<PatternFile>()
            .is_err());
    }
}
