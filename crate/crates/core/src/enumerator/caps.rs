use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Truncation limits of the joint enumerators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    pub w: usize,
    pub l: usize,
    pub j: usize,
    pub m: usize,
    pub n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            w: 8,
            l: 24,
            j: 24,
            m: 40,
            n: 6,
        }
    }
}

impl FromStr for Caps {
    type Err = Error;

    /// Parses `"w=8,l=24,j=24,m=40,n=6"`; omitted fields keep their defaults.
    fn from_str(s: &str) -> Result<Self> {
        let mut caps = Caps::default();
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("cap {item:?} is not key=value")))?;
            let value: usize = value.trim().parse().map_err(|_| {
                Error::InvalidInput(format!("cap value {value:?} is not an integer"))
            })?;
            match key.trim() {
                "w" => caps.w = value,
                "l" => caps.l = value,
                "j" => caps.j = value,
                "m" => caps.m = value,
                "n" => caps.n = value,
                other => return Err(Error::InvalidInput(format!("unknown cap {other:?}"))),
            }
        }
        Ok(caps)
    }
}

impl fmt::Display for Caps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "w={},l={},j={},m={},n={}",
            self.w, self.l, self.j, self.m, self.n
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let c: Caps = "w=4, n=3".parse().unwrap();
        assert_eq!(c.w, 4);
        assert_eq!(c.n, 3);
        assert_eq!(c.l, 24);
        assert_eq!(c.to_string().parse::<Caps>().unwrap(), c);
        assert!("q=1".parse::<Caps>().is_err());
        assert!("w=x".parse::<Caps>().is_err());
    }
}
