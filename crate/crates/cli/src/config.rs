//! Job configuration: a TOML file, command-line overrides, validation and
//! resolution into core types. Every field has a default except the code
//! section, and the fully resolved configuration is echoed next to the
//! outputs.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use sccc::bounds::{ComposeMode, Kernel};
use sccc::enumerator::Caps;
use sccc::puncturing::{
    restrict_to_survivors, PatternFile, Permutation, PunctureLadder, PuncturePattern, ScccConfig,
};
use sccc::simulator::{DecoderConfig, StopRule};
use sccc::trellis::TrellisCode;
use sccc::{Exec, Rational64};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// Master seed of the Monte Carlo streams.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Run every data-parallel loop on the calling thread. Not echoed, since
    /// outputs do not depend on it.
    #[serde(default, skip_serializing)]
    pub sequential: bool,
    pub code: CodeSection,
    #[serde(default)]
    pub puncturing: PuncturingSection,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub bound: BoundSection,
    #[serde(default)]
    pub optimize: OptimizeSection,
    #[serde(default)]
    pub simulate: SimulateSection,
    #[serde(default)]
    pub family: FamilySection,
}

fn default_seed() -> u64 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSection {
    pub outer: String,
    pub inner: String,
    /// Outer trellis sections `K`, tail included.
    pub sections: usize,
    #[serde(default = "default_seed")]
    pub interleaver_seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PuncturingSection {
    /// Outer pattern `P_o`; absent means no outer puncturing.
    pub outer: Option<PathBuf>,
    /// Order in which inner parity positions are deleted.
    pub parity_ladder: Option<PathBuf>,
    /// Order in which outer mother positions are deleted by `P'`.
    pub systematic_ladder: Option<PathBuf>,
    /// Inner parity bits kept, `rho_p N (n_i - 1)`; absent keeps all.
    pub kept_parity: Option<usize>,
    /// Inner systematic bits kept, `rho_s N`; absent keeps all.
    pub kept_systematic: Option<usize>,
    /// Periodic repetition of every pattern, for longer frames.
    #[serde(default = "one")]
    pub tile: usize,
}

fn one() -> usize {
    1
}

impl Default for PuncturingSection {
    fn default() -> Self {
        Self {
            outer: None,
            parity_ladder: None,
            systematic_ladder: None,
            kept_parity: None,
            kept_systematic: None,
            tile: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub w_max: usize,
    pub mode: ComposeMode,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            w_max: 4,
            mode: ComposeMode::ExactBinomial,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundSection {
    pub kernel: Kernel,
    pub grid: Vec<f64>,
    /// Cross-check the composed spectrum against the all-interleaver oracle.
    pub oracle: bool,
}

impl Default for BoundSection {
    fn default() -> Self {
        Self {
            kernel: Kernel::Exponential,
            grid: (0..=20).map(|i| 0.5 * i as f64).collect(),
            oracle: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeSection {
    pub parity: bool,
    pub systematic: bool,
    pub w_max: usize,
    /// Parity ladder length; defaults to every parity position.
    pub parity_steps: Option<usize>,
    /// Systematic ladder length; defaults to `K / 2`.
    pub systematic_steps: Option<usize>,
    pub d_max: Option<usize>,
    pub restrict_to_parity: bool,
}

impl Default for OptimizeSection {
    fn default() -> Self {
        Self {
            parity: true,
            systematic: true,
            w_max: 4,
            parity_steps: None,
            systematic_steps: None,
            d_max: None,
            restrict_to_parity: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSection {
    pub grid: Vec<f64>,
    pub stop: StopRule,
    pub decoder: DecoderConfig,
    /// Also write the frame union bound on the simulated grid.
    pub overlay_bound: bool,
    /// Systematic kept counts to sweep at fixed parity, one simulation each.
    pub kept_systematic_sweep: Vec<usize>,
}

impl Default for SimulateSection {
    fn default() -> Self {
        Self {
            grid: vec![1.0, 2.0, 3.0],
            stop: StopRule::default(),
            decoder: DecoderConfig::default(),
            overlay_bound: false,
            kept_systematic_sweep: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySection {
    #[serde(default)]
    pub members: Vec<FamilyMember>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyMember {
    /// Target rate such as `"2/3"`.
    pub rate: String,
    pub kept_parity: usize,
}

/// Eb/N0 grid from `start:step:stop` or a comma-separated list.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad grid value {t:?}"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        let values = match parts.as_slice() {
            [start, step, stop] => {
                let (a, d, b) = (num(start)?, num(step)?, num(stop)?);
                if !(d > 0.0) || b < a {
                    return Err(format!("grid {s:?} needs step > 0 and stop >= start"));
                }
                let n = ((b - a) / d + 1e-9).floor() as usize;
                (0..=n).map(|i| a + d * i as f64).collect()
            }
            [_] => s.split(',').map(num).collect::<Result<_, _>>()?,
            _ => return Err(format!("grid {s:?} is neither start:step:stop nor a list")),
        };
        Ok(Grid(values))
    }
}

impl JobConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Internal(format!("resolved config: {e}")))
    }

    pub fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

/// Constituent codes and outer puncturing, enough for the optimizer.
pub struct Codes {
    pub outer: TrellisCode,
    pub inner: TrellisCode,
    pub sections: usize,
    /// `P_o` after tiling.
    pub p_o: PuncturePattern,
    /// `P_o` as given, over one tile.
    pub p_o_base: PuncturePattern,
}

/// A fully resolved concatenated code.
pub struct Scheme {
    pub config: ScccConfig,
    pub kept_systematic: usize,
    pub kept_parity: usize,
}

fn code(spec: &str, what: &str) -> CliResult<TrellisCode> {
    let spec = spec
        .parse()
        .map_err(|e| CliError::Config(format!("{what} code {spec:?}: {e}")))?;
    TrellisCode::new(&spec).map_err(|e| CliError::Config(format!("{what} code: {e}")))
}

fn config_err(e: sccc::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn ladder(base: &Path, file: &Path) -> CliResult<PunctureLadder> {
    PatternFile::read(base.join(file))
        .and_then(PatternFile::into_ladder)
        .map_err(config_err)
}

pub fn resolve_codes(cfg: &JobConfig, base: &Path) -> CliResult<Codes> {
    let outer = code(&cfg.code.outer, "outer")?;
    let inner = code(&cfg.code.inner, "inner")?;
    let tile = cfg.puncturing.tile;
    if tile == 0 {
        return Err(CliError::Config("tile must be at least 1".into()));
    }
    let k = cfg.code.sections;
    if k <= outer.termination_length() {
        return Err(CliError::Config(format!(
            "sections = {k} must exceed the outer tail length {}",
            outer.termination_length()
        )));
    }
    let mother = k * outer.outputs_per_step();
    let p_o = match &cfg.puncturing.outer {
        None => PuncturePattern::none(mother),
        Some(f) => PatternFile::read(base.join(f))
            .and_then(|p| p.to_pattern())
            .map_err(config_err)?,
    };
    if p_o.length() != mother {
        return Err(CliError::Config(format!(
            "outer pattern covers {} positions but {k} sections emit {mother}",
            p_o.length()
        )));
    }
    Ok(Codes {
        outer,
        inner,
        sections: k * tile,
        p_o: p_o.tile(tile),
        p_o_base: p_o,
    })
}

/// Resolves the code, optionally with a different systematic kept count.
pub fn resolve_scheme(
    cfg: &JobConfig,
    base: &Path,
    kept_systematic: Option<usize>,
) -> CliResult<Scheme> {
    let codes = resolve_codes(cfg, base)?;
    let pc = &cfg.puncturing;
    let tile = pc.tile;
    let n = codes.p_o_base.num_kept();
    let streams = codes.inner.n_out() - 1;
    if !codes.inner.spec().is_systematic() || streams == 0 {
        return Err(CliError::Config(
            "inner code must be systematic with parity outputs".into(),
        ));
    }

    let kept_parity = pc.kept_parity.unwrap_or(n * streams);
    if kept_parity > n * streams {
        return Err(CliError::Config(format!(
            "kept_parity = {kept_parity} exceeds the {} inner parity bits",
            n * streams
        )));
    }
    let p_i_p = match &pc.parity_ladder {
        Some(f) => {
            let l = ladder(base, f)?;
            if l.base_length() != n * streams {
                return Err(CliError::Config(format!(
                    "parity ladder covers {} positions, expected {}",
                    l.base_length(),
                    n * streams
                )));
            }
            l.step(n * streams - kept_parity).map_err(config_err)?
        }
        None if kept_parity == n * streams => PuncturePattern::none(n * streams),
        None => return Err(CliError::Config("kept_parity needs a parity_ladder".into())),
    };

    let kept_systematic = kept_systematic.or(pc.kept_systematic).unwrap_or(n);
    if kept_systematic > n {
        return Err(CliError::Config(format!(
            "kept_systematic = {kept_systematic} exceeds N = {n}"
        )));
    }
    let p_prime = match &pc.systematic_ladder {
        Some(f) => {
            let l = ladder(base, f)?;
            let base_p_o = &codes.p_o_base;
            if l.base_length() != base_p_o.length() {
                return Err(CliError::Config(format!(
                    "systematic ladder covers {} positions, expected {}",
                    l.base_length(),
                    base_p_o.length()
                )));
            }
            let deleted = n - kept_systematic;
            if deleted > l.len() {
                return Err(CliError::Config(format!(
                    "{deleted} systematic deletions requested but the ladder has {} steps",
                    l.len()
                )));
            }
            let mother = l.step(deleted).map_err(config_err)?;
            restrict_to_survivors(&mother, base_p_o).map_err(config_err)?
        }
        None if kept_systematic == n => PuncturePattern::none(n),
        None => {
            return Err(CliError::Config(
                "kept_systematic needs a systematic_ladder".into(),
            ))
        }
    };

    let perm = Permutation::random(n * tile, cfg.code.interleaver_seed);
    let config = ScccConfig::new(
        codes.outer.clone(),
        codes.p_o.clone(),
        codes.inner.clone(),
        codes.sections,
        p_prime.tile(tile),
        perm,
        p_i_p.tile(tile),
    )
    .map_err(config_err)?;
    config.rate().map_err(config_err)?;
    Ok(Scheme {
        config,
        kept_systematic: kept_systematic * tile,
        kept_parity: kept_parity * tile,
    })
}

pub fn parse_rate(s: &str) -> CliResult<Rational64> {
    let r: Rational64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("rate {s:?} is not a fraction")))?;
    if r <= Rational64::from(0) {
        return Err(CliError::Config(format!("rate {s} is not positive")));
    }
    Ok(r)
}

pub fn check_grid(grid: &[f64], allow_inf: bool) -> CliResult<()> {
    if grid.is_empty() {
        return Err(CliError::Config("empty Eb/N0 grid".into()));
    }
    if let Some(x) = grid
        .iter()
        .find(|x| x.is_nan() || (x.is_infinite() && !(allow_inf && **x > 0.0)))
    {
        return Err(CliError::Config(format!("invalid Eb/N0 value {x}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!("4:0.5:5".parse::<Grid>().unwrap().0, vec![4.0, 4.5, 5.0]);
        assert_eq!("1,2.5".parse::<Grid>().unwrap().0, vec![1.0, 2.5]);
        assert!("1:0:2".parse::<Grid>().is_err());
        assert!("a".parse::<Grid>().is_err());
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg: JobConfig =
            toml::from_str("[code]\nouter = \"1,5/7\"\ninner = \"1,5/7\"\nsections = 20\n")
                .unwrap();
        assert_eq!(cfg.analysis.w_max, 4);
        assert_eq!(cfg.simulate.decoder.iterations, 10);
        let back: JobConfig = toml::from_str(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back.to_toml().unwrap(), cfg.to_toml().unwrap());
        assert!(toml::from_str::<JobConfig>(
            "[code]\nouter=\"1,1\"\ninner=\"1,1\"\nsections=3\nbogus=1\n"
        )
        .is_err());
    }
}
