use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use serde::Serialize;

use sccc::analysis::{analyze, RowAnalysis, RowParameters};
use sccc::bounds::{
    compose_uniform, cumulative_spectrum, union_bound_bit, union_bound_frame, AsymptoticReport,
    ComposeMode,
};
use sccc::enumerator::{
    brute_force_spectrum, distance_summary, inner_joint_enumerator, outer_joint_enumerator,
    DistanceSummary,
};
use sccc::optimizer::{optimize_parity_ladder, optimize_systematic_ladder};
use sccc::puncturing::{
    check_rate_compatible, rho_s_for_target, PatternFile, PuncturePattern, RateCompatibility,
};
use sccc::simulator::{run_monte_carlo, SimReport};
use sccc::Rational64;

use crate::config::{check_grid, parse_rate, resolve_codes, resolve_scheme, JobConfig, Scheme};
use crate::error::{CliError, CliResult};

pub struct Job {
    pub cfg: JobConfig,
    /// Directory that relative pattern paths are resolved against.
    pub base: PathBuf,
    pub out: PathBuf,
}

impl Job {
    fn create(&self, name: &str) -> CliResult<BufWriter<File>> {
        let path = self.out.join(name);
        File::create(&path)
            .map(BufWriter::new)
            .map_err(|source| CliError::Io { path, source })
    }

    fn write_with(
        &self,
        name: &str,
        f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    ) -> CliResult<()> {
        let mut w = self.create(name)?;
        f(&mut w)
            .and_then(|_| w.flush())
            .map_err(|source| CliError::Io {
                path: self.out.join(name),
                source,
            })
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<()> {
        self.write_with(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value).map_err(std::io::Error::other)?;
            writeln!(w)
        })
    }

    fn write_pattern(&self, name: &str, file: &PatternFile) -> CliResult<()> {
        self.write_with(name, |w| write!(w, "{file}"))
    }

    /// Creates the output directory and echoes the resolved configuration.
    pub fn prepare(&self) -> CliResult<()> {
        fs::create_dir_all(&self.out).map_err(|source| CliError::Io {
            path: self.out.clone(),
            source,
        })?;
        let text = self.cfg.to_toml()?;
        self.write_with("resolved_config.toml", |w| w.write_all(text.as_bytes()))
    }
}

#[derive(Serialize)]
struct CodeInfo {
    rate: String,
    rate_value: f64,
    effective_rate: f64,
    sections: usize,
    info_bits: usize,
    interleaver_length: usize,
    kept_systematic: usize,
    kept_parity: usize,
    rho_s: String,
    rho_p: String,
}

fn code_info(s: &Scheme) -> CliResult<CodeInfo> {
    let rate = s.config.rate()?;
    let rho = s.config.permeability()?;
    Ok(CodeInfo {
        rate: rate.to_string(),
        rate_value: rate.to_f64().unwrap_or(f64::NAN),
        effective_rate: s.config.effective_rate(),
        sections: s.config.k(),
        info_bits: s.config.info_bits(),
        interleaver_length: s.config.n(),
        kept_systematic: s.kept_systematic,
        kept_parity: s.kept_parity,
        rho_s: rho.rho_s().to_string(),
        rho_p: rho.rho_p().to_string(),
    })
}

fn analyze_scheme(job: &Job, s: &Scheme) -> CliResult<RowAnalysis> {
    let c = &s.config;
    Ok(analyze(
        c.outer(),
        c.p_o(),
        c.inner(),
        c.k(),
        c.p_prime(),
        c.p_i_p(),
        &job.cfg.caps,
        job.cfg.analysis.w_max,
        job.cfg.analysis.mode,
    )?)
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    code: CodeInfo,
    summary: &'a DistanceSummary,
}

pub fn enumerate(job: &Job) -> CliResult<()> {
    let s = resolve_scheme(&job.cfg, &job.base, None)?;
    job.prepare()?;
    let c = &s.config;
    let caps = &job.cfg.caps;
    let outer = outer_joint_enumerator(c.outer(), c.p_o(), c.p_prime(), c.k(), caps)?;
    let inner = inner_joint_enumerator(c.inner(), c.p_i_p(), c.n(), caps)?;
    job.write_with("outer_enumerator.csv", |w| outer.write_csv(w))?;
    job.write_with("inner_enumerator.csv", |w| inner.write_csv(w))?;
    let summary = distance_summary(&outer, &inner, job.cfg.analysis.w_max)?;
    job.write_json(
        "distance_summary.json",
        &SummaryFile {
            code: code_info(&s)?,
            summary: &summary,
        },
    )
}

#[derive(Serialize)]
struct AnalysisFile<'a> {
    code: CodeInfo,
    parameters: RowParameters,
    asymptotic: &'a AsymptoticReport,
    h_exact_below: usize,
    compose_mode: ComposeMode,
    kernel: String,
}

pub fn bound(job: &Job) -> CliResult<()> {
    check_grid(&job.cfg.bound.grid, false)?;
    let s = resolve_scheme(&job.cfg, &job.base, None)?;
    job.prepare()?;
    let c = &s.config;
    let caps = &job.cfg.caps;
    if job.cfg.bound.oracle {
        let outer = outer_joint_enumerator(c.outer(), c.p_o(), c.p_prime(), c.k(), caps)?;
        let inner = inner_joint_enumerator(c.inner(), c.p_i_p(), c.n(), caps)?;
        let spec = compose_uniform(&outer, &inner, ComposeMode::ExactBinomial)?;
        let oracle = brute_force_spectrum(c)?;
        let below = spec.h_exact_below();
        let ours: Vec<_> = spec
            .coeffs()
            .iter()
            .filter(|((_, h), _)| *h < below)
            .collect();
        let theirs: Vec<_> = oracle
            .average
            .iter()
            .filter(|((_, h), _)| *h < below)
            .collect();
        if ours != theirs {
            return Err(CliError::OracleMismatch(format!(
                "composed spectrum differs from the average over {} interleavers below h = {below}",
                oracle.permutations
            )));
        }
        let range = match below {
            usize::MAX => "all h".to_string(),
            b => format!("h < {b}"),
        };
        job.write_with("oracle.txt", |w| {
            writeln!(
                w,
                "match: {} coefficients ({range}) over {} interleavers",
                ours.len(),
                oracle.permutations
            )
        })?;
    }
    let row = analyze_scheme(job, &s)?;
    let rate = c.rate()?;
    let grid = &job.cfg.bound.grid;
    let kernel = job.cfg.bound.kernel;
    let exec = job.cfg.exec();
    let frame = union_bound_frame(&row.spectrum, rate, grid, kernel, exec)?;
    let bit = union_bound_bit(&row.spectrum, rate, grid, kernel, exec)?;
    job.write_with("spectrum.csv", |w| row.spectrum.write_csv(w))?;
    job.write_with("bound_frame.csv", |w| frame.write_csv(w))?;
    job.write_with("bound_bit.csv", |w| bit.write_csv(w))?;
    let cum = cumulative_spectrum(&row.spectrum)?;
    job.write_with("cumulative_spectrum.csv", |w| {
        writeln!(w, "d,cumulative,exact")?;
        for (d, v) in &cum {
            let f = v.to_f64().unwrap_or(f64::NAN);
            writeln!(w, "{d},{f:.16e},{v}")?;
        }
        Ok(())
    })?;
    job.write_json(
        "asymptotic.json",
        &AnalysisFile {
            code: code_info(&s)?,
            parameters: row.parameters(),
            asymptotic: &row.asymptotic,
            h_exact_below: row.spectrum.h_exact_below(),
            compose_mode: job.cfg.analysis.mode,
            kernel: kernel.to_string(),
        },
    )
}

pub fn optimize(job: &Job) -> CliResult<()> {
    let codes = resolve_codes(&job.cfg, &job.base)?;
    let o = &job.cfg.optimize;
    let exec = job.cfg.exec();
    let n = codes.p_o.num_kept();
    let streams = codes.inner.n_out() - 1;
    job.prepare()?;
    if o.parity {
        let steps = o.parity_steps.unwrap_or(n * streams);
        let out = optimize_parity_ladder(&codes.inner, n, o.w_max, steps, exec)?;
        job.write_pattern("parity_ladder.pat", &PatternFile::List(out.ladder))?;
        job.write_json("parity_trajectory.json", &out.trajectory)?;
    }
    if o.systematic {
        let steps = o.systematic_steps.unwrap_or(codes.sections / 2);
        let out = optimize_systematic_ladder(
            &codes.outer,
            &codes.p_o,
            codes.sections,
            o.d_max,
            steps,
            o.restrict_to_parity,
            exec,
        )?;
        job.write_pattern("systematic_ladder.pat", &PatternFile::List(out.ladder))?;
        job.write_json("systematic_trajectory.json", &out.trajectory)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SimFile<'a> {
    code: CodeInfo,
    interleaver: InterleaverInfo,
    report: &'a SimReport,
}

#[derive(Serialize)]
struct InterleaverInfo {
    generator: &'static str,
    seed: u64,
}

fn interleaver(job: &Job) -> InterleaverInfo {
    InterleaverInfo {
        generator: "fisher-yates/chacha8",
        seed: job.cfg.code.interleaver_seed,
    }
}

pub fn simulate(job: &Job) -> CliResult<()> {
    let sim = &job.cfg.simulate;
    check_grid(&sim.grid, true)?;
    sim.decoder
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    if sim.stop.min_frame_errors == 0 || sim.stop.max_frames == 0 {
        return Err(CliError::Config("stop thresholds must be positive".into()));
    }
    let s = resolve_scheme(&job.cfg, &job.base, None)?;
    let sweep: Vec<Scheme> = sim
        .kept_systematic_sweep
        .iter()
        .map(|&k| resolve_scheme(&job.cfg, &job.base, Some(k)))
        .collect::<CliResult<_>>()?;
    job.prepare()?;
    let exec = job.cfg.exec();
    let report = run_monte_carlo(
        &s.config,
        &sim.decoder,
        &sim.grid,
        &sim.stop,
        job.cfg.seed,
        exec,
    )?;
    job.write_with("sim.csv", |w| report.write_csv(w))?;
    job.write_json(
        "sim.json",
        &SimFile {
            code: code_info(&s)?,
            interleaver: interleaver(job),
            report: &report,
        },
    )?;

    if sim.overlay_bound {
        let row = analyze_scheme(job, &s)?;
        let finite: Vec<f64> = sim.grid.iter().copied().filter(|x| x.is_finite()).collect();
        let curve = union_bound_frame(
            &row.spectrum,
            s.config.rate()?,
            &finite,
            job.cfg.bound.kernel,
            exec,
        )?;
        job.write_with("bound_overlay.csv", |w| {
            writeln!(w, "ebno_db,fer,ci_low,ci_high,bound_fer")?;
            for p in report.points.iter().filter(|p| p.ebno_db.is_finite()) {
                let b = curve.value_at(p.ebno_db).unwrap_or(f64::NAN);
                writeln!(
                    w,
                    "{},{:.6e},{:.6e},{:.6e},{:.6e}",
                    p.ebno_db, p.fer, p.ci_low, p.ci_high, b
                )?;
            }
            Ok(())
        })?;
    }

    if !sweep.is_empty() {
        let mut rows = Vec::new();
        for member in &sweep {
            let r = run_monte_carlo(
                &member.config,
                &sim.decoder,
                &sim.grid,
                &sim.stop,
                job.cfg.seed,
                exec,
            )?;
            rows.push((member, r));
        }
        job.write_with("fer_vs_rho_s.csv", |w| {
            writeln!(
                w,
                "kept_systematic,rho_s,r_outer,rate,ebno_db,frames,frame_errors,fer,ci_low,ci_high"
            )?;
            for (member, r) in &rows {
                let c = &member.config;
                let rho_s = Rational64::new(member.kept_systematic as i64, c.n() as i64);
                let r_outer = c
                    .r_outer_dprime()
                    .map(|q| q.to_string())
                    .unwrap_or_default();
                let rate = c.rate().map(|q| q.to_string()).unwrap_or_default();
                for p in &r.points {
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{:.6e},{:.6e},{:.6e}",
                        member.kept_systematic,
                        rho_s,
                        r_outer,
                        rate,
                        p.ebno_db,
                        p.frames,
                        p.frame_errors,
                        p.fer,
                        p.ci_low,
                        p.ci_high
                    )?;
                }
            }
            Ok(())
        })?;
    }
    Ok(())
}

#[derive(Serialize)]
struct FamilyEntry {
    target_rate: String,
    code: CodeInfo,
    systematic_deletions: usize,
    parity_deletions: usize,
    parameters: Option<RowParameters>,
    analysis_error: Option<String>,
}

#[derive(Serialize)]
struct FamilyManifest {
    interleaver: InterleaverInfo,
    members: Vec<FamilyEntry>,
    rate_compatible: bool,
    violation: Option<String>,
}

pub fn family(job: &Job) -> CliResult<()> {
    let members = &job.cfg.family.members;
    if members.is_empty() {
        return Err(CliError::Config("family needs at least one member".into()));
    }
    let codes = resolve_codes(&job.cfg, &job.base)?;
    let tile = job.cfg.puncturing.tile;
    let n = codes.p_o_base.num_kept();
    let streams = codes.inner.n_out() - 1;
    let r_outer = Rational64::new(codes.sections as i64, codes.p_o.num_kept() as i64);
    let mut schemes = Vec::with_capacity(members.len());
    for m in members {
        let target = parse_rate(&m.rate)?;
        if m.kept_parity > n * streams {
            return Err(CliError::Config(format!(
                "rate {}: kept_parity = {} exceeds the {} parity bits per tile",
                m.rate,
                m.kept_parity,
                n * streams
            )));
        }
        let rho_p = Rational64::new(m.kept_parity as i64, (n * streams) as i64);
        let rho_s = rho_s_for_target(target, r_outer, codes.inner.n_out(), rho_p).map_err(|e| {
            CliError::Config(format!(
                "rate {} violates R = R_o' / (rho_s + (n - 1) rho_p): {e}",
                m.rate
            ))
        })?;
        // Round up so the achieved rate never exceeds the target.
        let kept_s = (rho_s * Rational64::from(n as i64)).ceil().to_integer() as usize;
        let mut cfg = job.cfg.clone();
        cfg.puncturing.kept_parity = Some(m.kept_parity);
        cfg.puncturing.kept_systematic = Some(kept_s);
        let scheme = resolve_scheme(&cfg, &job.base, None)
            .map_err(|e| CliError::Config(format!("rate {}: {e}", m.rate)))?;
        schemes.push((m, scheme));
    }
    job.prepare()?;

    let masks: Vec<PuncturePattern> = schemes
        .iter()
        .map(|(_, s)| {
            let t = s.config.transmit_mask();
            PuncturePattern::from_deleted(t.len(), (0..t.len()).filter(|&i| !t[i]))
        })
        .collect::<Result<_, _>>()?;
    let compat = check_rate_compatible(&masks)?;
    let violation = match compat {
        RateCompatibility::Compatible => None,
        other => Some(format!("{other:?}")),
    };
    let mut entries = Vec::new();
    for (m, s) in &schemes {
        let (parameters, analysis_error) = match analyze_scheme(job, s) {
            Ok(row) => (Some(row.parameters()), None),
            Err(e) => (None, Some(e.to_string())),
        };
        entries.push(FamilyEntry {
            target_rate: m.rate.clone(),
            code: code_info(s)?,
            systematic_deletions: n * tile - s.kept_systematic,
            parity_deletions: n * streams * tile - s.kept_parity,
            parameters,
            analysis_error,
        });
    }
    let manifest = FamilyManifest {
        interleaver: interleaver(job),
        members: entries,
        rate_compatible: violation.is_none(),
        violation,
    };
    job.write_json("family.json", &manifest)?;
    if !manifest.rate_compatible {
        return Err(CliError::Config(format!(
            "family is not rate compatible: {}",
            manifest.violation.unwrap_or_default()
        )));
    }
    Ok(())
}

pub fn base_dir(config: &Path) -> PathBuf {
    config.parent().map(Path::to_path_buf).unwrap_or_default()
}
