//! `analyze`: power-law fits, moment ratios, winding collapse and profile/theory
//! joins over completed runs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use log::{info, warn};
use serde::Serialize;

use super::config::{AnalysisConfig, RunConfig};
use super::output::{read_rows, OutputDir, ResultRow};
use super::theory_eval::{read_theory, TheoryRow};
use crate::error::{Error, Result};
use crate::observables::{cutoff_sweep, fit_power_law, ScalingPoint};
use crate::theory::phi_constant;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitRow {
    pub run: String,
    pub observable: String,
    pub key: String,
    pub min_size: f64,
    pub exponent: f64,
    pub exponent_stderr: f64,
    pub amplitude: f64,
    pub amplitude_stderr: f64,
    pub chi2_per_dof: f64,
    pub points_used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub run: String,
    #[serde(rename = "L")]
    pub size: u32,
    pub ratio: f64,
    pub stderr: f64,
    pub phi: f64,
    pub relative_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollapseRow {
    pub run: String,
    pub d: usize,
    #[serde(rename = "L")]
    pub size: u32,
    pub winding: f64,
    pub stderr: f64,
    /// `E(R) / (c_d L^{d/4-1})`.
    pub scaled: f64,
    pub scaled_stderr: f64,
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileJoinRow {
    pub run: String,
    #[serde(rename = "L")]
    pub size: u32,
    pub xi: f64,
    pub scaled: f64,
    pub stderr: f64,
    pub curve: String,
    pub theory: f64,
}

/// Everything `analyze` computes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Analysis {
    pub fits: Vec<FitRow>,
    pub sweeps: Vec<FitRow>,
    pub ratios: Vec<RatioRow>,
    pub collapse: Vec<CollapseRow>,
    pub profiles: Vec<ProfileJoinRow>,
    pub notices: Vec<String>,
}

/// One run directory's tables.
#[derive(Clone, Debug)]
pub struct RunTables {
    pub name: String,
    pub dimension: Option<usize>,
    pub moments: Vec<ResultRow>,
    pub profile: Vec<ResultRow>,
}

impl RunTables {
    pub fn load(dir: &Path) -> Result<Self> {
        let name = dir.file_name().map_or_else(|| dir.display().to_string(), |n| n.to_string_lossy().into_owned());
        let moments_path = dir.join("moments.csv");
        if !moments_path.exists() {
            return Err(Error::MissingColumn { column: "length".into(), path: moments_path.display().to_string() });
        }
        let moments = read_rows(&moments_path)?;
        let profile_path = dir.join("profile.csv");
        let profile = if profile_path.exists() { read_rows(&profile_path)? } else { Vec::new() };
        let config_path = dir.join("config.toml");
        let dimension = if config_path.exists() {
            RunConfig::load(&config_path, &[])?.simulation.map(|s| s.dimension)
        } else {
            None
        };
        Ok(RunTables { name, dimension, moments, profile })
    }
}

fn series(rows: &[ResultRow], observable: &str, key: &str, min_size: u32) -> Vec<ScalingPoint> {
    let mut pts: Vec<ScalingPoint> = rows
        .iter()
        .filter(|r| r.observable == observable && r.key == key && r.size >= min_size)
        .map(|r| ScalingPoint { size: f64::from(r.size), value: r.estimate, stderr: r.stderr })
        .collect();
    pts.sort_by(|a, b| a.size.total_cmp(&b.size));
    pts
}

fn fit_row(run: &str, observable: &str, key: &str, f: &crate::observables::PowerLawFit) -> FitRow {
    FitRow {
        run: run.into(),
        observable: observable.into(),
        key: key.into(),
        min_size: f.min_size,
        exponent: f.exponent,
        exponent_stderr: f.exponent_stderr,
        amplitude: f.amplitude,
        amplitude_stderr: f.amplitude_stderr,
        chi2_per_dof: f.chi2_per_dof,
        points_used: f.points_used,
    }
}

fn interpolate(curve: &[&TheoryRow], xi: f64) -> f64 {
    let i = curve.partition_point(|r| r.xi < xi);
    if i == 0 {
        return if curve.first().is_some_and(|r| r.xi == xi) { curve[0].value } else { f64::NAN };
    }
    if i == curve.len() {
        return f64::NAN;
    }
    let (a, b) = (curve[i - 1], curve[i]);
    a.value + (b.value - a.value) * (xi - a.xi) / (b.xi - a.xi)
}

pub fn analyze_runs(runs: &[RunTables], theory: &[TheoryRow], cfg: &AnalysisConfig) -> Result<Analysis> {
    let mut out = Analysis::default();
    for run in runs {
        let mut keys: Vec<(String, String)> = run
            .moments
            .iter()
            .filter(|r| r.key != "tau_int")
            .map(|r| (r.observable.clone(), r.key.clone()))
            .collect();
        keys.sort();
        keys.dedup();
        for (obs, key) in &keys {
            let pts = series(&run.moments, obs, key, cfg.min_size);
            if pts.len() < 2 {
                let msg = format!("{}: {obs}/{key} has {} size(s); fit skipped", run.name, pts.len());
                info!("{msg}");
                out.notices.push(msg);
                continue;
            }
            match fit_power_law(&pts) {
                Ok(f) => out.fits.push(fit_row(&run.name, obs, key, &f)),
                Err(e) => out.notices.push(format!("{}: {obs}/{key}: {e}", run.name)),
            }
            for f in cutoff_sweep(&pts) {
                out.sweeps.push(fit_row(&run.name, obs, key, &f));
            }
        }
        let phi = phi_constant();
        for p in series(&run.moments, "length", "ratio", cfg.min_size) {
            out.ratios.push(RatioRow {
                run: run.name.clone(),
                size: p.size as u32,
                ratio: p.value,
                stderr: p.stderr,
                phi,
                relative_deviation: p.value / phi - 1.0,
            });
        }
        let winding = series(&run.moments, "winding", "axis0", cfg.min_size);
        match run.dimension {
            Some(d) if !winding.is_empty() => {
                let kappa = d as f64 / 4.0 - 1.0;
                let scaled: Vec<(f64, f64)> =
                    winding.iter().map(|p| (p.value / p.size.powf(kappa), p.stderr / p.size.powf(kappa))).collect();
                // inverse-variance weighted mean; plain mean when errors are unusable
                let usable = scaled.iter().all(|(_, s)| *s > 0.0 && s.is_finite());
                let (num, den) = scaled.iter().fold((0.0, 0.0), |(n, w), (v, s)| {
                    let wt = if usable { 1.0 / (s * s) } else { 1.0 };
                    (n + wt * v, w + wt)
                });
                let c = num / den;
                for (p, (v, s)) in winding.iter().zip(&scaled) {
                    out.collapse.push(CollapseRow {
                        run: run.name.clone(),
                        d,
                        size: p.size as u32,
                        winding: p.value,
                        stderr: p.stderr,
                        scaled: v / c,
                        scaled_stderr: s / c,
                        constant: c,
                    });
                }
            }
            None if !winding.is_empty() => {
                out.notices.push(format!("{}: no config.toml with the dimension; winding collapse skipped", run.name))
            }
            _ => {}
        }
        let mut curves: BTreeMap<&str, Vec<&TheoryRow>> = BTreeMap::new();
        for t in theory {
            if run.dimension.is_none_or(|d| d == t.d) {
                curves.entry(t.curve.as_str()).or_default().push(t);
            }
        }
        for c in curves.values_mut() {
            c.sort_by(|a, b| a.xi.total_cmp(&b.xi));
        }
        let selected: Vec<(&str, &Vec<&TheoryRow>)> = match &cfg.theory_curve {
            Some(name) => curves.get_key_value(name.as_str()).map(|(k, v)| (*k, v)).into_iter().collect(),
            None => curves.iter().map(|(k, v)| (*k, v)).collect(),
        };
        for p in run.profile.iter().filter(|r| r.size >= cfg.min_size) {
            let xi: f64 = p.key.parse().map_err(|_| Error::param(format!("bad profile key `{}`", p.key)))?;
            for (name, curve) in &selected {
                out.profiles.push(ProfileJoinRow {
                    run: run.name.clone(),
                    size: p.size,
                    xi,
                    scaled: p.estimate,
                    stderr: p.stderr,
                    curve: name.to_string(),
                    theory: interpolate(curve, xi),
                });
            }
        }
    }
    Ok(out)
}

fn to_csv<T: Serialize>(rows: &[T], header: &[&str]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(header)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Loads every input run (and `theory.csv` when present in any of them) and writes
/// `fits.csv`, `fit_sweep.csv`, `ratio.csv`, `winding_collapse.csv`,
/// `profile_theory.csv` and `notices.txt`.
pub fn analyze(inputs: &[PathBuf], cfg: &AnalysisConfig, out: &Path) -> Result<Analysis> {
    if inputs.is_empty() {
        return Err(Error::Config("analyze needs at least one run directory".into()));
    }
    let runs: Vec<RunTables> = inputs.iter().map(|p| RunTables::load(p)).collect::<Result<_>>()?;
    let mut theory = Vec::new();
    for p in inputs {
        let t = p.join("theory.csv");
        if t.exists() {
            theory.extend(read_theory(&t)?);
        }
    }
    let a = analyze_runs(&runs, &theory, cfg)?;
    for n in &a.notices {
        warn!("{n}");
    }
    let fit_header = [
        "run", "observable", "key", "min_size", "exponent", "exponent_stderr", "amplitude", "amplitude_stderr",
        "chi2_per_dof", "points_used",
    ];
    let mut dir = OutputDir::create(out)?;
    dir.write("fits.csv", &to_csv(&a.fits, &fit_header)?)?;
    dir.write("fit_sweep.csv", &to_csv(&a.sweeps, &fit_header)?)?;
    dir.write("ratio.csv", &to_csv(&a.ratios, &["run", "L", "ratio", "stderr", "phi", "relative_deviation"])?)?;
    dir.write(
        "winding_collapse.csv",
        &to_csv(&a.collapse, &["run", "d", "L", "winding", "stderr", "scaled", "scaled_stderr", "constant"])?,
    )?;
    dir.write(
        "profile_theory.csv",
        &to_csv(&a.profiles, &["run", "L", "xi", "scaled", "stderr", "curve", "theory"])?,
    )?;
    dir.write("notices.txt", &a.notices.iter().map(|n| format!("{n}\n")).collect::<String>())?;
    dir.finish(None)?;
    Ok(a)
}
