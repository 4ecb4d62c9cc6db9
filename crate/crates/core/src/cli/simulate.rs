//! `simulate`: independent chains per torus size, merged in chain order.

use std::path::Path;
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use super::config::{CriticalPoint, Model, RunConfig, SimulationConfig};
use super::output::{z_key, OutputDir, ResultRow};
use crate::error::{Error, Result};
use crate::lattice::TorusSpec;
use crate::observables::{radial_profile, MomentAccumulator, WalkObservables};
use crate::rng::{chain_stream_id, stream};
use crate::samplers::{rlrw_sample, IsingWalkExtractor, LoopErasedSampler, SawSampler, WormSampler};

/// Total site updates above which `simulate` warns.
pub const SITE_UPDATE_WARNING: f64 = 1e9;

/// One chain's accumulators and sampler statistics.
#[derive(Clone, Debug)]
pub struct ChainOutput {
    pub observables: WalkObservables,
    pub stream_id: u64,
    pub acceptance: Option<f64>,
    pub chain_steps: u64,
    /// Length moments over the first and second half of the measurements.
    pub halves: [MomentAccumulator; 2],
}

/// Merged result for one torus size.
#[derive(Clone, Debug)]
pub struct SizeResult {
    pub spec: TorusSpec,
    pub observables: WalkObservables,
    pub chains: Vec<ChainSummary>,
    /// `(m₁ - m₂)/sqrt(se₁² + se₂²)` of the mean length between measurement halves.
    pub stationarity_z: Option<f64>,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainSummary {
    pub stream_id: u64,
    pub acceptance: Option<f64>,
    pub chain_steps: u64,
}

pub fn run_chain(sim: &SimulationConfig, spec: TorusSpec, size_index: usize, chain: usize) -> Result<ChainOutput> {
    let stream_id = chain_stream_id(size_index, chain);
    let mut rng = stream(sim.seed, stream_id);
    let mut obs = observables_for(sim, spec);
    let mut halves = [MomentAccumulator::new(), MomentAccumulator::new()];
    let m = sim.measurements;
    let half = |i: u64| usize::from(2 * i >= m);
    let sweep = sim.sweep_steps(&spec);
    let (acceptance, chain_steps) = match sim.model {
        Model::Saw => {
            let mut s = SawSampler::new(spec, sim.fugacity()?, sim.lifted)?;
            for _ in 0..sim.burn_in_sweeps * sweep {
                s.step(&mut rng);
            }
            for i in 0..m {
                for _ in 0..sweep {
                    s.step(&mut rng);
                }
                obs.record_walk(s.walk());
                halves[half(i)].push(s.walk().len() as f64);
            }
            (Some(s.stats().acceptance_rate()), s.stats().steps)
        }
        Model::IsingWorm => {
            let mut w = WormSampler::new(spec, sim.tanh_beta()?)?;
            let mut extract = IsingWalkExtractor::new();
            for _ in 0..sim.burn_in_sweeps * sweep {
                w.step(&mut rng);
            }
            for i in 0..m {
                for _ in 0..sweep {
                    w.step(&mut rng);
                }
                let walk = extract.extract(w.config())?;
                obs.record_walk(&walk);
                halves[half(i)].push(walk.len() as f64);
            }
            let st = w.stats();
            (Some(st.accepted as f64 / st.steps.max(1) as f64), st.steps)
        }
        Model::Rlrw => {
            let law = length_law(sim, &spec)?;
            let mut steps = 0;
            for i in 0..m {
                let (walk, _) = rlrw_sample(&law, &spec, &mut rng);
                steps += walk.len() as u64;
                obs.record_walk(&walk);
                halves[half(i)].push(walk.len() as f64);
            }
            (None, steps)
        }
        Model::Rllerw => {
            let law = length_law(sim, &spec)?;
            let mut s = LoopErasedSampler::new(spec);
            for i in 0..m {
                let walk = s.sample(&law, &mut rng)?;
                obs.record_walk(&walk);
                halves[half(i)].push(walk.len() as f64);
            }
            (None, s.raw_steps())
        }
    };
    Ok(ChainOutput { observables: obs, stream_id, acceptance, chain_steps, halves })
}

fn observables_for(sim: &SimulationConfig, spec: TorusSpec) -> WalkObservables {
    let obs = WalkObservables::new(spec, sim.two_point_mode());
    if sim.observables.two_point || sim.observables.profile {
        obs
    } else {
        obs.without_two_point()
    }
}

fn length_law(sim: &SimulationConfig, spec: &TorusSpec) -> Result<crate::samplers::LengthLaw> {
    sim.length_law.as_ref().ok_or_else(|| Error::Config("length_law is required".into()))?.resolve(spec)
}

/// Runs every chain of every size; chains run in parallel and are merged in index
/// order, so results do not depend on the thread count.
pub fn run_simulation(sim: &SimulationConfig) -> Result<Vec<SizeResult>> {
    sim.validate()?;
    let updates = sim.site_updates();
    if updates > SITE_UPDATE_WARNING {
        warn!("this run performs about {updates:.2e} site updates; expect cluster-scale runtimes");
    }
    let mut out = Vec::with_capacity(sim.sizes.len());
    for (size_index, &l) in sim.sizes.iter().enumerate() {
        let spec = sim.spec(l)?;
        let start = Instant::now();
        let chains: Vec<ChainOutput> = (0..sim.chains)
            .into_par_iter()
            .map(|c| run_chain(sim, spec, size_index, c))
            .collect::<Result<_>>()?;
        let mut merged = observables_for(sim, spec);
        let mut halves = [MomentAccumulator::new(), MomentAccumulator::new()];
        for c in &chains {
            merged.merge(&c.observables)?;
            halves[0].merge(&c.halves[0]);
            halves[1].merge(&c.halves[1]);
        }
        let stationarity_z = stationarity(&halves);
        if let Some(z) = stationarity_z.filter(|z| z.abs() > 4.0) {
            warn!("L={l}: mean length differs between measurement halves by {z:.1} sigma; burn-in may be too short");
        }
        let wall_seconds = start.elapsed().as_secs_f64();
        info!("L={l}: {} samples in {wall_seconds:.2}s", merged.samples());
        out.push(SizeResult {
            spec,
            observables: merged,
            chains: chains
                .iter()
                .map(|c| ChainSummary { stream_id: c.stream_id, acceptance: c.acceptance, chain_steps: c.chain_steps })
                .collect(),
            stationarity_z,
            wall_seconds,
        });
    }
    Ok(out)
}

fn stationarity(halves: &[MomentAccumulator; 2]) -> Option<f64> {
    let se = |a: &MomentAccumulator| a.blocking_errors().ok().map(|b| b.stderr);
    let (s1, s2) = (se(&halves[0])?, se(&halves[1])?);
    let den = (s1 * s1 + s2 * s2).sqrt();
    (den > 0.0).then(|| (halves[0].mean() - halves[1].mean()) / den)
}

/// CSV tables of one simulation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tables {
    pub moments: Vec<ResultRow>,
    pub two_point: Vec<ResultRow>,
    pub ecdf: Vec<ResultRow>,
    pub profile: Vec<ResultRow>,
}

fn stderr_or_nan<E: std::fmt::Display>(r: std::result::Result<f64, E>, what: &str, l: u32) -> f64 {
    r.unwrap_or_else(|e| {
        warn!("L={l}: no error bar for {what}: {e}");
        f64::NAN
    })
}

pub fn tables(sim: &SimulationConfig, results: &[SizeResult]) -> Result<Tables> {
    let mut t = Tables::default();
    for r in results {
        let l = r.spec.period();
        let mut obs = r.observables.clone();
        let n = obs.samples();
        if sim.observables.length {
            let len = &obs.length;
            let blocking = len.blocking_errors();
            let se = stderr_or_nan(blocking.as_ref().map(|b| b.stderr), "mean length", l);
            t.moments.push(ResultRow::new("length", l, "mean", len.mean(), se, n));
            let sd = stderr_or_nan(len.jackknife(|_, v| v.sqrt()).map(|x| x.1), "length sd", l);
            t.moments.push(ResultRow::new("length", l, "sd", len.std_dev(), sd, n));
            let ratio_se = stderr_or_nan(len.mean_over_sd().map(|x| x.1), "moment ratio", l);
            t.moments.push(ResultRow::new("length", l, "ratio", len.mean() / len.std_dev(), ratio_se, n));
            if let Ok(b) = blocking {
                t.moments.push(ResultRow::new("length", l, "tau_int", b.tau_int, f64::NAN, n));
            }
        }
        if sim.observables.winding {
            for (axis, acc) in obs.winding.iter().enumerate() {
                let se = stderr_or_nan(acc.blocking_errors().map(|b| b.stderr), "winding", l);
                t.moments.push(ResultRow::new("winding", l, format!("axis{axis}"), acc.mean(), se, n));
            }
        }
        if sim.observables.two_point {
            match obs.two_point.estimates() {
                Ok(est) => {
                    for p in est {
                        t.two_point.push(ResultRow::new("two_point", l, z_key(&p.z), p.value, p.stderr, n));
                    }
                }
                Err(e) => warn!("L={l}: two-point table skipped: {e}"),
            }
        }
        if sim.observables.ecdf {
            match obs.length_ecdf.standardized() {
                Ok(points) => {
                    for p in points {
                        let se = (p.cumulative * (1.0 - p.cumulative) / n as f64).sqrt();
                        t.ecdf.push(ResultRow::new("length_ecdf", l, p.x_std.to_string(), p.cumulative, se, n));
                    }
                }
                Err(e) => warn!("L={l}: ECDF table skipped: {e}"),
            }
        }
        if sim.observables.profile {
            match radial_profile(&obs.two_point, l, sim.profile, None) {
                Ok(points) => {
                    for p in points {
                        t.profile.push(ResultRow::new("profile", l, p.xi.to_string(), p.scaled, p.scaled_stderr, n));
                    }
                }
                Err(e) => warn!("L={l}: profile table skipped: {e}"),
            }
        }
    }
    Ok(t)
}

#[derive(Serialize)]
struct SizeSummary<'a> {
    period: u32,
    samples: u64,
    wall_seconds: f64,
    stationarity_z: Option<f64>,
    chains: &'a [ChainSummary],
}

#[derive(Serialize)]
struct RunSummary<'a> {
    build: String,
    seed: u64,
    config_echo: String,
    critical_point: Option<CriticalPoint>,
    site_updates: f64,
    sizes: Vec<SizeSummary<'a>>,
    files: Vec<&'static str>,
}

pub fn build_id() -> String {
    format!("{}-{}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

/// Runs the simulation and writes `moments.csv`, `two_point.csv`, `ecdf.csv`,
/// `profile.csv`, `config.toml` and `summary.json` under `out`.
pub fn simulate(config: &RunConfig, out: &Path) -> Result<()> {
    let sim = config.simulation()?;
    let mut dir = OutputDir::create(out)?;
    let result = (|| {
        let results = run_simulation(sim)?;
        let t = tables(sim, &results)?;
        let echo = config.to_toml()?;
        dir.write("config.toml", &echo)?;
        dir.write_rows("moments.csv", &t.moments)?;
        dir.write_rows("two_point.csv", &t.two_point)?;
        dir.write_rows("ecdf.csv", &t.ecdf)?;
        dir.write_rows("profile.csv", &t.profile)?;
        let summary = RunSummary {
            build: build_id(),
            seed: sim.seed,
            config_echo: echo,
            critical_point: sim.default_critical_point(),
            site_updates: sim.site_updates(),
            sizes: results
                .iter()
                .map(|r| SizeSummary {
                    period: r.spec.period(),
                    samples: r.observables.samples(),
                    wall_seconds: r.wall_seconds,
                    stationarity_z: r.stationarity_z,
                    chains: &r.chains,
                })
                .collect(),
            files: vec!["moments.csv", "two_point.csv", "ecdf.csv", "profile.csv", "config.toml"],
        };
        dir.write_json("summary.json", &summary)
    })();
    match result {
        Ok(()) => dir.finish(None),
        Err(e) => {
            if let Err(m) = dir.finish(Some(&e)) {
                warn!("could not write the partial-output manifest: {m}");
            }
            Err(e)
        }
    }
}
