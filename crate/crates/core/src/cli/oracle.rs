//! `oracle`: exact small-instance tables in the result-row schema.

use std::path::Path;

use num::ToPrimitive;
use serde::Serialize;

use super::config::OracleConfig;
use super::output::{z_key, OutputDir, ResultRow};
use crate::error::{Error, Result};
use crate::lattice::{l1_norm, TorusSpec};
use crate::oracles::{
    enumerate_high_temperature, enumerate_saw, exact_rllerw_expectations, ising_correlations_transfer,
    oracle_rlrw_at, srw_convolve, Rational,
};

/// Cap on the walk length the RLRW oracle may sum to.
const RLRW_LENGTH_LIMIT: u64 = 1 << 22;

fn exact(observable: &str, l: u32, key: impl Into<String>, value: f64) -> ResultRow {
    ResultRow::new(observable, l, key, value, 0.0, 0)
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Every `z` with `‖z‖₁ <= radius`, lexicographically.
pub fn l1_ball(d: usize, radius: u64) -> Vec<Vec<i64>> {
    let r = radius as i64;
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|z: Vec<i64>| {
                (-r..=r).map(move |x| {
                    let mut y = z.clone();
                    y.push(x);
                    y
                })
            })
            .filter(|z| l1_norm(z) <= radius)
            .collect();
    }
    out
}

/// Rows for one oracle configuration. `stderr` holds a truncation bound where the
/// table is not exact, otherwise zero; `n_samples` is zero.
pub fn oracle_rows(cfg: &OracleConfig) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    match cfg {
        OracleConfig::Saw { dimension, period, fugacity } => {
            let spec = TorusSpec::new(*dimension, *period)?;
            let e = enumerate_saw(&spec)?;
            for (n, p) in e.length_law(*fugacity).iter().enumerate() {
                rows.push(exact("length_law", *period, n.to_string(), *p));
            }
            for (z, g) in e.unwrapped_two_point(*fugacity) {
                rows.push(exact("two_point", *period, z_key(&z), g));
            }
            for (x, g) in e.torus_two_point(*fugacity) {
                rows.push(exact("torus_two_point", *period, z_key(&x), g));
            }
        }
        OracleConfig::HighTemperature { dimension, period, tanh_beta } => {
            let spec = TorusSpec::new(*dimension, *period)?;
            let e = enumerate_high_temperature(&spec)?;
            for (i, c) in e.correlations(*tanh_beta).iter().enumerate() {
                rows.push(exact("lambda", *period, z_key(&spec.coords_of(i as u64)), *c));
            }
            for (n, p) in e.walk_length_law(*tanh_beta).iter().enumerate() {
                rows.push(exact("ising_walk_length", *period, n.to_string(), *p));
            }
        }
        OracleConfig::Transfer { period, tanh_beta } => {
            let spec = TorusSpec::new(2, *period)?;
            for (i, c) in ising_correlations_transfer(&spec, *tanh_beta)?.iter().enumerate() {
                rows.push(exact("spin_correlation", *period, z_key(&spec.coords_of(i as u64)), *c));
            }
        }
        OracleConfig::Rlrw { dimension, length_law, radius, truncation_bound } => {
            // the RLRW on Z^d does not see the torus; the period only resolves size-dependent laws
            let spec = TorusSpec::new(*dimension, 2)?;
            let law = length_law.resolve(&spec)?;
            for z in l1_ball(*dimension, *radius) {
                let v = oracle_rlrw_at(&law, &z, *truncation_bound, RLRW_LENGTH_LIMIT)?;
                rows.push(ResultRow::new("two_point", 0, z_key(&z), v.value, v.truncation_bound, 0));
            }
        }
        OracleConfig::Rllerw { dimension, period, max_length } => {
            let spec = TorusSpec::new(*dimension, *period)?;
            if *max_length as u64 >= spec.volume() {
                return Err(Error::param(format!("max_length must be below the volume {}", spec.volume())));
            }
            let p = Rational::new(1.into(), (*max_length as i64 + 1).into());
            let probs = vec![p; *max_length + 1];
            let e = exact_rllerw_expectations(&spec, &probs)?;
            for (z, q) in &e.endpoint {
                rows.push(exact("endpoint", *period, z_key(z), to_f64(q)));
            }
            for (z, q) in &e.unwrapped_visits {
                rows.push(exact("two_point", *period, z_key(z), to_f64(q)));
            }
            for (x, q) in &e.torus_visits {
                rows.push(exact("torus_visits", *period, z_key(x), to_f64(q)));
            }
        }
        OracleConfig::SrwKernel { dimension, n_max, radius } => {
            let t = srw_convolve(*dimension, *n_max, *radius)?;
            for z in l1_ball(*dimension, *radius).into_iter().filter(|z| z.iter().all(|x| x.unsigned_abs() <= *radius)) {
                for n in 0..=*n_max {
                    let p = t.get(n, &z).expect("inside the box");
                    if p > 0.0 {
                        rows.push(ResultRow::new("srw_kernel", 0, format!("{n}|{}", z_key(&z)), p, t.leaked_mass(n), 0));
                    }
                }
            }
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
struct OracleDocument<'a> {
    config: &'a OracleConfig,
    rows: &'a [ResultRow],
}

/// Writes `oracle.csv` and `oracle.json`.
pub fn oracle(cfg: &OracleConfig, out: &Path) -> Result<()> {
    let rows = oracle_rows(cfg)?;
    let mut dir = OutputDir::create(out)?;
    dir.write_rows("oracle.csv", &rows)?;
    dir.write_json("oracle.json", &OracleDocument { config: cfg, rows: &rows })?;
    dir.finish(None)
}
