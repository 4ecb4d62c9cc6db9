//! `theory-eval`: limiting curves on grids, for overlay with measured profiles.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::TheoryConfig;
use super::output::OutputDir;
use crate::error::Result;
use crate::theory::{h_d, prop1_rhs, standardized_f, CollapseParams, HalfNormal, InfiniteLength, LimitLaw, PointMass};

/// Row of `theory.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryRow {
    pub curve: String,
    pub d: usize,
    pub xi: f64,
    pub value: f64,
}

/// Row of `standardized_f.csv`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdfRow {
    pub x: f64,
    pub value: f64,
}

fn curve(name: String, d: usize, xs: &[f64], f: impl Fn(f64) -> Result<f64> + Sync) -> Result<Vec<TheoryRow>> {
    xs.par_iter()
        .map(|&xi| Ok(TheoryRow { curve: name.clone(), d, xi, value: f(xi)? }))
        .collect()
}

fn law_curve(name: String, d: usize, xs: &[f64], g: &(impl LimitLaw + Sync)) -> Result<Vec<TheoryRow>> {
    curve(name, d, xs, |xi| prop1_rhs(g, d, xi))
}

/// Every configured curve; names are `srw`, `point-mass:<at>`, `half-normal`,
/// `rllerw-collapse` and `collapse:<name>`.
pub fn theory_rows(cfg: &TheoryConfig) -> Result<Vec<TheoryRow>> {
    let d = cfg.dimension;
    let xs = cfg.xi.values()?;
    let mut rows = law_curve("srw".into(), d, &xs, &InfiniteLength)?;
    for &at in &cfg.point_mass_at {
        rows.extend(law_curve(format!("point-mass:{at}"), d, &xs, &PointMass { at })?);
    }
    if cfg.half_normal {
        rows.extend(law_curve("half-normal".into(), d, &xs, &HalfNormal)?);
    }
    if cfg.rllerw_collapse {
        let p = CollapseParams::rllerw_complete_graph(d)?;
        rows.extend(curve("rllerw-collapse".into(), d, &xs, |xi| h_d(&p, xi))?);
    }
    for c in &cfg.collapse {
        let p = CollapseParams::new(d, c.alpha, c.beta, c.gamma)?;
        rows.extend(curve(format!("collapse:{}", c.name), d, &xs, |xi| h_d(&p, xi))?);
    }
    Ok(rows)
}

pub fn cdf_rows(cfg: &TheoryConfig) -> Result<Vec<CdfRow>> {
    Ok(cfg.standardized_f.values()?.into_iter().map(|x| CdfRow { x, value: standardized_f(x) }).collect())
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Writes `theory.csv` (`curve,d,xi,value`) and `standardized_f.csv` (`x,value`).
pub fn theory_eval(cfg: &TheoryConfig, out: &Path) -> Result<()> {
    let mut dir = OutputDir::create(out)?;
    dir.write("theory.csv", &to_csv(&theory_rows(cfg)?)?)?;
    dir.write("standardized_f.csv", &to_csv(&cdf_rows(cfg)?)?)?;
    dir.finish(None)
}

/// Reads `theory.csv`.
pub fn read_theory(path: &Path) -> Result<Vec<TheoryRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    for c in ["curve", "d", "xi", "value"] {
        if !headers.iter().any(|h| h == c) {
            return Err(crate::Error::MissingColumn { column: c.into(), path: path.display().to_string() });
        }
    }
    r.deserialize().map(|x| x.map_err(Into::into)).collect()
}
