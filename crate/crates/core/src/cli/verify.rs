//! `verify`: desk-scale oracle-equivalence scorecard.
//!
//! Every check compares a sampler or numerical routine with an exact or independent
//! reference. A [`Mutation`] deliberately breaks one component so that the matching
//! check can be seen to fail.

use std::time::Instant;

use num::{One, Zero};
use serde::Serialize;

use super::config::RunConfig;
use super::oracle::l1_ball;
use super::output::rows_to_csv_string;
use super::simulate::{run_simulation, tables};
use crate::error::Result;
use crate::lattice::{unwrap, winding_number, wrap, Dim, Lattice, Step, TorusSpec, TorusWalk, ZWalk};
use crate::observables::{MomentAccumulator, TwoPointHistogram, TwoPointMode};
use crate::oracles::{
    enumerate_high_temperature, enumerate_saw, exact_rllerw_expectations, oracle_rlrw_at, rlrw_expected_visits,
    rlrw_walk_sums, srw_point_kernel, survival_from_probabilities, Rational,
};
use crate::rng::stream;
use crate::samplers::{rlrw_sample, IsingWalkExtractor, LengthLaw, SawSampler, WormSampler};
use crate::theory::{half_normal_moments, lemma_sums, phi_constant, prop1_rhs, srw_limit_constant, InfiniteLength};

/// A deliberate defect for checking that the scorecard detects it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    None,
    /// Worm moves accepted with `1.5 tanh β` in place of `tanh β`.
    WormAcceptance,
    /// The wrap rule maps `x + s` out of range to `x + (2 - L) s`.
    WrapOffByOne,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn(Mutation) -> Result<(bool, String)>;

/// All checks in scorecard order.
pub const CHECKS: &[(&str, Check)] = &[
    ("wrap-example", wrap_example),
    ("wrap-round-trip", wrap_round_trip),
    ("rlrw-identity", rlrw_identity),
    ("rllerw-identity", rllerw_identity),
    ("saw-vs-enumeration", saw_vs_enumeration),
    ("worm-2x2", worm_torus),
    ("worm-4-cycle", worm_cycle),
    ("ising-walk-lengths", ising_walk_lengths),
    ("rlrw-vs-oracle", rlrw_vs_oracle),
    ("srw-limit-constant", srw_constant),
    ("phi-vs-moments", phi_vs_moments),
    ("lemma-slopes", lemma_slopes),
    ("determinism", determinism),
];

pub fn run_checks(mutation: Mutation) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|&(name, check)| {
            let start = Instant::now();
            let (passed, detail) = check(mutation).unwrap_or_else(|e| (false, format!("error: {e}")));
            CheckResult { name, passed, detail, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}

pub fn scorecard(results: &[CheckResult]) -> String {
    let mut s = String::new();
    for r in results {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        s += &format!("{mark}  {:<20} {:>7.2}s  {}\n", r.name, r.seconds, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    s += &format!("{} checks, {failed} failed\n", results.len());
    s
}

fn tv(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n).map(|i| (a.get(i).unwrap_or(&0.0) - b.get(i).unwrap_or(&0.0)).abs()).sum::<f64>() / 2.0
}

/// The torus endpoint, recomputed step by step under the mutated rule if requested.
fn torus_endpoint(w: &TorusWalk, m: Mutation) -> Vec<i64> {
    if m != Mutation::WrapOffByOne {
        return w.endpoint().to_vec();
    }
    let spec = w.torus();
    let mut x = vec![0i64; w.dim()];
    for s in w.steps() {
        let next = x[s.axis()] + s.sign();
        x[s.axis()] = if (spec.lo()..=spec.hi()).contains(&next) { next } else { x[s.axis()] + (2 - spec.period_i64()) * s.sign() };
    }
    x
}

fn wrap_example(m: Mutation) -> Result<(bool, String)> {
    let spec = TorusSpec::new(1, 4)?;
    let walk = TorusWalk::from_steps(spec, [Step::new(0, false); 7]);
    let end = torus_endpoint(&walk, m)[0];
    let z = unwrap(&walk).endpoint()[0];
    let r = winding_number(&walk, 0)?;
    Ok((end == 1 && z == -7 && r == 1, format!("torus endpoint {end}, unwrapped {z}, windings {r}")))
}

fn wrap_round_trip(m: Mutation) -> Result<(bool, String)> {
    use rand::Rng;
    let mut rng = stream(11, 0);
    let mut bad = 0;
    for t in 0..10_000u32 {
        let d = [1, 2, 3, 5][t as usize % 4];
        let l = rng.random_range(2..9);
        let spec = TorusSpec::new(d, l)?;
        let n = rng.random_range(0..40);
        let steps: Vec<Step> = (0..n).map(|_| Step::from_index(rng.random_range(0..2 * d))).collect();
        let z = ZWalk::from_steps(Lattice::new(Dim::new(d)?), steps);
        let w = wrap(&z, &spec);
        if unwrap(&w) != z || torus_endpoint(&w, m) != spec.reduce_site(z.endpoint()) {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{bad} of 10000 round trips failed")))
}

fn rlrw_identity(_: Mutation) -> Result<(bool, String)> {
    let probs = vec![Rational::new(1.into(), 5.into()); 5];
    let s = survival_from_probabilities(&probs);
    let mut ok = true;
    for l in [2, 3] {
        let spec = TorusSpec::new(2, l)?;
        ok &= rlrw_walk_sums(&spec, &s)? == rlrw_expected_visits(&spec, &s);
    }
    Ok((ok, "N uniform on 0..=4, d=2, L=2 and 3, exact rationals".into()))
}

fn rllerw_identity(_: Mutation) -> Result<(bool, String)> {
    let mut ok = true;
    for (l, n) in [(2u32, 3usize), (3, 4)] {
        let spec = TorusSpec::new(2, l)?;
        let probs = vec![Rational::new(1.into(), (n as i64 + 1).into()); n + 1];
        let e = exact_rllerw_expectations(&spec, &probs)?;
        let total: Rational = e.law.iter().map(|(_, q)| q.clone()).sum();
        let sums = e.walk_sums()?;
        ok &= total.is_one() && sums.torus == e.torus_visits && sums.unwrapped == e.unwrapped_visits;
        ok &= e.prefix_weight(&TorusWalk::root(spec)).is_one();
        ok &= !e.torus_visits.values().any(Zero::is_zero);
    }
    Ok((ok, "prefix-weight sums equal exact visit probabilities, d=2, L=2 (N<=3) and L=3 (N<=4)".into()))
}

fn saw_vs_enumeration(_: Mutation) -> Result<(bool, String)> {
    let spec = TorusSpec::new(2, 3)?;
    let j = 0.3;
    let exact = enumerate_saw(&spec)?;
    let law = exact.length_law(j);
    let g = exact.unwrapped_two_point(j);
    let gsum: f64 = g.values().sum();
    let mut rng = stream(12, 0);
    let mut s = SawSampler::new(spec, j, false)?;
    let steps = 2_000_000u64;
    let mut counts = vec![0u64; law.len()];
    let mut ends: std::collections::BTreeMap<Vec<i64>, u64> = Default::default();
    for _ in 0..steps {
        s.step(&mut rng);
        counts[s.walk().len()] += 1;
        *ends.entry(s.walk().displacement().to_vec()).or_default() += 1;
    }
    let emp: Vec<f64> = counts.iter().map(|&c| c as f64 / steps as f64).collect();
    let tv_len = tv(&emp, &law);
    let tv_end: f64 = g
        .iter()
        .map(|(z, v)| (v / gsum - *ends.get(z).unwrap_or(&0) as f64 / steps as f64).abs())
        .sum::<f64>()
        / 2.0;
    Ok((tv_len < 0.01 && tv_end < 0.01, format!("TV(length) {tv_len:.4}, TV(endpoint) {tv_end:.4} over {steps} steps")))
}

fn worm_head_check(spec: TorusSpec, m: Mutation, seed: u64) -> Result<(bool, String)> {
    let t = 0.3;
    let exact = enumerate_high_temperature(&spec)?.head_law(t);
    let mut w = WormSampler::new(spec, t)?;
    if m == Mutation::WormAcceptance {
        w = w.with_move_weight(1.5 * t);
    }
    let mut rng = stream(seed, 0);
    let mut acc = vec![MomentAccumulator::new(); exact.len()];
    for _ in 0..2_000_000 {
        w.step(&mut rng);
        let h = w.config().head() as usize;
        for (v, a) in acc.iter_mut().enumerate() {
            a.push(f64::from(u8::from(v == h)));
        }
    }
    let mut worst: f64 = 0.0;
    for (a, p) in acc.iter().zip(&exact) {
        let se = a.blocking_errors()?.stderr;
        worst = worst.max((a.mean() - p).abs() / se);
    }
    Ok((worst < 4.0, format!("largest head-law deviation {worst:.2} sigma")))
}

fn worm_torus(m: Mutation) -> Result<(bool, String)> {
    worm_head_check(TorusSpec::new(2, 2)?, m, 13)
}

fn worm_cycle(m: Mutation) -> Result<(bool, String)> {
    worm_head_check(TorusSpec::new(1, 4)?, m, 14)
}

fn ising_walk_lengths(m: Mutation) -> Result<(bool, String)> {
    let spec = TorusSpec::new(2, 2)?;
    let t = 0.3;
    let exact = enumerate_high_temperature(&spec)?.walk_length_law(t);
    let mut w = WormSampler::new(spec, t)?;
    if m == Mutation::WormAcceptance {
        w = w.with_move_weight(1.5 * t);
    }
    let mut ex = IsingWalkExtractor::new();
    let mut rng = stream(15, 0);
    let steps = 1_000_000u64;
    let mut counts = vec![0u64; exact.len()];
    for _ in 0..steps {
        w.step(&mut rng);
        let n = ex.extract(w.config())?.len();
        if n >= counts.len() {
            counts.resize(n + 1, 0);
        }
        counts[n] += 1;
    }
    let emp: Vec<f64> = counts.iter().map(|&c| c as f64 / steps as f64).collect();
    let d = tv(&emp, &exact);
    Ok((d < 0.01, format!("TV(|T|) {d:.4} on the 2x2 torus")))
}

fn rlrw_vs_oracle(_: Mutation) -> Result<(bool, String)> {
    let spec = TorusSpec::new(3, 64)?;
    let law = LengthLaw::geometric(0.6)?;
    let mut rng = stream(16, 0);
    let mut h = TwoPointHistogram::new(3, TwoPointMode::Visit);
    for _ in 0..200_000 {
        let (w, _) = rlrw_sample(&law, &spec, &mut rng);
        h.record_visits(w.steps());
    }
    let mut worst: f64 = 0.0;
    for z in l1_ball(3, 2) {
        let o = oracle_rlrw_at(&law, &z, 1e-9, 1 << 20)?;
        let e = h.estimate(&z)?;
        worst = worst.max((e.value - o.value).abs() / e.stderr);
    }
    Ok((worst < 4.0, format!("largest deviation {worst:.2} sigma over ||z||_1 <= 2, geometric p=0.6")))
}

fn srw_constant(_: Mutation) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for d in [3, 5, 6] {
        let v = prop1_rhs(&InfiniteLength, d, 1.0)?;
        worst = worst.max((v / srw_limit_constant(d) - 1.0).abs());
    }
    Ok((worst < 1e-8, format!("largest relative error {worst:.1e}")))
}

fn phi_vs_moments(_: Mutation) -> Result<(bool, String)> {
    let (m, sd) = half_normal_moments();
    let diff = (phi_constant() - m / sd).abs();
    Ok((diff < 1e-12, format!("|phi - E/sd| = {diff:.1e}")))
}

fn lemma_slopes(_: Mutation) -> Result<(bool, String)> {
    let mut llt = Vec::new();
    let mut diff = Vec::new();
    for r in [8i64, 16, 32] {
        let z = [r, 0, 0];
        let p = srw_point_kernel(&z, 8 * (r * r) as u64);
        let s = lemma_sums(&z, &p, 0.1);
        llt.push(s.llt_sum);
        diff.push(s.pbar_diff_sum);
    }
    let slope = |v: &[f64]| (v[2] / v[0]).ln() / 4f64.ln();
    let decreasing = |v: &[f64]| v[0] > v[1] && v[1] > v[2];
    let (a, b) = (slope(&llt), slope(&diff));
    let ok = decreasing(&llt) && decreasing(&diff) && a <= -2.5 && b <= -2.5;
    Ok((ok, format!("log-log slopes {a:.3} and {b:.3}")))
}

fn determinism(_: Mutation) -> Result<(bool, String)> {
    let cfg = RunConfig::parse(
        "[simulation]\nmodel='rllerw'\ndimension=3\nsizes=[4, 5]\nmeasurements=500\nchains=3\nseed=17\nlength_law={kind='complete-graph'}",
        &[],
    )?;
    let sim = cfg.simulation()?;
    let render = || -> Result<String> {
        let t = tables(sim, &run_simulation(sim)?)?;
        Ok([&t.moments, &t.two_point, &t.ecdf, &t.profile]
            .iter()
            .map(|rows| rows_to_csv_string(rows))
            .collect::<Result<Vec<_>>>()?
            .concat())
    };
    let (a, b) = (render()?, render()?);
    Ok((a == b, format!("{} bytes of CSV compared", a.len())))
}
