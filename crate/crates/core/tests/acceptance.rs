//! Acceptance suite: every primary criterion at its pinned tolerance, one PASS/FAIL
//! line each. Runs as a plain binary (`harness = false`); pass criterion names as
//! arguments to run a subset.
//!
//! Criteria listed in `KNOWN_FAILURES` still run and print XFAIL (or XPASS); they do
//! not fail the target. Any other failure exits nonzero.

use std::collections::BTreeMap;
use std::time::Instant;

use num::One;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use unwrapped_walks::cli::config::RunConfig;
use unwrapped_walks::cli::output::rows_to_csv_string;
use unwrapped_walks::cli::simulate::{run_simulation, tables};
use unwrapped_walks::lattice::{unwrap, winding_number, wrap, Dim, Lattice};
use unwrapped_walks::observables::{fit_power_law, EcdfAccumulator, MomentAccumulator, ScalingPoint};
use unwrapped_walks::observables::{TwoPointHistogram, TwoPointMode};
use unwrapped_walks::oracles::{
    enumerate_high_temperature, enumerate_saw, exact_rllerw_expectations, oracle_rlrw_at, rlrw_expected_visits,
    rlrw_walk_sums, srw_point_kernel, survival_from_probabilities, Rational,
};
use unwrapped_walks::rng::stream;
use unwrapped_walks::samplers::{
    extract_ising_walk, rlrw_sample, EdgeConfig, LengthLaw, LoopErasedSampler, SawSampler, WormSampler,
};
use unwrapped_walks::theory::{
    half_normal_moments, lemma_sums, phi_constant, prefactor, prop1_rhs, srw_limit_constant, standardized_f,
    InfiniteLength, PointMass,
};
use unwrapped_walks::{Step, TorusSpec, TorusWalk, ZWalk};

/// Criteria that fail at desk scale for reasons analysed outside the code; they run
/// and report FAIL without failing the target.
const KNOWN_FAILURES: &[&str] = &["winding-proliferation"];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

type Criterion = fn() -> Outcome;

const CRITERIA: &[(&str, Criterion)] = &[
    ("wrap-exactness", wrap_exactness),
    ("walk-sum-identities", walk_sum_identities),
    ("sampler-vs-enumeration", sampler_vs_enumeration),
    ("rlrw-oracle", rlrw_oracle),
    ("green-function-limit", green_function_limit),
    ("half-normal-law", half_normal_law),
    ("walk-length-universality", walk_length_universality),
    ("winding-proliferation", winding_proliferation),
    ("lemma-diagnostics", lemma_diagnostics),
    ("determinism", determinism),
];

fn main() {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = 0;
    for &(name, criterion) in CRITERIA {
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = criterion();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.contains(&name);
        let mark = match (o.passed, known) {
            (true, false) => "PASS",
            (true, true) => "XPASS",
            (false, true) => "XFAIL",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("{mark:<5}  {name:<26} {secs:>8.1}s  {}", o.detail);
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------------------------
// wrap / unwrap / winding

fn wrap_exactness() -> Outcome {
    let spec = TorusSpec::new(1, 4).unwrap();
    let walk = TorusWalk::from_steps(spec, [Step::new(0, false); 7]);
    let sites: Vec<i64> = walk.sites().iter().map(|s| s[0]).collect();
    let example = sites == [0, -1, -2, 1, 0, -1, -2, 1]
        && unwrap(&walk).endpoint() == [-7]
        && winding_number(&walk, 0).unwrap() == 1;

    let mut rng = stream(101, 0);
    let mut bad = 0;
    let trials = 10_000;
    for t in 0..trials {
        let d = [1, 2, 3, 5][t % 4];
        let l = rand::Rng::random_range(&mut rng, 2..10u32);
        let spec = TorusSpec::new(d, l).unwrap();
        let n = rand::Rng::random_range(&mut rng, 0..60usize);
        let steps: Vec<Step> =
            (0..n).map(|_| Step::from_index(rand::Rng::random_range(&mut rng, 0..2 * d))).collect();
        let z = ZWalk::from_steps(Lattice::new(Dim::new(d).unwrap()), steps);
        let w = wrap(&z, &spec);
        // reference reduction into [-L/2, L/2) by plain modular arithmetic
        let lo = -(i64::from(l) / 2);
        let reduced: Vec<i64> = z.endpoint().iter().map(|x| (x - lo).rem_euclid(i64::from(l)) + lo).collect();
        let windings_ok =
            (0..d).all(|a| winding_number(&w, a).unwrap() == z.endpoint()[a].unsigned_abs() / u64::from(l));
        if unwrap(&w) != z || w.endpoint() != reduced.as_slice() || !windings_ok {
            bad += 1;
        }
    }
    outcome(
        example && bad == 0,
        format!("d=1 L=4 example {}; {bad} of {trials} random round trips failed", if example { "exact" } else { "WRONG" }),
    )
}

// ---------------------------------------------------------------------------------
// exact walk-sum identities

fn walk_sum_identities() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    let uniform = |n: usize| vec![Rational::new(1.into(), (n as i64 + 1).into()); n + 1];
    for l in [2u32, 3] {
        let spec = TorusSpec::new(2, l).unwrap();
        let s = survival_from_probabilities(&uniform(4));
        let sums = rlrw_walk_sums(&spec, &s).unwrap();
        let exact = rlrw_expected_visits(&spec, &s);
        let good = sums == exact;
        ok &= good;
        lines.push(format!("RLRW L={l} N<=4 {}", if good { "exact" } else { "MISMATCH" }));
    }
    // the longest self-avoiding walk on the 2x2 torus has 3 steps
    for (l, n) in [(2u32, 3usize), (3, 4)] {
        let spec = TorusSpec::new(2, l).unwrap();
        let e = exact_rllerw_expectations(&spec, &uniform(n)).unwrap();
        let sums = e.walk_sums().unwrap();
        let mass: Rational = e.law.iter().map(|(_, q)| q.clone()).sum();
        let good = mass.is_one()
            && e.prefix_weight(&TorusWalk::root(spec)).is_one()
            && sums.torus == e.torus_visits
            && sums.unwrapped == e.unwrapped_visits;
        ok &= good;
        lines.push(format!("RLLERW L={l} N<={n} {}", if good { "exact" } else { "MISMATCH" }));
    }
    outcome(ok, lines.join(", "))
}

// ---------------------------------------------------------------------------------
// samplers against exhaustive enumeration

fn tv(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n).map(|i| (a.get(i).unwrap_or(&0.0) - b.get(i).unwrap_or(&0.0)).abs()).sum::<f64>() / 2.0
}

fn saw_tv(lifted: bool, steps: u64, seed: u64) -> (f64, f64) {
    let spec = TorusSpec::new(2, 3).unwrap();
    let j = 0.3;
    let exact = enumerate_saw(&spec).unwrap();
    let law = exact.length_law(j);
    let g = exact.unwrapped_two_point(j);
    let mut s = SawSampler::new(spec, j, lifted).unwrap();
    let mut rng = stream(seed, 0);
    let mut lengths = vec![0u64; law.len()];
    let mut visits: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    for _ in 0..steps {
        s.step(&mut rng);
        lengths[s.walk().len()] += 1;
        *visits.entry(s.walk().displacement().to_vec()).or_default() += 1;
    }
    let emp: Vec<f64> = lengths.iter().map(|&c| c as f64 / steps as f64).collect();
    // g̃ normalized to a probability over endpoints, the law of the sampled endpoint
    let total: f64 = g.values().sum();
    let mut tv_g = 0.0;
    for (z, v) in &g {
        tv_g += (v / total - *visits.get(z).unwrap_or(&0) as f64 / steps as f64).abs();
    }
    tv_g += visits.iter().filter(|(z, _)| !g.contains_key(*z)).map(|(_, &c)| c as f64 / steps as f64).sum::<f64>();
    (tv(&emp, &law), tv_g / 2.0)
}

/// Ratio `Σ a / Σ b` over consecutive batches with a delete-one batch jackknife.
fn batch_ratio(a: &[f64], b: &[f64]) -> (f64, f64) {
    let k = a.len() as f64;
    let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    let r = sa / sb;
    let loo: Vec<f64> = a.iter().zip(b).map(|(x, y)| (sa - x) / (sb - y)).collect();
    let mean = loo.iter().sum::<f64>() / k;
    let var = (k - 1.0) / k * loo.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    (r, var.sqrt())
}

/// Largest deviation, in standard errors, of worm-sampled `λ(C_v)/λ(C_0)` from the
/// enumeration.
fn worm_lambda_sigma(spec: TorusSpec, t: f64, steps: u64, seed: u64) -> f64 {
    let e = enumerate_high_temperature(&spec).unwrap();
    let origin = spec.origin_index() as usize;
    let sites = spec.volume() as usize;
    let exact: Vec<f64> = (0..sites).map(|v| e.lambda(&spec.coords_of(v as u64), t) / e.lambda(&spec.coords_of(origin as u64), t)).collect();
    let batches = 200;
    let per = steps / batches;
    let mut counts = vec![vec![0.0; batches as usize]; sites];
    let mut w = WormSampler::new(spec, t).unwrap();
    let mut rng = stream(seed, 0);
    for _ in 0..10_000 {
        w.step(&mut rng);
    }
    for b in 0..batches as usize {
        for _ in 0..per {
            w.step(&mut rng);
            counts[w.config().head() as usize][b] += 1.0;
        }
    }
    (0..sites)
        .filter(|&v| v != origin)
        .map(|v| {
            let (r, se) = batch_ratio(&counts[v], &counts[origin]);
            (r - exact[v]).abs() / se
        })
        .fold(0.0, f64::max)
}

/// Reference Ising walk written against raw edge lists: from the origin, repeatedly
/// cross the unused occupied edge whose far end has the smallest site index (ties by
/// edge index) until the head is reached.
fn reference_ising_walk_length(spec: &TorusSpec, mask: u64, head: u64) -> usize {
    let d = spec.dim_usize();
    let l = i64::from(spec.period());
    let lo = -(l / 2);
    let index = |c: &[i64]| c.iter().fold(0u64, |acc, &x| acc * l as u64 + (x - lo) as u64);
    let edges: Vec<(u64, u64, u64)> = (0..spec.edge_count())
        .filter(|e| mask >> e & 1 == 1)
        .map(|e| {
            let (x, axis) = (e / d as u64, (e % d as u64) as usize);
            let mut c = spec.coords_of(x);
            c[axis] = (c[axis] + 1 - lo).rem_euclid(l) + lo;
            (e, x, index(&c))
        })
        .collect();
    let mut used = vec![false; edges.len()];
    let (mut here, mut len) = (spec.origin_index(), 0);
    while here != head {
        let next = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .filter_map(|(i, &(e, x, y))| match (x == here, y == here) {
                (true, _) => Some(((y, e), i)),
                (_, true) => Some(((x, e), i)),
                _ => None,
            })
            .min()
            .expect("parity forbids a dead end before the head");
        used[next.1] = true;
        here = next.0 .0;
        len += 1;
    }
    len
}

fn ising_lengths_match(spec: TorusSpec, t: f64) -> (bool, usize) {
    let e = enumerate_high_temperature(&spec).unwrap();
    let mut law = vec![0.0; spec.edge_count() as usize + 1];
    let mut disagreements = 0;
    for &(mask, head) in e.configs() {
        let n = reference_ising_walk_length(&spec, mask, head);
        let edges = (0..spec.edge_count()).filter(|i| mask >> i & 1 == 1);
        let from_library = extract_ising_walk(&EdgeConfig::from_edges(spec, edges).unwrap()).unwrap().len();
        disagreements += usize::from(n != from_library);
        law[n] += t.powi(mask.count_ones() as i32);
    }
    let z: f64 = law.iter().sum();
    law.iter_mut().for_each(|p| *p /= z);
    let exact = e.walk_length_law(t);
    (disagreements == 0 && tv(&law, &exact) < 1e-12, e.configs().len())
}

fn sampler_vs_enumeration() -> Outcome {
    let (len_tv, g_tv) = saw_tv(false, 10_000_000, 201);
    let (lifted_len_tv, lifted_g_tv) = saw_tv(true, 10_000_000, 202);
    let torus = worm_lambda_sigma(TorusSpec::new(2, 2).unwrap(), 0.3, 4_000_000, 203);
    let cycle = worm_lambda_sigma(TorusSpec::new(1, 4).unwrap(), 0.3, 4_000_000, 204);
    let (ising_torus, n_torus) = ising_lengths_match(TorusSpec::new(2, 2).unwrap(), 0.3);
    let (ising_cycle, n_cycle) = ising_lengths_match(TorusSpec::new(1, 4).unwrap(), 0.3);
    let ok = len_tv < 0.01
        && g_tv < 0.01
        && lifted_len_tv < 0.01
        && lifted_g_tv < 0.01
        && torus < 3.0
        && cycle < 3.0
        && ising_torus
        && ising_cycle;
    outcome(
        ok,
        format!(
            "SAW TV(length) {len_tv:.4} TV(g) {g_tv:.4}, lifted {lifted_len_tv:.4}/{lifted_g_tv:.4}; \
             worm lambda ratios max {torus:.2} sigma (2x2), {cycle:.2} sigma (4-cycle); \
             |T| law over {n_torus}+{n_cycle} graphs {}",
            if ising_torus && ising_cycle { "exact" } else { "WRONG" }
        ),
    )
}

// ---------------------------------------------------------------------------------
// RLRW Green function against the kernel-sum oracle

/// `‖z‖₁ <= r` grouped into orbits of the hyperoctahedral group.
fn orbits(d: usize, r: i64) -> BTreeMap<Vec<i64>, Vec<Vec<i64>>> {
    let mut ball = vec![vec![]];
    for _ in 0..d {
        ball = ball
            .into_iter()
            .flat_map(|z: Vec<i64>| (-r..=r).map(move |x| [z.clone(), vec![x]].concat()))
            .filter(|z| z.iter().map(|x| x.abs()).sum::<i64>() <= r)
            .collect();
    }
    let mut out: BTreeMap<Vec<i64>, Vec<Vec<i64>>> = BTreeMap::new();
    for z in ball {
        let mut key: Vec<i64> = z.iter().map(|x| x.abs()).collect();
        key.sort_unstable();
        out.entry(key).or_default().push(z);
    }
    out
}

fn rlrw_oracle() -> Outcome {
    let cases = [
        (3usize, "geometric", LengthLaw::geometric(0.95).unwrap()),
        (3, "half-normal", LengthLaw::scaled_half_normal(20.0, 100_000).unwrap()),
        (5, "geometric", LengthLaw::geometric(0.95).unwrap()),
        (5, "half-normal", LengthLaw::scaled_half_normal(20.0, 100_000).unwrap()),
    ];
    let samples = 200_000;
    let results: Vec<(String, f64, f64, usize)> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (d, name, law))| {
            let spec = TorusSpec::new(*d, 64).unwrap();
            let mut rng = stream(301, i as u64);
            let mut h = TwoPointHistogram::new(*d, TwoPointMode::Visit);
            for _ in 0..samples {
                let (w, _) = rlrw_sample(law, &spec, &mut rng);
                h.record_visits(w.steps());
            }
            let mut worst: f64 = 0.0;
            let mut bound: f64 = 0.0;
            let orbits = orbits(*d, 4);
            for (rep, members) in &orbits {
                let o = oracle_rlrw_at(law, rep, 1e-7, 1 << 22).unwrap();
                bound = bound.max(o.truncation_bound);
                let e = h.estimate_sum(members).unwrap();
                let expected = o.value * members.len() as f64;
                worst = worst.max((e.value - expected).abs() / e.stderr);
            }
            (format!("d={d} {name}"), worst, bound, orbits.len())
        })
        .collect();
    let ok = results.iter().all(|(_, w, b, _)| *w < 3.0 && *b < 1e-6);
    let detail = results
        .iter()
        .map(|(n, w, b, k)| format!("{n}: max {w:.2} sigma over {k} orbits (bound {b:.0e})"))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(ok, detail)
}

// ---------------------------------------------------------------------------------
// Green function of the fixed-length walk against its diffusive limit

fn green_function_limit() -> Outcome {
    let d = 5;
    let l: f64 = 31.0;
    let a = l.powf(2.5);
    let n = a.floor() as u64;
    let mut lines = Vec::new();
    let mut ok = true;
    for xi in [0.5, 1.0, 2.0] {
        let k = (l.powf(1.25) * xi).floor() as i64;
        let z = [k, 0, 0, 0, 0];
        // N = n deterministic: g(z) = Σ_{m <= n} p_m(z)
        let g: f64 = srw_point_kernel(&z, n).iter().sum();
        let scaled = (k as f64).powi(3) * g;
        let xi_eff = k as f64 / (n as f64).sqrt();
        let rhs = prop1_rhs(&PointMass { at: 1.0 }, d, xi_eff).unwrap();
        let nominal = prop1_rhs(&PointMass { at: 1.0 }, d, xi).unwrap();
        let dev = (scaled / rhs - 1.0).abs();
        ok &= dev <= 0.03;
        lines.push(format!(
            "xi={xi} |z|={k}: {:.2}% at xi_L={xi_eff:.4} ({:.2}% at nominal xi)",
            100.0 * dev,
            100.0 * (scaled / nominal - 1.0).abs()
        ));
    }
    let mut worst: f64 = 0.0;
    for d in [3, 5, 6] {
        let closed = prefactor(d) * statrs::function::gamma::gamma(d as f64 / 2.0 - 1.0);
        let quad = prop1_rhs(&InfiniteLength, d, 0.7).unwrap();
        worst = worst.max((quad / closed - 1.0).abs()).max((srw_limit_constant(d) / closed - 1.0).abs());
    }
    ok &= worst < 1e-8;
    lines.push(format!("xi->0 constant d=3,5,6 relative error {worst:.1e}"));
    outcome(ok, lines.join("; "))
}

// ---------------------------------------------------------------------------------
// half-normal law

fn half_normal_law() -> Outcome {
    let n = 10_000_000;
    let mut rng = stream(401, 0);
    let mut acc = EcdfAccumulator::new();
    for _ in 0..n {
        let x: f64 = StandardNormal.sample(&mut rng);
        acc.push(x.abs());
    }
    let ks = acc.ks_distance(standardized_f).unwrap();
    // E|X| = sqrt(2/π), Var|X| = 1 - 2/π, computed here independently
    let phi_ref = (2.0 / std::f64::consts::PI).sqrt() / (1.0 - 2.0 / std::f64::consts::PI).sqrt();
    let (m, sd) = half_normal_moments();
    let err = (phi_constant() - phi_ref).abs().max((m / sd - phi_ref).abs());
    outcome(ks < 0.001 && err < 1e-12, format!("KS {ks:.2e} over {n} samples; |phi - E/sd| {err:.1e}"))
}

// ---------------------------------------------------------------------------------
// desk-scale reproductions

fn walk_length_universality() -> Outcome {
    let cfg = RunConfig::parse(
        "[simulation]\nmodel='saw'\ndimension=5\nsizes=[5, 7, 9, 11]\nmeasurements=10000\nburn_in_sweeps=200\nseed=501\n\
         observables={two_point=false, profile=false, ecdf=false, winding=false}",
        &[],
    )
    .unwrap();
    let sim = cfg.simulation().unwrap();
    let results = run_simulation(sim).unwrap();
    let points: Vec<ScalingPoint> = results
        .iter()
        .map(|r| ScalingPoint {
            size: f64::from(r.spec.period()),
            value: r.observables.length.mean(),
            stderr: r.observables.length.blocking_errors().unwrap().stderr,
        })
        .collect();
    let fit = fit_power_law(&points).unwrap();
    let (ratio, ratio_se) = results.last().unwrap().observables.length.mean_over_sd().unwrap();
    let phi = phi_constant();
    let rel = (ratio / phi - 1.0).abs();
    outcome(
        (fit.exponent - 2.5).abs() <= 0.3 && rel <= 0.15,
        format!(
            "E|S| exponent {:.3}({:.0}) chi2/dof {:.2}; ratio at L=11 {ratio:.4}({:.0}), {:.1}% from phi",
            fit.exponent,
            fit.exponent_stderr * 1e3,
            fit.chi2_per_dof,
            ratio_se * 1e4,
            100.0 * rel
        ),
    )
}

fn winding_proliferation() -> Outcome {
    let sizes: Vec<u32> = (5..=17).collect();
    let samples = 20_000;
    let per_size: Vec<(ScalingPoint, ScalingPoint)> = sizes
        .par_iter()
        .enumerate()
        .map(|(i, &l)| {
            let spec = TorusSpec::new(5, l).unwrap();
            let law = LengthLaw::complete_graph(&spec, spec.volume() - 1);
            let mut s = LoopErasedSampler::new(spec);
            let mut rng = stream(601, i as u64);
            let (mut r, mut x) = (MomentAccumulator::new(), MomentAccumulator::new());
            for _ in 0..samples {
                let w = s.sample(&law, &mut rng).unwrap();
                r.push(winding_number(&w, 0).unwrap() as f64);
                x.push(w.displacement()[0].unsigned_abs() as f64 / f64::from(l));
            }
            let point = |a: &MomentAccumulator| ScalingPoint {
                size: f64::from(l),
                value: a.mean(),
                stderr: a.blocking_errors().unwrap().stderr,
            };
            (point(&r), point(&x))
        })
        .collect();
    let (r, x): (Vec<_>, Vec<_>) = per_size.into_iter().unzip();
    let fit = fit_power_law(&r).unwrap();
    let unfloored = fit_power_law(&x).unwrap();
    outcome(
        (fit.exponent - 0.25).abs() <= 0.15,
        format!(
            "E(R) exponent {:.3}({:.0}) chi2/dof {:.2} over L=5..17; without the floor, E|x_1|/L exponent {:.3}({:.0})",
            fit.exponent,
            fit.exponent_stderr * 1e3,
            fit.chi2_per_dof,
            unfloored.exponent,
            unfloored.exponent_stderr * 1e3
        ),
    )
}

// ---------------------------------------------------------------------------------
// local-CLT error sums

fn lemma_diagnostics() -> Outcome {
    let norms = [8i64, 16, 32];
    let sums: Vec<_> = norms
        .par_iter()
        .map(|&r| {
            let z = [r, 0, 0];
            lemma_sums(&z, &srw_point_kernel(&z, 16 * (r * r) as u64), 0.1)
        })
        .collect();
    let llt: Vec<f64> = sums.iter().map(|s| s.llt_sum).collect();
    let diff: Vec<f64> = sums.iter().map(|s| s.pbar_diff_sum).collect();
    let slope = |v: &[f64]| {
        let xs: Vec<f64> = norms.iter().map(|&r| (r as f64).ln()).collect();
        let ys: Vec<f64> = v.iter().map(|y| y.ln()).collect();
        let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
        xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
    };
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let (a, b) = (slope(&llt), slope(&diff));
    let tail = sums.iter().map(|s| s.llt_tail_bound / s.llt_sum).fold(0.0, f64::max);
    outcome(
        decreasing(&llt) && decreasing(&diff) && a <= -2.5 && b <= -2.5,
        format!(
            "slopes {a:.3} (|p-pbar|) and {b:.3} (|pbar_n-pbar_n+1|); sums {:.3e} {:.3e} {:.3e}; \
             relative tail bound {tail:.1e}",
            llt[0], llt[1], llt[2]
        ),
    )
}

// ---------------------------------------------------------------------------------
// determinism

fn determinism() -> Outcome {
    let text = "[simulation]\nmodel='saw'\ndimension=3\nsizes=[3, 4]\nmeasurements=400\nchains=4\nseed=701\nfugacity=0.2";
    let cfg = RunConfig::parse(text, &[]).unwrap();
    let sim = cfg.simulation().unwrap();
    let render = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let t = tables(sim, &run_simulation(sim).unwrap()).unwrap();
            [&t.moments, &t.two_point, &t.ecdf, &t.profile]
                .iter()
                .map(|rows| rows_to_csv_string(rows).unwrap())
                .collect::<String>()
        })
    };
    let a = render(1);
    let b = render(1);
    let c = render(4);
    let dir = tempfile::tempdir().unwrap();
    let files = ["moments.csv", "two_point.csv", "ecdf.csv", "profile.csv"];
    let read_all = |p: &std::path::Path| files.iter().map(|f| std::fs::read(p.join(f)).unwrap()).collect::<Vec<_>>();
    unwrapped_walks::cli::simulate::simulate(&cfg, &dir.path().join("x")).unwrap();
    unwrapped_walks::cli::simulate::simulate(&cfg, &dir.path().join("y")).unwrap();
    let files_equal = read_all(&dir.path().join("x")) == read_all(&dir.path().join("y"));
    let rows = a.lines().count();
    outcome(
        a == b && a == c && files_equal,
        format!("{rows} CSV lines identical across repeats and 1 vs 4 threads; written files identical"),
    )
}
