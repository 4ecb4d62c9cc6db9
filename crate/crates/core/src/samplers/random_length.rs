//! Direct samplers for the random-length random walk (RLRW) and its chronological
//! loop erasure (RLRW stopped when the erased path has length `N`, RLLERW).

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::lattice::{unwrap, Space, Step, TorusSpec, TorusWalk, ZWalk};
use crate::site_table::SiteTable;

use super::length_law::{round_capped, LengthLaw};

/// Draws `N` from `law` and then `N` uniform steps. Returns the torus walk and its
/// unwrapped counterpart.
pub fn rlrw_sample<R: Rng + ?Sized>(law: &LengthLaw, spec: &TorusSpec, rng: &mut R) -> (TorusWalk, ZWalk) {
    let n = law.sample(rng);
    let d2 = spec.dim().directions();
    let mut walk = TorusWalk::root(*spec);
    for _ in 0..n {
        walk.push(Step::from_index(rng.random_range(0..d2)));
    }
    let z = unwrap(&walk);
    (walk, z)
}

/// `round(sqrt(L^d) |X|)` for standard normal `X`, clamped to `[0, L^d]`.
pub fn sample_complete_graph_length<R: Rng + ?Sized>(spec: &TorusSpec, rng: &mut R) -> u64 {
    let x: f64 = StandardNormal.sample(rng);
    round_capped((spec.volume() as f64).sqrt() * x.abs(), spec.volume())
}

/// Reusable loop-erasure state for one torus.
#[derive(Clone, Debug)]
pub struct LoopErasedSampler {
    spec: TorusSpec,
    strides: Vec<u64>,
    positions: SiteTable,
    path: Vec<u64>,
    walk: TorusWalk,
    step_budget: u64,
    raw_steps: u64,
}

impl LoopErasedSampler {
    pub fn new(spec: TorusSpec) -> Self {
        let budget = 1_000_000u64.max(spec.volume().saturating_mul(1000));
        LoopErasedSampler {
            spec,
            strides: spec.strides(),
            positions: SiteTable::new(spec.volume()),
            path: Vec::new(),
            walk: TorusWalk::root(spec),
            step_budget: budget,
            raw_steps: 0,
        }
    }

    /// Maximum number of random-walk steps per sample before giving up.
    pub fn with_step_budget(mut self, budget: u64) -> Self {
        self.step_budget = budget;
        self
    }

    /// Raw (pre-erasure) steps taken by the last sample.
    pub fn raw_steps(&self) -> u64 {
        self.raw_steps
    }

    /// Loop erasure of a wrapped simple random walk, stopped the first time the erased
    /// path has `target` steps.
    pub fn sample_length<R: Rng + ?Sized>(&mut self, target: u64, rng: &mut R) -> Result<TorusWalk> {
        if target >= self.spec.volume() {
            return Err(Error::param(format!(
                "erased length {target} exceeds the longest self-avoiding walk on {} sites",
                self.spec.volume()
            )));
        }
        for &s in &self.path {
            self.positions.remove(s);
        }
        self.path.clear();
        self.walk = TorusWalk::root(self.spec);
        let origin = self.spec.origin_index();
        self.path.push(origin);
        self.positions.insert(origin, 0);
        self.raw_steps = 0;

        let d2 = self.spec.dim().directions();
        while (self.walk.len() as u64) < target {
            if self.raw_steps == self.step_budget {
                return Err(Error::StepBudgetExceeded {
                    budget: self.step_budget,
                    reached: self.walk.len() as u64,
                    target,
                });
            }
            self.raw_steps += 1;
            let step = Step::from_index(rng.random_range(0..d2));
            let here = *self.path.last().expect("path has a root");
            let (next, _) = self.spec.neighbor(here, self.walk.endpoint()[step.axis()], step, &self.strides);
            match self.positions.get(next) {
                Some(k) => {
                    let keep = k as usize + 1;
                    for &s in &self.path[keep..] {
                        self.positions.remove(s);
                    }
                    self.path.truncate(keep);
                    while self.walk.len() > k as usize {
                        self.walk.pop();
                    }
                }
                None => {
                    self.positions.insert(next, self.path.len() as u32);
                    self.path.push(next);
                    self.walk.push(step);
                }
            }
        }
        Ok(self.walk.clone())
    }

    /// One RLLERW sample with `N` drawn from `law`.
    pub fn sample<R: Rng + ?Sized>(&mut self, law: &LengthLaw, rng: &mut R) -> Result<TorusWalk> {
        let n = law.sample(rng);
        self.sample_length(n, rng)
    }
}

/// One RLLERW sample. The law must be bounded by `L^d - 1`, the length of the longest
/// self-avoiding walk on the torus.
pub fn rllerw_sample<R: Rng + ?Sized>(law: &LengthLaw, spec: &TorusSpec, rng: &mut R) -> Result<TorusWalk> {
    match law.max() {
        Some(m) if m < spec.volume() => LoopErasedSampler::new(*spec).sample(law, rng),
        _ => Err(Error::param(format!("RLLERW length law must be bounded by {}", spec.volume() - 1))),
    }
}
