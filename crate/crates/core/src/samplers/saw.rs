//! Berretti–Sokal chain for the variable-length SAW ensemble on the torus.
//!
//! Stationary law: `π(ω) ∝ J^{|ω|}` over self-avoiding walks rooted at the origin.
//! An append of a uniformly chosen step is accepted with probability `min(1, 2dJ)`, a
//! deletion of the last step with `min(1, 1/(2dJ))`.
//!
//! The reversible chain proposes either move with probability 1/2. The lifted chain
//! carries a growth direction: it keeps proposing appends (or deletions) until one is
//! rejected and then reverses. Both have the same stationary marginal on walks.

use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{Space, Step, TorusSpec, TorusWalk};
use crate::site_table::SiteTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SawMove {
    Appended,
    Deleted,
    Rejected,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SawStats {
    pub steps: u64,
    pub appends: u64,
    pub deletes: u64,
}

impl SawStats {
    pub fn acceptance_rate(&self) -> f64 {
        (self.appends + self.deletes) as f64 / self.steps.max(1) as f64
    }
}

#[derive(Clone, Debug)]
pub struct SawSampler {
    spec: TorusSpec,
    strides: Vec<u64>,
    fugacity: f64,
    accept_append: f64,
    accept_delete: f64,
    lifted: bool,
    growing: bool,
    walk: TorusWalk,
    sites: Vec<u64>,
    occupied: SiteTable,
    stats: SawStats,
}

impl SawSampler {
    pub fn new(spec: TorusSpec, fugacity: f64, lifted: bool) -> Result<Self> {
        if !(fugacity.is_finite() && fugacity > 0.0) {
            return Err(Error::param(format!("fugacity must be positive, got {fugacity}")));
        }
        let ratio = spec.dim().directions() as f64 * fugacity;
        let origin = spec.origin_index();
        let mut occupied = SiteTable::new(spec.volume());
        occupied.insert(origin, 0);
        Ok(SawSampler {
            spec,
            strides: spec.strides(),
            fugacity,
            accept_append: ratio.min(1.0),
            accept_delete: (1.0 / ratio).min(1.0),
            lifted,
            growing: true,
            walk: TorusWalk::root(spec),
            sites: vec![origin],
            occupied,
            stats: SawStats::default(),
        })
    }

    pub fn walk(&self) -> &TorusWalk {
        &self.walk
    }

    pub fn fugacity(&self) -> f64 {
        self.fugacity
    }

    pub fn is_lifted(&self) -> bool {
        self.lifted
    }

    pub fn stats(&self) -> SawStats {
        self.stats
    }

    /// Acceptance probabilities `(append, delete)`.
    pub fn acceptance(&self) -> (f64, f64) {
        (self.accept_append, self.accept_delete)
    }

    /// One transition of the chain.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> SawMove {
        self.stats.steps += 1;
        let grow = if self.lifted { self.growing } else { rng.random::<bool>() };
        let mv = if grow { self.try_append(rng) } else { self.try_delete(rng) };
        if self.lifted && mv == SawMove::Rejected {
            self.growing = !self.growing;
        }
        mv
    }

    fn try_append<R: Rng + ?Sized>(&mut self, rng: &mut R) -> SawMove {
        let d2 = self.spec.dim().directions();
        let step = Step::from_index(rng.random_range(0..d2));
        let here = *self.sites.last().expect("walk has a root");
        let coord = self.walk.endpoint()[step.axis()];
        let (next, _) = self.spec.neighbor(here, coord, step, &self.strides);
        if self.occupied.get(next).is_some() {
            return SawMove::Rejected;
        }
        if self.accept_append < 1.0 && rng.random::<f64>() >= self.accept_append {
            return SawMove::Rejected;
        }
        self.occupied.insert(next, self.sites.len() as u32);
        self.sites.push(next);
        self.walk.push(step);
        self.stats.appends += 1;
        SawMove::Appended
    }

    fn try_delete<R: Rng + ?Sized>(&mut self, rng: &mut R) -> SawMove {
        if self.walk.is_empty() {
            return SawMove::Rejected;
        }
        if self.accept_delete < 1.0 && rng.random::<f64>() >= self.accept_delete {
            return SawMove::Rejected;
        }
        let last = self.sites.pop().expect("non-empty walk");
        self.occupied.remove(last);
        self.walk.pop();
        self.stats.deletes += 1;
        SawMove::Deleted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn deleting_from_empty_walk_is_rejected() {
        let spec = TorusSpec::new(2, 3).unwrap();
        let mut s = SawSampler::new(spec, 0.3, false).unwrap();
        let mut rng = stream(0, 0);
        assert_eq!(s.try_delete(&mut rng), SawMove::Rejected);
        assert!(s.walk().is_empty());
    }

    #[test]
    fn detailed_balance_of_acceptance_ratios() {
        // π(ω) q(ω→ω') a₊ = π(ω') q(ω'→ω) a₋ with q₊ = 1/(2·2d), q₋ = 1/2.
        for d in 1..=6 {
            for &j in &[0.01, 0.1131, 0.3, 1.0, 4.0] {
                let spec = TorusSpec::new(d, 3).unwrap();
                let s = SawSampler::new(spec, j, false).unwrap();
                let (a_plus, a_minus) = s.acceptance();
                let q_plus = 0.5 / (2 * d) as f64;
                let lhs = q_plus * a_plus;
                let rhs = j * 0.5 * a_minus;
                assert!((lhs - rhs).abs() <= 1e-15 * lhs.max(rhs), "d={d} J={j}");
            }
        }
    }

    #[test]
    fn chain_stays_self_avoiding() {
        for lifted in [false, true] {
            let spec = TorusSpec::new(2, 4).unwrap();
            let mut s = SawSampler::new(spec, 0.45, lifted).unwrap();
            let mut rng = stream(11, u64::from(lifted));
            for i in 0..20_000 {
                s.step(&mut rng);
                if i % 97 == 0 {
                    assert!(s.walk().is_self_avoiding());
                    assert_eq!(s.sites.len(), s.walk().len() + 1);
                    assert_eq!(*s.sites.last().unwrap(), spec.index_of(s.walk().endpoint()));
                }
            }
            assert!(s.stats().appends > 0 && s.stats().deletes > 0);
        }
    }

    #[test]
    fn rejects_non_positive_fugacity() {
        let spec = TorusSpec::new(2, 3).unwrap();
        assert!(SawSampler::new(spec, 0.0, false).is_err());
        assert!(SawSampler::new(spec, f64::NAN, true).is_err());
    }
}
