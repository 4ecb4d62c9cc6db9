//! Worm algorithm for the Ising high-temperature graphs, tail pinned at the origin.
//!
//! The state is an edge set `A` whose odd-degree vertices are either none or exactly
//! `{0, x}`. The head sits at `x` (at the origin when there are no sources). A move
//! shifts the head across a uniformly chosen incident edge and toggles that edge,
//! accepted with probability `min(1, tanh(β)^{±1})`. The stationary law is
//! `∝ tanh(β)^{|A|}` on `∪_x C_x`.
//!
//! Edges are `(x, x + e_k)` with index `x·d + k`. On a period-2 torus the two edges
//! joining a pair of neighbours are distinct, so the graph is a multigraph.

use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{Space, Step, TorusSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeConfig {
    spec: TorusSpec,
    bits: Vec<u64>,
    occupied: u64,
    head: u64,
    head_coords: Vec<i64>,
}

impl EdgeConfig {
    pub fn empty(spec: TorusSpec) -> Self {
        let words = spec.edge_count().div_ceil(64) as usize;
        EdgeConfig {
            spec,
            bits: vec![0; words],
            occupied: 0,
            head: spec.origin_index(),
            head_coords: vec![0; spec.dim_usize()],
        }
    }

    /// Builds a configuration from edge indices, checking that its odd-degree vertices
    /// are `∅` or `{0, x}`.
    pub fn from_edges(spec: TorusSpec, edges: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut cfg = EdgeConfig::empty(spec);
        for e in edges {
            if e >= spec.edge_count() {
                return Err(Error::param(format!("edge {e} out of range")));
            }
            cfg.toggle(e);
        }
        let origin = spec.origin_index();
        let odd = cfg.odd_vertices();
        let head = match odd.as_slice() {
            [] => origin,
            [a, b] if *a == origin => *b,
            [a, b] if *b == origin => *a,
            _ => return Err(Error::param(format!("odd-degree vertices {odd:?} are not of the form {{0, x}}"))),
        };
        cfg.head = head;
        cfg.head_coords = spec.coords_of(head);
        Ok(cfg)
    }

    /// Configuration from a bitmask over edge indices, with the head already known.
    pub(crate) fn from_mask(spec: TorusSpec, mask: u64, head: u64) -> Self {
        debug_assert!(spec.edge_count() <= 64);
        EdgeConfig {
            spec,
            bits: vec![mask],
            occupied: u64::from(mask.count_ones()),
            head,
            head_coords: spec.coords_of(head),
        }
    }

    pub fn spec(&self) -> &TorusSpec {
        &self.spec
    }

    /// `|A|`.
    pub fn len(&self) -> u64 {
        self.occupied
    }

    pub fn is_empty(&self) -> bool {
        self.occupied == 0
    }

    /// Site index of the worm head (the origin when `A ∈ C_0`).
    pub fn head(&self) -> u64 {
        self.head
    }

    pub fn head_coords(&self) -> &[i64] {
        &self.head_coords
    }

    /// Odd-degree vertices, `∅` or `{0, head}` (sorted).
    pub fn sources(&self) -> Vec<u64> {
        let origin = self.spec.origin_index();
        if self.head == origin {
            Vec::new()
        } else {
            let mut s = vec![origin, self.head];
            s.sort_unstable();
            s
        }
    }

    #[inline]
    pub fn is_occupied(&self, edge: u64) -> bool {
        self.bits[(edge / 64) as usize] >> (edge % 64) & 1 == 1
    }

    fn toggle(&mut self, edge: u64) {
        let word = &mut self.bits[(edge / 64) as usize];
        *word ^= 1 << (edge % 64);
        if *word >> (edge % 64) & 1 == 1 {
            self.occupied += 1;
        } else {
            self.occupied -= 1;
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.spec.edge_count()).filter(|&e| self.is_occupied(e))
    }

    /// Endpoints `(x, x + e_k)` of an edge.
    pub fn endpoints(&self, edge: u64) -> (u64, u64) {
        let d = self.spec.dim_usize() as u64;
        let (x, axis) = (edge / d, (edge % d) as usize);
        let c = self.spec.coords_of(x);
        let (y, _) = self.spec.neighbor(x, c[axis], Step::new(axis, true), &self.spec.strides());
        (x, y)
    }

    /// Brute-force odd-degree vertex set, sorted.
    pub fn odd_vertices(&self) -> Vec<u64> {
        let mut odd = std::collections::BTreeSet::new();
        for e in self.edges() {
            let (x, y) = self.endpoints(e);
            for v in [x, y] {
                if !odd.remove(&v) {
                    odd.insert(v);
                }
            }
        }
        odd.into_iter().collect()
    }
}

/// Edge crossed by `step` from site `from` (axis coordinate `coord`), and the site and
/// axis coordinate reached.
#[inline]
pub(crate) fn edge_along(spec: &TorusSpec, strides: &[u64], from: u64, coord: i64, step: Step) -> (u64, u64, i64) {
    let d = spec.dim_usize() as u64;
    let (to, c) = spec.neighbor(from, coord, step, strides);
    let base = if step.is_positive() { from } else { to };
    (base * d + step.axis() as u64, to, c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WormMove {
    Added,
    Removed,
    Rejected,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WormStats {
    pub steps: u64,
    pub accepted: u64,
}

#[derive(Clone, Debug)]
pub struct WormSampler {
    config: EdgeConfig,
    strides: Vec<u64>,
    tanh_beta: f64,
    accept_add: f64,
    accept_remove: f64,
    stats: WormStats,
}

impl WormSampler {
    pub fn new(spec: TorusSpec, tanh_beta: f64) -> Result<Self> {
        if !(tanh_beta.is_finite() && tanh_beta > 0.0 && tanh_beta < 1.0) {
            return Err(Error::param(format!("tanh(beta) must lie in (0, 1), got {tanh_beta}")));
        }
        Ok(WormSampler {
            config: EdgeConfig::empty(spec),
            strides: spec.strides(),
            tanh_beta,
            accept_add: tanh_beta.min(1.0),
            accept_remove: (1.0 / tanh_beta).min(1.0),
            stats: WormStats::default(),
        })
    }

    /// Overrides the Metropolis weight used for moves while keeping the nominal
    /// `tanh(β)`. Only meant for checking that verification catches a wrong ratio.
    #[doc(hidden)]
    pub fn with_move_weight(mut self, weight: f64) -> Self {
        self.accept_add = weight.min(1.0);
        self.accept_remove = (1.0 / weight).min(1.0);
        self
    }

    pub fn config(&self) -> &EdgeConfig {
        &self.config
    }

    pub fn tanh_beta(&self) -> f64 {
        self.tanh_beta
    }

    pub fn stats(&self) -> WormStats {
        self.stats
    }

    /// One head move.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> WormMove {
        self.stats.steps += 1;
        let spec = self.config.spec;
        let step = Step::from_index(rng.random_range(0..spec.dim().directions()));
        let cfg = &mut self.config;
        let (edge, to, coord) = edge_along(&spec, &self.strides, cfg.head, cfg.head_coords[step.axis()], step);
        let removing = cfg.is_occupied(edge);
        let p = if removing { self.accept_remove } else { self.accept_add };
        if p < 1.0 && rng.random::<f64>() >= p {
            return WormMove::Rejected;
        }
        cfg.toggle(edge);
        cfg.head = to;
        cfg.head_coords[step.axis()] = coord;
        self.stats.accepted += 1;
        if removing {
            WormMove::Removed
        } else {
            WormMove::Added
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn first_move_from_empty_config_is_accepted_with_tanh_beta() {
        let spec = TorusSpec::new(2, 4).unwrap();
        let t = 0.3;
        let mut rng = stream(5, 0);
        let n = 200_000;
        let mut added = 0;
        for _ in 0..n {
            let mut w = WormSampler::new(spec, t).unwrap();
            if w.step(&mut rng) == WormMove::Added {
                added += 1;
                assert_eq!(w.config().len(), 1);
                assert_ne!(w.config().head(), spec.origin_index());
            }
        }
        let rate = added as f64 / n as f64;
        assert!((rate - t).abs() < 4.0 * (t * (1.0 - t) / n as f64).sqrt(), "rate {rate}");
    }

    #[test]
    fn sources_invariant_holds_along_chain() {
        for (d, l) in [(2, 2), (2, 3), (3, 3), (1, 4)] {
            let spec = TorusSpec::new(d, l).unwrap();
            let mut w = WormSampler::new(spec, 0.4).unwrap();
            let mut rng = stream(9, d as u64);
            for i in 0..5_000 {
                w.step(&mut rng);
                if i % 13 == 0 {
                    assert_eq!(w.config().odd_vertices(), w.config().sources());
                    assert_eq!(w.config().edges().count() as u64, w.config().len());
                    assert_eq!(spec.coords_of(w.config().head()), w.config().head_coords());
                }
            }
        }
    }

    #[test]
    fn period_two_has_parallel_edges() {
        let spec = TorusSpec::new(1, 2).unwrap();
        let cfg = EdgeConfig::from_edges(spec, [0, 1]).unwrap();
        assert_eq!(cfg.endpoints(0), (0, 1));
        assert_eq!(cfg.endpoints(1), (1, 0));
        assert!(cfg.sources().is_empty());
        let single = EdgeConfig::from_edges(spec, [1]).unwrap();
        assert_eq!(single.sources().len(), 2);
    }

    #[test]
    fn from_edges_rejects_bad_sources() {
        let spec = TorusSpec::new(2, 3).unwrap();
        // a path not touching the origin has two odd vertices other than 0
        let far = spec.index_of(&[1, 1]);
        let e = far * 2;
        assert!(EdgeConfig::from_edges(spec, [e]).is_err());
    }

    #[test]
    fn rejects_bad_tanh_beta() {
        let spec = TorusSpec::new(2, 3).unwrap();
        assert!(WormSampler::new(spec, 0.0).is_err());
        assert!(WormSampler::new(spec, 1.0).is_err());
    }
}
