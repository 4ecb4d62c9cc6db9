//! The Ising walk `T(A)` of a sourced high-temperature graph.
//!
//! For `A ∈ C_0` the walk is the single site at the origin. For `A ∈ C_x` it starts at
//! the origin and repeatedly crosses the untraversed occupied edge leading to the
//! smallest neighbour, stopping on arrival at `x`. Parity guarantees the greedy trail
//! cannot get stuck first. Vertices are ordered lexicographically by coordinates,
//! which is the order of their dense indices; parallel edges (period 2) are ordered by
//! edge index.

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::lattice::{Space, Step, TorusSpec, TorusWalk};

use super::worm::{edge_along, EdgeConfig};

#[derive(Clone, Debug, Default)]
pub struct IsingWalkExtractor {
    traversed: FxHashSet<u64>,
    strides: Vec<u64>,
}

impl IsingWalkExtractor {
    pub fn new() -> Self {
        Self::default()
    }

    /// `T(A)` under the lexicographic vertex order.
    pub fn extract(&mut self, config: &EdgeConfig) -> Result<TorusWalk> {
        self.extract_with_order(config, |v| v)
    }

    /// `T(A)` under the vertex order given by `rank` (smaller rank first).
    pub fn extract_with_order(&mut self, config: &EdgeConfig, rank: impl Fn(u64) -> u64) -> Result<TorusWalk> {
        let spec: TorusSpec = *config.spec();
        if self.strides.len() != spec.dim_usize() {
            self.strides = spec.strides();
        } else {
            self.strides.copy_from_slice(&spec.strides());
        }
        let mut walk = TorusWalk::root(spec);
        let target = config.head();
        let mut here = spec.origin_index();
        if target == here {
            return Ok(walk);
        }
        self.traversed.clear();
        loop {
            let mut best: Option<((u64, u64), Step, u64)> = None;
            for step in Step::all(spec.dim()) {
                let coord = walk.endpoint()[step.axis()];
                let (edge, to, _) = edge_along(&spec, &self.strides, here, coord, step);
                if !config.is_occupied(edge) || self.traversed.contains(&edge) {
                    continue;
                }
                let key = (rank(to), edge);
                if best.is_none_or(|(k, _, _)| key < k) {
                    best = Some((key, step, to));
                }
            }
            let Some(((_, edge), step, to)) = best else {
                return Err(Error::Invariant(format!(
                    "Ising walk stalled at site {:?} after {} steps before reaching {:?}",
                    walk.endpoint(),
                    walk.len(),
                    spec.coords_of(target)
                )));
            };
            self.traversed.insert(edge);
            walk.push(step);
            here = to;
            if here == target {
                break;
            }
        }
        debug_assert!(is_edge_self_avoiding(&walk));
        Ok(walk)
    }
}

/// `T(A)` with a fresh extractor.
pub fn extract_ising_walk(config: &EdgeConfig) -> Result<TorusWalk> {
    IsingWalkExtractor::new().extract(config)
}

/// True when no edge is crossed twice.
pub fn is_edge_self_avoiding(walk: &TorusWalk) -> bool {
    let spec = *walk.torus();
    let strides = spec.strides();
    let mut here = spec.origin_index();
    let mut coords = vec![0i64; spec.dim_usize()];
    let mut seen = FxHashSet::default();
    for &step in walk.steps() {
        let (edge, to, c) = edge_along(&spec, &strides, here, coords[step.axis()], step);
        if !seen.insert(edge) {
            return false;
        }
        here = to;
        coords[step.axis()] = c;
    }
    true
}
