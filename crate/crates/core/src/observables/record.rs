//! Per-walk measurements accumulated over a chain.

use serde::Serialize;

use super::ecdf::EcdfAccumulator;
use super::moments::MomentAccumulator;
use super::two_point::{TwoPointHistogram, TwoPointMode};
use crate::error::Result;
use crate::lattice::{TorusSpec, TorusWalk};

/// Winding numbers of one walk, one entry per axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindingRecord {
    pub length: u64,
    pub windings: Vec<u64>,
}

impl WindingRecord {
    pub fn of(walk: &TorusWalk) -> Self {
        let l = u64::from(walk.torus().period());
        WindingRecord {
            length: walk.len() as u64,
            windings: walk.displacement().iter().map(|x| x.unsigned_abs() / l).collect(),
        }
    }
}

/// Length moments and ECDF, per-axis winding moments, and the unwrapped two-point
/// histogram of every recorded walk.
///
/// Recording costs O(d) per walk in endpoint mode and O(|ω|) in visit mode.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkObservables {
    spec: TorusSpec,
    pub length: MomentAccumulator,
    pub length_ecdf: EcdfAccumulator,
    pub winding: Vec<MomentAccumulator>,
    pub two_point: TwoPointHistogram,
    record_two_point: bool,
}

impl WalkObservables {
    pub fn new(spec: TorusSpec, mode: TwoPointMode) -> Self {
        let d = spec.dim_usize();
        WalkObservables {
            spec,
            length: MomentAccumulator::new(),
            length_ecdf: EcdfAccumulator::new(),
            winding: vec![MomentAccumulator::new(); d],
            two_point: TwoPointHistogram::new(d, mode),
            record_two_point: true,
        }
    }

    /// Leaves the two-point histogram empty. Visit-mode histograms grow with the
    /// number of distinct displacements seen, which dominates memory for long walks.
    pub fn without_two_point(mut self) -> Self {
        self.record_two_point = false;
        self
    }

    pub fn records_two_point(&self) -> bool {
        self.record_two_point
    }

    pub fn spec(&self) -> &TorusSpec {
        &self.spec
    }

    pub fn record_walk(&mut self, walk: &TorusWalk) {
        debug_assert_eq!(walk.torus(), &self.spec);
        let n = walk.len() as f64;
        self.length.push(n);
        self.length_ecdf.push(n);
        let l = u64::from(self.spec.period());
        for (acc, x) in self.winding.iter_mut().zip(walk.displacement()) {
            acc.push((x.unsigned_abs() / l) as f64);
        }
        if !self.record_two_point {
            return;
        }
        match self.two_point.mode() {
            TwoPointMode::Endpoint => self.two_point.record_endpoint_of(walk.displacement(), walk.is_empty()),
            TwoPointMode::Visit => self.two_point.record_visits(walk.steps()),
        }
    }

    /// Appends `other`'s samples after this accumulator's.
    pub fn merge(&mut self, other: &WalkObservables) -> Result<()> {
        if other.spec != self.spec {
            return Err(crate::error::Error::param("cannot merge observables of different tori"));
        }
        self.length.merge(&other.length);
        self.length_ecdf.merge(&other.length_ecdf);
        for (a, b) in self.winding.iter_mut().zip(&other.winding) {
            a.merge(b);
        }
        self.two_point.merge(&other.two_point)
    }

    pub fn samples(&self) -> u64 {
        self.length.count()
    }
}
