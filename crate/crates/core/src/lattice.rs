//! Hypercubic lattices, discrete tori and the wrapping bijection between their walks.
//!
//! Torus vertices are identified with `[-L/2, L/2)^d ∩ Z^d`, so each coordinate lives in
//! `lo..=hi` with `lo = -(L div 2)`. A step that would leave that box re-enters from the
//! opposite face (it moves by `(1 - L)` times the unit step instead).
//!
//! Walks are stored as step sequences together with their endpoint and their
//! `Z^d` displacement (the endpoint of the unwrapped walk), both maintained
//! incrementally. In that representation wrapping and unwrapping only change the
//! space tag, and winding numbers are read off the displacement in O(1).

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Spatial dimension, `d >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dim(usize);

impl Dim {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 || d > 127 {
            return Err(Error::param(format!("dimension must be in 1..=127, got {d}")));
        }
        Ok(Dim(d))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Number of unit steps `±e_1, ..., ±e_d`.
    pub fn directions(self) -> usize {
        2 * self.0
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A unit step `±e_axis`, encoded as `2 * axis + (negative as u8)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step(u8);

impl Step {
    pub fn new(axis: usize, positive: bool) -> Self {
        debug_assert!(axis < 128);
        Step((2 * axis + usize::from(!positive)) as u8)
    }

    /// Step with direction index `0..2d`.
    pub fn from_index(index: usize) -> Self {
        debug_assert!(index < 256);
        Step(index as u8)
    }

    pub fn index(self) -> usize {
        usize::from(self.0)
    }

    pub fn axis(self) -> usize {
        usize::from(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn sign(self) -> i64 {
        if self.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn reversed(self) -> Self {
        Step(self.0 ^ 1)
    }

    pub fn all(dim: Dim) -> impl Iterator<Item = Step> {
        (0..dim.directions()).map(Step::from_index)
    }
}

/// Geometry a walk lives in.
pub trait Space: Clone + fmt::Debug + PartialEq {
    fn dim(&self) -> Dim;

    /// Coordinate reached from `coord` by a unit move of sign `sign` along one axis.
    fn advance(&self, coord: i64, sign: i64) -> i64;
}

/// The infinite lattice `Z^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: Dim,
}

impl Lattice {
    pub fn new(dim: Dim) -> Self {
        Lattice { dim }
    }
}

impl Space for Lattice {
    fn dim(&self) -> Dim {
        self.dim
    }

    fn advance(&self, coord: i64, sign: i64) -> i64 {
        coord + sign
    }
}

/// The discrete torus of period `L` in dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusSpec {
    dim: Dim,
    period: u32,
}

impl TorusSpec {
    /// Requires `L >= 2` and `L^d < 2^63`.
    pub fn new(d: usize, period: u32) -> Result<Self> {
        let dim = Dim::new(d)?;
        if period < 2 {
            return Err(Error::param(format!("torus period must be at least 2, got {period}")));
        }
        let spec = TorusSpec { dim, period };
        match u64::from(period).checked_pow(d as u32) {
            Some(v) if v < (1 << 63) => Ok(spec),
            _ => Err(Error::param(format!("torus volume {period}^{d} overflows"))),
        }
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn period_i64(&self) -> i64 {
        i64::from(self.period)
    }

    pub fn dim_usize(&self) -> usize {
        self.dim.get()
    }

    /// Number of vertices, `L^d`.
    pub fn volume(&self) -> u64 {
        u64::from(self.period).pow(self.dim.get() as u32)
    }

    /// Number of nearest-neighbour edges, `d L^d` (parallel edges counted separately when `L = 2`).
    pub fn edge_count(&self) -> u64 {
        self.volume() * self.dim.get() as u64
    }

    /// Smallest coordinate value, `-(L div 2)`.
    pub fn lo(&self) -> i64 {
        -(self.period_i64() / 2)
    }

    /// Largest coordinate value.
    pub fn hi(&self) -> i64 {
        self.lo() + self.period_i64() - 1
    }

    pub fn contains(&self, site: &[i64]) -> bool {
        let (lo, hi) = (self.lo(), self.hi());
        site.len() == self.dim.get() && site.iter().all(|&x| (lo..=hi).contains(&x))
    }

    /// Representative of `x` modulo `L` in `[lo, hi]`.
    pub fn reduce(&self, x: i64) -> i64 {
        let l = self.period_i64();
        (x - self.lo()).rem_euclid(l) + self.lo()
    }

    pub fn reduce_site(&self, z: &[i64]) -> Vec<i64> {
        z.iter().map(|&x| self.reduce(x)).collect()
    }

    /// Index stride of `axis`; the first axis is the most significant digit so that
    /// index order coincides with lexicographic order on coordinates.
    pub fn stride(&self, axis: usize) -> u64 {
        u64::from(self.period).pow((self.dim.get() - 1 - axis) as u32)
    }

    pub fn strides(&self) -> Vec<u64> {
        (0..self.dim.get()).map(|a| self.stride(a)).collect()
    }

    /// Dense index of a torus site, in lexicographic order.
    pub fn index_of(&self, site: &[i64]) -> u64 {
        debug_assert!(self.contains(site), "{site:?} not on torus {self:?}");
        let l = u64::from(self.period);
        site.iter().fold(0u64, |acc, &x| acc * l + (x - self.lo()) as u64)
    }

    pub fn coords_into(&self, mut index: u64, out: &mut [i64]) {
        let l = u64::from(self.period);
        for slot in out.iter_mut().rev() {
            *slot = (index % l) as i64 + self.lo();
            index /= l;
        }
    }

    pub fn coords_of(&self, index: u64) -> Vec<i64> {
        let mut out = vec![0; self.dim.get()];
        self.coords_into(index, &mut out);
        out
    }

    pub fn origin_index(&self) -> u64 {
        self.index_of(&vec![0; self.dim.get()])
    }

    /// Index and new axis coordinate after moving from `index` (whose coordinate along
    /// `step.axis()` is `coord`) by `step`, with `strides` from [`TorusSpec::strides`].
    #[inline]
    pub fn neighbor(&self, index: u64, coord: i64, step: Step, strides: &[u64]) -> (u64, i64) {
        let next = self.advance(coord, step.sign());
        let delta = (next - coord) * strides[step.axis()] as i64;
        ((index as i64 + delta) as u64, next)
    }
}

impl Space for TorusSpec {
    fn dim(&self) -> Dim {
        self.dim
    }

    /// The two-case wrapping rule: `x + s` if that stays in the box, else `x + (1 - L) s`.
    #[inline]
    fn advance(&self, coord: i64, sign: i64) -> i64 {
        let next = coord + sign;
        if next < self.lo() || next > self.hi() {
            coord + (1 - self.period_i64()) * sign
        } else {
            next
        }
    }
}

/// A walk rooted at the origin, stored as a step sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeWalk<S: Space> {
    space: S,
    steps: Vec<Step>,
    end: Vec<i64>,
    displacement: Vec<i64>,
}

pub type ZWalk = LatticeWalk<Lattice>;
pub type TorusWalk = LatticeWalk<TorusSpec>;

impl<S: Space> LatticeWalk<S> {
    /// The zero-length walk at the origin.
    pub fn root(space: S) -> Self {
        let d = space.dim().get();
        LatticeWalk { space, steps: Vec::new(), end: vec![0; d], displacement: vec![0; d] }
    }

    pub fn from_steps(space: S, steps: impl IntoIterator<Item = Step>) -> Self {
        let mut walk = Self::root(space);
        for s in steps {
            walk.push(s);
        }
        walk
    }

    /// Builds a walk from its site sequence, rejecting anything that is not a chain of
    /// unit steps starting at the origin.
    pub fn from_sites(space: S, sites: &[Vec<i64>]) -> Result<Self> {
        let d = space.dim().get();
        let mut walk = Self::root(space);
        let Some(first) = sites.first() else {
            return Err(Error::MalformedWalk { index: 0, reason: "empty site sequence".into() });
        };
        if first.len() != d || first.iter().any(|&x| x != 0) {
            return Err(Error::MalformedWalk { index: 0, reason: format!("walk must start at the origin, got {first:?}") });
        }
        for (i, pair) in sites.windows(2).enumerate() {
            let step = walk.decode_step(&pair[0], &pair[1]).map_err(|reason| Error::MalformedWalk { index: i, reason })?;
            walk.push(step);
        }
        Ok(walk)
    }

    fn decode_step(&self, from: &[i64], to: &[i64]) -> std::result::Result<Step, String> {
        let d = self.space.dim().get();
        if to.len() != d {
            return Err(format!("site {to:?} has wrong dimension"));
        }
        let changed: Vec<usize> = (0..d).filter(|&a| from[a] != to[a]).collect();
        let [axis] = changed[..] else {
            return Err(format!("{from:?} -> {to:?} is not a unit step"));
        };
        let plus = self.space.advance(from[axis], 1) == to[axis];
        let minus = self.space.advance(from[axis], -1) == to[axis];
        match (plus, minus) {
            (true, false) => Ok(Step::new(axis, true)),
            (false, true) => Ok(Step::new(axis, false)),
            (true, true) => Err(format!("{from:?} -> {to:?} is ambiguous (parallel edges); build the walk from steps")),
            (false, false) => Err(format!("{from:?} -> {to:?} is not a unit step")),
        }
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim().get()
    }

    /// Number of steps `|ω|`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Final site `e(ω)`.
    pub fn endpoint(&self) -> &[i64] {
        &self.end
    }

    /// Sum of the steps in `Z^d`: the endpoint of the unwrapped walk.
    pub fn displacement(&self) -> &[i64] {
        &self.displacement
    }

    pub fn push(&mut self, step: Step) {
        let a = step.axis();
        self.end[a] = self.space.advance(self.end[a], step.sign());
        self.displacement[a] += step.sign();
        self.steps.push(step);
    }

    pub fn pop(&mut self) -> Option<Step> {
        let step = self.steps.pop()?;
        let a = step.axis();
        self.end[a] = self.space.advance(self.end[a], -step.sign());
        self.displacement[a] -= step.sign();
        Some(step)
    }

    /// Materializes `ω_0, ..., ω_n`.
    pub fn sites(&self) -> Vec<Vec<i64>> {
        let mut cur = vec![0; self.dim()];
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(cur.clone());
        for s in &self.steps {
            cur[s.axis()] = self.space.advance(cur[s.axis()], s.sign());
            out.push(cur.clone());
        }
        out
    }

    /// Vertex self-avoidance.
    pub fn is_self_avoiding(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.len() + 1);
        self.sites().into_iter().all(|s| seen.insert(s))
    }

    /// True when `other` is a prefix of `self` (`self ⊒ other`).
    pub fn extends(&self, other: &Self) -> bool {
        self.steps.starts_with(&other.steps)
    }
}

impl ZWalk {
    pub fn root_in(dim: Dim) -> Self {
        Self::root(Lattice::new(dim))
    }
}

impl TorusWalk {
    /// The torus of this walk.
    pub fn torus(&self) -> &TorusSpec {
        &self.space
    }
}

/// The wrapping bijection: maps a `Z^d` walk onto the torus.
///
/// Panics if the dimensions differ.
pub fn wrap(zwalk: &ZWalk, spec: &TorusSpec) -> TorusWalk {
    assert_eq!(zwalk.dim(), spec.dim_usize(), "wrap: dimension mismatch");
    TorusWalk::from_steps(*spec, zwalk.steps.iter().copied())
}

/// Inverse of [`wrap`].
pub fn unwrap(twalk: &TorusWalk) -> ZWalk {
    ZWalk {
        space: Lattice::new(twalk.space.dim),
        steps: twalk.steps.clone(),
        end: twalk.displacement.clone(),
        displacement: twalk.displacement.clone(),
    }
}

/// Number of windings along `axis`: `floor(|(e∘W⁻¹(ω))_axis| / L)`.
pub fn winding_number(twalk: &TorusWalk, axis: usize) -> Result<u64> {
    let d = twalk.dim();
    if axis >= d {
        return Err(Error::AxisOutOfRange { axis, dim: d });
    }
    Ok(twalk.displacement[axis].unsigned_abs() / u64::from(twalk.space.period))
}

/// `n ↔ z`: true iff `n + ‖z‖₁` is even.
pub fn parity(n: u64, z: &[i64]) -> bool {
    (n + l1_norm(z)) % 2 == 0
}

pub fn l1_norm(z: &[i64]) -> u64 {
    z.iter().map(|x| x.unsigned_abs()).sum()
}

pub fn euclidean_norm(z: &[i64]) -> f64 {
    z.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt()
}

pub fn unit_vector(d: usize, axis: usize, k: i64) -> Vec<i64> {
    let mut z = vec![0; d];
    z[axis] = k;
    z
}
