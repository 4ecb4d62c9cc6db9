//! Exact rational expectations for random-length walks on tiny tori, and the
//! walk-sum identities that express their two-point functions through walk weights.

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Space, Step, TorusSpec, TorusWalk};

pub type Rational = BigRational;

/// Largest number of walks summed by the definition-level identities.
pub const WALK_SUM_LIMIT: u64 = 5_000_000;

/// Largest transient state space solved by [`exact_rllerw_law`].
pub const RLLERW_STATE_LIMIT: usize = 4000;

fn rat(n: u64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `P(N >= n)` for `n = 0..=len` from point probabilities `P(N = n)`.
pub fn survival_from_probabilities(probs: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); probs.len()];
    let mut acc = Rational::zero();
    for n in (0..probs.len()).rev() {
        acc += &probs[n];
        out[n] = acc.clone();
    }
    out
}

/// Torus-indexed and unwrapped-indexed rational tallies.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExactTwoPoint {
    pub torus: BTreeMap<Vec<i64>, Rational>,
    pub unwrapped: BTreeMap<Vec<i64>, Rational>,
}

fn add(map: &mut BTreeMap<Vec<i64>, Rational>, key: &[i64], w: &Rational) {
    if w.is_zero() {
        return;
    }
    *map.entry(key.to_vec()).or_insert_with(Rational::zero) += w;
}

/// Calls `f` on every walk of length `<= n_max` (all `(2d)^n` step sequences).
pub fn for_each_walk(spec: &TorusSpec, n_max: usize, mut f: impl FnMut(&TorusWalk)) -> Result<()> {
    let k = spec.dim().directions() as u64;
    let total: u64 = (0..=n_max as u32).map(|n| k.saturating_pow(n)).fold(0u64, u64::saturating_add);
    if total > WALK_SUM_LIMIT {
        return Err(Error::TooLarge(format!("{total} walks exceed the limit {WALK_SUM_LIMIT}")));
    }
    let mut walk = TorusWalk::root(*spec);
    let mut cursor = vec![0usize];
    f(&walk);
    while let Some(top) = cursor.last_mut() {
        if *top == k as usize || walk.len() == n_max {
            cursor.pop();
            walk.pop();
            continue;
        }
        walk.push(Step::from_index(*top));
        *top += 1;
        f(&walk);
        cursor.push(0);
    }
    Ok(())
}

/// `Σ_{ω: 0 → x} P(N >= |ω|) / (2d)^{|ω|}` over all walks, by torus endpoint `x` and by
/// unwrapped endpoint `z`. `survival[n] = P(N >= n)`, and `N <= survival.len() - 1`.
pub fn rlrw_walk_sums(spec: &TorusSpec, survival: &[Rational]) -> Result<ExactTwoPoint> {
    let k = spec.dim().directions() as u64;
    let mut out = ExactTwoPoint::default();
    let weights: Vec<Rational> = survival
        .iter()
        .enumerate()
        .map(|(n, s)| s * rat(1, k.pow(n as u32)))
        .collect();
    for_each_walk(spec, survival.len() - 1, |w| {
        let weight = &weights[w.len()];
        add(&mut out.torus, w.endpoint(), weight);
        add(&mut out.unwrapped, w.displacement(), weight);
    })?;
    Ok(out)
}

/// `E Σ_{n <= N} 1(X_n = x)` on the torus and `E Σ_{n <= N} 1(Z_n = z)` on `Z^d`, by
/// propagating the exact step distributions.
pub fn rlrw_expected_visits(spec: &TorusSpec, survival: &[Rational]) -> ExactTwoPoint {
    let steps: Vec<Step> = Step::all(spec.dim()).collect();
    let p = rat(1, steps.len() as u64);
    let origin = vec![0i64; spec.dim_usize()];
    let mut torus: BTreeMap<Vec<i64>, Rational> = BTreeMap::from([(origin.clone(), Rational::one())]);
    let mut plane = torus.clone();
    let mut out = ExactTwoPoint::default();
    for (n, s) in survival.iter().enumerate() {
        for (x, q) in &torus {
            add(&mut out.torus, x, &(q * s));
        }
        for (z, q) in &plane {
            add(&mut out.unwrapped, z, &(q * s));
        }
        if n + 1 == survival.len() {
            break;
        }
        let mut next_t = BTreeMap::new();
        let mut next_p = BTreeMap::new();
        for (x, q) in &torus {
            let w = q * &p;
            for st in &steps {
                let mut y = x.clone();
                y[st.axis()] = spec.advance(y[st.axis()], st.sign());
                add(&mut next_t, &y, &w);
            }
        }
        for (z, q) in &plane {
            let w = q * &p;
            for st in &steps {
                let mut y = z.clone();
                y[st.axis()] += st.sign();
                add(&mut next_p, &y, &w);
            }
        }
        torus = next_t;
        plane = next_p;
    }
    out
}

fn erase_step(spec: &TorusSpec, path: &[u8], step: Step) -> Vec<u8> {
    let walk = TorusWalk::from_steps(*spec, path.iter().map(|&s| Step::from_index(s as usize)));
    let sites = walk.sites();
    let mut next = walk.endpoint().to_vec();
    next[step.axis()] = spec.advance(next[step.axis()], step.sign());
    match sites.iter().position(|s| *s == next) {
        Some(k) => path[..k].to_vec(),
        None => {
            let mut p = path.to_vec();
            p.push(step.index() as u8);
            p
        }
    }
}

/// Exact law of the loop-erased walk stopped when its erased length first reaches `n`,
/// from the absorption probabilities of the chain on erased paths.
pub fn exact_rllerw_law(spec: &TorusSpec, n: usize) -> Result<Vec<(TorusWalk, Rational)>> {
    if n as u64 >= spec.volume() {
        return Err(Error::param(format!("erased length {n} impossible on {} sites", spec.volume())));
    }
    if n == 0 {
        return Ok(vec![(TorusWalk::root(*spec), Rational::one())]);
    }
    let steps: Vec<Step> = Step::all(spec.dim()).collect();
    let p = rat(1, steps.len() as u64);

    // Transient states are erased paths shorter than n.
    let mut index: HashMap<Vec<u8>, usize> = HashMap::from([(Vec::new(), 0)]);
    let mut states: Vec<Vec<u8>> = vec![Vec::new()];
    let mut transitions: Vec<Vec<Vec<u8>>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let succ: Vec<Vec<u8>> = steps.iter().map(|&s| erase_step(spec, &states[i], s)).collect();
        for t in &succ {
            if t.len() < n && !index.contains_key(t) {
                if states.len() == RLLERW_STATE_LIMIT {
                    return Err(Error::TooLarge(format!("more than {RLLERW_STATE_LIMIT} erased-path states")));
                }
                index.insert(t.clone(), states.len());
                states.push(t.clone());
            }
        }
        transitions.push(succ);
        i += 1;
    }

    // Expected visits v solve (I - Q)^T v = e_root.
    let m = states.len();
    let mut a = vec![vec![Rational::zero(); m + 1]; m];
    for (r, row) in a.iter_mut().enumerate() {
        row[r] = Rational::one();
    }
    a[0][m] = Rational::one();
    for (from, succ) in transitions.iter().enumerate() {
        for t in succ {
            if let Some(&to) = index.get(t) {
                a[to][from] -= &p;
            }
        }
    }
    let v = solve_augmented(a)?;

    let mut law: BTreeMap<Vec<u8>, Rational> = BTreeMap::new();
    for (from, succ) in transitions.iter().enumerate() {
        for t in succ {
            if t.len() == n {
                *law.entry(t.clone()).or_insert_with(Rational::zero) += &v[from] * &p;
            }
        }
    }
    Ok(law
        .into_iter()
        .map(|(s, q)| (TorusWalk::from_steps(*spec, s.into_iter().map(|x| Step::from_index(x as usize))), q))
        .collect())
}

/// Gaussian elimination on an `m × (m+1)` augmented rational system.
fn solve_augmented(mut a: Vec<Vec<Rational>>) -> Result<Vec<Rational>> {
    let m = a.len();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Invariant("singular absorption system".into()))?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut().skip(col) {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &f * y;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[m].clone()).collect())
}

/// Exact quantities for RLLERW with `P(N = n) = length_probs[n]`.
#[derive(Clone, Debug)]
pub struct RllerwExact {
    pub spec: TorusSpec,
    /// `P(L = τ)`.
    pub law: Vec<(TorusWalk, Rational)>,
    /// `P(e(L) = x)`.
    pub endpoint: BTreeMap<Vec<i64>, Rational>,
    /// `E Σ_n 1(L_n = x)`.
    pub torus_visits: BTreeMap<Vec<i64>, Rational>,
    /// `P[W⁻¹(L) ∋ z]`.
    pub unwrapped_visits: BTreeMap<Vec<i64>, Rational>,
}

pub fn exact_rllerw_expectations(spec: &TorusSpec, length_probs: &[Rational]) -> Result<RllerwExact> {
    let mut law: BTreeMap<Vec<usize>, (TorusWalk, Rational)> = BTreeMap::new();
    for (n, pn) in length_probs.iter().enumerate() {
        if pn.is_zero() {
            continue;
        }
        for (w, q) in exact_rllerw_law(spec, n)? {
            let key: Vec<usize> = w.steps().iter().map(|s| s.index()).collect();
            law.entry(key).or_insert_with(|| (w, Rational::zero())).1 += q * pn;
        }
    }
    let law: Vec<(TorusWalk, Rational)> = law.into_values().collect();
    let mut out = RllerwExact {
        spec: *spec,
        law,
        endpoint: BTreeMap::new(),
        torus_visits: BTreeMap::new(),
        unwrapped_visits: BTreeMap::new(),
    };
    for (tau, q) in &out.law {
        add(&mut out.endpoint, tau.endpoint(), q);
        for x in tau.sites() {
            add(&mut out.torus_visits, &x, q);
        }
        let mut z = vec![0i64; spec.dim_usize()];
        add(&mut out.unwrapped_visits, &z, q);
        for s in tau.steps() {
            z[s.axis()] += s.sign();
            add(&mut out.unwrapped_visits, &z, q);
        }
    }
    Ok(out)
}

impl RllerwExact {
    /// `ρ(η) = P(L ⊒ η)`.
    pub fn prefix_weight(&self, eta: &TorusWalk) -> Rational {
        self.law.iter().filter(|(tau, _)| tau.extends(eta)).map(|(_, q)| q.clone()).sum()
    }

    /// `Σ_η ρ(η)` over all walks `η` (not only self-avoiding ones) of length at most
    /// the longest sampled walk, by torus endpoint and by unwrapped endpoint.
    pub fn walk_sums(&self) -> Result<ExactTwoPoint> {
        let longest = self.law.iter().map(|(t, _)| t.len()).max().unwrap_or(0);
        let mut out = ExactTwoPoint::default();
        for_each_walk(&self.spec, longest, |eta| {
            let w = self.prefix_weight(eta);
            add(&mut out.torus, eta.endpoint(), &w);
            add(&mut out.unwrapped, eta.displacement(), &w);
        })?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize) -> Vec<Rational> {
        vec![rat(1, n as u64 + 1); n + 1]
    }

    #[test]
    fn deterministic_two_in_one_dimension() {
        let spec = TorusSpec::new(1, 7).unwrap();
        let s = survival_from_probabilities(&[Rational::zero(), Rational::zero(), Rational::one()]);
        let v = rlrw_expected_visits(&spec, &s);
        assert_eq!(v.unwrapped[&vec![0]], rat(3, 2));
        assert_eq!(v.unwrapped[&vec![2]], rat(1, 4));
    }

    #[test]
    fn rlrw_identity_small() {
        for l in [2, 3] {
            let spec = TorusSpec::new(2, l).unwrap();
            let s = survival_from_probabilities(&uniform(3));
            assert_eq!(rlrw_walk_sums(&spec, &s).unwrap(), rlrw_expected_visits(&spec, &s));
        }
    }

    #[test]
    fn rllerw_trivial_lengths() {
        let spec = TorusSpec::new(2, 3).unwrap();
        let l0 = exact_rllerw_law(&spec, 0).unwrap();
        assert_eq!(l0.len(), 1);
        assert!(l0[0].0.is_empty());
        let l1 = exact_rllerw_law(&spec, 1).unwrap();
        assert_eq!(l1.len(), 4);
        assert!(l1.iter().all(|(_, q)| *q == rat(1, 4)));
    }

    #[test]
    fn rllerw_law_is_normalized() {
        let spec = TorusSpec::new(2, 3).unwrap();
        for n in 2..=4 {
            let law = exact_rllerw_law(&spec, n).unwrap();
            let total: Rational = law.iter().map(|(_, q)| q.clone()).sum();
            assert_eq!(total, Rational::one());
            assert!(law.iter().all(|(w, _)| w.len() == n && w.is_self_avoiding()));
        }
    }

    #[test]
    fn rllerw_two_steps_by_hand() {
        // In d = 1 on a long cycle the erased walk of length 2 is straight; both
        // directions are equally likely.
        let spec = TorusSpec::new(1, 9).unwrap();
        let law = exact_rllerw_law(&spec, 2).unwrap();
        assert_eq!(law.len(), 2);
        assert!(law.iter().all(|(_, q)| *q == rat(1, 2)));
    }
}
