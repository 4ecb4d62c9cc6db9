use approx::assert_relative_eq;
use proptest::prelude::*;

use unwrapped_walks::lattice::{unwrap, winding_number, wrap, Dim, Lattice};
use unwrapped_walks::observables::{EcdfAccumulator, MomentAccumulator, TwoPointHistogram, TwoPointMode};
use unwrapped_walks::{Step, TorusSpec, TorusWalk, ZWalk};

fn walk_strategy() -> impl Strategy<Value = (usize, u32, Vec<usize>)> {
    (1usize..=5, 2u32..=9).prop_flat_map(|(d, l)| (Just(d), Just(l), prop::collection::vec(0..2 * d, 0..80)))
}

fn zwalk(d: usize, steps: &[usize]) -> ZWalk {
    ZWalk::from_steps(Lattice::new(Dim::new(d).unwrap()), steps.iter().map(|&i| Step::from_index(i)))
}

proptest! {
    #[test]
    fn wrap_is_a_bijection((d, l, steps) in walk_strategy()) {
        let spec = TorusSpec::new(d, l).unwrap();
        let z = zwalk(d, &steps);
        let w = wrap(&z, &spec);
        prop_assert_eq!(unwrap(&w), z.clone());
        prop_assert_eq!(w.endpoint().to_vec(), spec.reduce_site(z.endpoint()));
        prop_assert!(w.sites().iter().all(|s| spec.contains(s)));
    }

    #[test]
    fn windings_follow_axis_relabeling((d, l, steps) in walk_strategy(), shift in 0usize..5) {
        let spec = TorusSpec::new(d, l).unwrap();
        let w = TorusWalk::from_steps(spec, steps.iter().map(|&i| Step::from_index(i)));
        let relabel = |a: usize| (a + shift) % d;
        let permuted = TorusWalk::from_steps(
            spec,
            w.steps().iter().map(|s| Step::new(relabel(s.axis()), s.is_positive())),
        );
        for a in 0..d {
            prop_assert_eq!(winding_number(&w, a).unwrap(), winding_number(&permuted, relabel(a)).unwrap());
        }
    }

    #[test]
    fn folding_recovers_torus_endpoints((d, l, steps) in walk_strategy(), cut in 1usize..20) {
        // many short walks: prefixes of one walk
        let spec = TorusSpec::new(d, l).unwrap();
        let mut h = TwoPointHistogram::new(d, TwoPointMode::Endpoint);
        let mut torus = std::collections::BTreeMap::<Vec<i64>, f64>::new();
        for k in (0..=steps.len()).step_by(cut) {
            let w = TorusWalk::from_steps(spec, steps[..k].iter().map(|&i| Step::from_index(i)));
            h.record_endpoint(w.displacement());
            *torus.entry(w.endpoint().to_vec()).or_default() += 1.0;
        }
        let folded = h.folded(&spec).unwrap().tallies();
        let direct: Vec<(Vec<i64>, f64)> = torus.into_iter().collect();
        prop_assert_eq!(folded, direct);
    }

    #[test]
    fn merge_matches_concatenation(xs in prop::collection::vec(0u32..1000, 1..3000), split in 0usize..3000) {
        let split = split.min(xs.len());
        let mut whole = MomentAccumulator::new();
        let (mut a, mut b) = (MomentAccumulator::new(), MomentAccumulator::new());
        for (i, &x) in xs.iter().enumerate() {
            whole.push(f64::from(x));
            if i < split { a.push(f64::from(x)) } else { b.push(f64::from(x)) }
        }
        a.merge(&b);
        prop_assert_eq!(a.count(), whole.count());
        prop_assert_eq!(a.min(), whole.min());
        prop_assert_eq!(a.max(), whole.max());
        assert_relative_eq!(a.mean(), whole.mean(), max_relative = 1e-12);
        if xs.len() > 1 {
            assert_relative_eq!(a.variance(), whole.variance(), max_relative = 1e-9, epsilon = 1e-9);
        }
    }

    #[test]
    fn standardized_ecdf_has_unit_moments(xs in prop::collection::vec(0.0f64..1e4, 3..500)) {
        let mut e = EcdfAccumulator::from_samples(xs.iter().copied());
        prop_assume!(e.mean_sd().unwrap().1 > 1e-6);
        let pts = e.standardized().unwrap();
        let n = xs.len() as f64;
        let mut prev = 0.0;
        let (mut m, mut ss) = (0.0, 0.0);
        for p in &pts {
            let c = (p.cumulative - prev) * n;
            prev = p.cumulative;
            m += p.x_std * c;
            ss += p.x_std * p.x_std * c;
        }
        m /= n;
        prop_assert!(m.abs() < 1e-10);
        prop_assert!((ss / (n - 1.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ratio_is_scale_invariant(xs in prop::collection::vec(1u32..500, 64..2000)) {
        let mut a = MomentAccumulator::new();
        let mut b = MomentAccumulator::new();
        for &x in &xs {
            a.push(f64::from(x));
            b.push(7.0 * f64::from(x));
        }
        prop_assume!(a.variance() > 0.0);
        let (ra, rb) = (a.mean() / a.std_dev(), b.mean() / b.std_dev());
        assert_relative_eq!(ra, rb, max_relative = 1e-12);
    }
}
