//! Unwrapped two-point function of RLRW in d = 3 and its on-axis profile
//! `‖z‖^{d-2} g̃(z)` against the ξ → 0 constant.

use unwrapped_walks::observables::{radial_profile, ProfileMode, TwoPointHistogram, TwoPointMode};
use unwrapped_walks::rng::stream;
use unwrapped_walks::samplers::{rlrw_sample, LengthLaw};
use unwrapped_walks::theory::srw_limit_constant;
use unwrapped_walks::TorusSpec;

fn main() -> unwrapped_walks::Result<()> {
    let spec = TorusSpec::new(3, 8)?;
    let law = LengthLaw::complete_graph(&spec, u64::MAX);
    let mut h = TwoPointHistogram::new(3, TwoPointMode::Visit);
    let mut rng = stream(5, 0);
    for _ in 0..20_000 {
        let (walk, _) = rlrw_sample(&law, &spec, &mut rng);
        h.record_visits(walk.steps());
    }
    let g0 = h.estimate(&[0, 0, 0])?;
    println!("g(0) = {:.4} +- {:.4}", g0.value, g0.stderr);
    println!("srw constant {:.4}", srw_limit_constant(3));
    println!("  xi     |z|^(d-2) g(z)");
    for p in radial_profile(&h, spec.period(), ProfileMode::default(), Some(8.0))? {
        println!("{:>5.3}  {:>8.4} +- {:.4}", p.xi, p.scaled, p.scaled_stderr);
    }
    Ok(())
}
