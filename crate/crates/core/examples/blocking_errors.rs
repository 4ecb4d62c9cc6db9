//! Blocking analysis of an AR(1) stream, whose integrated autocorrelation time is
//! known in closed form.

use rand_distr::{Distribution, StandardNormal};
use unwrapped_walks::observables::MomentAccumulator;
use unwrapped_walks::rng::stream;

fn main() -> unwrapped_walks::Result<()> {
    let mut rng = stream(1, 0);
    for rho in [0.0, 0.5, 0.9] {
        let mut acc = MomentAccumulator::new();
        let mut x = 0.0;
        for _ in 0..1_000_000 {
            let e: f64 = StandardNormal.sample(&mut rng);
            x = rho * x + e;
            acc.push(x);
        }
        let b = acc.blocking_errors()?;
        let exact = (1.0 + rho) / (2.0 * (1.0 - rho));
        println!(
            "rho {rho}: mean {:+.4} +- {:.4}, tau_int {:.3} (exact {exact:.3}), plateau at block size {}",
            b.mean, b.stderr, b.tau_int, b.block_size
        );
    }
    Ok(())
}
