//! Berretti–Sokal chain on a small torus, checked against exhaustive enumeration.

use unwrapped_walks::oracles::enumerate_saw;
use unwrapped_walks::rng::stream;
use unwrapped_walks::samplers::SawSampler;
use unwrapped_walks::TorusSpec;

fn main() -> unwrapped_walks::Result<()> {
    let spec = TorusSpec::new(2, 3)?;
    let fugacity = 0.3;
    let exact = enumerate_saw(&spec)?.length_law(fugacity);

    for lifted in [false, true] {
        let mut chain = SawSampler::new(spec, fugacity, lifted)?;
        let mut rng = stream(7, 0);
        let steps = 2_000_000;
        let mut counts = vec![0u64; exact.len()];
        for _ in 0..steps {
            chain.step(&mut rng);
            counts[chain.walk().len()] += 1;
        }
        println!("lifted = {lifted}, acceptance {:.3}", chain.stats().acceptance_rate());
        println!("  n   sampled    exact");
        for (n, (&c, p)) in counts.iter().zip(&exact).enumerate() {
            println!("{n:>3}  {:>8.5}  {p:>8.5}", c as f64 / steps as f64);
        }
    }
    Ok(())
}
