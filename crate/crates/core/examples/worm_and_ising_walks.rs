//! Worm algorithm on a 4x4 torus: spin correlations from head statistics, compared
//! with the transfer matrix, and the length of the extracted Ising walk.

use unwrapped_walks::observables::MomentAccumulator;
use unwrapped_walks::oracles::ising_correlations_transfer;
use unwrapped_walks::rng::stream;
use unwrapped_walks::samplers::{IsingWalkExtractor, WormSampler};
use unwrapped_walks::TorusSpec;

fn main() -> unwrapped_walks::Result<()> {
    let spec = TorusSpec::new(2, 4)?;
    let t = 0.3;
    let exact = ising_correlations_transfer(&spec, t)?;
    let mut worm = WormSampler::new(spec, t)?;
    let mut extractor = IsingWalkExtractor::new();
    let mut rng = stream(3, 0);

    let mut heads = vec![0u64; spec.volume() as usize];
    let mut walk_len = MomentAccumulator::new();
    for i in 0..2_000_000u64 {
        worm.step(&mut rng);
        heads[worm.config().head() as usize] += 1;
        if i % 16 == 0 {
            walk_len.push(extractor.extract(worm.config())?.len() as f64);
        }
    }
    let origin = heads[spec.origin_index() as usize] as f64;
    println!("site        worm   transfer");
    for (v, &h) in heads.iter().enumerate().take(8) {
        println!("{:<9} {:>7.4}  {:>8.4}", format!("{:?}", spec.coords_of(v as u64)), h as f64 / origin, exact[v]);
    }
    let stats = worm.stats();
    println!("acceptance {:.3}", stats.accepted as f64 / stats.steps as f64);
    println!("mean Ising walk length {:.3} +- {:.3}", walk_len.mean(), walk_len.blocking_errors()?.stderr);
    Ok(())
}
