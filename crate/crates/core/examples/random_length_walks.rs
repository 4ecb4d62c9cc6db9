//! Random-length random walks and their loop erasures with complete-graph lengths.

use unwrapped_walks::lattice::winding_number;
use unwrapped_walks::observables::MomentAccumulator;
use unwrapped_walks::rng::stream;
use unwrapped_walks::samplers::{rlrw_sample, LengthLaw, LoopErasedSampler};
use unwrapped_walks::TorusSpec;

fn main() -> unwrapped_walks::Result<()> {
    let mut rng = stream(11, 0);
    println!(" L   E|RLRW|  E|RLLERW|  E(R) RLLERW");
    for l in [5u32, 7, 9] {
        let spec = TorusSpec::new(5, l)?;
        let law = LengthLaw::complete_graph(&spec, spec.volume() - 1);
        let mut lerw = LoopErasedSampler::new(spec);
        let (mut a, mut b, mut r) = (MomentAccumulator::new(), MomentAccumulator::new(), MomentAccumulator::new());
        for _ in 0..5000 {
            let (walk, _) = rlrw_sample(&law, &spec, &mut rng);
            a.push(walk.len() as f64);
            let erased = lerw.sample(&law, &mut rng)?;
            b.push(erased.len() as f64);
            r.push(winding_number(&erased, 0)? as f64);
        }
        println!("{l:>2}  {:>7.1}  {:>9.1}  {:>10.4}", a.mean(), b.mean(), r.mean());
    }
    Ok(())
}
