//! Exact references: rational walk-sum identities, the single-point SRW kernel and
//! the lattice Green function by Bessel quadrature.

use num::ToPrimitive;
use unwrapped_walks::oracles::{
    exact_rllerw_expectations, lattice_green_function, oracle_rlrw_at, rlrw_expected_visits, rlrw_walk_sums,
    srw_point_kernel, survival_from_probabilities, Rational,
};
use unwrapped_walks::samplers::LengthLaw;
use unwrapped_walks::TorusSpec;

fn main() -> unwrapped_walks::Result<()> {
    let spec = TorusSpec::new(2, 3)?;
    let probs = vec![Rational::new(1.into(), 5.into()); 5];
    let survival = survival_from_probabilities(&probs);
    let identity = rlrw_walk_sums(&spec, &survival)? == rlrw_expected_visits(&spec, &survival);
    println!("RLRW walk-sum identity on the 3x3 torus: {identity}");

    let e = exact_rllerw_expectations(&spec, &probs)?;
    println!("RLLERW with N uniform on 0..=4: {} loop-erased walks", e.law.len());
    for (z, q) in e.unwrapped_visits.iter().take(5) {
        println!("  P(visit {z:?}) = {q} = {:.6}", q.to_f64().unwrap_or(f64::NAN));
    }

    let z = [2, 1, 0];
    let p = srw_point_kernel(&z, 9);
    println!("p_n({z:?}) for n <= 9: {:?}", p.iter().map(|x| format!("{x:.5}")).collect::<Vec<_>>());

    let q = 0.9;
    let law = LengthLaw::geometric(q)?;
    let series = oracle_rlrw_at(&law, &z, 1e-10, 1 << 20)?;
    let bessel = lattice_green_function(&z, q)?;
    println!("geometric RLRW Green function at {z:?}: kernel sum {:.10}, Bessel {:.10}", series.value, bessel);
    Ok(())
}
