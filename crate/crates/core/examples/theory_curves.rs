//! Limiting curves: the fixed-length walk, the collapse family and the standardized
//! half-normal law.

use unwrapped_walks::theory::{
    h_d, phi_constant, point_mass_closed_form, prop1_rhs, srw_limit_constant, standardized_f, CollapseParams,
    HalfNormal, PointMass,
};

fn main() -> unwrapped_walks::Result<()> {
    let d = 5;
    let collapse = CollapseParams::rllerw_complete_graph(d)?;
    println!("phi = {:.10}, srw constant = {:.10}", phi_constant(), srw_limit_constant(d));
    println!("  xi   point-mass  closed-form  half-normal  H_d");
    for xi in [0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
        println!(
            "{xi:>4}  {:>10.6}  {:>11.6}  {:>11.6}  {:.6}",
            prop1_rhs(&PointMass { at: 1.0 }, d, xi)?,
            point_mass_closed_form(d, xi, 1.0),
            prop1_rhs(&HalfNormal, d, xi)?,
            h_d(&collapse, xi)?
        );
    }
    for x in [-1.0, 0.0, 1.0, 2.0] {
        println!("F({x}) = {:.6}", standardized_f(x));
    }
    Ok(())
}
