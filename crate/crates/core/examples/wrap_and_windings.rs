//! Wrapping a Z^d walk onto the torus and reading windings off the unwrapped endpoint.

use unwrapped_walks::lattice::{unwrap, winding_number};
use unwrapped_walks::{Step, TorusSpec, TorusWalk};

fn main() -> unwrapped_walks::Result<()> {
    let spec = TorusSpec::new(1, 4)?;
    let walk = TorusWalk::from_steps(spec, [Step::new(0, false); 7]);
    let sites: Vec<i64> = walk.sites().iter().map(|s| s[0]).collect();
    println!("torus sites       {sites:?}");
    println!("unwrapped endpoint {:?}", unwrap(&walk).endpoint());
    println!("windings          {}", winding_number(&walk, 0)?);

    // a 3d walk that circles the x axis twice and the y axis once
    let spec = TorusSpec::new(3, 5)?;
    let steps = [vec![Step::new(0, true); 11], vec![Step::new(1, false); 6]].concat();
    let walk = TorusWalk::from_steps(spec, steps);
    for axis in 0..3 {
        println!("axis {axis}: displacement {:>3}, windings {}", walk.displacement()[axis], winding_number(&walk, axis)?);
    }
    Ok(())
}
