//! Weighted power-law fit with a lower-size cutoff sweep.

use unwrapped_walks::observables::{cutoff_sweep, fit_power_law, ScalingPoint};

fn main() -> unwrapped_walks::Result<()> {
    // y = 2 L^{1/4} with a 1/L correction and 1% errors
    let points: Vec<ScalingPoint> = (5..=17)
        .map(|l| {
            let l = f64::from(l);
            let value = 2.0 * l.powf(0.25) * (1.0 - 0.3 / l);
            ScalingPoint { size: l, value, stderr: 0.01 * value }
        })
        .collect();
    let fit = fit_power_law(&points)?;
    println!("all sizes: exponent {:.4} +- {:.4}, chi2/dof {:.2}", fit.exponent, fit.exponent_stderr, fit.chi2_per_dof);
    for f in cutoff_sweep(&points) {
        println!("L >= {:>2}: exponent {:.4} +- {:.4}", f.min_size, f.exponent, f.exponent_stderr);
    }
    Ok(())
}
