//! Driving a simulation from a TOML document, as the `simulate` subcommand does.

use unwrapped_walks::cli::config::RunConfig;
use unwrapped_walks::cli::simulate::simulate;

const CONFIG: &str = r#"
[simulation]
model = "ising-worm"
dimension = 5
sizes = [3, 4]
measurements = 2000
burn_in_sweeps = 20
chains = 2
seed = 2024
"#;

fn main() -> unwrapped_walks::Result<()> {
    let cfg = RunConfig::parse(CONFIG, &["simulation.measurements=500".into()])?;
    let sim = cfg.simulation()?;
    println!("tanh(beta) defaults to {} in d = 5", sim.default_critical_point().map(|c| c.text).unwrap_or_default());
    let out = std::env::temp_dir().join("unwrapped-walks-example");
    simulate(&cfg, &out)?;
    let moments = std::fs::read_to_string(out.join("moments.csv"))?;
    print!("{moments}");
    println!("tables written to {}", out.display());
    Ok(())
}
