//! Drives the batch front end from code and prints the report as JSON.

use lightcone::cli::{run, RunConfig};

fn main() -> lightcone::Result<()> {
    let cfg = RunConfig::from_args(["lightcone", "pair", "--a", "clifford_torus", "--b", "dual:clifford_torus", "--grid", "4"])?;
    let rep = run(&cfg)?;
    println!("verdict {:?}, exit code {}", rep.verdict, rep.exit_code());
    let mut payload = rep.payload();
    if let Some(o) = payload.as_object_mut() {
        o.remove("table");
    }
    println!("{}", serde_json::to_string_pretty(&payload)?);
    Ok(())
}
