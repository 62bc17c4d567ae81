//! Runs a small seeded experiment over a grid of random graphs and prints the
//! CSV followed by the JSON summary.
//!
//! cargo run --release --example experiment -- [spec.json]

use nsd_total::experiment::{run_experiment, ExperimentSpec, Family};

fn main() -> anyhow::Result<()> {
    let spec = match std::env::args().nth(1) {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => {
            let mut spec = ExperimentSpec::new(
                Family::Random {
                    n: vec![300, 1000],
                    p: vec![0.02, 0.06],
                },
                vec![1, 2, 3],
            );
            spec.name = "random-grid".into();
            spec
        }
    };
    let out = run_experiment(&spec)?;
    print!("{}", out.csv());
    println!("{}", out.summary_json());
    Ok(())
}
