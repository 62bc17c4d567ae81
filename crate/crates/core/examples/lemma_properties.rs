//! Runs both lemma stages on a seeded random graph and prints every property
//! with its cap and the largest value observed.
//!
//! cargo run --release --example lemma_properties -- [n] [p] [seed] [slack]

use nsd_total::graph::{generate, GraphKind};
use nsd_total::lemma::{run_lemma, LemmaParams, Mode};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(Ok(2000), |s| s.parse())?;
    let p: f64 = args.get(1).map_or(Ok(0.022), |s| s.parse())?;
    let seed: u64 = args.get(2).map_or(Ok(1), |s| s.parse())?;
    let slack: f64 = args.get(3).map_or(Ok(2.0), |s| s.parse())?;

    let g = generate(&GraphKind::Random { n, p, seed })?;
    let params = LemmaParams::new(g.max_degree(), Mode::Permissive, slack)?;
    println!(
        "n={} m={} Δ={} r1={} r2={} r3={}",
        g.n(),
        g.m(),
        g.max_degree(),
        params.r1,
        params.r2,
        params.r3
    );
    let run = run_lemma(&g, &params, seed, 200);
    println!(
        "stage one: {} resampling rounds, valid={}",
        run.stage_one.rounds, run.stage_one.valid
    );
    println!(
        "stage two: |E1|={} |E2|={} Δ(H3)={} rounds={}",
        run.stage_two.e1, run.stage_two.e2, run.stage_two.h3_max_degree, run.stage_two.rounds
    );
    for check in &run.stage_two.report.checks {
        for cap in &check.caps {
            println!(
                "{:>4} {:<5} {:<40} observed {:>8.2}  cap {:>8.2}",
                check.property.id(),
                if check.pass { "pass" } else { "FAIL" },
                cap.label,
                cap.observed,
                cap.cap
            );
        }
    }
    Ok(())
}
