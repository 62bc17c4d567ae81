//! Builds NSD total colourings of seeded random graphs with the full pipeline
//! and compares each span with `Δ + 3`, `3Δ + 10` and the asymptotic bound.
//!
//! cargo run --release --example construct -- [n] [seed] [p...]

use nsd_total::colouring::verify;
use nsd_total::construct::{construct, RunConfig};
use nsd_total::graph::{generate, GraphKind};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(Ok(1000), |s| s.parse())?;
    let seed: u64 = args.get(1).map_or(Ok(1), |s| s.parse())?;
    let ps: Vec<f64> = if args.len() > 2 {
        args[2..].iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    } else {
        vec![0.01, 0.03, 0.06, 0.1, 0.15]
    };

    println!("{:>6} {:>5} {:>6} {:>6} {:>8} {:>9} {:>9}", "m", "Δ", "span", "3Δ+10", "attempts", "fallback", "bound");
    for p in ps {
        let g = generate(&GraphKind::Random { n, p, seed })?;
        let cfg = RunConfig { seed, ..RunConfig::default() };
        let out = construct(&g, &cfg)?;
        assert!(verify(&g, &out.colouring).is_empty());
        let r = &out.report;
        println!(
            "{:>6} {:>5} {:>6} {:>6} {:>8} {:>9} {:>9.0}",
            r.m,
            r.delta,
            r.span,
            3 * r.delta + 10,
            r.attempts.len(),
            r.fallback,
            r.theorem_bound
        );
        for a in r.attempts.iter().filter(|a| a.failure.is_some()) {
            println!("       attempt {} (slack {}): {}", a.attempt, a.slack, a.failure.as_deref().unwrap_or(""));
        }
    }
    Ok(())
}
