//! Exact χ''_Σ for small named graphs, by backtracking and by plain
//! enumeration where that is small enough.
//!
//! cargo run --release --example exact

use nsd_total::colouring::verify;
use nsd_total::exact::{brute_force_chi, solve_exact, SolveOutcome};
use nsd_total::graph::{generate, GraphKind};

fn main() -> anyhow::Result<()> {
    let named = [
        ("K2", GraphKind::Complete { n: 2 }),
        ("K3", GraphKind::Complete { n: 3 }),
        ("K4", GraphKind::Complete { n: 4 }),
        ("K5", GraphKind::Complete { n: 5 }),
        ("C4", GraphKind::Cycle { n: 4 }),
        ("C5", GraphKind::Cycle { n: 5 }),
        ("C6", GraphKind::Cycle { n: 6 }),
        ("P4", GraphKind::Path { n: 4 }),
        ("K1,4", GraphKind::Star { leaves: 4 }),
        ("3-regular n=8", GraphKind::Regular { n: 8, d: 3, seed: 2 }),
    ];
    for (name, kind) in named {
        let g = generate(&kind)?;
        let k_max = g.max_degree() as u32 + 3;
        let out = solve_exact(&g, k_max);
        let SolveOutcome::Solved(r) = &out else {
            println!("{name}: above Δ+3 = {k_max}");
            continue;
        };
        assert!(verify(&g, &r.witness).is_empty());
        let brute = match brute_force_chi(&g, k_max) {
            Ok(b) => format!("{:?}", b.chi()),
            Err(_) => "too large".into(),
        };
        println!(
            "{name:<14} Δ={} χ''_Σ={} ({} nodes), brute force {brute}",
            g.max_degree(),
            r.chi_sum_total,
            r.nodes_explored
        );
    }
    Ok(())
}
