//! Generates each graph family, writes it as DIMACS and parses it back.
//!
//! cargo run --example dimacs_roundtrip

use nsd_total::graph::{generate, parse_graph, write_graph, GraphKind};

fn main() -> anyhow::Result<()> {
    let kinds = [
        GraphKind::Empty { n: 3 },
        GraphKind::Complete { n: 5 },
        GraphKind::Cycle { n: 7 },
        GraphKind::Path { n: 4 },
        GraphKind::Star { leaves: 6 },
        GraphKind::Random { n: 30, p: 0.2, seed: 1 },
        GraphKind::Regular { n: 12, d: 3, seed: 1 },
    ];
    for kind in &kinds {
        let g = generate(kind)?;
        let text = write_graph(&g);
        let back = parse_graph(&text)?;
        assert_eq!(back, g);
        println!("{kind:?}: n={} m={} Δ={} round-trip ok", g.n(), g.m(), g.max_degree());
    }
    let g = generate(&GraphKind::Cycle { n: 4 })?;
    print!("\nC4 in DIMACS:\n{}", write_graph(&g));
    Ok(())
}
