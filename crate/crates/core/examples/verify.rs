//! Builds a colouring of the Petersen graph, verifies it, then breaks it in
//! two ways and shows what the verifier reports.
//!
//! cargo run --example verify

use nsd_total::colouring::{check_nsd, check_proper, verify, weighted_degrees, Object, TotalColouring};
use nsd_total::construct::greedy_nsd;
use nsd_total::graph::Graph;

fn main() -> anyhow::Result<()> {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let g = Graph::from_edges(10, outer.chain(spokes).chain(inner))?;

    let c = greedy_nsd(&g);
    println!("greedy span {} on Petersen (Δ = 3)", c.span());
    println!("weighted degrees {:?}", weighted_degrees(&g, &c));
    assert!(verify(&g, &c).is_empty());

    // same colour on an edge and its endpoint
    let mut bad = TotalColouring::new(&g, c.vertex_colours().to_vec(), c.edge_colours().to_vec(), c.k())?;
    let (u, _) = g.edge(0);
    bad.set(Object::Vertex(u), &g, c.edge_colour(0))?;
    for x in check_proper(&g, &bad) {
        println!("proper: {:?} {:?}", x.kind, x.one_based().witnesses);
    }

    // a 4-cycle with every colour 1 on the edges has all sums equal
    let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])?;
    let flat = TotalColouring::new(&c4, vec![2, 3, 2, 3], vec![1; 4], 3)?;
    println!("C4 sums {:?}", weighted_degrees(&c4, &flat));
    for x in check_nsd(&c4, &flat) {
        println!("nsd: {:?} {:?}", x.kind, x.one_based().witnesses);
    }
    Ok(())
}
