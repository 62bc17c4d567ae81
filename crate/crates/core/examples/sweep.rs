//! Checks χ''_Σ ≤ Δ+3 on every connected graph with at most `max_n` vertices
//! and prints the sweep CSV.
//!
//! cargo run --release --example sweep -- [max_n]

use nsd_total::exact::conjecture_sweep;
use nsd_total::experiment::Family;

fn main() -> anyhow::Result<()> {
    let max_n: usize = std::env::args().nth(1).map_or(Ok(5), |s| s.parse())?;
    let graphs = Family::Connected { max_n }.graphs(&[])?;
    let report = conjecture_sweep(&graphs, None);
    print!("{}", report.to_csv());
    let tight = report.rows.iter().filter(|r| r.chi == Some(r.delta_plus_3)).count();
    eprintln!(
        "{} graphs, {} violations, {} errors, {tight} attain Δ+3",
        report.rows.len(),
        report.violations().count(),
        report.errors()
    );
    Ok(())
}
