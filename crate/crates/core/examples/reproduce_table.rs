//! Degree reproduction on random pencils for the small table rows.
//!
//! Usage: `reproduce_table [seeds] [max_m]`. Rows with larger `m` only get
//! their bound.

use lowrank_hankel::verify::{default_table_rows, reproduce_degrees};
use lowrank_hankel::SolveOptions;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("numeric argument"));
    let seeds = args.next().unwrap_or(1);
    let max_m = args.next().unwrap_or(3) as usize;
    let rows: Vec<_> = default_table_rows().into_iter().filter(|r| r.n <= 4 || r.m > max_m).collect();

    let reports = reproduce_degrees(&rows, seeds, max_m, &SolveOptions::default());
    println!("{:>2} {:>2} {:>2} {:>9} {:>9} {:>9}  runs", "m", "r", "n", "table", "bound", "got");
    for rep in &reports {
        let got: Vec<String> = rep
            .runs
            .iter()
            .map(|r| r.total_degree.map_or_else(|| "err".to_string(), |d| d.to_string()))
            .collect();
        let table = rep.row.total_deg.map_or_else(|| "-".into(), |d| d.to_string());
        let mark = if rep.bounds_only { "" } else if rep.total_matches() { "ok" } else { "MISMATCH" };
        println!(
            "{:>2} {:>2} {:>2} {:>9} {:>9} {:>9}  {}",
            rep.row.m,
            rep.row.r,
            rep.row.n,
            table,
            rep.bound,
            got.join(","),
            mark
        );
    }
}
