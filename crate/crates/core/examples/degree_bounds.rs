//! Per-level degree bounds for a few shapes, and the homotopy split for one.
//!
//! Usage: `degree_bounds [m r n]`

use lowrank_hankel::bounds::{delta_bound, delta_oracle, homotopy_parts, total_output_bound};

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let shapes = match args[..] {
        [m, r, n] => vec![(m, r, n)],
        _ => vec![(3, 2, 2), (3, 2, 4), (4, 3, 3), (5, 4, 6)],
    };
    for (m, r, n) in shapes {
        print!("{}", total_output_bound(m, n, r).to_text());
        println!();
    }

    let (m, n, p) = (4, 3, 3);
    assert_eq!(delta_bound(m, n, p), delta_oracle(m, n, p));
    let parts = homotopy_parts(m, n, p);
    println!("homotopy curve for (m, n, p) = ({m}, {n}, {p}):");
    println!("  {} + {} + {} + {} = {}", parts.p1, parts.p2, parts.p3, parts.p4, parts.total());
}
