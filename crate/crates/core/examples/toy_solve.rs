//! Sample points of `rank [[x, 1], [1, x]] <= 1`, i.e. of `x^2 = 1`.

use lowrank_hankel::exact::rat;
use lowrank_hankel::exact::rational::format_rational;
use lowrank_hankel::{build_pencil, low_rank_hankel, SolveOptions};

fn main() -> lowrank_hankel::Result<()> {
    // Generators (h0, h1, h2) of H0 and H1.
    let pencil = build_pencil(2, 1, vec![vec![rat(0), rat(1), rat(0)], vec![rat(1), rat(0), rat(1)]])?;
    let res = low_rank_hankel(&pencil, 1, 7, &SolveOptions::default()).map_err(|e| e.error)?;

    for p in &res.params {
        println!("q(t) = {}   x = ({}) / ({})", p.q, p.coords[0], p.q0);
    }
    for b in &res.boxes {
        let (lo, hi) = &b.intervals[0];
        println!("x in [{}, {}]", format_rational(lo), format_rational(hi));
    }
    println!("total degree {}", res.total_degree);
    Ok(())
}
