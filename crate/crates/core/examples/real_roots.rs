//! Sturm-based isolation, refinement, and boxes for a parametrized curve point.

use lowrank_hankel::exact::rational::format_rational;
use lowrank_hankel::exact::{frac, rat, UniPoly};
use lowrank_hankel::roots::{count_real_roots, isolate_real_roots, real_sample_boxes, refine_root};
use lowrank_hankel::solver::RationalParametrization;

fn main() -> lowrank_hankel::Result<()> {
    // (t^2 - 2)(t - 1)(t + 3)
    let q = UniPoly::from_ints(&[6, -4, -5, 2, 1]);
    println!("{} has {} real roots", q, count_real_roots(&q)?);
    for iv in isolate_real_roots(&q)? {
        let fine = refine_root(&q, &iv, &frac(1, 1_000_000));
        println!("  [{}, {}]{}", format_rational(&fine.lo), format_rational(&fine.hi), if iv.exact { " exact" } else { "" });
    }

    // (x, y) = (t, t^2 + 1/t) over t^3 - t - 1.
    let q = UniPoly::from_ints(&[-1, -1, 0, 1]);
    let q0 = UniPoly::t();
    let coords = vec![UniPoly::from_ints(&[0, 0, 1]), UniPoly::from_ints(&[1, 0, 0, 1])];
    let param = RationalParametrization::new(q, q0, coords, vec![rat(1)])?;
    for b in real_sample_boxes(&[param], &frac(1, 1 << 20))? {
        let parts: Vec<String> = b
            .intervals
            .iter()
            .map(|(lo, hi)| format!("[{}, {}]", format_rational(lo), format_rational(hi)))
            .collect();
        println!("box {}", parts.join(" x "));
    }
    Ok(())
}
