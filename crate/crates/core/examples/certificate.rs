//! Exact membership certificates: a correct parametrization passes, a
//! perturbed one is rejected minor by minor.

use lowrank_hankel::exact::{rat, UniPoly};
use lowrank_hankel::solver::RationalParametrization;
use lowrank_hankel::verify::{check_property_g, membership_failures, random_pencil};
use lowrank_hankel::solver::GbLimits;
use lowrank_hankel::{build_pencil, low_rank_hankel, SolveOptions};

fn main() -> lowrank_hankel::Result<()> {
    let toy = build_pencil(2, 1, vec![vec![rat(0), rat(1), rat(0)], vec![rat(1), rat(0), rat(1)]])?;
    // x = t with t^2 = 1.
    let good = RationalParametrization::new(UniPoly::from_ints(&[-1, 0, 1]), UniPoly::one(), vec![UniPoly::t()], vec![rat(1)])?;
    // x = t with t^2 = 2.
    let bad = RationalParametrization::new(UniPoly::from_ints(&[-2, 0, 1]), UniPoly::one(), vec![UniPoly::t()], vec![rat(1)])?;
    println!("x^2 = 1: failing minors {:?}", membership_failures(&toy, 1, &good)?);
    println!("x^2 = 2: failing minors {:?}", membership_failures(&toy, 1, &bad)?);

    let pencil = random_pencil(3, 2, 5)?;
    let u = [rat(1), rat(-2), rat(3)];
    println!("property G at rank 2: {}", check_property_g(&pencil, &u, 2, &GbLimits::default())?);

    let opts = SolveOptions {
        verify: false,
        ..SolveOptions::default()
    };
    let res = low_rank_hankel(&pencil, 2, 1, &opts).map_err(|e| e.error)?;
    for p in &res.params {
        let failures = membership_failures(&pencil, 2, p)?;
        println!("degree {:>2}: {}", p.degree(), if failures.is_empty() { "certified" } else { "REJECTED" });
    }
    Ok(())
}
