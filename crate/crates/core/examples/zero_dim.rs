//! Direct use of the zero-dimensional solver on a small system.

use lowrank_hankel::exact::{rat, MultiPoly};
use lowrank_hankel::solver::{buchberger, zero_dim_solve, GbLimits, MonomialOrder, SolveOutcome};

fn main() -> lowrank_hankel::Result<()> {
    let x = MultiPoly::var(2, 0);
    let y = MultiPoly::var(2, 1);
    let c = |k: i64| MultiPoly::constant(2, rat(k));
    // x^2 + y^2 = 5, x y = 2: four points (±1, ±2), (±2, ±1).
    let system = vec![&(&(&x * &x) + &(&y * &y)) - &c(5), &(&x * &y) - &c(2)];

    let limits = GbLimits::default();
    let gb = buchberger(&system, MonomialOrder::Lex, &limits)?;
    println!("lex basis:");
    for g in gb.gens() {
        println!("  {g}");
    }

    match zero_dim_solve(&system, &[0, 1], 1, &limits)? {
        SolveOutcome::Finite(params) => {
            for p in params {
                println!("q = {}", p.q);
                for (name, c) in ["x", "y"].iter().zip(&p.coords) {
                    println!("  {name} = ({c}) / ({})", p.q0);
                }
            }
        }
        other => println!("{other:?}"),
    }
    Ok(())
}
