//! Plants a point of rank r, solves, and checks that some box is near it.

use lowrank_hankel::exact::{frac, rat, Rational};
use lowrank_hankel::verify::{plant_rank_deficient, verify_membership, PlantSpec};
use lowrank_hankel::{low_rank_hankel, SolveOptions};

fn main() -> lowrank_hankel::Result<()> {
    let x0 = vec![rat(1), frac(-1, 2)];
    let spec = PlantSpec {
        m: 3,
        n: 2,
        r: 2,
        x0: x0.clone(),
        seed: 11,
    };
    let pencil = plant_rank_deficient(&spec)?;
    println!("rank H(x0) = {}", pencil.rank_at(&x0)?);

    let res = low_rank_hankel(&pencil, spec.r, 3, &SolveOptions::default()).map_err(|e| e.error)?;
    for p in &res.params {
        println!("component of degree {}, certified: {}", p.degree(), verify_membership(&pencil, spec.r, p)?);
    }
    println!("{} real sample points", res.boxes.len());

    // The planted point lies on a curve; print the sample closest to it.
    let dist = |b: &lowrank_hankel::roots::RealSampleBox| -> Rational {
        b.intervals.iter().zip(&x0).map(|((lo, _), x)| (lo - x) * (lo - x)).sum()
    };
    if let Some(b) = res.boxes.iter().min_by(|a, b| dist(a).cmp(&dist(b))) {
        let mid: Vec<f64> = b.intervals.iter().map(|(lo, hi)| to_f64(&((lo + hi) / rat(2)))).collect();
        println!("closest sample {mid:?}");
    }
    Ok(())
}

fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}
