//! Exact certificates, planted instances and the degree-reproduction harness.

use std::time::Instant;

use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::total_output_bound;
use crate::driver::{low_rank_hankel, SolveOptions};
use crate::error::{Error, Result};
use crate::exact::{jacobian, Rational};
use crate::hankel::{HankelGen, LinearHankelPencil};
use crate::solver::{buchberger, GbLimits, MonomialOrder, RationalParametrization};
use crate::systems::{draw_int, incidence_system, mix_seed, rng_for, IncidenceSystem};

/// Indices of the `(r+1)`-minors of `H~_r` that do not vanish on the points
/// of `param`; minors are numbered in the order of
/// [`PolyMatrix::minors`](crate::exact::PolyMatrix::minors).
pub fn membership_failures(pencil: &LinearHankelPencil, r: usize, param: &RationalParametrization) -> Result<Vec<usize>> {
    if param.nvars() != pencil.n() {
        return Err(Error::Dimension(format!(
            "points in {} variables for a pencil in {}",
            param.nvars(),
            pencil.n()
        )));
    }
    let rect = pencil.rect_system(r)?;
    let minors = rect.matrix.minors(r + 1)?;
    let mask = param.vanishing_mask(&minors)?;
    Ok(mask.iter().enumerate().filter(|(_, &ok)| !ok).map(|(k, _)| k).collect())
}

/// Whether `rank H(x) <= r` at every point encoded by `param`.
pub fn verify_membership(pencil: &LinearHankelPencil, r: usize, param: &RationalParametrization) -> Result<bool> {
    Ok(membership_failures(pencil, r, param)?.is_empty())
}

/// Regularity of the incidence system `f(H, u, p)`: its Jacobian has full
/// row rank at every complex solution.
pub fn check_property_g(pencil: &LinearHankelPencil, u: &[Rational], p: usize, limits: &GbLimits) -> Result<bool> {
    check_property_g_system(&incidence_system(pencil, u, p)?, limits)
}

pub fn check_property_g_system(f: &IncidenceSystem, limits: &GbLimits) -> Result<bool> {
    let order = MonomialOrder::DegRevLex;
    if buchberger(&f.polys, order, limits)?.is_unit() {
        return Ok(true);
    }
    let vars: Vec<usize> = (0..f.nvars()).collect();
    let jac = jacobian(&f.polys, &vars)?;
    let k = f.polys.len();
    if k > f.nvars() {
        return Ok(false);
    }
    let mut system = f.polys.clone();
    system.extend(jac.minors(k)?.into_iter().filter(|g| !g.is_zero()));
    Ok(buchberger(&system, order, limits)?.is_unit())
}

/// Recipe for a pencil with `rank H(x0) = r` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantSpec {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub x0: Vec<Rational>,
    pub seed: u64,
}

/// Random `H_1, ..., H_n` and `H_0 = K - Σ x0_i H_i`, where `K` is the Hankel
/// matrix of a sum of `r` geometric sequences.
pub fn plant_rank_deficient(spec: &PlantSpec) -> Result<LinearHankelPencil> {
    let PlantSpec { m, n, r, .. } = *spec;
    if r == 0 || r >= m {
        return Err(Error::Contract(format!("planted rank must satisfy 1 <= r < m, got r = {r}, m = {m}")));
    }
    if spec.x0.len() != n {
        return Err(Error::Dimension(format!("point of length {} for n = {n}", spec.x0.len())));
    }
    let mut rng = rng_for(&[spec.seed, m as u64, n as u64, r as u64, 0x706c616e74]);
    let mats: Vec<HankelGen> = (0..n)
        .map(|_| HankelGen::new(m, (0..2 * m - 1).map(|_| draw_int(&mut rng)).collect()))
        .collect::<Result<_>>()?;
    let mut kernel = None;
    for _ in 0..64 {
        let mut bases: Vec<i64> = Vec::with_capacity(r);
        while bases.len() < r {
            let a = rng.gen_range(-5..=5i64);
            if !bases.contains(&a) {
                bases.push(a);
            }
        }
        let weights: Vec<i64> = (0..r)
            .map(|_| loop {
                let c = rng.gen_range(-9..=9i64);
                if c != 0 {
                    break c;
                }
            })
            .collect();
        let gens: Vec<Rational> = (0..2 * m - 1)
            .map(|j| {
                let s: i64 = bases.iter().zip(&weights).map(|(&a, &c)| c * a.pow(j as u32)).sum();
                Rational::from_integer(s.into())
            })
            .collect();
        let k = HankelGen::new(m, gens)?;
        if k.rank() == r {
            kernel = Some(k);
            break;
        }
    }
    let kernel = kernel.ok_or_else(|| Error::Randomness("no planted matrix of the requested rank".into()))?;
    let mut h0: Vec<Rational> = kernel.gens().to_vec();
    for (x, h) in spec.x0.iter().zip(&mats) {
        for (g, c) in h0.iter_mut().zip(h.gens()) {
            *g -= x * c;
        }
    }
    let mut all = vec![HankelGen::new(m, h0)?];
    all.extend(mats);
    LinearHankelPencil::from_mats(all)
}

/// Pencil with independent integer entries in `[-97, 97]`.
pub fn random_pencil(m: usize, n: usize, seed: u64) -> Result<LinearHankelPencil> {
    let mut rng = rng_for(&[seed, m as u64, n as u64, 0x7261_6e64]);
    let mats = (0..=n)
        .map(|_| HankelGen::new(m, (0..2 * m - 1).map(|_| draw_int(&mut rng)).collect()))
        .collect::<Result<_>>()?;
    LinearHankelPencil::from_mats(mats)
}

/// One row of the published degree tables; `None` where no value is given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TableRow {
    pub m: usize,
    pub r: usize,
    pub n: usize,
    pub total_deg: Option<u64>,
    pub max_deg: Option<u64>,
}

pub fn default_table_rows() -> Vec<TableRow> {
    serde_json::from_str(include_str!("../data/tables.json")).expect("bundled table rows parse")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub seed: u64,
    pub total_degree: Option<u64>,
    pub max_degree: Option<u64>,
    pub redraws: usize,
    pub seconds: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RowReport {
    pub row: TableRow,
    pub bound: String,
    pub bounds_only: bool,
    pub runs: Vec<RunReport>,
}

impl RowReport {
    /// Every run finished and matched the expected total degree.
    pub fn total_matches(&self) -> bool {
        !self.runs.is_empty() && self.runs.iter().all(|r| r.error.is_none() && r.total_degree == self.row.total_deg)
    }

    pub fn within_bound(&self) -> bool {
        let bound: Option<u64> = self.bound.parse().ok();
        self.runs
            .iter()
            .filter_map(|r| r.total_degree)
            .all(|d| bound.is_none_or(|b| d <= b))
    }
}

/// Runs the solver on `seeds` random pencils for every row with
/// `m <= max_m`; larger rows only get their bound.
pub fn reproduce_degrees(rows: &[TableRow], seeds: u64, max_m: usize, opts: &SolveOptions) -> Vec<RowReport> {
    let jobs: Vec<(usize, u64)> = rows
        .iter()
        .enumerate()
        .filter(|(_, row)| row.m <= max_m)
        .flat_map(|(i, _)| (0..seeds).map(move |s| (i, s)))
        .collect();
    let single = SolveOptions {
        jobs: 1,
        ..opts.clone()
    };
    let runs: Vec<(usize, RunReport)> = jobs
        .into_par_iter()
        .map(|(i, seed)| (i, run_row(&rows[i], seed, &single)))
        .collect();
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let bound = if row.r < row.m && row.n >= 1 {
                total_output_bound(row.m, row.n, row.r).total.to_string()
            } else {
                "-".into()
            };
            RowReport {
                row: row.clone(),
                bound,
                bounds_only: row.m > max_m,
                runs: runs.iter().filter(|(k, _)| *k == i).map(|(_, r)| r.clone()).collect(),
            }
        })
        .collect()
}

fn run_row(row: &TableRow, seed: u64, opts: &SolveOptions) -> RunReport {
    let start = Instant::now();
    let outcome = random_pencil(row.m, row.n, mix_seed(&[seed, 0x7461626c65]))
        .map_err(|e| (e, 0))
        .and_then(|p| low_rank_hankel(&p, row.r, seed, opts).map_err(|e| (e.error, e.trace.total_redraws())));
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok(res) => RunReport {
            seed,
            total_degree: res.total_degree.to_u64(),
            max_degree: res.trace.max_degree().to_u64(),
            redraws: res.trace.total_redraws(),
            seconds,
            error: None,
        },
        Err((e, redraws)) => RunReport {
            seed,
            total_degree: None,
            max_degree: None,
            redraws,
            seconds,
            error: Some(e.to_string()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, UniPoly};
    use crate::hankel::build_pencil;

    fn toy() -> LinearHankelPencil {
        build_pencil(2, 1, vec![vec![rat(0), rat(1), rat(0)], vec![rat(1), rat(0), rat(1)]]).unwrap()
    }

    #[test]
    fn toy_membership() {
        let pm = RationalParametrization::new(UniPoly::from_ints(&[-1, 0, 1]), UniPoly::one(), vec![UniPoly::t()], vec![rat(1)]).unwrap();
        assert!(verify_membership(&toy(), 1, &pm).unwrap());
        let off = RationalParametrization::new(UniPoly::from_ints(&[-3, 1]), UniPoly::one(), vec![UniPoly::t()], vec![rat(1)]).unwrap();
        assert_eq!(membership_failures(&toy(), 1, &off).unwrap(), vec![0]);
    }

    #[test]
    fn planted_rank() {
        for seed in 0..4 {
            let spec = PlantSpec {
                m: 3,
                n: 2,
                r: 2,
                x0: vec![rat(1), rat(-2)],
                seed,
            };
            let p = plant_rank_deficient(&spec).unwrap();
            assert_eq!(p.rank_at(&spec.x0).unwrap(), 2);
            assert_eq!(p, plant_rank_deficient(&spec).unwrap());
        }
        let bad = PlantSpec {
            m: 2,
            n: 1,
            r: 1,
            x0: vec![],
            seed: 0,
        };
        assert!(plant_rank_deficient(&bad).is_err());
    }

    #[test]
    fn property_g_on_small_cases() {
        let limits = GbLimits::default();
        let zero = build_pencil(2, 1, vec![vec![rat(0); 3], vec![rat(0); 3]]).unwrap();
        assert!(!check_property_g(&zero, &[rat(1)], 0, &limits).unwrap());
        assert!(check_property_g(&toy(), &[rat(1), rat(2)], 1, &limits).unwrap());
    }
}
