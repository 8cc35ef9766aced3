//! The recursive sampling algorithm for `{ x : rank H(x) <= r }` and the
//! operations on lists of parametrizations it is assembled from.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::matrix::inverse;
use crate::exact::rational::format_rational;
use crate::exact::{MultiPoly, Rational, UniPoly};
use crate::hankel::LinearHankelPencil;
use crate::roots::{default_eps, real_sample_boxes, RealSampleBox};
use crate::solver::{zero_dim_solve, zero_dim_solve_max_rank, GbLimits, RationalParametrization, SolveOutcome};
use crate::systems::{draw_parameters, incidence_system, lagrange_system, mix_seed, ParameterDraw};
use crate::verify::{check_property_g_system, verify_membership};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Redraws allowed per recursion level after the first draw.
    pub max_retries: usize,
    pub verify: bool,
    pub merge_union: bool,
    /// Check regularity of every incidence system before solving it.
    pub check_genericity: bool,
    pub eps: Rational,
    pub limits: GbLimits,
    pub jobs: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_retries: 3,
            verify: true,
            merge_union: false,
            check_genericity: false,
            eps: default_eps(),
            limits: GbLimits::from_env(),
            jobs: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Fewer variables than the codimension: nothing to sample.
    TooFewVariables,
    /// No variables at all; the constant matrix is tested directly.
    Constant,
    /// As many variables as the codimension: the incidence variety is finite.
    BaseCase,
    /// Critical points of the rotated Lagrange system at rank `r`.
    Lagrange,
    /// The Lagrange system was not finite (or empty); every exact rank
    /// `p <= r` was solved separately.
    MaxRankLoop,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveRecord {
    pub p: usize,
    pub system: String,
    pub outcome: String,
    pub degree: usize,
}

impl SolveRecord {
    fn new(p: usize, system: &str, out: &SolveOutcome) -> Self {
        let outcome = match out {
            SolveOutcome::Finite(_) => "finite",
            SolveOutcome::Empty => "empty",
            SolveOutcome::NotFinite => "not-finite",
        };
        SolveRecord {
            p,
            system: system.into(),
            outcome: outcome.into(),
            degree: out.degree(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DrawRecord {
    pub seed: u64,
    pub matrix: Vec<Vec<String>>,
    pub alpha: String,
    pub u: Vec<Vec<String>>,
    pub v: Vec<Vec<String>>,
}

impl From<&ParameterDraw> for DrawRecord {
    fn from(d: &ParameterDraw) -> Self {
        let row = |v: &[Rational]| v.iter().map(format_rational).collect();
        DrawRecord {
            seed: d.seed,
            matrix: d.mat.iter().map(|r| row(r)).collect(),
            alpha: format_rational(&d.alpha),
            u: d.u.iter().map(|r| row(r)).collect(),
            v: d.v.iter().map(|r| row(r)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelTrace {
    pub depth: usize,
    pub n: usize,
    pub draw: Option<DrawRecord>,
    pub branch: Branch,
    /// The Lagrange system was built on the rotated pencil `H^M`.
    pub rotated: bool,
    pub solves: Vec<SolveRecord>,
    pub redraws: usize,
    pub redraw_reasons: Vec<String>,
}

impl LevelTrace {
    fn new(depth: usize, n: usize, branch: Branch) -> Self {
        LevelTrace {
            depth,
            n,
            draw: None,
            branch,
            rotated: false,
            solves: Vec::new(),
            redraws: 0,
            redraw_reasons: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveTrace {
    pub levels: Vec<LevelTrace>,
}

impl SolveTrace {
    /// Largest `deg q` of any solve at any level.
    pub fn max_degree(&self) -> usize {
        self.levels
            .iter()
            .flat_map(|l| l.solves.iter().map(|s| s.degree))
            .max()
            .unwrap_or(0)
    }

    pub fn total_redraws(&self) -> usize {
        self.levels.iter().map(|l| l.redraws).sum()
    }
}

#[derive(Clone, Debug)]
pub struct SamplePointsResult {
    pub params: Vec<RationalParametrization>,
    pub boxes: Vec<RealSampleBox>,
    pub trace: SolveTrace,
    pub total_degree: usize,
}

/// A failed solve together with the trace recorded up to the failure.
#[derive(Clone, Debug)]
pub struct SolveError {
    pub error: Error,
    pub trace: SolveTrace,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for SolveError {}

impl From<SolveError> for Error {
    fn from(e: SolveError) -> Self {
        e.error
    }
}

pub fn union_params(a: Vec<RationalParametrization>, b: Vec<RationalParametrization>) -> Result<Vec<RationalParametrization>> {
    if let (Some(x), Some(y)) = (a.first(), b.first()) {
        if x.nvars() != y.nvars() {
            return Err(Error::Dimension(format!(
                "union of sets in {} and {} variables",
                x.nvars(),
                y.nvars()
            )));
        }
    }
    let mut out = a;
    out.extend(b);
    Ok(out)
}

/// Prepends the coordinate `x_1 = α` to every point.
pub fn lift_params(a: &[RationalParametrization], alpha: &Rational) -> Vec<RationalParametrization> {
    a.iter()
        .map(|p| {
            let mut coords = Vec::with_capacity(p.nvars() + 1);
            coords.push(p.q0.scale(alpha));
            coords.extend(p.coords.iter().cloned());
            RationalParametrization {
                q: p.q.clone(),
                q0: p.q0.clone(),
                var_names: (1..=coords.len()).map(|i| format!("x{i}")).collect(),
                coords,
                separating_form: p.separating_form.clone(),
            }
        })
        .collect()
}

/// Coordinates `q'_i = Σ_j (M^-1)_ij q_j`, mapping each encoded point `x`
/// to `M^-1 x`.
pub fn change_vars_params(a: &[RationalParametrization], mat: &[Vec<Rational>]) -> Result<Vec<RationalParametrization>> {
    let inv = inverse(mat).ok_or_else(|| Error::Contract("singular change of variables".into()))?;
    a.iter()
        .map(|p| {
            if p.nvars() != inv.len() {
                return Err(Error::Dimension(format!(
                    "{}x{0} change of variables on points in {} variables",
                    inv.len(),
                    p.nvars()
                )));
            }
            let coords = inv
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&p.coords)
                        .fold(UniPoly::zero(), |acc, (c, q)| &acc + &q.scale(c))
                })
                .collect();
            Ok(RationalParametrization {
                q: p.q.clone(),
                q0: p.q0.clone(),
                coords,
                var_names: p.var_names.clone(),
                separating_form: p.separating_form.clone(),
            })
        })
        .collect()
}

/// One parametrization of the union, obtained by solving the product of the
/// ideals `<q(t), q0(t) x_i - q_i(t)>` of the pieces.
pub fn merge_params(a: &[RationalParametrization], seed: u64, limits: &GbLimits) -> Result<Vec<RationalParametrization>> {
    if a.len() < 2 {
        return Ok(a.to_vec());
    }
    let n = a[0].nvars();
    let nv = n + 1;
    let in_t = |p: &UniPoly| {
        p.coeffs().iter().enumerate().fold(MultiPoly::zero(nv), |acc, (k, c)| {
            &acc + &MultiPoly::var(nv, n).pow(k as u32).scale(c)
        })
    };
    let ideal = |p: &RationalParametrization| -> Vec<MultiPoly> {
        let mut gens = vec![in_t(&p.q)];
        let q0 = in_t(&p.q0);
        for (i, c) in p.coords.iter().enumerate() {
            gens.push(&(&q0 * &MultiPoly::var(nv, i)) - &in_t(c));
        }
        gens
    };
    let mut product = ideal(&a[0]);
    for p in &a[1..] {
        if p.nvars() != n {
            return Err(Error::Dimension("merging sets in different ambient spaces".into()));
        }
        let next = ideal(p);
        product = product.iter().flat_map(|f| next.iter().map(move |g| f * g)).collect();
    }
    let proj: Vec<usize> = (0..n).collect();
    match zero_dim_solve(&product, &proj, seed, limits)? {
        SolveOutcome::Finite(ps) => Ok(ps),
        SolveOutcome::Empty => Ok(Vec::new()),
        SolveOutcome::NotFinite => Err(Error::Contract("union of finite sets is not finite".into())),
    }
}

struct Recursion<'a> {
    r: usize,
    opts: &'a SolveOptions,
    trace: Vec<LevelTrace>,
}

fn outcome_params(out: SolveOutcome, what: &str) -> Result<Vec<RationalParametrization>> {
    match out {
        SolveOutcome::Finite(ps) => Ok(ps),
        SolveOutcome::Empty => Ok(Vec::new()),
        SolveOutcome::NotFinite => Err(Error::Genericity(format!("{what} has positive dimension"))),
    }
}

impl Recursion<'_> {
    fn level(&mut self, pencil: &LinearHankelPencil, seed: u64, depth: usize) -> Result<Vec<RationalParametrization>> {
        let (m, n, r) = (pencil.m(), pencil.n(), self.r);
        let slot = self.trace.len();
        if n < 2 * m - 2 * r - 1 {
            self.trace.push(LevelTrace::new(depth, n, Branch::TooFewVariables));
            return Ok(Vec::new());
        }
        let mut reasons = Vec::new();
        for attempt in 0..=self.opts.max_retries {
            self.trace.truncate(slot);
            self.trace.push(LevelTrace::new(depth, n, Branch::BaseCase));
            let s = seed.wrapping_add(attempt as u64);
            match self.attempt(pencil, s, depth, slot) {
                Ok(out) => {
                    let rec = &mut self.trace[slot];
                    rec.redraws = attempt;
                    rec.redraw_reasons = reasons;
                    return Ok(out);
                }
                Err(Error::Genericity(msg)) => reasons.push(msg),
                Err(e) => {
                    self.trace[slot].redraw_reasons = reasons;
                    return Err(e);
                }
            }
        }
        self.trace[slot].redraws = self.opts.max_retries;
        self.trace[slot].redraw_reasons = reasons.clone();
        Err(Error::Randomness(format!(
            "depth {depth}: {} draws failed, last: {}",
            self.opts.max_retries + 1,
            reasons.last().map(String::as_str).unwrap_or("")
        )))
    }

    fn regularity(&self, f: &crate::systems::IncidenceSystem) -> Result<()> {
        if self.opts.check_genericity && !check_property_g_system(f, &self.opts.limits)? {
            return Err(Error::Genericity(format!("incidence system at rank {} is not regular", f.p)));
        }
        Ok(())
    }

    fn attempt(
        &mut self,
        pencil: &LinearHankelPencil,
        s: u64,
        depth: usize,
        slot: usize,
    ) -> Result<Vec<RationalParametrization>> {
        let (m, n, r) = (pencil.m(), pencil.n(), self.r);
        let limits = &self.opts.limits;
        let x: Vec<usize> = (0..n).collect();
        let draw = draw_parameters(s, depth, m, n, r)?;
        self.trace[slot].draw = Some(DrawRecord::from(&draw));

        if n == 2 * m - 2 * r - 1 {
            let f = incidence_system(pencil, &draw.u[r], r)?;
            self.regularity(&f)?;
            let out = zero_dim_solve(&f.polys, &x, s, limits)?;
            self.trace[slot].solves.push(SolveRecord::new(r, "incidence", &out));
            return outcome_params(out, "the incidence system");
        }

        let rotated = pencil.change_vars(&draw.mat)?;
        self.trace[slot].rotated = true;
        let f = incidence_system(&rotated, &draw.u[r], r)?;
        self.regularity(&f)?;
        let l = lagrange_system(&f, &draw.v[r])?;
        let out = zero_dim_solve(&l.polys, &x, s, limits)?;
        self.trace[slot].solves.push(SolveRecord::new(r, "lagrange", &out));
        let critical = match out {
            SolveOutcome::Finite(ps) => {
                self.trace[slot].branch = Branch::Lagrange;
                ps
            }
            SolveOutcome::Empty | SolveOutcome::NotFinite => {
                self.trace[slot].branch = Branch::MaxRankLoop;
                let per_p: Vec<Result<(SolveRecord, Vec<RationalParametrization>)>> = (0..=r)
                    .into_par_iter()
                    .map(|p| {
                        let f = incidence_system(&rotated, &draw.u[p], p)?;
                        let l = lagrange_system(&f, &draw.v[p])?;
                        let out = zero_dim_solve_max_rank(&l, &x, mix_seed(&[s, p as u64]), limits)?;
                        let rec = SolveRecord::new(p, "max-rank", &out);
                        Ok((rec, outcome_params(out, &format!("the rank-{p} Lagrange system"))?))
                    })
                    .collect();
                let mut acc = Vec::new();
                for item in per_p {
                    let (rec, ps) = item?;
                    self.trace[slot].solves.push(rec);
                    acc = union_params(acc, ps)?;
                }
                acc
            }
        };

        let section = rotated.substitute_x1(&draw.alpha)?;
        let below = match self.level(&section, mix_seed(&[s, depth as u64 + 1]), depth + 1) {
            Err(Error::Genericity(msg)) => return Err(Error::Randomness(msg)),
            other => other?,
        };
        let all = union_params(critical, lift_params(&below, &draw.alpha))?;
        let inv = inverse(&draw.mat).ok_or_else(|| Error::Genericity("singular change of variables".into()))?;
        change_vars_params(&all, &inv)
    }
}

/// Exact parametrizations of a finite set meeting every connected component
/// of `{ x in R^n : rank H(x) <= r }`, with isolating boxes for its real
/// points.
pub fn low_rank_hankel(
    pencil: &LinearHankelPencil,
    r: usize,
    seed: u64,
    opts: &SolveOptions,
) -> std::result::Result<SamplePointsResult, SolveError> {
    let bare = |error| SolveError {
        error,
        trace: SolveTrace::default(),
    };
    if r >= pencil.m() {
        return Err(bare(Error::Contract(format!("rank {r} out of range for m = {}", pencil.m()))));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| bare(Error::Resource(e.to_string())))?;
    pool.install(|| run(pencil, r, seed, opts))
}

fn run(
    pencil: &LinearHankelPencil,
    r: usize,
    seed: u64,
    opts: &SolveOptions,
) -> std::result::Result<SamplePointsResult, SolveError> {
    let mut rec = Recursion {
        r,
        opts,
        trace: Vec::new(),
    };
    let solved = if pencil.n() == 0 {
        rec.trace.push(LevelTrace::new(0, 0, Branch::Constant));
        if pencil.mats()[0].rank() <= r {
            RationalParametrization::new(UniPoly::t(), UniPoly::one(), Vec::new(), vec![Rational::from_integer(1.into())])
                .map(|p| vec![p])
        } else {
            Ok(Vec::new())
        }
    } else {
        rec.level(pencil, seed, 0)
    };
    let trace = SolveTrace { levels: rec.trace };
    let fail = |error, trace: &SolveTrace| SolveError {
        error,
        trace: trace.clone(),
    };
    let mut params = solved.map_err(|e| fail(e, &trace))?;
    if opts.merge_union && params.len() > 1 {
        params = merge_params(&params, mix_seed(&[seed, 0x6d65726765]), &opts.limits).map_err(|e| fail(e, &trace))?;
    }
    if opts.verify {
        for (k, p) in params.iter().enumerate() {
            if !verify_membership(pencil, r, p).map_err(|e| fail(e, &trace))? {
                return Err(fail(
                    Error::Verification(format!("parametrization {k} is not in the rank-{r} locus")),
                    &trace,
                ));
            }
        }
    }
    let boxes = real_sample_boxes(&params, &opts.eps).map_err(|e| fail(e, &trace))?;
    let total_degree = params.iter().map(RationalParametrization::degree).sum();
    Ok(SamplePointsResult {
        params,
        boxes,
        trace,
        total_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::hankel::build_pencil;

    fn point(coords: &[i64]) -> RationalParametrization {
        RationalParametrization::new(
            UniPoly::from_ints(&[-1, 1]),
            UniPoly::one(),
            coords.iter().map(|&c| UniPoly::constant(rat(c))).collect(),
            vec![rat(1)],
        )
        .unwrap()
    }

    fn at_root(p: &RationalParametrization) -> Vec<Rational> {
        let root = -p.q.coeff(0);
        p.coords.iter().map(|c| c.eval(&root) / p.q0.eval(&root)).collect()
    }

    #[test]
    fn combinators() {
        let a = point(&[1, 2]);
        let swap = vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]];
        let moved = change_vars_params(std::slice::from_ref(&a), &swap).unwrap();
        assert_eq!(at_root(&moved[0]), vec![rat(2), rat(1)]);
        let lifted = lift_params(&[point(&[1])], &rat(5));
        assert_eq!(at_root(&lifted[0]), vec![rat(5), rat(1)]);
        assert!(lift_params(&[], &rat(5)).is_empty());
        assert_eq!(union_params(Vec::new(), vec![a.clone()]).unwrap().len(), 1);
        assert!(union_params(vec![point(&[1])], vec![a]).is_err());
        assert!(change_vars_params(&[], &[vec![rat(0)]]).is_err());
    }

    #[test]
    fn toy_pencil_and_constant_case() {
        let toy = build_pencil(2, 1, vec![vec![rat(0), rat(1), rat(0)], vec![rat(1), rat(0), rat(1)]]).unwrap();
        let res = low_rank_hankel(&toy, 1, 1, &SolveOptions::default()).unwrap();
        assert_eq!(res.total_degree, 2);
        assert_eq!(res.boxes.len(), 2);
        assert!(res.boxes.iter().any(|b| b.contains(&[rat(1)])));
        assert!(res.boxes.iter().any(|b| b.contains(&[rat(-1)])));
        assert!(low_rank_hankel(&toy, 2, 1, &SolveOptions::default()).is_err());

        let constant = build_pencil(3, 0, vec![vec![rat(1), rat(0), rat(0), rat(0), rat(0)]]).unwrap();
        let res = low_rank_hankel(&constant, 2, 1, &SolveOptions::default()).unwrap();
        assert_eq!(res.params.len(), 1);
        let full = build_pencil(3, 0, vec![vec![rat(1), rat(0), rat(0), rat(1), rat(1)]]).unwrap();
        assert!(low_rank_hankel(&full, 2, 1, &SolveOptions::default()).unwrap().params.is_empty());
    }
}
