//! Zero-dimensional solving: from a polynomial system to a rational
//! parametrization of (a projection of) its finite zero set.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{jacobian, MultiPoly, PolyMatrix, Rational, UniPoly};
use crate::systems::{draw_int, rng_for, LagrangeSystem};

use super::algebra::{krylov_shape, Algebra, QuotientAlgebra};
use super::groebner::{buchberger, GbLimits, GroebnerBasis, MonomialOrder};
use super::modp::{eval_at, nonsingular_part_mod, Fp};
use super::modular::{modular_solve, ModularOutcome, ModularRequest, PrimeFilter};
use super::param::RationalParametrization;

const SEPARATING_ATTEMPTS: usize = 10;

/// Result of a zero-dimensional solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Finite(Vec<RationalParametrization>),
    NotFinite,
    Empty,
}

impl SolveOutcome {
    pub fn params(&self) -> &[RationalParametrization] {
        match self {
            SolveOutcome::Finite(p) => p,
            _ => &[],
        }
    }

    pub fn degree(&self) -> usize {
        self.params().iter().map(RationalParametrization::degree).sum()
    }
}

fn draw_form(rng: &mut ChaCha8Rng, vars: &[usize], attempt: usize) -> Vec<(usize, Rational)> {
    let bound = 8 * (attempt as i64 + 1);
    loop {
        let form: Vec<(usize, Rational)> = vars
            .iter()
            .map(|&v| (v, Rational::from_integer(rng.gen_range(-bound..=bound).into())))
            .collect();
        if vars.is_empty() || form.iter().any(|(_, c)| !c.is_zero()) {
            return form;
        }
    }
}

/// Adds the squarefree parts of the univariate minimal polynomials that are
/// not squarefree; the result generates the radical. Returns `None` when the
/// ideal already was radical in every variable.
fn radicalize(alg: &mut QuotientAlgebra, limits: &GbLimits) -> Result<Option<GroebnerBasis>> {
    let nvars = alg.gb().nvars();
    let all: Vec<usize> = (0..nvars).collect();
    alg.prepare(&all)?;
    let mut extra = Vec::new();
    for v in 0..nvars {
        let mu = krylov_shape(alg, &[(v, Rational::from_integer(1.into()))], &[]).minpoly;
        if !mu.is_squarefree() {
            let sf = mu.squarefree_part();
            let x = MultiPoly::var(nvars, v);
            let mut p = MultiPoly::zero(nvars);
            for (k, c) in sf.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    p = &p + &x.pow(k as u32).scale(c);
                }
            }
            extra.push(p);
        }
    }
    if extra.is_empty() {
        return Ok(None);
    }
    let mut gens = alg.gb().gens().to_vec();
    gens.extend(extra);
    Ok(Some(buchberger(&gens, MonomialOrder::DegRevLex, limits)?))
}

/// Rational parametrization of the projection of `V(G)` onto `proj`, or
/// `None` when the variety is empty.
pub fn rational_parametrization(
    gb: &GroebnerBasis,
    proj: &[usize],
    seed: u64,
    limits: &GbLimits,
) -> Result<Option<RationalParametrization>> {
    if !gb.is_zero_dimensional() {
        return Err(Error::Contract("parametrization of a positive-dimensional ideal".into()));
    }
    if let Some(&bad) = proj.iter().find(|&&v| v >= gb.nvars()) {
        return Err(Error::Dimension(format!("projection variable {bad} out of range")));
    }
    let mut alg = QuotientAlgebra::new(gb.clone());
    if alg.dim() == 0 {
        return Ok(None);
    }
    alg.prepare(proj)?;
    let mut rng = rng_for(&[seed, 0x7061_7261_6d00]);
    let mut radical = false;
    for attempt in 0..SEPARATING_ATTEMPTS {
        let form = draw_form(&mut rng, proj, attempt);
        let shape = krylov_shape(&alg, &form, proj);
        if shape.coords.iter().all(Option::is_some) {
            let q = shape.minpoly.squarefree_part();
            let coords = shape.coords.into_iter().map(|c| c.unwrap().rem(&q)).collect();
            let sep = form.iter().map(|(_, c)| c.clone()).collect();
            return RationalParametrization::new(q, UniPoly::one(), coords, sep).map(Some);
        }
        if !radical {
            radical = true;
            if let Some(rad) = radicalize(&mut alg, limits)? {
                alg = QuotientAlgebra::new(rad);
                alg.prepare(proj)?;
            }
        }
    }
    Err(Error::Genericity(format!(
        "no separating linear form in {SEPARATING_ATTEMPTS} draws"
    )))
}

/// Empty, not finite, or one parametrization of the solution set whose
/// coordinates are given for the `proj` variables only.
///
/// `q` has one root per solution of the system, so its degree counts
/// solutions; distinct roots may share the same projected point.
pub fn zero_dim_solve(system: &[MultiPoly], proj: &[usize], seed: u64, limits: &GbLimits) -> Result<SolveOutcome> {
    if system.is_empty() {
        return Err(Error::Contract("empty polynomial system".into()));
    }
    if let Some(&bad) = proj.iter().find(|&&v| v >= system[0].nvars()) {
        return Err(Error::Dimension(format!("projection variable {bad} out of range")));
    }
    if let Some(out) = solve_modular(system, proj, None, system.len(), seed, limits)? {
        return Ok(out);
    }
    let gb = buchberger(system, MonomialOrder::DegRevLex, limits)?;
    outcome_from_basis(&gb, proj, seed, limits)
}

fn restrict(param: &RationalParametrization, proj: &[usize]) -> Result<RationalParametrization> {
    let coords = proj.iter().map(|&v| param.coords[v].clone()).collect();
    let sep = proj.iter().map(|&v| param.separating_form[v].clone()).collect();
    RationalParametrization::new(param.q.clone(), param.q0.clone(), coords, sep)
}

fn outcome_from_basis(gb: &GroebnerBasis, proj: &[usize], seed: u64, limits: &GbLimits) -> Result<SolveOutcome> {
    if gb.is_unit() {
        return Ok(SolveOutcome::Empty);
    }
    if !gb.is_zero_dimensional() {
        return Ok(SolveOutcome::NotFinite);
    }
    let all: Vec<usize> = (0..gb.nvars()).collect();
    Ok(match rational_parametrization(gb, &all, seed, limits)? {
        Some(p) => SolveOutcome::Finite(vec![restrict(&p, proj)?]),
        None => SolveOutcome::Empty,
    })
}

/// Multi-modular attempt; `None` asks the caller to fall back to exact
/// arithmetic.
fn solve_modular(
    system: &[MultiPoly],
    proj: &[usize],
    filter: Option<&PrimeFilter<'_>>,
    certify: usize,
    seed: u64,
    limits: &GbLimits,
) -> Result<Option<SolveOutcome>> {
    let all: Vec<usize> = (0..system[0].nvars()).collect();
    let req = ModularRequest {
        system,
        proj: &all,
        filter,
        certify,
        seed,
        limits: *limits,
    };
    Ok(match modular_solve(&req)? {
        ModularOutcome::Empty => Some(SolveOutcome::Empty),
        ModularOutcome::NotFinite => Some(SolveOutcome::NotFinite),
        ModularOutcome::NotSeparating => None,
        ModularOutcome::Finite(param) => Some(SolveOutcome::Finite(vec![restrict(&param, proj)?])),
    })
}

/// The factor of the squarefree `q` on whose roots the matrix (entries in
/// `Q[t]/q`) is nonsingular. Pivots that are zero divisors split `q`.
pub(crate) fn nonsingular_part(mat: Vec<Vec<UniPoly>>, q: &UniPoly) -> UniPoly {
    if q.degree().is_none_or(|d| d == 0) || mat.is_empty() {
        return q.clone();
    }
    let n = mat.len();
    let reduced: Vec<Vec<UniPoly>> = mat.iter().map(|row| row.iter().map(|e| e.rem(q)).collect()).collect();
    let Some(pr) = (0..n).find(|&i| !reduced[i][0].is_zero()) else {
        return UniPoly::one();
    };
    let a = &reduced[pr][0];
    let g = a.gcd(q);
    if !g.is_constant() {
        let q2 = q.exact_div(&g).expect("gcd divides q").monic();
        let left = nonsingular_part(reduced.clone(), &g);
        let right = nonsingular_part(reduced, &q2);
        return (&left * &right).monic();
    }
    let inv = a.inverse_mod(q).expect("coprime pivot is invertible");
    let mut rows = reduced;
    rows.swap(0, pr);
    let pivot_row: Vec<UniPoly> = rows[0].iter().map(|e| e.mul_mod(&inv, q)).collect();
    let sub: Vec<Vec<UniPoly>> = rows[1..]
        .iter()
        .map(|row| {
            let f = &row[0];
            (1..n)
                .map(|j| {
                    if f.is_zero() {
                        row[j].clone()
                    } else {
                        (&row[j] - &f.mul_mod(&pivot_row[j], q)).rem(q)
                    }
                })
                .collect()
        })
        .collect();
    nonsingular_part(sub, q)
}

fn embed_matrix(mat: &PolyMatrix, nvars: usize) -> PolyMatrix {
    let positions: Vec<usize> = (0..mat.nvars()).collect();
    let entries = mat.entries().iter().map(|e| e.embed(nvars, &positions)).collect();
    PolyMatrix::new(mat.rows(), mat.cols(), entries).expect("shape preserved")
}

/// Solutions of a Lagrange system at which `rank H~_p(x) = p` exactly and
/// the Jacobian of the system is invertible, projected onto `proj`.
///
/// The rank condition adjoins the `(p+1)`-minors of `H~_p` and saturates by
/// a random combination `g` of its `p`-minors through `1 - s g`.
pub fn zero_dim_solve_max_rank(
    l: &LagrangeSystem,
    proj: &[usize],
    seed: u64,
    limits: &GbLimits,
) -> Result<SolveOutcome> {
    let mut last_err = None;
    for attempt in 0..2u64 {
        match max_rank_attempt(l, proj, seed, attempt, limits) {
            Err(Error::Genericity(msg)) => last_err = Some(Error::Genericity(msg)),
            other => return other,
        }
    }
    Err(last_err.unwrap())
}

fn max_rank_attempt(
    l: &LagrangeSystem,
    proj: &[usize],
    seed: u64,
    attempt: u64,
    limits: &GbLimits,
) -> Result<SolveOutcome> {
    let p = l.parent.p;
    let nl = l.nvars();
    let saturate = p > 0;
    let total = if saturate { nl + 1 } else { nl };
    let mut rng = rng_for(&[seed, attempt, 0x6d617872616e6b]);
    let lift: Vec<usize> = (0..nl).collect();
    let mut system: Vec<MultiPoly> = l.polys.iter().map(|f| f.embed(total, &lift)).collect();
    let rect = embed_matrix(&l.parent.rect, total);
    system.extend(rect.minors(p + 1)?.into_iter().filter(|f| !f.is_zero()));
    if saturate {
        let mut g = MultiPoly::zero(total);
        for minor in rect.minors(p)? {
            g = &g + &minor.scale(&draw_int(&mut rng));
        }
        if g.is_zero() {
            return Ok(SolveOutcome::Empty);
        }
        let s = MultiPoly::var(total, nl);
        system.push(&MultiPoly::one(total) - &(&s * &g));
    }
    let jac = jacobian(&l.polys, &lift)?;
    let filter = |f: Fp, q: &[u64], coords: &[Vec<u64>]| -> Vec<u64> {
        let mut mat = Vec::with_capacity(nl);
        for i in 0..nl {
            let mut row = Vec::with_capacity(nl);
            for j in 0..nl {
                match eval_at(f, jac.get(i, j), &coords[..nl], q) {
                    Some(e) => row.push(e),
                    None => return q.to_vec(),
                }
            }
            mat.push(row);
        }
        nonsingular_part_mod(f, mat, q)
    };
    let sub_seed = rng.gen::<u64>();
    if let Some(out) = solve_modular(&system, proj, Some(&filter), l.polys.len(), sub_seed, limits)? {
        return Ok(out);
    }
    let gb = buchberger(&system, MonomialOrder::DegRevLex, limits)?;
    if gb.is_unit() {
        return Ok(SolveOutcome::Empty);
    }
    if !gb.is_zero_dimensional() {
        return Ok(SolveOutcome::NotFinite);
    }
    let all: Vec<usize> = (0..total).collect();
    let Some(full) = rational_parametrization(&gb, &all, sub_seed, limits)? else {
        return Ok(SolveOutcome::Empty);
    };
    let coords = full.normalized_coords();
    let at_points = RationalParametrization {
        q: full.q.clone(),
        q0: UniPoly::one(),
        coords: coords[..nl].to_vec(),
        var_names: Vec::new(),
        separating_form: Vec::new(),
    };
    let mut mat = Vec::with_capacity(nl);
    for i in 0..nl {
        let mut row = Vec::with_capacity(nl);
        for j in 0..nl {
            row.push(at_points.evaluate_mod(jac.get(i, j))?);
        }
        mat.push(row);
    }
    let keep = nonsingular_part(mat, &full.q);
    if keep.degree().is_none_or(|d| d == 0) {
        return Ok(SolveOutcome::Empty);
    }
    let kept: Vec<UniPoly> = proj.iter().map(|&v| coords[v].rem(&keep)).collect();
    let sep = proj.iter().map(|&v| full.separating_form[v].clone()).collect();
    let param = RationalParametrization::new(keep, UniPoly::one(), kept, sep)?;
    Ok(SolveOutcome::Finite(vec![param]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, rat};

    fn limits() -> GbLimits {
        GbLimits::default()
    }

    /// Every input polynomial vanishes on the parametrized set.
    fn sound(system: &[MultiPoly], proj: &[usize], p: &RationalParametrization) -> bool {
        let n = system[0].nvars();
        assert_eq!(proj.len(), n);
        system.iter().all(|f| p.evaluate_mod(f).unwrap().is_zero())
    }

    #[test]
    fn one_variable_cases() {
        let x = MultiPoly::var(1, 0);
        let one = MultiPoly::one(1);
        match zero_dim_solve(&[&x.pow(2) - &one], &[0], 1, &limits()).unwrap() {
            SolveOutcome::Finite(ps) => {
                assert_eq!(ps[0].degree(), 2);
                assert!(sound(&[&x.pow(2) - &one], &[0], &ps[0]));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(zero_dim_solve(&[one], &[0], 1, &limits()).unwrap(), SolveOutcome::Empty);
        let two = MultiPoly::constant(1, rat(2));
        let p = match zero_dim_solve(&[&x.pow(2) - &two], &[0], 3, &limits()).unwrap() {
            SolveOutcome::Finite(ps) => ps[0].clone(),
            other => panic!("{other:?}"),
        };
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn positive_dimension_is_not_finite() {
        let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
        let f = &(&x * &y) - &MultiPoly::one(2);
        assert_eq!(zero_dim_solve(&[f], &[0, 1], 1, &limits()).unwrap(), SolveOutcome::NotFinite);
    }

    #[test]
    fn single_point_and_shared_coordinates() {
        let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
        let sys = vec![&x - &MultiPoly::one(2), &y - &MultiPoly::constant(2, rat(2))];
        let p = zero_dim_solve(&sys, &[0, 1], 5, &limits()).unwrap().params()[0].clone();
        assert_eq!(p.degree(), 1);
        let root = -p.q.coeff(0);
        assert_eq!(p.coords[0].eval(&root), rat(1));
        assert_eq!(p.coords[1].eval(&root), rat(2));
        let sys2 = vec![&x.pow(2) - &MultiPoly::one(2), &y - &x];
        let p2 = zero_dim_solve(&sys2, &[0, 1], 5, &limits()).unwrap().params()[0].clone();
        assert_eq!(p2.degree(), 2);
        assert_eq!(p2.coords[0], p2.coords[1]);
    }

    #[test]
    fn projection_keeps_one_root_per_solution() {
        // (x - 1)(x - 2) = 0, y^2 = x: four points, two x-values.
        let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
        let c = |k| MultiPoly::constant(2, rat(k));
        let sys = vec![&(&x - &c(1)) * &(&x - &c(2)), &y.pow(2) - &x];
        let full = zero_dim_solve(&sys, &[0, 1], 9, &limits()).unwrap();
        assert_eq!(full.degree(), 4);
        let px = zero_dim_solve(&sys, &[0], 9, &limits()).unwrap();
        assert_eq!(px.degree(), 4);
        let x1 = MultiPoly::var(1, 0);
        let c1 = |k| MultiPoly::constant(1, rat(k));
        let g = &(&x1 - &c1(1)) * &(&x1 - &c1(2));
        assert!(px.params()[0].evaluate_mod(&g).unwrap().is_zero());
    }

    #[test]
    fn multiplicities_are_removed() {
        let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
        let sys = vec![x.pow(2), &y.pow(3) - &(&x * &y)];
        let p = zero_dim_solve(&sys, &[0, 1], 2, &limits()).unwrap();
        assert_eq!(p.degree(), 1);
        assert!(sound(&[x.clone(), y.clone()], &[0, 1], &p.params()[0]));
    }

    #[test]
    fn nonsingular_part_splits() {
        // q has roots 0, 1, 2; the 1x1 matrix [t - 1] is singular at t = 1.
        let q = UniPoly::from_ints(&[0, 2, -3, 1]);
        let m = vec![vec![UniPoly::from_ints(&[-1, 1])]];
        assert_eq!(nonsingular_part(m, &q), UniPoly::from_ints(&[0, -2, 1]));
        // diag(t, t - 2) kills roots 0 and 2.
        let m = vec![
            vec![UniPoly::t(), UniPoly::zero()],
            vec![UniPoly::one(), UniPoly::from_ints(&[-2, 1])],
        ];
        assert_eq!(nonsingular_part(m, &q), UniPoly::from_ints(&[-1, 1]));
        let half = frac(1, 2);
        assert_eq!(UniPoly::linear_root(&half).eval(&half), rat(0));
    }
}
