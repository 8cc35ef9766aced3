//! Multi-modular solving.
//!
//! The Groebner basis, the quotient algebra and the shape-lemma coordinates
//! are computed modulo a sequence of primes; the univariate data is lifted
//! by Chinese remaindering and rational reconstruction, and the lifted
//! parametrization is accepted only after an exact check that every input
//! polynomial vanishes on it.
//!
//! Coordinates are reconstructed in the form `x_i = g_i(t) / q'(t)`, whose
//! coefficients are much smaller than those of `x_i = h_i(t)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::{Monomial, MultiPoly, Rational, UniPoly};
use crate::systems::rng_for;

use super::groebner::{GbLimits, MonomialOrder};
use super::f4::groebner_mod;
use super::modp::{
    krylov_mod, mpoly_from, GbMod, MPoly, primes, uderiv, ugcd, udivrem, umonic, umulmod, urem, Fp, QuotientMod,
};
use super::param::RationalParametrization;

/// Optional restriction of the solution set: given the image of the
/// squarefree minimal polynomial and the coordinates of all variables modulo
/// a prime, returns the factor to keep.
pub(crate) type PrimeFilter<'a> = dyn Fn(Fp, &[u64], &[Vec<u64>]) -> Vec<u64> + Sync + 'a;

pub(crate) struct ModularRequest<'a> {
    pub(crate) system: &'a [MultiPoly],
    /// Variables of the separating form and of the output.
    pub(crate) proj: &'a [usize],
    pub(crate) filter: Option<&'a PrimeFilter<'a>>,
    /// The exact check covers only this many leading polynomials.
    pub(crate) certify: usize,
    pub(crate) seed: u64,
    pub(crate) limits: GbLimits,
}

pub(crate) enum ModularOutcome {
    Empty,
    NotFinite,
    /// Parametrization of all variables, verified exactly, and the form.
    Finite(RationalParametrization),
    /// No separating form on the projection variables.
    NotSeparating,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Signature {
    Unit,
    NotZeroDim,
    NotSeparating,
    Filtered,
    Points {
        leading: Vec<Monomial>,
        minpoly_degree: usize,
        degree: usize,
    },
}

struct Image {
    sig: Signature,
    /// `q`, `q0 = q'`, then the numerators `g_i`, all dense mod p.
    data: Vec<Vec<u64>>,
}

fn prime_image(f: Fp, req: &ModularRequest<'_>, form: &[(usize, i64)]) -> Result<Option<Image>> {
    let nvars = req.system[0].nvars();
    let order = MonomialOrder::DegRevLex;
    let mut polys = Vec::with_capacity(req.system.len());
    for p in req.system {
        match mpoly_from(f, p, order) {
            Some(m) => polys.push(m),
            None => return Ok(None),
        }
    }
    let gb = groebner_mod(f, &polys, nvars, order, &req.limits)?;
    let bare = |sig| Ok(Some(Image { sig, data: Vec::new() }));
    if gb.is_unit() {
        return bare(Signature::Unit);
    }
    if !gb.is_zero_dimensional() {
        return bare(Signature::NotZeroDim);
    }
    let form_vars: Vec<usize> = form.iter().map(|(v, _)| *v).collect();
    let form_p: Vec<(usize, u64)> = form
        .iter()
        .map(|&(v, c)| (v, f.from_int(&BigInt::from(c))))
        .collect();
    let all: Vec<usize> = (0..nvars).collect();
    let mut qa = QuotientMod::new(gb);
    qa.prepare(&form_vars);
    let (mut minpoly, mut coords) = krylov_mod(&qa, &form_p, &all);
    if coords.iter().any(Option::is_none) {
        let Some(rad) = radical_mod(f, &mut qa, &req.limits)? else {
            return bare(Signature::NotSeparating);
        };
        qa = QuotientMod::new(rad);
        qa.prepare(&form_vars);
        (minpoly, coords) = krylov_mod(&qa, &form_p, &all);
        if coords.iter().any(Option::is_none) {
            return bare(Signature::NotSeparating);
        }
    }
    let leading = qa.gb.leading_monomials();
    let sqf = {
        let g = ugcd(f, &minpoly, &uderiv(f, &minpoly));
        umonic(f, &udivrem(f, &minpoly, &g).0)
    };
    let coords: Vec<Vec<u64>> = coords.into_iter().map(|c| urem(f, &c.unwrap(), &sqf)).collect();
    let keep = match req.filter {
        Some(filter) => umonic(f, &filter(f, &sqf, &coords)),
        None => sqf,
    };
    if keep.len() <= 1 {
        return bare(Signature::Filtered);
    }
    let d = urem(f, &uderiv(f, &keep), &keep);
    let mut data = vec![keep.clone(), d.clone()];
    data.extend(coords.iter().map(|c| umulmod(f, c, &d, &keep)));
    Ok(Some(Image {
        sig: Signature::Points {
            leading,
            minpoly_degree: minpoly.len() - 1,
            degree: keep.len() - 1,
        },
        data,
    }))
}

/// Adds the squarefree parts of the univariate minimal polynomials; `None`
/// when the ideal is already radical.
fn radical_mod(f: Fp, qa: &mut QuotientMod, limits: &GbLimits) -> Result<Option<GbMod>> {
    let nvars = qa.gb.nvars;
    let all: Vec<usize> = (0..nvars).collect();
    qa.prepare(&all);
    let mut extra = Vec::new();
    for v in 0..nvars {
        let (mu, _) = krylov_mod(qa, &[(v, 1)], &[]);
        let g = ugcd(f, &mu, &uderiv(f, &mu));
        if g.len() > 1 {
            let sf = udivrem(f, &mu, &g).0;
            let poly: MPoly = sf
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, &c)| c != 0)
                .map(|(k, &c)| (Monomial::one(nvars).with_exponent(v, k as u16), c))
                .collect();
            extra.push(poly);
        }
    }
    if extra.is_empty() {
        return Ok(None);
    }
    let mut gens = qa.gb.basis.clone();
    gens.extend(extra);
    Ok(Some(groebner_mod(f, &gens, nvars, qa.gb.order, limits)?))
}

/// Chinese remaindering of dense coefficient vectors.
struct Accumulator {
    modulus: BigInt,
    values: Vec<Vec<BigInt>>,
    primes: usize,
    last: Option<Vec<Vec<Rational>>>,
    /// The coefficient that failed to reconstruct most recently; it is tried
    /// first so that a premature attempt costs a single reconstruction.
    hard: (usize, usize),
}

impl Accumulator {
    fn new(shape: &[Vec<u64>]) -> Self {
        Accumulator {
            modulus: BigInt::one(),
            values: shape.iter().map(|v| vec![BigInt::zero(); v.len()]).collect(),
            primes: 0,
            last: None,
            hard: (0, 0),
        }
    }

    fn same_shape(&self, data: &[Vec<u64>]) -> bool {
        self.values.len() == data.len() && self.values.iter().zip(data).all(|(a, b)| a.len() >= b.len())
    }

    fn add(&mut self, p: u64, data: &[Vec<u64>]) {
        let f = Fp { p };
        let pb = BigInt::from(p);
        let inv = f.inv(f.from_int(&self.modulus));
        for (acc, img) in self.values.iter_mut().zip(data) {
            for (k, x) in acc.iter_mut().enumerate() {
                let a = *img.get(k).unwrap_or(&0);
                let cur = f.from_int(x);
                let delta = f.mul(f.sub(a, cur), inv);
                *x += &self.modulus * BigInt::from(delta);
            }
        }
        self.modulus *= pb;
        self.primes += 1;
    }

    fn reconstruct(&mut self) -> Option<Vec<Vec<Rational>>> {
        let bound = (&self.modulus >> 1u32).sqrt();
        let (hi, hk) = self.hard;
        rational_reconstruct(self.values.get(hi)?.get(hk)?, &self.modulus, &bound)?;
        let mut out = Vec::with_capacity(self.values.len());
        for (i, row) in self.values.iter().enumerate() {
            let mut rec = Vec::with_capacity(row.len());
            for (k, x) in row.iter().enumerate() {
                match rational_reconstruct(x, &self.modulus, &bound) {
                    Some(c) => rec.push(c),
                    None => {
                        self.hard = (i, k);
                        return None;
                    }
                }
            }
            out.push(rec);
        }
        Some(out)
    }
}

/// `a/b ≡ x (mod n)` with `|a|, b <= bound`.
pub(crate) fn rational_reconstruct(x: &BigInt, n: &BigInt, bound: &BigInt) -> Option<Rational> {
    let (mut r0, mut r1) = (n.clone(), x.mod_floor(n));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

fn agrees(f: Fp, rec: &[Vec<Rational>], data: &[Vec<u64>]) -> bool {
    rec.iter().zip(data).all(|(row, img)| {
        row.iter()
            .enumerate()
            .all(|(k, c)| f.from_rational(c) == Some(*img.get(k).unwrap_or(&0)))
    })
}

fn to_param(rec: &[Vec<Rational>], form: &[(usize, i64)], nvars: usize) -> Result<RationalParametrization> {
    let q = UniPoly::new(rec[0].clone());
    let q0 = UniPoly::new(rec[1].clone());
    let coords = rec[2..].iter().map(|c| UniPoly::new(c.clone())).collect();
    let mut sep = vec![Rational::zero(); nvars];
    for &(v, c) in form {
        sep[v] = Rational::from_integer(c.into());
    }
    RationalParametrization::new(q, q0, coords, sep)
}

const FORM_ATTEMPTS: usize = 3;
const MAX_PRIMES: usize = 6000;

pub(crate) fn modular_solve(req: &ModularRequest<'_>) -> Result<ModularOutcome> {
    let nvars = req.system[0].nvars();
    let mut rng = rng_for(&[req.seed, 0x6d6f64756c6172]);
    let mut prime_iter = primes();
    for attempt in 0..FORM_ATTEMPTS {
        let bound = 8 * (attempt as i64 + 1);
        let form: Vec<(usize, i64)> = loop {
            let f: Vec<(usize, i64)> = req.proj.iter().map(|&v| (v, rng.gen_range(-bound..=bound))).collect();
            if req.proj.is_empty() || f.iter().any(|&(_, c)| c != 0) {
                break f;
            }
        };
        let mut groups: HashMap<Signature, Accumulator> = HashMap::new();
        let mut votes: HashMap<Signature, usize> = HashMap::new();
        let mut used = 0;
        let mut next_switch = false;
        while used < MAX_PRIMES {
            let p = prime_iter.next().expect("enough primes below 2^31");
            let Some(img) = prime_image(Fp { p }, req, &form)? else {
                continue;
            };
            used += 1;
            let count = {
                let c = votes.entry(img.sig.clone()).or_insert(0);
                *c += 1;
                *c
            };
            match &img.sig {
                Signature::Unit | Signature::Filtered if count >= 2 => return Ok(ModularOutcome::Empty),
                Signature::NotZeroDim if count >= 2 => return Ok(ModularOutcome::NotFinite),
                Signature::NotSeparating if count >= 2 => {
                    next_switch = true;
                    break;
                }
                Signature::Points { .. } => {}
                _ => continue,
            }
            let acc = groups.entry(img.sig.clone()).or_insert_with(|| Accumulator::new(&img.data));
            if !acc.same_shape(&img.data) {
                continue;
            }
            let f = Fp { p };
            if let Some(rec) = &acc.last {
                if agrees(f, rec, &img.data) {
                    let param = to_param(rec, &form, nvars)?;
                    if param.vanishes_on(&req.system[..req.certify])? {
                        return Ok(ModularOutcome::Finite(param));
                    }
                }
            }
            acc.add(p, &img.data);
            acc.last = acc.reconstruct();
        }
        if !next_switch {
            return Err(Error::Resource(format!(
                "modular lifting did not stabilize within {MAX_PRIMES} primes"
            )));
        }
    }
    Ok(ModularOutcome::NotSeparating)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let n = BigInt::from(2_147_483_629u64) * BigInt::from(2_147_483_587u64);
        let bound = (&n >> 1u32).sqrt();
        let x = Rational::new(BigInt::from(-355), BigInt::from(113));
        let f = |p: u64| Fp { p }.from_rational(&x).unwrap();
        // Combine the two residues by hand.
        let mut acc = Accumulator::new(&[vec![0]]);
        acc.add(2_147_483_629, &[vec![f(2_147_483_629)]]);
        acc.add(2_147_483_587, &[vec![f(2_147_483_587)]]);
        assert_eq!(acc.modulus, n);
        assert_eq!(rational_reconstruct(&acc.values[0][0], &n, &bound), Some(x));
    }

    #[test]
    fn solves_and_certifies_small_system() {
        let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
        let c = |k| MultiPoly::constant(2, rat(k));
        let sys = vec![&(&x.pow(2) - &c(3)) * &(&x - &c(5)), &(&y * &c(7)) - &(&x * &x)];
        let req = ModularRequest {
            system: &sys,
            proj: &[0],
            filter: None,
            certify: 2,
            seed: 4,
            limits: GbLimits::default(),
        };
        match modular_solve(&req).unwrap() {
            ModularOutcome::Finite(p) => {
                assert_eq!(p.degree(), 3);
                for g in &sys {
                    assert!(p.evaluate_mod(g).unwrap().is_zero());
                }
            }
            _ => panic!("expected a finite outcome"),
        }
        let empty = vec![&x - &c(1), &x - &c(2)];
        let req = ModularRequest {
            system: &empty,
            proj: &[0],
            filter: None,
            certify: 2,
            seed: 4,
            limits: GbLimits::default(),
        };
        assert!(matches!(modular_solve(&req).unwrap(), ModularOutcome::Empty));
        let curve = vec![&(&x * &y) - &c(1)];
        let req = ModularRequest {
            system: &curve,
            proj: &[0, 1],
            filter: None,
            certify: 1,
            seed: 4,
            limits: GbLimits::default(),
        };
        assert!(matches!(modular_solve(&req).unwrap(), ModularOutcome::NotFinite));
    }

    #[test]
    fn projection_that_does_not_separate() {
        // y^2 = 1, x = 0: two points over one x-value.
        let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
        let sys = vec![x.clone(), &y.pow(2) - &MultiPoly::one(2)];
        let req = ModularRequest {
            system: &sys,
            proj: &[0],
            filter: None,
            certify: 2,
            seed: 1,
            limits: GbLimits::default(),
        };
        assert!(matches!(modular_solve(&req).unwrap(), ModularOutcome::NotSeparating));
    }
}
