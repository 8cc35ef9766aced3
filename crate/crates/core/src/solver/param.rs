use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::modp::{primes, ugcd, utrim, Fp};
use crate::exact::intpoly::{self, IntPoly};
use crate::exact::rational::{denominator_lcm, format_rational, parse_rational};
use crate::exact::{MultiPoly, Rational, UniPoly};

/// Finite point set `{ (q_1(τ)/q0(τ), ..., q_k(τ)/q0(τ)) : q(τ) = 0 }`.
///
/// `q` is squarefree and coprime to `q0`; every `q_i` is reduced modulo `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalParametrization {
    pub q: UniPoly,
    pub q0: UniPoly,
    pub coords: Vec<UniPoly>,
    pub var_names: Vec<String>,
    /// `t = separating_form · (projected variables)` in the coordinates
    /// where the set was solved (informational after lifts and rotations).
    pub separating_form: Vec<Rational>,
}

impl RationalParametrization {
    /// Builds a parametrization, enforcing the representation invariants.
    pub fn new(q: UniPoly, q0: UniPoly, coords: Vec<UniPoly>, separating_form: Vec<Rational>) -> Result<Self> {
        if q.degree().is_none_or(|d| d == 0) {
            return Err(Error::Contract("q must have positive degree".into()));
        }
        if !coprime(&q, &q.derivative()) {
            return Err(Error::Contract("q must be squarefree".into()));
        }
        if q0.is_zero() || !coprime(&q, &q0) {
            return Err(Error::Contract("q0 must be coprime to q".into()));
        }
        let q = q.monic();
        let coords: Vec<UniPoly> = coords.iter().map(|c| c.rem(&q)).collect();
        let var_names = (1..=coords.len()).map(|i| format!("x{i}")).collect();
        Ok(RationalParametrization {
            q0: q0.rem(&q),
            q,
            coords,
            var_names,
            separating_form,
        })
    }

    pub fn degree(&self) -> usize {
        self.q.degree().unwrap_or(0)
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates as `q_i · q0^{-1} mod q`.
    pub fn normalized_coords(&self) -> Vec<UniPoly> {
        let inv = self
            .q0
            .inverse_mod(&self.q)
            .expect("q0 is invertible modulo q by construction");
        self.coords.iter().map(|c| c.mul_mod(&inv, &self.q)).collect()
    }

    /// `p(q_1/q0, ..., q_k/q0) · q0^deg(p) mod q`; zero exactly when `p`
    /// vanishes on every encoded point.
    pub fn evaluate_mod(&self, p: &MultiPoly) -> Result<UniPoly> {
        Ok(self.evaluate_all(std::slice::from_ref(p))?.remove(0))
    }

    /// [`evaluate_mod`](Self::evaluate_mod) for several polynomials, sharing
    /// the powers of the coordinates.
    pub fn evaluate_all(&self, polys: &[MultiPoly]) -> Result<Vec<UniPoly>> {
        let (modulus, scale, cleared) = self.cleared(polys)?;
        Ok(cleared
            .into_iter()
            .map(|(acc, lp, deg)| {
                let (r, factor) = intpoly::pseudo_rem(&acc, &modulus);
                let div = factor * Rational::from_integer(lp) * num_traits::pow(scale.clone(), deg);
                UniPoly::new(r.into_iter().map(|c| Rational::from_integer(c) / &div).collect())
            })
            .collect())
    }

    /// Whether every polynomial vanishes at all the encoded points, decided by
    /// exact division over the integers.
    pub fn vanishes_on(&self, polys: &[MultiPoly]) -> Result<bool> {
        Ok(self.vanishing_mask(polys)?.into_iter().all(|v| v))
    }

    /// Per polynomial, whether it vanishes at all the encoded points.
    pub fn vanishing_mask(&self, polys: &[MultiPoly]) -> Result<Vec<bool>> {
        let (modulus, _, cleared) = self.cleared(polys)?;
        let modulus = intpoly::primitive(modulus);
        Ok(cleared.iter().map(|(acc, _, _)| intpoly::divides(&modulus, acc)).collect())
    }

    /// `q` over the integers, `l · l0`, and for each polynomial `p` of degree
    /// `d` the integer polynomial `lp · den^d · p(num / den)` with its `lp`
    /// and `d`.
    #[allow(clippy::type_complexity)]
    fn cleared(&self, polys: &[MultiPoly]) -> Result<(IntPoly, Rational, Vec<(IntPoly, BigInt, usize)>)> {
        if let Some(p) = polys.iter().find(|p| p.nvars() != self.nvars()) {
            return Err(Error::Dimension(format!(
                "polynomial in {} variables, parametrization in {}",
                p.nvars(),
                self.nvars()
            )));
        }
        // x_i = num_i / den with integer polynomials, and
        // q0 = den / (l · l0).
        let (b0, l0) = intpoly::from_uni(&self.q0);
        let parts: Vec<(IntPoly, BigInt)> = self.coords.iter().map(intpoly::from_uni).collect();
        let l = parts.iter().fold(BigInt::one(), |acc, (_, li)| acc.lcm(li));
        let num: Vec<IntPoly> = parts
            .iter()
            .map(|(a, li)| {
                let s = &l / li * &l0;
                a.iter().map(|c| c * &s).collect()
            })
            .collect();
        let den: IntPoly = b0.iter().map(|c| c * &l).collect();
        let scale = Rational::from_integer(&l * &l0);
        let (modulus, _) = intpoly::from_uni(&self.q);
        let mut num_pows: Vec<Vec<IntPoly>> = num.iter().map(|_| vec![vec![BigInt::one()]]).collect();
        let mut den_pows: Vec<IntPoly> = vec![vec![BigInt::one()]];
        let mut out = Vec::with_capacity(polys.len());
        for p in polys {
            let deg = p.total_degree().unwrap_or(0) as usize;
            while den_pows.len() <= deg {
                let next = intpoly::mul(den_pows.last().unwrap(), &den);
                den_pows.push(next);
            }
            let lp = denominator_lcm(p.terms().map(|(_, c)| c));
            let mut acc: IntPoly = Vec::new();
            for (m, c) in p.terms() {
                let mut term = den_pows[deg - m.degree() as usize].clone();
                for (i, &e) in m.exponents().iter().enumerate() {
                    let e = e as usize;
                    if e == 0 {
                        continue;
                    }
                    while num_pows[i].len() <= e {
                        let next = intpoly::mul(num_pows[i].last().unwrap(), &num[i]);
                        num_pows[i].push(next);
                    }
                    term = intpoly::mul(&term, &num_pows[i][e]);
                }
                let ci = (c * Rational::from_integer(lp.clone())).to_integer();
                intpoly::add_scaled(&mut acc, &term, &ci);
            }
            out.push((intpoly::trim(acc), lp, deg));
        }
        Ok((modulus, scale, out))
    }

    /// Serializable form with rational strings, constant term first.
    pub fn to_record(&self) -> ParamRecord {
        let dense = |p: &UniPoly| p.coeffs().iter().map(format_rational).collect::<Vec<_>>();
        ParamRecord {
            q: dense(&self.q),
            q0: dense(&self.q0),
            coords: self.coords.iter().map(dense).collect(),
            separating_form: self.separating_form.iter().map(format_rational).collect(),
        }
    }

    pub fn from_record(rec: &ParamRecord) -> Result<Self> {
        let parse = |v: &[String]| -> Result<UniPoly> {
            Ok(UniPoly::new(v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?))
        };
        let coords = rec.coords.iter().map(|c| parse(c)).collect::<Result<Vec<_>>>()?;
        let form = rec
            .separating_form
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let q = parse(&rec.q)?;
        let q0 = parse(&rec.q0)?;
        let nvars = coords.len();
        Ok(RationalParametrization {
            q,
            q0,
            coords,
            var_names: (1..=nvars).map(|i| format!("x{i}")).collect(),
            separating_form: form,
        })
    }
}

/// Coprimality of `a` (positive degree) and `b`, decided modulo a prime
/// that keeps the degree of `a` when one certifies it.
pub(crate) fn coprime(a: &UniPoly, b: &UniPoly) -> bool {
    for p in primes().take(3) {
        let f = Fp { p };
        let reduce = |u: &UniPoly| -> Option<Vec<u64>> { u.coeffs().iter().map(|c| f.from_rational(c)).collect() };
        let (Some(am), Some(bm)) = (reduce(a), reduce(b)) else {
            continue;
        };
        let am = utrim(am);
        if am.len() != a.coeffs().len() {
            continue;
        }
        if ugcd(f, &am, &utrim(bm)).len() == 1 {
            return true;
        }
    }
    a.gcd(b).is_constant()
}

/// JSON shape of a parametrization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParamRecord {
    pub q: Vec<String>,
    pub q0: Vec<String>,
    pub coords: Vec<Vec<String>>,
    pub separating_form: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn rejects_non_squarefree_and_shared_factors() {
        let q = UniPoly::from_ints(&[1, -2, 1]);
        assert!(RationalParametrization::new(q, UniPoly::one(), vec![UniPoly::t()], vec![rat(1)]).is_err());
        let q = UniPoly::from_ints(&[-1, 0, 1]);
        let q0 = UniPoly::from_ints(&[-1, 1]);
        assert!(RationalParametrization::new(q, q0, vec![UniPoly::t()], vec![rat(1)]).is_err());
    }

    #[test]
    fn evaluation_detects_vanishing() {
        let q = UniPoly::from_ints(&[-2, 0, 1]);
        let p = RationalParametrization::new(q, UniPoly::one(), vec![UniPoly::t()], vec![rat(1)]).unwrap();
        let x = MultiPoly::var(1, 0);
        let f = &x.pow(2) - &MultiPoly::constant(1, rat(2));
        assert!(p.evaluate_mod(&f).unwrap().is_zero());
        assert!(!p.evaluate_mod(&x).unwrap().is_zero());
    }

    #[test]
    fn q0_denominators_are_respected() {
        // q = t - 2, q0 = 2, q1 = 1 encodes x = 1/2.
        let p = RationalParametrization::new(
            UniPoly::from_ints(&[-2, 1]),
            UniPoly::from_ints(&[2]),
            vec![UniPoly::from_ints(&[1])],
            vec![rat(1)],
        )
        .unwrap();
        let x = MultiPoly::var(1, 0);
        let f = &x.scale(&rat(2)) - &MultiPoly::one(1);
        assert!(p.evaluate_mod(&f).unwrap().is_zero());
        assert_eq!(p.normalized_coords()[0], UniPoly::constant(crate::exact::frac(1, 2)));
        let back = RationalParametrization::from_record(&p.to_record()).unwrap();
        assert_eq!(back, p);
    }
}
