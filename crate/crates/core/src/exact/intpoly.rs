//! Dense integer polynomials for fraction-free evaluation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::denominator_lcm;
use super::{Rational, UniPoly};

pub(crate) type IntPoly = Vec<BigInt>;

pub(crate) fn trim(mut a: IntPoly) -> IntPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// `a += c * b`.
pub(crate) fn add_scaled(a: &mut IntPoly, b: &[BigInt], c: &BigInt) {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += c * y;
    }
}

/// Integer multiple `lcm · p` and the multiplier `lcm`.
pub(crate) fn from_uni(p: &UniPoly) -> (IntPoly, BigInt) {
    let l = denominator_lcm(p.coeffs());
    let ints = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    (ints, l)
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// `a mod d` up to a nonzero integer factor, which is returned as well.
pub(crate) fn pseudo_rem(a: &[BigInt], d: &[BigInt]) -> (IntPoly, Rational) {
    let mut r = trim(a.to_vec());
    let mut factor = Rational::one();
    let dl = d.len();
    let lc = d.last().expect("nonzero divisor").clone();
    while r.len() >= dl {
        let top = r.last().unwrap().clone();
        let shift = r.len() - dl;
        let g = top.gcd(&lc);
        let (sa, sb) = (&lc / &g, &top / &g);
        for x in r.iter_mut() {
            *x *= &sa;
        }
        for (k, y) in d.iter().enumerate() {
            r[shift + k] -= &sb * y;
        }
        factor *= Rational::from_integer(sa);
        r = trim(r);
    }
    let c = content(&r);
    if !c.is_zero() && !c.is_one() {
        for x in r.iter_mut() {
            *x /= &c;
        }
        factor /= Rational::from_integer(c);
    }
    (r, factor)
}

pub(crate) fn primitive(a: IntPoly) -> IntPoly {
    let c = content(&a);
    if c.is_zero() || c.is_one() {
        return a;
    }
    a.into_iter().map(|x| x / &c).collect()
}

/// Whether the primitive `d` divides `a` in `Z[t]`, which by Gauss's lemma is
/// divisibility over the rationals.
pub(crate) fn divides(d: &[BigInt], a: &[BigInt]) -> bool {
    let mut r = trim(a.to_vec());
    let dl = d.len();
    let lc = d.last().expect("nonzero divisor");
    while r.len() >= dl {
        let (q, rem) = r.last().unwrap().div_rem(lc);
        if !rem.is_zero() {
            return false;
        }
        let shift = r.len() - dl;
        for (k, y) in d.iter().enumerate() {
            r[shift + k] -= &q * y;
        }
        r = trim(r);
    }
    r.is_empty()
}
