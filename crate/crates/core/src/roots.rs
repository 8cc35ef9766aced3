//! Real root isolation (Descartes bisection, with Sturm counts as a check)
//! and interval evaluation of parametrizations at the isolated roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::intpoly::{self, IntPoly};
use crate::exact::rational::format_rational;
use crate::exact::{Rational, UniPoly};
use crate::solver::RationalParametrization;

/// `[lo, hi]` containing exactly one real root; `exact` when `lo = hi` is
/// the root itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub exact: bool,
}

impl IsolatingInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    fn point(x: Rational) -> Self {
        IsolatingInterval {
            lo: x.clone(),
            hi: x,
            exact: true,
        }
    }
}

/// Interval enclosure of one real point of a parametrization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealSampleBox {
    pub intervals: Vec<(Rational, Rational)>,
    /// Index of the parametrization in the list it was computed from.
    pub source_param: usize,
    pub source_root: IsolatingInterval,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub point: Vec<[String; 2]>,
}

impl RealSampleBox {
    pub fn to_record(&self) -> BoxRecord {
        BoxRecord {
            point: self
                .intervals
                .iter()
                .map(|(lo, hi)| [format_rational(lo), format_rational(hi)])
                .collect(),
        }
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        point.len() == self.intervals.len() && point.iter().zip(&self.intervals).all(|(x, (lo, hi))| lo <= x && x <= hi)
    }
}

/// Default target width of sample boxes, `2^-30`.
pub fn default_eps() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << 30u32)
}

/// `p(a/b) · b^deg` for `b > 0`, which has the sign of `p(a/b)`.
fn homogeneous_value(p: &[BigInt], x: &Rational) -> BigInt {
    let (a, b) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut bpow = BigInt::one();
    for c in p.iter().rev() {
        acc = acc * a + c * &bpow;
        bpow *= b;
    }
    acc
}

fn sign_at(p: &[BigInt], x: &Rational) -> i32 {
    let v = homogeneous_value(p, x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn derivative(p: &[BigInt]) -> IntPoly {
    p.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect()
}

/// Sturm sequence up to positive scalings of each member.
fn sturm_sequence(p: &[BigInt]) -> Vec<IntPoly> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].len() <= 1 {
            break;
        }
        let (r, factor) = intpoly::pseudo_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        // r = factor · rem, so -rem has the sign of -factor · r.
        let next = if factor.is_positive() { r.into_iter().map(|c| -c).collect() } else { r };
        seq.push(next);
    }
    seq
}

fn variations(seq: &[IntPoly], x: &Rational) -> usize {
    let mut last = 0;
    let mut count = 0;
    for p in seq {
        let s = sign_at(p, x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Strict bound on the absolute value of all complex roots.
fn cauchy_bound(p: &[BigInt]) -> Rational {
    let lead = p.last().expect("nonzero polynomial").abs();
    let max = p[..p.len() - 1].iter().map(Signed::abs).max().unwrap_or_default();
    Rational::new(max, lead) + Rational::one()
}

fn integer_form(q: &UniPoly) -> IntPoly {
    intpoly::from_uni(q).0
}

fn check_input(q: &UniPoly) -> Result<IntPoly> {
    if q.is_zero() {
        return Err(Error::Contract("root isolation of the zero polynomial".into()));
    }
    if !q.is_squarefree() {
        return Err(Error::Contract("root isolation needs a squarefree polynomial".into()));
    }
    Ok(integer_form(q))
}

/// Coefficients of `p(x + 1)`.
fn taylor_shift(p: &[BigInt]) -> IntPoly {
    let mut a = p.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = a[j + 1].clone();
            a[j] += t;
        }
    }
    a
}

fn sign_variations(p: &[BigInt]) -> usize {
    let mut last = 0;
    let mut count = 0;
    for c in p {
        let s = c.signum();
        if !s.is_zero() {
            let s = if s.is_positive() { 1 } else { -1 };
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Upper bound on Descartes' count for the roots of `p` in `(0, 1)`.
fn descartes_unit(p: &[BigInt]) -> usize {
    let rev: IntPoly = p.iter().rev().cloned().collect();
    sign_variations(&taylor_shift(&rev))
}

fn divide_by_x_minus_one(p: &[BigInt]) -> IntPoly {
    let n = p.len() - 1;
    let mut out = vec![BigInt::zero(); n];
    let mut acc = BigInt::zero();
    for i in (1..=n).rev() {
        acc += &p[i];
        out[i - 1] = acc.clone();
    }
    out
}

/// `2^n p(x / 2)`, with any common power of two removed.
fn halve(p: &[BigInt]) -> IntPoly {
    let n = p.len() - 1;
    let mut out: IntPoly = p.iter().enumerate().map(|(i, c)| c << (n - i)).collect();
    let shift = out.iter().filter(|c| !c.is_zero()).filter_map(|c| c.trailing_zeros()).min().unwrap_or(0);
    if shift > 0 {
        for c in &mut out {
            *c >>= shift;
        }
    }
    out
}

/// Roots of `p` in `(0, 2^k)` as intervals `(c / 2^j, (c + 1) / 2^j)`
/// scaled by `2^k`, or exact dyadic points. `zero_root` marks 0 as a root
/// of the undeflated polynomial, so no reported interval may end there.
fn positive_roots(p: &[BigInt], k: u32, zero_root: bool, out: &mut Vec<IsolatingInterval>) {
    let scale = Rational::from_integer(BigInt::one() << k);
    // q(x) = p(2^k x) has its roots of interest in (0, 1).
    let q: IntPoly = p.iter().enumerate().map(|(i, c)| c << (k as usize * i)).collect();
    // (poly, c, j, lo endpoint is a root, hi endpoint is a root)
    let mut stack = vec![(q, BigInt::zero(), 0u32, zero_root, false)];
    while let Some((q, c, j, lo_root, hi_root)) = stack.pop() {
        let v = descartes_unit(&q);
        if v == 0 {
            continue;
        }
        let width = Rational::new(BigInt::one(), BigInt::one() << j);
        let lo = Rational::from_integer(c.clone()) * &width * &scale;
        if v == 1 && !lo_root && !hi_root {
            out.push(IsolatingInterval {
                hi: &lo + &width * &scale,
                lo,
                exact: false,
            });
            continue;
        }
        let mut left = halve(&q);
        let mut right = taylor_shift(&left);
        // right(0) = left(1) = 0 exactly when the midpoint is a root; it is
        // divided out of both halves.
        let mid_root = right[0].is_zero();
        if mid_root {
            out.push(IsolatingInterval::point(&lo + &width * &scale / Rational::from_integer(2.into())));
            right.remove(0);
            left = divide_by_x_minus_one(&left);
        }
        let c2 = &c << 1;
        stack.push((right, &c2 + 1, j + 1, mid_root, hi_root));
        stack.push((left, c2, j + 1, lo_root, mid_root));
    }
}

/// Disjoint isolating intervals of the real roots of a squarefree `q`,
/// sorted increasingly. Rational roots met as bisection points are exact.
pub fn isolate_real_roots(q: &UniPoly) -> Result<Vec<IsolatingInterval>> {
    let full = check_input(q)?;
    if full.len() <= 1 {
        return Ok(Vec::new());
    }
    let mut p = full.clone();
    let mut out = Vec::new();
    let zero_root = p[0].is_zero();
    if zero_root {
        out.push(IsolatingInterval::point(Rational::zero()));
        p.remove(0);
    }
    if p.len() > 1 {
        let b = cauchy_bound(&p);
        let k = (b.ceil().to_integer().bits() as u32).max(1);
        positive_roots(&p, k, zero_root, &mut out);
        let neg: IntPoly = p.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
        let mut negs = Vec::new();
        positive_roots(&neg, k, zero_root, &mut negs);
        out.extend(negs.into_iter().map(|iv| IsolatingInterval {
            lo: -iv.hi,
            hi: -iv.lo,
            exact: iv.exact,
        }));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    // Neighbours from adjacent bisection cells share an endpoint.
    for i in 1..out.len() {
        while out[i - 1].hi == out[i].lo {
            let k = if out[i - 1].exact { i } else { i - 1 };
            let half = out[k].width() / Rational::from_integer(2.into());
            out[k] = refine_int(&full, &out[k], &half);
        }
    }
    Ok(out)
}

/// Number of real roots by Sturm's theorem on `(-B, B]`.
pub fn count_real_roots(q: &UniPoly) -> Result<usize> {
    let p = check_input(q)?;
    if p.len() <= 1 {
        return Ok(0);
    }
    let seq = sturm_sequence(&p);
    let b = cauchy_bound(&p);
    Ok(variations(&seq, &-b.clone()) - variations(&seq, &b))
}

fn refine_int(p: &[BigInt], iv: &IsolatingInterval, eps: &Rational) -> IsolatingInterval {
    if iv.exact {
        return iv.clone();
    }
    let (mut lo, mut hi) = (iv.lo.clone(), iv.hi.clone());
    let slo = sign_at(p, &lo);
    let two = Rational::from_integer(2.into());
    while &hi - &lo > *eps {
        let mid = (&lo + &hi) / &two;
        let s = sign_at(p, &mid);
        if s == 0 {
            return IsolatingInterval::point(mid);
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    IsolatingInterval { lo, hi, exact: false }
}

/// Bisects an isolating interval of `q` down to width at most `eps`.
pub fn refine_root(q: &UniPoly, iv: &IsolatingInterval, eps: &Rational) -> IsolatingInterval {
    refine_int(&integer_form(q), iv, eps)
}

type Interval = (Rational, Rational);

/// Enclosure of `p(x) · d^deg` over `x` in `[a1/d, a2/d]`, by Horner's rule
/// on integer intervals.
fn horner_int(p: &[BigInt], a1: &BigInt, a2: &BigInt, d: &BigInt) -> (BigInt, BigInt) {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut dpow = BigInt::one();
    for c in p.iter().rev() {
        let prods = [&lo * a1, &lo * a2, &hi * a1, &hi * a2];
        let shift = c * &dpow;
        lo = prods.iter().min().unwrap() + &shift;
        hi = prods.iter().max().unwrap() + &shift;
        dpow *= d;
    }
    (lo, hi)
}

/// Enclosure of `p` over `x`, as rationals.
fn enclose(p: &UniPoly, x: &Interval) -> Interval {
    let (ints, l) = intpoly::from_uni(p);
    if ints.is_empty() {
        return (Rational::zero(), Rational::zero());
    }
    let d = x.0.denom().lcm(x.1.denom());
    let a1 = x.0.numer() * (&d / x.0.denom());
    let a2 = x.1.numer() * (&d / x.1.denom());
    let (lo, hi) = horner_int(&ints, &a1, &a2, &d);
    let scale = &l * num_traits::pow(d, ints.len() - 1);
    (Rational::new(lo, scale.clone()), Rational::new(hi, scale))
}

fn interval_div(a: &Interval, b: &Interval) -> Option<Interval> {
    if b.0.is_zero() || b.1.is_zero() || (b.0.is_negative() != b.1.is_negative()) {
        return None;
    }
    let c = [&a.0 / &b.0, &a.0 / &b.1, &a.1 / &b.0, &a.1 / &b.1];
    Some((c.iter().min().unwrap().clone(), c.iter().max().unwrap().clone()))
}

const MAX_REFINEMENTS: usize = 256;

/// Box of width at most `eps` around the point of `param` at the root
/// isolated by `iv`, refining the root as needed.
pub fn evaluate_parametrization(
    param: &RationalParametrization,
    iv: &IsolatingInterval,
    eps: &Rational,
    source_param: usize,
) -> Result<RealSampleBox> {
    if iv.exact {
        let q0 = param.q0.eval(&iv.lo);
        if q0.is_zero() {
            return Err(Error::Contract("q0 vanishes at a root of q".into()));
        }
        let intervals = param
            .coords
            .iter()
            .map(|c| {
                let v = c.eval(&iv.lo) / &q0;
                (v.clone(), v)
            })
            .collect();
        return Ok(RealSampleBox {
            intervals,
            source_param,
            source_root: iv.clone(),
        });
    }
    let p = integer_form(&param.q);
    let two = Rational::from_integer(2.into());
    let mut root = iv.clone();
    for _ in 0..MAX_REFINEMENTS {
        if root.exact {
            return evaluate_parametrization(param, &root, eps, source_param);
        }
        let x = (root.lo.clone(), root.hi.clone());
        let den = enclose(&param.q0, &x);
        let boxes: Option<Vec<Interval>> = param.coords.iter().map(|c| interval_div(&enclose(c, &x), &den)).collect();
        // The enclosures shrink linearly with the root interval, so aim for
        // the width that should suffice, with a factor two to spare.
        let target = match &boxes {
            Some(intervals) => {
                let widest = intervals.iter().map(|(lo, hi)| hi - lo).max().unwrap_or_else(Rational::zero);
                if widest <= *eps {
                    return Ok(RealSampleBox {
                        intervals: boxes.unwrap(),
                        source_param,
                        source_root: root,
                    });
                }
                let shrink = &widest / eps * &two;
                root.width() / shrink
            }
            None => root.width() / &two,
        };
        root = refine_int(&p, &root, &target);
    }
    Err(Error::Contract("q0 vanishes on the refined isolating interval".into()))
}

/// Boxes for every real root of every parametrization.
pub fn real_sample_boxes(params: &[RationalParametrization], eps: &Rational) -> Result<Vec<RealSampleBox>> {
    let mut out = Vec::new();
    for (k, param) in params.iter().enumerate() {
        for iv in isolate_real_roots(&param.q)? {
            out.push(evaluate_parametrization(param, &iv, eps, k)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, rat};

    #[test]
    fn sqrt_two() {
        let q = UniPoly::from_ints(&[-2, 0, 1]);
        let roots = isolate_real_roots(&q).unwrap();
        assert_eq!(roots.len(), 2);
        for iv in &roots {
            assert!(!iv.exact);
            let r = refine_root(&q, iv, &frac(1, 100));
            assert!(r.width() <= frac(1, 100));
            assert!((&r.lo * &r.lo - rat(2)) * (&r.hi * &r.hi - rat(2)) < rat(0));
        }
        assert!(roots[0].hi <= rat(0) && roots[1].lo >= rat(0));
    }

    #[test]
    fn no_real_roots_and_exact_roots() {
        assert!(isolate_real_roots(&UniPoly::from_ints(&[1, 0, 1])).unwrap().is_empty());
        let q = UniPoly::from_ints(&[-6, 11, -6, 1]);
        let roots = isolate_real_roots(&q).unwrap();
        let pts: Vec<Rational> = roots
            .iter()
            .map(|iv| refine_root(&q, iv, &frac(1, 1 << 20)))
            .map(|iv| {
                if iv.exact {
                    iv.lo
                } else {
                    (iv.lo + iv.hi) / rat(2)
                }
            })
            .collect();
        assert_eq!(roots.len(), 3);
        for (p, k) in pts.iter().zip([1, 2, 3]) {
            assert!((p - rat(k)).abs() < frac(1, 1000));
        }
        assert!(isolate_real_roots(&UniPoly::from_ints(&[1, -2, 1])).is_err());
    }

    #[test]
    fn evaluation_of_parametrization() {
        let q = UniPoly::from_ints(&[-2, 0, 1]);
        let p = RationalParametrization::new(q, UniPoly::one(), vec![UniPoly::t(), UniPoly::from_ints(&[3])], vec![rat(1), rat(0)])
            .unwrap();
        let eps = frac(1, 1 << 20);
        let boxes = real_sample_boxes(std::slice::from_ref(&p), &eps).unwrap();
        assert_eq!(boxes.len(), 2);
        for b in &boxes {
            let (lo, hi) = &b.intervals[0];
            assert!(hi - lo <= eps);
            assert!((lo * lo - rat(2)) * (hi * hi - rat(2)) <= rat(0));
            assert_eq!(b.intervals[1], (rat(3), rat(3)));
        }
    }
}
