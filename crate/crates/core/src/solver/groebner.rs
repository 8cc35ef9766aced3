//! Buchberger's algorithm over Q.
//!
//! Polynomials are kept internally with coprime integer coefficients and
//! reduced fraction-free; the public basis is converted to monic rational
//! polynomials at the end. Pairs are chosen by the normal strategy (smallest
//! lcm first) and pruned with the Gebauer-Moeller installation of both
//! Buchberger criteria.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{denominator_lcm, integer_content};
use crate::exact::{Monomial, MultiPoly, Rational};

/// Monomial orders understood by the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
    /// Degree-reverse-lexicographic blocks: variables `0..k` are compared
    /// first, the remaining ones break ties (eliminates the first block).
    Block(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        match *self {
            MonomialOrder::Lex => ea.cmp(eb),
            MonomialOrder::DegRevLex => drl(ea, eb),
            MonomialOrder::Block(k) => {
                let k = k.min(ea.len());
                drl(&ea[..k], &eb[..k]).then_with(|| drl(&ea[k..], &eb[k..]))
            }
        }
    }
}

#[inline]
fn drl(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    if da != db {
        return da.cmp(&db);
    }
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Caps that turn runaway computations into explicit errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbLimits {
    pub max_basis: usize,
    pub max_degree: u32,
    pub max_reductions: usize,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits {
            max_basis: 20_000,
            max_degree: 64,
            max_reductions: 400_000,
        }
    }
}

impl GbLimits {
    /// Defaults, with `LRH_RESOURCE_CAP=<n>` overriding the reduction cap
    /// and scaling the basis cap to `n / 10`.
    pub fn from_env() -> Self {
        let mut limits = GbLimits::default();
        if let Some(n) = std::env::var("LRH_RESOURCE_CAP")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            limits.max_reductions = n;
            limits.max_basis = (n / 10).max(16);
        }
        limits
    }
}

/// Polynomial with integer coefficients, terms sorted decreasingly.
#[derive(Clone, Debug)]
pub(crate) struct IntPoly {
    pub(crate) terms: Vec<(Monomial, BigInt)>,
}

impl IntPoly {
    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Clears denominators; returns the polynomial and the factor `s` with
    /// `int = s * p`.
    fn from_rational(p: &MultiPoly, order: MonomialOrder) -> (IntPoly, Rational) {
        let l = denominator_lcm(p.terms().map(|(_, c)| c));
        let lr = Rational::from_integer(l);
        let mut terms: Vec<(Monomial, BigInt)> = p
            .terms()
            .map(|(m, c)| (m.clone(), (c * &lr).to_integer()))
            .collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        (IntPoly { terms }, lr)
    }

    /// Divides out the content and makes the leading coefficient positive.
    fn make_primitive(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let mut g = integer_content(self.terms.iter().map(|(_, c)| c));
        if self.lc().is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in &mut self.terms {
                *c /= &g;
            }
        }
    }

    fn to_monic_rational(&self, nvars: usize) -> MultiPoly {
        let lc = Rational::from_integer(self.lc().clone());
        MultiPoly::from_terms(
            nvars,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), Rational::from_integer(c.clone()) / &lc)),
        )
    }
}

/// Result of reducing a polynomial: `remainder = scale * input (mod G)`.
struct Reduced {
    remainder: IntPoly,
    scale: Rational,
}

/// Fraction-free reduction of `h` against `reducers`.
///
/// `full` also reduces non-leading terms. The working polynomial is kept in
/// increasing order so that its leading term is popped from the end.
fn reduce(
    h: &IntPoly,
    reducers: &[&IntPoly],
    order: MonomialOrder,
    full: bool,
    counter: &mut usize,
) -> Reduced {
    let mut work: Vec<(Monomial, BigInt)> = h.terms.iter().rev().cloned().collect();
    let mut done: Vec<(Monomial, BigInt)> = Vec::new();
    let mut scale = Rational::one();
    let mut steps = 0usize;
    while let Some((lead_m, lead_c)) = work.last() {
        let reducer = reducers.iter().find(|g| g.lm().divides(lead_m));
        let Some(g) = reducer else {
            if !full {
                done.extend(work.drain(..).rev());
                break;
            }
            done.push(work.pop().unwrap());
            continue;
        };
        *counter += 1;
        steps += 1;
        let shift = lead_m.div(g.lm());
        let gcd = lead_c.gcd(g.lc());
        let a = g.lc() / &gcd;
        let c = lead_c / &gcd;
        // work <- a * work - c * shift * g, leading terms cancel.
        work.pop();
        let mut merged = Vec::with_capacity(work.len() + g.terms.len());
        let mut wi = work.into_iter().peekable();
        let mut gi = g.terms[1..].iter().rev().peekable();
        loop {
            match (wi.peek(), gi.peek()) {
                (None, None) => break,
                (Some(_), None) => {
                    let (m, v) = wi.next().unwrap();
                    merged.push((m, v * &a));
                }
                (None, Some(_)) => {
                    let (m, v) = gi.next().unwrap();
                    merged.push((m.mul(&shift), -(v * &c)));
                }
                (Some((wm, _)), Some((gm, _))) => {
                    let sm = gm.mul(&shift);
                    match order.cmp(wm, &sm) {
                        Ordering::Less => {
                            let (m, v) = wi.next().unwrap();
                            merged.push((m, v * &a));
                        }
                        Ordering::Greater => {
                            let (_, v) = gi.next().unwrap();
                            merged.push((sm, -(v * &c)));
                        }
                        Ordering::Equal => {
                            let (m, v) = wi.next().unwrap();
                            let (_, u) = gi.next().unwrap();
                            let s = v * &a - u * &c;
                            if !s.is_zero() {
                                merged.push((m, s));
                            }
                        }
                    }
                }
            }
        }
        work = merged;
        if !a.is_one() {
            for (_, v) in &mut done {
                *v *= &a;
            }
            scale *= Rational::from_integer(a);
        }
        if steps.is_multiple_of(8) {
            let g = integer_content(done.iter().chain(work.iter()).map(|(_, c)| c));
            if !g.is_zero() && !g.is_one() {
                for (_, v) in done.iter_mut().chain(work.iter_mut()) {
                    *v /= &g;
                }
                scale /= Rational::from_integer(g);
            }
        }
    }
    // `done` is already in decreasing order; whatever is left in `work` was
    // appended reversed when `full` is false.
    Reduced {
        remainder: IntPoly { terms: done },
        scale,
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Groebner basis with its order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    nvars: usize,
    gens: Vec<MultiPoly>,
    internal: Vec<IntPoly>,
    stats: GbStats,
}

/// Counters gathered while computing a basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbStats {
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub reduction_steps: usize,
}

impl GroebnerBasis {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Monic generators in increasing order of leading monomial.
    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn stats(&self) -> GbStats {
        self.stats
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.internal.iter().map(|p| p.lm().clone()).collect()
    }

    /// The ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.internal.len() == 1 && self.internal[0].lm().is_one()
    }

    /// Every variable has a pure power among the leading monomials
    /// (the unit ideal counts as zero-dimensional with empty quotient).
    pub fn is_zero_dimensional(&self) -> bool {
        if self.is_unit() {
            return true;
        }
        let mut seen = vec![false; self.nvars];
        for p in &self.internal {
            if let Some(v) = p.lm().pure_power_var() {
                seen[v] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Remainder of `p` modulo the basis.
    pub fn normal_form(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if p.nvars() != self.nvars {
            return Err(Error::Dimension(format!(
                "polynomial in {} variables against a basis in {}",
                p.nvars(),
                self.nvars
            )));
        }
        if p.is_zero() {
            return Ok(p.clone());
        }
        let (ip, s) = IntPoly::from_rational(p, self.order);
        let reducers: Vec<&IntPoly> = self.internal.iter().collect();
        let mut counter = 0;
        let red = reduce(&ip, &reducers, self.order, true, &mut counter);
        let factor = red.scale * s;
        Ok(MultiPoly::from_terms(
            self.nvars,
            red.remainder
                .terms
                .into_iter()
                .map(|(m, c)| (m, Rational::from_integer(c) / &factor)),
        ))
    }

    /// Membership test.
    pub fn contains(&self, p: &MultiPoly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Leading-monomial divisibility: `m` is a standard monomial.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.internal.iter().any(|g| g.lm().divides(m))
    }
}

/// Reduced Groebner basis of the ideal generated by `system`.
pub fn buchberger(system: &[MultiPoly], order: MonomialOrder, limits: &GbLimits) -> Result<GroebnerBasis> {
    let Some(first) = system.first() else {
        return Err(Error::Contract("Groebner basis of an empty system".into()));
    };
    let nvars = first.nvars();
    if system.iter().any(|p| p.nvars() != nvars) {
        return Err(Error::Dimension("system polynomials live in different rings".into()));
    }
    let mut engine = Engine {
        order,
        limits: *limits,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        stats: GbStats::default(),
    };

    let mut inputs: Vec<IntPoly> = system
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| IntPoly::from_rational(p, order).0)
        .collect();
    inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for p in inputs {
        if engine.insert(p)? {
            return Ok(unit_basis(order, nvars, engine.stats));
        }
    }

    while let Some(pair) = engine.select() {
        let s = engine.spoly(&pair);
        engine.stats.pairs_reduced += 1;
        if engine.insert(s)? {
            return Ok(unit_basis(order, nvars, engine.stats));
        }
    }
    Ok(engine.finish(nvars))
}

fn unit_basis(order: MonomialOrder, nvars: usize, stats: GbStats) -> GroebnerBasis {
    GroebnerBasis {
        order,
        nvars,
        gens: vec![MultiPoly::one(nvars)],
        internal: vec![IntPoly {
            terms: vec![(Monomial::one(nvars), BigInt::one())],
        }],
        stats,
    }
}

struct Engine {
    order: MonomialOrder,
    limits: GbLimits,
    polys: Vec<IntPoly>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    stats: GbStats,
}

impl Engine {
    fn reducers(&self) -> Vec<&IntPoly> {
        self.active.iter().map(|&i| &self.polys[i]).collect()
    }

    /// Reduces `p` and, when nonzero, adds it to the basis. Returns true
    /// when the ideal turned out to be the unit ideal.
    fn insert(&mut self, p: IntPoly) -> Result<bool> {
        let reducers = self.reducers();
        let mut counter = 0;
        let mut h = reduce(&p, &reducers, self.order, true, &mut counter).remainder;
        self.stats.reduction_steps += counter;
        if self.stats.reduction_steps > self.limits.max_reductions {
            return Err(Error::Resource(format!(
                "more than {} reduction steps",
                self.limits.max_reductions
            )));
        }
        if h.is_zero() {
            self.stats.zero_reductions += 1;
            return Ok(false);
        }
        h.make_primitive();
        if h.lm().is_one() {
            return Ok(true);
        }
        self.update(h)?;
        Ok(false)
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let best = (0..self.pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
                order
                    .cmp(&pa.lcm, &pb.lcm)
                    .then_with(|| (pa.j, pa.i).cmp(&(pb.j, pb.i)))
            })
            .unwrap();
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, pair: &Pair) -> IntPoly {
        let f = &self.polys[pair.i];
        let g = &self.polys[pair.j];
        let sf = pair.lcm.div(f.lm());
        let sg = pair.lcm.div(g.lm());
        let gcd = f.lc().gcd(g.lc());
        let cf = g.lc() / &gcd;
        let cg = f.lc() / &gcd;
        let mut terms: Vec<(Monomial, BigInt)> = Vec::with_capacity(f.terms.len() + g.terms.len());
        let mut a = f.terms[1..].iter().peekable();
        let mut b = g.terms[1..].iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => {
                    let (m, c) = a.next().unwrap();
                    terms.push((m.mul(&sf), c * &cf));
                }
                (None, Some(_)) => {
                    let (m, c) = b.next().unwrap();
                    terms.push((m.mul(&sg), -(c * &cg)));
                }
                (Some((ma, _)), Some((mb, _))) => {
                    let xa = ma.mul(&sf);
                    let xb = mb.mul(&sg);
                    match self.order.cmp(&xa, &xb) {
                        Ordering::Greater => {
                            let (_, c) = a.next().unwrap();
                            terms.push((xa, c * &cf));
                        }
                        Ordering::Less => {
                            let (_, c) = b.next().unwrap();
                            terms.push((xb, -(c * &cg)));
                        }
                        Ordering::Equal => {
                            let (_, c) = a.next().unwrap();
                            let (_, d) = b.next().unwrap();
                            let s = c * &cf - d * &cg;
                            if !s.is_zero() {
                                terms.push((xa, s));
                            }
                        }
                    }
                }
            }
        }
        IntPoly { terms }
    }

    /// Gebauer-Moeller update with the new element `h`.
    fn update(&mut self, h: IntPoly) -> Result<()> {
        let hm = h.lm().clone();
        if hm.degree() > self.limits.max_degree {
            return Err(Error::Resource(format!(
                "basis element of degree {} exceeds {}",
                hm.degree(),
                self.limits.max_degree
            )));
        }
        let hi = self.polys.len();
        self.polys.push(h);

        let mut candidates: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| Pair {
                i: g,
                j: hi,
                lcm: self.polys[g].lm().lcm(&hm),
            })
            .collect();
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(p) = candidates.pop() {
            let coprime = self.polys[p.i].lm().is_coprime(&hm);
            let dominated = candidates
                .iter()
                .chain(kept.iter())
                .any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(p);
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|p| !self.polys[p.i].lm().is_coprime(&hm))
            .collect();

        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !hm.divides(&p.lcm) {
                return true;
            }
            let l1 = polys[p.i].lm().lcm(&hm);
            let l2 = polys[p.j].lm().lcm(&hm);
            l1 == p.lcm || l2 == p.lcm
        });
        self.pairs.extend(new_pairs);

        self.active.retain(|&g| !hm.divides(polys[g].lm()));
        self.active.push(hi);
        if self.active.len() > self.limits.max_basis {
            return Err(Error::Resource(format!(
                "basis grew beyond {} elements",
                self.limits.max_basis
            )));
        }
        Ok(())
    }

    fn finish(self, nvars: usize) -> GroebnerBasis {
        let order = self.order;
        let mut basis: Vec<IntPoly> = self.active.iter().map(|&i| self.polys[i].clone()).collect();
        basis.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
        let mut counter = 0;
        for k in 0..basis.len() {
            let lead = basis[k].terms[0].clone();
            let tail = IntPoly {
                terms: basis[k].terms[1..].to_vec(),
            };
            let others: Vec<&IntPoly> = basis
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, p)| p)
                .collect();
            let red = reduce(&tail, &others, order, true, &mut counter);
            // lead * scale + remainder, rescaled to integers.
            let s = red.scale;
            let mut terms = vec![(lead.0, lead.1 * s.numer())];
            let den = s.denom().clone();
            terms.extend(red.remainder.terms.into_iter().map(|(m, c)| (m, c * &den)));
            let mut p = IntPoly { terms };
            p.make_primitive();
            basis[k] = p;
        }
        let gens = basis.iter().map(|p| p.to_monic_rational(nvars)).collect();
        let mut stats = self.stats;
        stats.reduction_steps += counter;
        GroebnerBasis {
            order,
            nvars,
            gens,
            internal: basis,
            stats,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn v(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn c(n: usize, k: i64) -> MultiPoly {
        MultiPoly::constant(n, rat(k))
    }

    #[test]
    fn drl_breaks_ties_on_last_variable() {
        let o = MonomialOrder::DegRevLex;
        let xy = Monomial::from_exponents(&[1, 1, 0]);
        let xz = Monomial::from_exponents(&[1, 0, 1]);
        let y2 = Monomial::from_exponents(&[0, 2, 0]);
        assert_eq!(o.cmp(&xy, &xz), Ordering::Greater);
        assert_eq!(o.cmp(&y2, &xz), Ordering::Greater);
        let lex = MonomialOrder::Lex;
        assert_eq!(lex.cmp(&Monomial::from_exponents(&[1, 0, 0]), &y2), Ordering::Greater);
        assert_eq!(o.cmp(&Monomial::from_exponents(&[1, 0, 0]), &y2), Ordering::Less);
    }

    #[test]
    fn collapses_to_linear_generator() {
        let x = v(1, 0);
        let g = buchberger(&[&x.pow(2) - &c(1, 1), &x - &c(1, 1)], MonomialOrder::Lex, &GbLimits::default()).unwrap();
        assert_eq!(g.gens(), &[&x - &c(1, 1)]);
    }

    #[test]
    fn inconsistent_system_gives_unit() {
        let (x, y) = (v(2, 0), v(2, 1));
        let g = buchberger(&[&(&x * &y) - &c(2, 1), x.clone()], MonomialOrder::DegRevLex, &GbLimits::default()).unwrap();
        assert!(g.is_unit());
        assert!(g.is_zero_dimensional());
    }

    #[test]
    fn triangular_shape_in_lex() {
        let (x, y) = (v(2, 0), v(2, 1));
        let g = buchberger(&[&x + &y, &y.pow(2) - &c(2, 2)], MonomialOrder::Lex, &GbLimits::default()).unwrap();
        let univariate_y: Vec<&MultiPoly> = g.gens().iter().filter(|p| p.support_vars() == vec![1]).collect();
        assert_eq!(univariate_y.len(), 1);
        assert_eq!(univariate_y[0].total_degree(), Some(2));
    }

    #[test]
    fn dimension_detection() {
        let (x, y) = (v(2, 0), v(2, 1));
        let g = buchberger(&[&x.pow(2) - &c(2, 1), &y - &x], MonomialOrder::DegRevLex, &GbLimits::default()).unwrap();
        assert!(g.is_zero_dimensional());
        let h = buchberger(&[&(&x * &y) - &c(2, 1)], MonomialOrder::DegRevLex, &GbLimits::default()).unwrap();
        assert!(!h.is_zero_dimensional());
    }

    #[test]
    fn normal_form_basics() {
        let x = v(1, 0);
        let g = buchberger(&[&x - &c(1, 1)], MonomialOrder::DegRevLex, &GbLimits::default()).unwrap();
        assert_eq!(g.normal_form(&x.pow(2)).unwrap(), c(1, 1));
        for p in g.gens() {
            assert!(g.normal_form(p).unwrap().is_zero());
        }
    }

    #[test]
    fn resource_cap_is_reported() {
        let (x, y, z) = (v(3, 0), v(3, 1), v(3, 2));
        let sys = vec![
            &(&x + &y) + &z,
            &(&(&x * &y) + &(&y * &z)) + &(&z * &x),
            &(&(&x * &y) * &z) - &c(3, 1),
        ];
        let tiny = GbLimits {
            max_basis: 1000,
            max_degree: 64,
            max_reductions: 1,
        };
        assert!(matches!(buchberger(&sys, MonomialOrder::DegRevLex, &tiny), Err(Error::Resource(_))));
    }

    #[test]
    fn cyclic_three_is_consistent_across_orders() {
        let (x, y, z) = (v(3, 0), v(3, 1), v(3, 2));
        let sys = vec![
            &(&x + &y) + &z,
            &(&(&x * &y) + &(&y * &z)) + &(&z * &x),
            &(&(&x * &y) * &z) - &c(3, 1),
        ];
        let a = buchberger(&sys, MonomialOrder::DegRevLex, &GbLimits::default()).unwrap();
        let b = buchberger(&sys, MonomialOrder::Lex, &GbLimits::default()).unwrap();
        for p in a.gens() {
            assert!(b.contains(p).unwrap());
        }
        for p in b.gens() {
            assert!(a.contains(p).unwrap());
        }
        assert!(a.is_zero_dimensional());
    }
}
