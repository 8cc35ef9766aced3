//! Arithmetic modulo a word-sized prime: the field itself, dense univariate
//! polynomials, and Buchberger's algorithm with the same strategy as the
//! rational engine.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;


use crate::exact::{Monomial, MultiPoly, Rational};

use super::groebner::MonomialOrder;

/// The prime field `Z/p`, `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Fp {
    pub(crate) p: u64,
}

impl Fp {
    #[inline]
    pub(crate) fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub(crate) fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    pub(crate) fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub(crate) fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub(crate) fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    pub(crate) fn from_int(self, a: &BigInt) -> u64 {
        let m = a.mod_floor(&BigInt::from(self.p));
        m.to_u64().expect("residue fits")
    }

    /// Image of a rational, `None` when `p` divides the denominator.
    pub(crate) fn from_rational(self, q: &Rational) -> Option<u64> {
        let d = self.from_int(q.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(self.from_int(q.numer()), self.inv(d)))
    }
}

/// Deterministic primes just below `2^31`.
pub(crate) fn primes() -> impl Iterator<Item = u64> {
    let is_prime = |n: u64| {
        if n.is_multiple_of(2) {
            return false;
        }
        let mut d = 3;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 2;
        }
        true
    };
    (1u64 << 20..(1u64 << 31) - 1).rev().filter(move |&n| is_prime(n))
}

// Dense univariate polynomials mod p, coefficient of t^i at index i.

pub(crate) fn utrim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn urem(f: Fp, a: &[u64], d: &[u64]) -> Vec<u64> {
    udivrem(f, a, d).1
}

pub(crate) fn udivrem(f: Fp, a: &[u64], d: &[u64]) -> (Vec<u64>, Vec<u64>) {
    assert!(!d.is_empty(), "division by zero polynomial mod p");
    let dd = d.len() - 1;
    if a.len() <= dd {
        return (Vec::new(), utrim(a.to_vec()));
    }
    let inv = f.inv(d[dd]);
    let mut r = a.to_vec();
    let mut q = vec![0; a.len() - dd];
    for k in (0..q.len()).rev() {
        let c = f.mul(r[k + dd], inv);
        if c == 0 {
            continue;
        }
        for (j, &dc) in d.iter().enumerate() {
            r[k + j] = f.sub(r[k + j], f.mul(c, dc));
        }
        q[k] = c;
    }
    r.truncate(dd);
    (utrim(q), utrim(r))
}

pub(crate) fn umul(f: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % f.p;
        }
    }
    utrim(out)
}

pub(crate) fn umulmod(f: Fp, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    urem(f, &umul(f, a, b), m)
}

pub(crate) fn usub(f: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    utrim(
        (0..n)
            .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect(),
    )
}

pub(crate) fn umonic(f: Fp, a: &[u64]) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = f.inv(lc);
            a.iter().map(|&c| f.mul(c, inv)).collect()
        }
    }
}

pub(crate) fn ugcd(f: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (utrim(a.to_vec()), utrim(b.to_vec()));
    while !b.is_empty() {
        let r = urem(f, &a, &b);
        a = b;
        b = r;
    }
    umonic(f, &a)
}

pub(crate) fn uderiv(f: Fp, a: &[u64]) -> Vec<u64> {
    utrim(a.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, i as u64 % f.p)).collect())
}

pub(crate) fn uinvmod(f: Fp, a: &[u64], m: &[u64]) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (m.to_vec(), urem(f, a, m));
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = udivrem(f, &r0, &r1);
        let s = usub(f, &s0, &umul(f, &q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = f.inv(r0[0]);
    Some(urem(f, &s0.iter().map(|&x| f.mul(x, c)).collect::<Vec<_>>(), m))
}

// Multivariate polynomials mod p, terms sorted decreasingly.

pub(crate) type MPoly = Vec<(Monomial, u64)>;

pub(crate) fn mpoly_from(f: Fp, p: &MultiPoly, order: MonomialOrder) -> Option<MPoly> {
    let mut terms = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        let c = f.from_rational(c)?;
        if c != 0 {
            terms.push((m.clone(), c));
        }
    }
    terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
    Some(terms)
}

/// Full reduction of `h` by monic `reducers`.
fn reduce_mod(f: Fp, h: &MPoly, reducers: &[&MPoly], order: MonomialOrder, counter: &mut usize) -> MPoly {
    let mut work: Vec<(Monomial, u64)> = h.iter().rev().cloned().collect();
    let mut done: MPoly = Vec::new();
    while let Some((lead_m, lead_c)) = work.pop() {
        let Some(g) = reducers.iter().find(|g| g[0].0.divides(&lead_m)) else {
            done.push((lead_m, lead_c));
            continue;
        };
        *counter += 1;
        let shift = lead_m.div(&g[0].0);
        let c = lead_c;
        let mut merged = Vec::with_capacity(work.len() + g.len());
        let mut wi = std::mem::take(&mut work).into_iter().peekable();
        let mut gi = g[1..].iter().rev().peekable();
        loop {
            match (wi.peek(), gi.peek()) {
                (None, None) => break,
                (Some(_), None) => merged.push(wi.next().unwrap()),
                (None, Some(_)) => {
                    let (m, v) = gi.next().unwrap();
                    merged.push((m.mul(&shift), f.neg(f.mul(*v, c))));
                }
                (Some((wm, _)), Some((gm, _))) => {
                    let sm = gm.mul(&shift);
                    match order.cmp(wm, &sm) {
                        Ordering::Less => merged.push(wi.next().unwrap()),
                        Ordering::Greater => {
                            let (_, v) = gi.next().unwrap();
                            merged.push((sm, f.neg(f.mul(*v, c))));
                        }
                        Ordering::Equal => {
                            let (m, w) = wi.next().unwrap();
                            let (_, v) = gi.next().unwrap();
                            let s = f.sub(w, f.mul(*v, c));
                            if s != 0 {
                                merged.push((m, s));
                            }
                        }
                    }
                }
            }
        }
        work = merged;
    }
    done
}

/// Reduced Groebner basis modulo `p`.
pub(crate) struct GbMod {
    pub(crate) f: Fp,
    pub(crate) order: MonomialOrder,
    pub(crate) nvars: usize,
    /// Monic, sorted increasingly by leading monomial.
    pub(crate) basis: Vec<MPoly>,
}

impl GbMod {
    pub(crate) fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0][0].0.is_one()
    }

    pub(crate) fn is_zero_dimensional(&self) -> bool {
        if self.is_unit() {
            return true;
        }
        let mut seen = vec![false; self.nvars];
        for g in &self.basis {
            if let Some(v) = g[0].0.pure_power_var() {
                seen[v] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub(crate) fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|g| g[0].0.clone()).collect()
    }

    pub(crate) fn is_standard(&self, m: &Monomial) -> bool {
        !self.basis.iter().any(|g| g[0].0.divides(m))
    }

    pub(crate) fn normal_form(&self, h: &MPoly) -> MPoly {
        let reducers: Vec<&MPoly> = self.basis.iter().collect();
        let mut c = 0;
        reduce_mod(self.f, h, &reducers, self.order, &mut c)
    }
}

/// `Z/p[x]/I` with its standard-monomial basis.
pub(crate) struct QuotientMod {
    pub(crate) gb: GbMod,
    pub(crate) basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    mult: Vec<Option<Vec<Vec<(usize, u64)>>>>,
}

impl QuotientMod {
    pub(crate) fn new(gb: GbMod) -> Self {
        let nvars = gb.nvars;
        let mut basis = Vec::new();
        let mut index = HashMap::new();
        if !gb.is_unit() {
            let one = Monomial::one(nvars);
            let mut queue = VecDeque::from([one.clone()]);
            index.insert(one, 0usize);
            while let Some(m) = queue.pop_front() {
                basis.push(m.clone());
                for v in 0..nvars {
                    let next = m.mul(&Monomial::var(nvars, v));
                    if !index.contains_key(&next) && gb.is_standard(&next) {
                        index.insert(next.clone(), 0);
                        queue.push_back(next);
                    }
                }
            }
            for (i, m) in basis.iter().enumerate() {
                index.insert(m.clone(), i);
            }
        }
        QuotientMod {
            mult: vec![None; nvars],
            gb,
            basis,
            index,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.basis.len()
    }

    pub(crate) fn prepare(&mut self, vars: &[usize]) {
        let nvars = self.gb.nvars;
        for &v in vars {
            if self.mult[v].is_some() {
                continue;
            }
            let xv = Monomial::var(nvars, v);
            let cols = self
                .basis
                .iter()
                .map(|b| {
                    let m = b.mul(&xv);
                    if let Some(&j) = self.index.get(&m) {
                        vec![(j, 1)]
                    } else {
                        let nf = self.gb.normal_form(&vec![(m, 1)]);
                        let mut col: Vec<(usize, u64)> = nf.into_iter().map(|(m, c)| (self.index[&m], c)).collect();
                        col.sort_by_key(|e| e.0);
                        col
                    }
                })
                .collect();
            self.mult[v] = Some(cols);
        }
    }

    pub(crate) fn mul_var(&self, var: usize, v: &[u64]) -> Vec<u64> {
        let f = self.gb.f;
        let cols = self.mult[var].as_ref().expect("prepared");
        let mut out = vec![0u64; self.dim()];
        for (j, &vj) in v.iter().enumerate() {
            if vj == 0 {
                continue;
            }
            for &(i, c) in &cols[j] {
                out[i] = (out[i] + vj * c) % f.p;
            }
        }
        out
    }

    /// Coordinates of the variable `x_v`.
    pub(crate) fn coord(&self, v: usize) -> Vec<u64> {
        let m = Monomial::var(self.gb.nvars, v);
        let mut out = vec![0u64; self.dim()];
        if let Some(&j) = self.index.get(&m) {
            out[j] = 1;
        } else {
            for (m, c) in self.gb.normal_form(&vec![(m, 1)]) {
                out[self.index[&m]] = c;
            }
        }
        out
    }

    pub(crate) fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        if !v.is_empty() {
            v[0] = 1;
        }
        v
    }
}

/// Minimal polynomial of `t = Σ form_i x_i` mod p and, for every target
/// variable, its expression as a polynomial in `t` when it exists.
pub(crate) fn krylov_mod(qa: &QuotientMod, form: &[(usize, u64)], targets: &[usize]) -> (Vec<u64>, Vec<Option<Vec<u64>>>) {
    let f = qa.gb.f;
    let d = qa.dim();
    struct Row {
        pivot: usize,
        vec: Vec<u64>,
        combo: Vec<u64>,
    }
    let mut rows: Vec<Row> = Vec::new();
    let reduce = |rows: &[Row], mut v: Vec<u64>| -> (Vec<u64>, Vec<u64>) {
        let mut acc = vec![0u64; rows.len() + 1];
        for row in rows {
            let c = v[row.pivot];
            if c == 0 {
                continue;
            }
            for (a, &b) in v.iter_mut().zip(&row.vec) {
                if b != 0 {
                    *a = f.sub(*a, f.mul(c, b));
                }
            }
            for (a, &b) in acc.iter_mut().zip(&row.combo) {
                if b != 0 {
                    *a = f.add(*a, f.mul(c, b));
                }
            }
        }
        (v, acc)
    };
    let apply = |v: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; d];
        for &(var, lam) in form {
            let w = qa.mul_var(var, v);
            for (o, x) in out.iter_mut().zip(w) {
                *o = f.add(*o, f.mul(lam, x));
            }
        }
        out
    };
    let mut current = qa.one();
    let mut current_combo = vec![1u64];
    let minpoly = loop {
        let (res, acc) = reduce(&rows, current.clone());
        let mut combo = current_combo.clone();
        combo.resize(combo.len().max(acc.len()), 0);
        for (c, a) in combo.iter_mut().zip(&acc) {
            *c = f.sub(*c, *a);
        }
        match res.iter().position(|&x| x != 0) {
            None => break umonic(f, &utrim(combo)),
            Some(pivot) => {
                let inv = f.inv(res[pivot]);
                let vec: Vec<u64> = res.iter().map(|&x| f.mul(x, inv)).collect();
                let combo: Vec<u64> = combo.iter().map(|&x| f.mul(x, inv)).collect();
                current = apply(&vec);
                current_combo = std::iter::once(0).chain(combo.iter().copied()).collect();
                rows.push(Row { pivot, vec, combo });
            }
        }
    };
    let coords = targets
        .iter()
        .map(|&v| {
            let (res, acc) = reduce(&rows, qa.coord(v));
            res.iter().all(|&x| x == 0).then(|| utrim(acc))
        })
        .collect();
    (minpoly, coords)
}

/// Factor of the squarefree `q` on whose roots the matrix is nonsingular.
pub(crate) fn nonsingular_part_mod(f: Fp, mat: Vec<Vec<Vec<u64>>>, q: &[u64]) -> Vec<u64> {
    if q.len() <= 1 || mat.is_empty() {
        return q.to_vec();
    }
    let n = mat.len();
    let reduced: Vec<Vec<Vec<u64>>> = mat.iter().map(|row| row.iter().map(|e| urem(f, e, q)).collect()).collect();
    let Some(pr) = (0..n).find(|&i| !reduced[i][0].is_empty()) else {
        return vec![1];
    };
    let g = ugcd(f, &reduced[pr][0], q);
    if g.len() > 1 {
        let q2 = umonic(f, &udivrem(f, q, &g).0);
        let left = nonsingular_part_mod(f, reduced.clone(), &g);
        let right = nonsingular_part_mod(f, reduced, &q2);
        return umonic(f, &umul(f, &left, &right));
    }
    let inv = uinvmod(f, &reduced[pr][0], q).expect("coprime pivot");
    let mut rows = reduced;
    rows.swap(0, pr);
    let pivot_row: Vec<Vec<u64>> = rows[0].iter().map(|e| umulmod(f, e, &inv, q)).collect();
    let sub = rows[1..]
        .iter()
        .map(|row| {
            let c = &row[0];
            (1..n)
                .map(|j| {
                    if c.is_empty() {
                        row[j].clone()
                    } else {
                        usub(f, &row[j], &umulmod(f, c, &pivot_row[j], q))
                    }
                })
                .collect()
        })
        .collect();
    nonsingular_part_mod(f, sub, q)
}

/// Evaluates `p` at the point `x_i = coords_i(t)` in `Z/p[t]/q`.
pub(crate) fn eval_at(f: Fp, p: &MultiPoly, coords: &[Vec<u64>], q: &[u64]) -> Option<Vec<u64>> {
    let mut pows: Vec<Vec<Vec<u64>>> = coords.iter().map(|_| vec![vec![1u64]]).collect();
    let mut acc: Vec<u64> = Vec::new();
    for (m, c) in p.terms() {
        let c = f.from_rational(c)?;
        let mut term = vec![c];
        for (i, &e) in m.exponents().iter().enumerate() {
            let e = e as usize;
            if e == 0 {
                continue;
            }
            while pows[i].len() <= e {
                let next = umulmod(f, pows[i].last().unwrap(), &coords[i], q);
                pows[i].push(next);
            }
            term = umulmod(f, &term, &pows[i][e], q);
        }
        let n = acc.len().max(term.len());
        acc = utrim((0..n).map(|k| f.add(*acc.get(k).unwrap_or(&0), *term.get(k).unwrap_or(&0))).collect());
    }
    Some(urem(f, &acc, q))
}
