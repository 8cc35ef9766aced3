//! Finite-dimensional algebras `Q[vars]/I` and the Krylov construction of
//! minimal polynomials and shape-lemma coordinates.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exact::{Monomial, MultiPoly, Rational, UniPoly};

use super::groebner::GroebnerBasis;

/// A finite-dimensional commutative algebra with distinguished generators.
pub(crate) trait Algebra {
    fn dim(&self) -> usize;
    fn one(&self) -> Vec<Rational>;
    /// Coordinates of generator `var`.
    fn coord(&self, var: usize) -> Vec<Rational>;
    /// `var · v`.
    fn mul_var(&self, var: usize, v: &[Rational]) -> Vec<Rational>;
}

type SparseCol = Vec<(usize, Rational)>;

/// `Q[x]/I` for a zero-dimensional `I` given by a Groebner basis, with the
/// standard monomials as basis.
pub(crate) struct QuotientAlgebra {
    nvars: usize,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// `mult[v][j]` = coordinates of `x_v · basis[j]`, filled on demand.
    mult: Vec<Option<Vec<SparseCol>>>,
    gb: GroebnerBasis,
}

impl QuotientAlgebra {
    pub(crate) fn new(gb: GroebnerBasis) -> Self {
        let nvars = gb.nvars();
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
        QuotientAlgebra {
            nvars,
            basis,
            index,
            mult: vec![None; nvars],
            gb,
        }
    }

    pub(crate) fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    fn coords_of(&self, p: &MultiPoly) -> Result<SparseCol> {
        let nf = self.gb.normal_form(p)?;
        let mut col: SparseCol = nf.terms().map(|(m, c)| (self.index[m], c.clone())).collect();
        col.sort_by_key(|e| e.0);
        Ok(col)
    }

    /// Precomputes the multiplication matrices of the listed variables.
    pub(crate) fn prepare(&mut self, vars: &[usize]) -> Result<()> {
        for &v in vars {
            if self.mult[v].is_some() {
                continue;
            }
            let xv = Monomial::var(self.nvars, v);
            let mut cols = Vec::with_capacity(self.basis.len());
            for b in &self.basis {
                let m = b.mul(&xv);
                if let Some(&j) = self.index.get(&m) {
                    cols.push(vec![(j, Rational::one())]);
                } else {
                    cols.push(self.coords_of(&MultiPoly::monomial(m, Rational::one()))?);
                }
            }
            self.mult[v] = Some(cols);
        }
        Ok(())
    }
}

impl Algebra for QuotientAlgebra {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn one(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        if !v.is_empty() {
            v[0] = Rational::one();
        }
        v
    }

    fn coord(&self, var: usize) -> Vec<Rational> {
        self.mul_var(var, &self.one())
    }

    fn mul_var(&self, var: usize, v: &[Rational]) -> Vec<Rational> {
        let cols = self.mult[var]
            .as_ref()
            .expect("multiplication matrix prepared before use");
        let mut out = vec![Rational::zero(); self.dim()];
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (i, c) in &cols[j] {
                out[*i] += vj * c;
            }
        }
        out
    }
}

struct EchelonRow {
    pivot: usize,
    vec: Vec<Rational>,
    /// Polynomial in `t` whose action on `1` gives `vec`.
    combo: Vec<Rational>,
}

/// Row-reduced Krylov basis `1, t, t^2, ...` of the cyclic subspace.
struct Krylov {
    rows: Vec<EchelonRow>,
}

impl Krylov {
    /// Reduces `v` against the rows; returns the residual and the
    /// polynomial `c(t)` with `v = residual + c(t)·1`.
    fn reduce(&self, mut v: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
        let mut acc = vec![Rational::zero(); self.rows.len() + 1];
        for row in &self.rows {
            let f = &v[row.pivot];
            if f.is_zero() {
                continue;
            }
            let f = f.clone();
            for (a, b) in v.iter_mut().zip(&row.vec) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
            for (a, b) in acc.iter_mut().zip(&row.combo) {
                if !b.is_zero() {
                    *a += &f * b;
                }
            }
        }
        (v, acc)
    }
}

fn apply_form<A: Algebra>(alg: &A, form: &[(usize, Rational)], v: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); alg.dim()];
    for (var, lam) in form {
        let w = alg.mul_var(*var, v);
        for (o, x) in out.iter_mut().zip(w) {
            if !x.is_zero() {
                *o += lam * x;
            }
        }
    }
    out
}

/// Outcome of the Krylov construction for one linear form.
pub(crate) struct ShapeData {
    /// Minimal polynomial of `t` acting on the algebra (monic).
    pub(crate) minpoly: UniPoly,
    /// `Some(g_i)` when generator `i` equals `g_i(t)` in the algebra.
    pub(crate) coords: Vec<Option<UniPoly>>,
}

/// Minimal polynomial of `t = Σ λ_i x_i` and the expressions of the
/// requested generators as polynomials in `t`.
pub(crate) fn krylov_shape<A: Algebra>(alg: &A, form: &[(usize, Rational)], targets: &[usize]) -> ShapeData {
    let d = alg.dim();
    let mut kr = Krylov { rows: Vec::new() };
    let mut current = alg.one();
    let mut current_combo = vec![Rational::one()];
    let minpoly = loop {
        let (res, acc) = kr.reduce(current.clone());
        let mut combo = current_combo.clone();
        combo.resize(combo.len().max(acc.len()), Rational::zero());
        for (c, a) in combo.iter_mut().zip(&acc) {
            *c -= a;
        }
        match res.iter().position(|x| !x.is_zero()) {
            None => break UniPoly::new(combo),
            Some(pivot) => {
                let inv = res[pivot].recip();
                let vec: Vec<Rational> = res.iter().map(|x| x * &inv).collect();
                let combo: Vec<Rational> = combo.iter().map(|x| x * &inv).collect();
                // Next Krylov vector: t times the newest row.
                current = apply_form(alg, form, &vec);
                current_combo = std::iter::once(Rational::zero()).chain(combo.iter().cloned()).collect();
                kr.rows.push(EchelonRow { pivot, vec, combo });
                debug_assert!(kr.rows.len() <= d);
            }
        }
    };
    let coords = targets
        .iter()
        .map(|&v| {
            let (res, acc) = kr.reduce(alg.coord(v));
            res.iter().all(Zero::is_zero).then(|| UniPoly::new(acc))
        })
        .collect();
    ShapeData {
        minpoly: minpoly.monic(),
        coords,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::solver::groebner::{buchberger, GbLimits, MonomialOrder};

    #[test]
    fn quotient_of_two_points() {
        let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
        let sys = vec![&x.pow(2) - &MultiPoly::one(2), &y - &x];
        let gb = buchberger(&sys, MonomialOrder::DegRevLex, &GbLimits::default()).unwrap();
        let mut alg = QuotientAlgebra::new(gb);
        assert_eq!(alg.dim(), 2);
        alg.prepare(&[0, 1]).unwrap();
        let shape = krylov_shape(&alg, &[(0, rat(1)), (1, rat(2))], &[0, 1]);
        // t = 3x, so the minimal polynomial is t^2 - 9.
        assert_eq!(shape.minpoly, UniPoly::from_ints(&[-9, 0, 1]));
        let gx = shape.coords[0].clone().unwrap();
        assert_eq!(gx, UniPoly::new(vec![rat(0), crate::exact::frac(1, 3)]));
        assert_eq!(shape.coords[1], shape.coords[0]);
    }

    #[test]
    fn nilpotent_coordinates_are_not_in_span() {
        let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
        let gb = buchberger(&[x.pow(2), y.pow(2)], MonomialOrder::DegRevLex, &GbLimits::default()).unwrap();
        let mut alg = QuotientAlgebra::new(gb);
        alg.prepare(&[0, 1]).unwrap();
        assert_eq!(alg.dim(), 4);
        let shape = krylov_shape(&alg, &[(0, rat(1)), (1, rat(1))], &[0, 1]);
        assert_eq!(shape.minpoly, UniPoly::from_ints(&[0, 0, 0, 1]));
        assert!(shape.coords[0].is_none());
    }
}
