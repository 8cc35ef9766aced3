//! Dense univariate polynomials over the rationals.
//!
//! Rational parametrizations and everything downstream of them (real root
//! isolation, certificates) work in one variable `t`, where a dense
//! coefficient vector is both simpler and faster than the sparse map.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::intpoly;
use super::monomial::Monomial;
use super::poly::MultiPoly;
use super::rational::{denominator_lcm, format_rational, integer_content, Rational};
use crate::error::{Error, Result};

/// `coeffs[i]` is the coefficient of `t^i`; no trailing zeros are stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `t - root`.
    pub fn linear_root(root: &Rational) -> Self {
        Self::new(vec![-root.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.recip())
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let inv_lc = d.leading_coeff().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv_lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Division that must be exact.
    pub fn exact_div(&self, d: &UniPoly) -> Result<UniPoly> {
        if d.is_zero() {
            return Err(Error::Inexact("division by the zero polynomial".into()));
        }
        let (q, r) = self.div_rem(d);
        if !r.is_zero() {
            return Err(Error::Inexact(format!("{self} is not divisible by {d}")));
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        // Primitive remainder sequence over Z.
        let mut a = intpoly::primitive(intpoly::from_uni(self).0);
        let mut b = intpoly::primitive(intpoly::from_uni(other).0);
        while !b.is_empty() {
            let r = intpoly::primitive(intpoly::pseudo_rem(&a, &b).0);
            a = b;
            b = r;
        }
        UniPoly::new(a.into_iter().map(Rational::from_integer).collect()).monic()
    }

    /// `q / gcd(q, q')`, monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return if self.is_zero() { UniPoly::zero() } else { UniPoly::one() };
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides its argument").monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.is_constant() || crate::solver::param::coprime(self, &self.derivative())
    }

    /// Scalar multiple with coprime integer coefficients and positive
    /// leading coefficient.
    pub fn primitive_part(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let ints = self.integer_coeffs();
        UniPoly::new(ints.into_iter().map(Rational::from_integer).collect())
    }

    /// Coprime integer coefficients of a positive rational multiple of the
    /// polynomial whose leading coefficient is positive.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let l = denominator_lcm(&self.coeffs);
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let g = integer_content(&ints);
        if !g.is_zero() && !g.is_one() {
            for c in &mut ints {
                *c /= &g;
            }
        }
        if ints.last().is_some_and(Signed::is_negative) {
            for c in &mut ints {
                *c = -&*c;
            }
        }
        ints
    }

    pub fn mul_mod(&self, other: &UniPoly, modulus: &UniPoly) -> UniPoly {
        (self * other).rem(modulus)
    }

    /// Inverse modulo `modulus`, or `None` when the two share a factor.
    pub fn inverse_mod(&self, modulus: &UniPoly) -> Option<UniPoly> {
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus));
        let (mut s0, mut s1) = (UniPoly::zero(), UniPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = r0.leading_coeff();
        Some(s0.scale(&(Rational::one() / c)).rem(modulus))
    }

    /// Composition `self(inner)`.
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// Reads a polynomial in exactly one variable.
    pub fn from_multipoly(p: &MultiPoly) -> Result<UniPoly> {
        if p.nvars() != 1 {
            return Err(Error::Dimension(format!(
                "expected a univariate polynomial, got {} variables",
                p.nvars()
            )));
        }
        let deg = p.total_degree().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (m, c) in p.terms() {
            coeffs[m.exponents()[0] as usize] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn to_multipoly(&self) -> MultiPoly {
        MultiPoly::from_terms(
            1,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::from_exponents(&[i as u16]), c.clone())),
        )
    }
}

/// Determinant of a square matrix over `Q[t]/(modulus)`, reduced modulo
/// `modulus`. Division-free (Berkowitz), so it is valid even when the
/// quotient ring is not a field.
pub fn determinant_mod(matrix: &[Vec<UniPoly>], modulus: &UniPoly) -> UniPoly {
    let n = matrix.len();
    if n == 0 {
        return UniPoly::one().rem(modulus);
    }
    let mulm = |a: &UniPoly, b: &UniPoly| a.mul_mod(b, modulus);
    // v holds the characteristic polynomial of the leading r x r block,
    // highest coefficient first.
    let mut v = vec![UniPoly::one()];
    for r in 0..n {
        let a = &matrix[r][r];
        // Column of the lower-triangular Toeplitz factor:
        // [1, -a, -R C, -R S C, ..., -R S^(r-1) C].
        let mut t = vec![UniPoly::one(), -a];
        let mut sc: Vec<UniPoly> = (0..r).map(|i| matrix[i][r].clone()).collect();
        for k in 0..r {
            let rc = (0..r).fold(UniPoly::zero(), |acc, j| &acc + &mulm(&matrix[r][j], &sc[j]));
            t.push(-&rc);
            if k + 1 < r {
                sc = (0..r)
                    .map(|i| (0..r).fold(UniPoly::zero(), |acc, j| &acc + &mulm(&matrix[i][j], &sc[j])))
                    .collect();
            }
        }
        let mut nv = vec![UniPoly::zero(); r + 2];
        for (i, slot) in nv.iter_mut().enumerate() {
            for j in 0..=r.min(i) {
                if i - j < t.len() {
                    *slot = &*slot + &mulm(&t[i - j], &v[j]);
                }
            }
        }
        v = nv;
    }
    let det = v.pop().unwrap();
    if n % 2 == 1 {
        -&det
    } else {
        det
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*t", format_rational(c))?,
                _ => write!(f, "{}*t^{}", format_rational(c), i)?,
            }
        }
        Ok(())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn inverse_mod_roundtrip() {
        let q = p(&[-2, 0, 1]);
        let a = p(&[3, 1]);
        let inv = a.inverse_mod(&q).unwrap();
        assert_eq!(a.mul_mod(&inv, &q), UniPoly::one());
        assert!(p(&[-1, 1]).inverse_mod(&p(&[1, -2, 1])).is_none());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[0, 1])), UniPoly::one());
        assert_eq!(UniPoly::zero().gcd(&p(&[2, 4])), p(&[1, 2]).monic());
    }

    #[test]
    fn squarefree_part_drops_repeated_factor() {
        // (t-1)^2 (t+2) -> (t-1)(t+2)
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        assert_eq!(f.squarefree_part(), &p(&[-1, 1]) * &p(&[2, 1]));
        assert!(!f.is_squarefree());
        assert!(f.squarefree_part().is_squarefree());
    }

    #[test]
    fn exact_division_reports_remainder() {
        assert!(matches!(p(&[1, 0, 1]).exact_div(&p(&[-1, 1])), Err(Error::Inexact(_))));
        assert_eq!(p(&[-1, 0, 1]).exact_div(&p(&[1, 1])).unwrap(), p(&[-1, 1]));
    }

    #[test]
    fn multipoly_round_trip() {
        let f = p(&[3, 0, -2, 7]);
        assert_eq!(UniPoly::from_multipoly(&f.to_multipoly()).unwrap(), f);
        assert!(UniPoly::from_multipoly(&MultiPoly::var(2, 0)).is_err());
    }

    #[test]
    fn berkowitz_matches_cofactor_on_constants() {
        let m: Vec<Vec<UniPoly>> = [[2, -1, 3], [0, 4, 1], [5, 2, -2]]
            .iter()
            .map(|row| row.iter().map(|&v| UniPoly::constant(rat(v))).collect())
            .collect();
        // 2(-8-2) + 1(0-5) + 3(0-20) = -20 - 5 - 60
        let modulus = p(&[0, 0, 0, 0, 1]);
        assert_eq!(determinant_mod(&m, &modulus), UniPoly::constant(rat(-85)));
    }

    #[test]
    fn berkowitz_over_quotient_ring() {
        // [[t, 1], [1, t]] has determinant t^2 - 1 = 0 modulo t^2 - 1.
        let q = p(&[-1, 0, 1]);
        let m = vec![vec![UniPoly::t(), UniPoly::one()], vec![UniPoly::one(), UniPoly::t()]];
        assert!(determinant_mod(&m, &q).is_zero());
        let q3 = p(&[-4, 0, 1]);
        assert_eq!(determinant_mod(&m, &q3), UniPoly::constant(rat(3)));
    }
}
