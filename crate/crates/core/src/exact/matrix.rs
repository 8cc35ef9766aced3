//! Matrices of polynomials and exact linear algebra over Q.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Largest symbolic determinant the cofactor expansion will attempt.
pub const MAX_SYMBOLIC_DET: usize = 8;

/// Row-major matrix of polynomials sharing one ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<MultiPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let nvars = entries.first().map(MultiPoly::nvars).unwrap_or(0);
        if entries.iter().any(|e| e.nvars() != nvars) {
            return Err(Error::Dimension("matrix entries live in different rings".into()));
        }
        Ok(PolyMatrix {
            rows,
            cols,
            nvars,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_rationals(rows: &[Vec<Rational>], nvars: usize) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|c| MultiPoly::constant(nvars, c.clone())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[MultiPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix-vector product with a vector of polynomials.
    pub fn mul_vec(&self, v: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = MultiPoly::zero(self.nvars);
                for (a, b) in self.row(i).iter().zip(v) {
                    acc = acc.checked_add(&a.checked_mul(b)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension("inner sizes differ".into()));
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = MultiPoly::zero(self.nvars);
                for k in 0..self.cols {
                    acc = acc.checked_add(&self.get(i, k).checked_mul(other.get(k, j))?)?;
                }
                out.push(acc);
            }
        }
        PolyMatrix::new(self.rows, other.cols, out)
    }

    /// Evaluates every entry at a point.
    pub fn eval(&self, point: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.eval(point)).collect())
            .collect()
    }

    fn is_numeric(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_constant)
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<MultiPoly> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let all_rows: Vec<usize> = (0..self.rows).collect();
        let mut minors = self.minors_over(&all_rows, self.rows)?;
        Ok(minors.pop().expect("one maximal minor"))
    }

    /// All `k x k` minors, ordered lexicographically by row subset and then
    /// by column subset.
    pub fn minors(&self, k: usize) -> Result<Vec<MultiPoly>> {
        if k == 0 || k > self.rows.min(self.cols) {
            return Err(Error::Dimension(format!(
                "minor size {k} for a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let rows: Vec<usize> = (0..self.rows).collect();
        self.minors_over(&rows, k)
    }

    fn minors_over(&self, rows: &[usize], k: usize) -> Result<Vec<MultiPoly>> {
        let row_sets = subsets(rows.len(), k);
        let col_sets = subsets(self.cols, k);
        if self.is_numeric() {
            let vals: Vec<Vec<Rational>> = (0..self.rows)
                .map(|i| self.row(i).iter().map(MultiPoly::constant_term).collect())
                .collect();
            let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
            for rs in &row_sets {
                for cs in &col_sets {
                    let sub: Vec<Vec<Rational>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| vals[rows[i]][j].clone()).collect())
                        .collect();
                    out.push(MultiPoly::constant(self.nvars, bareiss_determinant(sub)));
                }
            }
            return Ok(out);
        }
        if k > MAX_SYMBOLIC_DET {
            return Err(Error::Resource(format!(
                "symbolic determinant of size {k} exceeds the limit {MAX_SYMBOLIC_DET}"
            )));
        }
        let mut memo = HashMap::new();
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rs in &row_sets {
            let actual: Vec<usize> = rs.iter().map(|&i| rows[i]).collect();
            for cs in &col_sets {
                let cmask = cs.iter().fold(0u64, |m, &j| m | 1 << j);
                out.push(self.laplace(&actual, cmask, &mut memo));
            }
        }
        Ok(out)
    }

    /// Cofactor expansion along the first listed row; subresults are shared
    /// between minors through `memo`, keyed by (row mask, column mask).
    fn laplace(&self, rows: &[usize], cmask: u64, memo: &mut HashMap<(u64, u64), MultiPoly>) -> MultiPoly {
        if rows.is_empty() {
            return MultiPoly::one(self.nvars);
        }
        let rmask = rows.iter().fold(0u64, |m, &i| m | 1 << i);
        if let Some(v) = memo.get(&(rmask, cmask)) {
            return v.clone();
        }
        let r0 = rows[0];
        let mut acc = MultiPoly::zero(self.nvars);
        let mut sign = true;
        for j in 0..self.cols {
            if cmask & (1 << j) == 0 {
                continue;
            }
            let a = self.get(r0, j);
            if !a.is_zero() {
                let sub = self.laplace(&rows[1..], cmask & !(1 << j), memo);
                let term = a * &sub;
                acc = if sign { &acc + &term } else { &acc - &term };
            }
            sign = !sign;
        }
        memo.insert((rmask, cmask), acc.clone());
        acc
    }
}

/// Lexicographically ordered `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Jacobian `(d f_i / d x_{vars[j]})`.
pub fn jacobian(system: &[MultiPoly], vars: &[usize]) -> Result<PolyMatrix> {
    let nvars = system.first().map(MultiPoly::nvars).unwrap_or(0);
    if let Some(&bad) = vars.iter().find(|&&v| v >= nvars) {
        return Err(Error::Dimension(format!(
            "variable index {bad} out of range for {nvars} variables"
        )));
    }
    let entries = system
        .iter()
        .flat_map(|f| vars.iter().map(move |&v| f.derivative(v)))
        .collect();
    PolyMatrix::new(system.len(), vars.len(), entries)
}

/// Fraction-free (Bareiss) determinant of a square rational matrix.
pub fn bareiss_determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    if n == 0 {
        return Rational::one();
    }
    let mut sign = Rational::one();
    let mut prev = Rational::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Exact rank by Gaussian elimination.
pub fn rank(a: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let rows = m.len();
    let cols = m.first().map(Vec::len).unwrap_or(0);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..cols {
                let v = &f * &m[r][j];
                m[i][j] -= v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Inverse of a square rational matrix, `None` when singular.
pub fn inverse(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for v in m[c].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..2 * n {
                let v = &f * &m[c][j];
                m[i][j] -= v;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_vec(a: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    #[test]
    fn symbolic_two_by_two() {
        let x = MultiPoly::var(1, 0);
        let one = MultiPoly::one(1);
        let m = PolyMatrix::from_rows(vec![vec![x.clone(), one.clone()], vec![one.clone(), x.clone()]]).unwrap();
        let d = m.minors(2).unwrap();
        assert_eq!(d, vec![&x.pow(2) - &one]);
        assert_eq!(m.determinant().unwrap(), &x.pow(2) - &one);
    }

    #[test]
    fn identity_two_minors() {
        let m = PolyMatrix::from_rationals(&identity(3), 0).unwrap();
        let minors = m.minors(2).unwrap();
        assert_eq!(minors.len(), 9);
        let values: Vec<Rational> = minors.iter().map(MultiPoly::constant_term).collect();
        // Row sets and column sets in lex order: {0,1},{0,2},{1,2}; the
        // diagonal-aligned ones sit at positions 0, 4, 8.
        for (i, v) in values.iter().enumerate() {
            let expected = if i % 4 == 0 { rat(1) } else { rat(0) };
            assert_eq!(v, &expected, "minor {i}");
        }
    }

    #[test]
    fn minor_size_out_of_range() {
        let m = PolyMatrix::from_rationals(&identity(2), 0).unwrap();
        assert!(matches!(m.minors(0), Err(Error::Dimension(_))));
        assert!(matches!(m.minors(3), Err(Error::Dimension(_))));
    }

    #[test]
    fn jacobian_examples() {
        let x1 = MultiPoly::var(2, 0);
        let x2 = MultiPoly::var(2, 1);
        let f = &x1.pow(2) - &x2;
        let j = jacobian(std::slice::from_ref(&f), &[0, 1]).unwrap();
        assert_eq!(j.row(0), &[x1.scale(&rat(2)), MultiPoly::constant(2, rat(-1))]);
        // drop d/dx1
        let sys = vec![&x1 * &x2, &x1 + &x2];
        let j1 = jacobian(&sys, &[1]).unwrap();
        assert_eq!(j1.entries(), &[x1.clone(), MultiPoly::one(2)]);
        // linear system -> constant coefficient matrix
        let lin = vec![&x1.scale(&rat(3)) - &x2, x2.scale(&rat(5))];
        let jl = jacobian(&lin, &[0, 1]).unwrap();
        assert_eq!(jl.eval(&[rat(7), rat(-9)]).unwrap(), ints(&[&[3, -1], &[0, 5]]));
        assert!(jacobian(&lin, &[2]).is_err());
    }

    #[test]
    fn bareiss_and_rank() {
        let a = ints(&[&[2, -1, 3], &[0, 4, 1], &[5, 2, -2]]);
        assert_eq!(bareiss_determinant(a.clone()), rat(-85));
        assert_eq!(rank(&a), 3);
        let b = ints(&[&[1, 2, 4], &[2, 4, 8], &[4, 8, 16]]);
        assert_eq!(rank(&b), 1);
        assert_eq!(bareiss_determinant(b), rat(0));
        let inv = inverse(&a).unwrap();
        let prod: Vec<Vec<Rational>> = (0..3)
            .map(|i| (0..3).map(|j| (0..3).map(|k| &a[i][k] * &inv[k][j]).sum()).collect())
            .collect();
        assert_eq!(prod, identity(3));
    }

    #[test]
    fn oversized_symbolic_determinant_is_refused() {
        let n = MAX_SYMBOLIC_DET + 1;
        let entries = (0..n * n).map(|i| MultiPoly::var(1, 0).scale(&rat(i as i64 + 1))).collect();
        let m = PolyMatrix::new(n, n, entries).unwrap();
        assert!(matches!(m.determinant(), Err(Error::Resource(_))));
    }
}
