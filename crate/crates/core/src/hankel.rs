//! Hankel matrices, linear Hankel pencils and their rectangular
//! reformulation.
//!
//! A pencil `H(x) = H_0 + x_1 H_1 + ... + x_n H_n` is stored by the
//! `2m - 1` generators of each `H_i`. Rank conditions are routed through the
//! `(2m-p-1) x (p+1)` matrix `H~_p` with entries `h_{i+j}`, which has rank
//! `p` exactly when `H` does.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::matrix::{inverse, rank};
use crate::exact::{MultiPoly, PolyMatrix, Rational};

/// An `m x m` Hankel matrix given by its generators `h_1, ..., h_{2m-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HankelGen {
    m: usize,
    gens: Vec<Rational>,
}

impl HankelGen {
    pub fn new(m: usize, gens: Vec<Rational>) -> Result<Self> {
        if m == 0 || gens.len() != 2 * m - 1 {
            return Err(Error::Format(format!(
                "a {m}x{m} Hankel matrix needs {} generators, got {}",
                (2 * m).saturating_sub(1),
                gens.len()
            )));
        }
        Ok(HankelGen { m, gens })
    }

    pub fn zero(m: usize) -> Self {
        HankelGen {
            m,
            gens: vec![Rational::zero(); 2 * m - 1],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn gens(&self) -> &[Rational] {
        &self.gens
    }

    /// Entry `(i, j)`, zero-based.
    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.gens[i + j]
    }

    pub fn to_matrix(&self) -> Vec<Vec<Rational>> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.to_matrix())
    }
}

/// `H_0 + x_1 H_1 + ... + x_n H_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearHankelPencil {
    m: usize,
    n: usize,
    mats: Vec<HankelGen>,
}

/// `H~_p(x)` as a matrix of affine forms in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectHankelSystem {
    pub p: usize,
    pub matrix: PolyMatrix,
}

/// Validates `n + 1` generator rows of length `2m - 1`.
pub fn build_pencil(m: usize, n: usize, gens_list: Vec<Vec<Rational>>) -> Result<LinearHankelPencil> {
    if gens_list.len() != n + 1 {
        return Err(Error::Format(format!(
            "a pencil in {n} variables needs {} matrices, got {}",
            n + 1,
            gens_list.len()
        )));
    }
    let mats = gens_list
        .into_iter()
        .map(|g| HankelGen::new(m, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearHankelPencil { m, n, mats })
}

impl LinearHankelPencil {
    pub fn from_mats(mats: Vec<HankelGen>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::Format("a pencil needs at least H_0".into()));
        };
        let m = first.m();
        if mats.iter().any(|h| h.m() != m) {
            return Err(Error::Format("pencil matrices of different sizes".into()));
        }
        Ok(LinearHankelPencil {
            m,
            n: mats.len() - 1,
            mats,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mats(&self) -> &[HankelGen] {
        &self.mats
    }

    fn check_point(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!(
                "point of length {} for a pencil in {} variables",
                x.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// Generators of `H(x)`.
    pub fn eval(&self, x: &[Rational]) -> Result<HankelGen> {
        self.check_point(x)?;
        let mut gens = self.mats[0].gens.clone();
        for (xi, h) in x.iter().zip(&self.mats[1..]) {
            if xi.is_zero() {
                continue;
            }
            for (g, c) in gens.iter_mut().zip(&h.gens) {
                *g += xi * c;
            }
        }
        Ok(HankelGen { m: self.m, gens })
    }

    /// Exact rank of `H(x)`.
    pub fn rank_at(&self, x: &[Rational]) -> Result<usize> {
        Ok(self.eval(x)?.rank())
    }

    /// The affine form `h_k(x)`, zero-based `k`, in `n` variables.
    pub fn linear_form(&self, k: usize) -> MultiPoly {
        let coeffs: Vec<Rational> = self.mats[1..].iter().map(|h| h.gens[k].clone()).collect();
        MultiPoly::linear(self.mats[0].gens[k].clone(), &coeffs)
    }

    /// `H~_p(x)`: entry `(i, j)` is `h_{i+j}(x)`.
    pub fn rect_system(&self, p: usize) -> Result<RectHankelSystem> {
        if p >= self.m {
            return Err(Error::Contract(format!("rank {p} out of range for m = {}", self.m)));
        }
        let forms: Vec<MultiPoly> = (0..2 * self.m - 1).map(|k| self.linear_form(k)).collect();
        let rows = 2 * self.m - p - 1;
        let entries = (0..rows)
            .flat_map(|i| (0..=p).map(move |j| (i, j)))
            .map(|(i, j)| forms[i + j].clone())
            .collect();
        Ok(RectHankelSystem {
            p,
            matrix: PolyMatrix::new(rows, p + 1, entries)?,
        })
    }

    /// The full `m x m` matrix of affine forms.
    pub fn symbolic_matrix(&self) -> PolyMatrix {
        let forms: Vec<MultiPoly> = (0..2 * self.m - 1).map(|k| self.linear_form(k)).collect();
        let entries = (0..self.m)
            .flat_map(|i| (0..self.m).map(move |j| (i, j)))
            .map(|(i, j)| forms[i + j].clone())
            .collect();
        PolyMatrix::new(self.m, self.m, entries).expect("square shape")
    }

    /// Restriction to `x_1 = α`: `H_0 + α H_1, H_2, ..., H_n`.
    pub fn substitute_x1(&self, alpha: &Rational) -> Result<LinearHankelPencil> {
        if self.n == 0 {
            return Err(Error::Contract("no variable left to substitute".into()));
        }
        let mut h0 = self.mats[0].clone();
        for (g, c) in h0.gens.iter_mut().zip(&self.mats[1].gens) {
            *g += alpha * c;
        }
        let mut mats = vec![h0];
        mats.extend(self.mats[2..].iter().cloned());
        Ok(LinearHankelPencil {
            m: self.m,
            n: self.n - 1,
            mats,
        })
    }

    /// The pencil `x -> H(Mx)`.
    pub fn change_vars(&self, mat: &[Vec<Rational>]) -> Result<LinearHankelPencil> {
        if mat.len() != self.n || mat.iter().any(|row| row.len() != self.n) {
            return Err(Error::Dimension(format!("change of variables must be {0}x{0}", self.n)));
        }
        if self.n > 0 && inverse(mat).is_none() {
            return Err(Error::Genericity("singular change of variables".into()));
        }
        let mut mats = vec![self.mats[0].clone()];
        for j in 0..self.n {
            let mut gens = vec![Rational::zero(); 2 * self.m - 1];
            for i in 0..self.n {
                let c = &mat[i][j];
                if c.is_zero() {
                    continue;
                }
                for (g, h) in gens.iter_mut().zip(&self.mats[i + 1].gens) {
                    *g += c * h;
                }
            }
            mats.push(HankelGen { m: self.m, gens });
        }
        Ok(LinearHankelPencil {
            m: self.m,
            n: self.n,
            mats,
        })
    }
}

/// The banded `m x (m - r)` matrix `Y(y)` over `Q[y_1, ..., y_{r+1}]`:
/// column `j` carries `y` shifted down by `j` rows.
pub fn kernel_pattern(m: usize, r: usize) -> Result<PolyMatrix> {
    if r >= m {
        return Err(Error::Contract(format!("rank {r} out of range for m = {m}")));
    }
    let nv = r + 1;
    let entries = (0..m)
        .flat_map(|i| (0..m - r).map(move |j| (i, j)))
        .map(|(i, j)| {
            if i >= j && i - j <= r {
                MultiPoly::var(nv, i - j)
            } else {
                MultiPoly::zero(nv)
            }
        })
        .collect();
    PolyMatrix::new(m, m - r, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&c| rat(c)).collect()
    }

    fn toy() -> LinearHankelPencil {
        build_pencil(2, 1, vec![ints(&[0, 1, 0]), ints(&[1, 0, 1])]).unwrap()
    }

    #[test]
    fn toy_pencil_values_and_ranks() {
        let p = toy();
        assert_eq!(p.eval(&[rat(0)]).unwrap().gens(), ints(&[0, 1, 0]).as_slice());
        assert_eq!(p.rank_at(&[rat(1)]).unwrap(), 1);
        assert_eq!(p.rank_at(&[rat(2)]).unwrap(), 2);
        assert_eq!(HankelGen::new(2, ints(&[2, 4, 8])).unwrap().rank(), 1);
        let x = MultiPoly::var(1, 0);
        let det = p.symbolic_matrix().determinant().unwrap();
        assert_eq!(det, &x.pow(2) - &MultiPoly::one(1));
    }

    #[test]
    fn wrong_generator_count_is_a_format_error() {
        assert!(matches!(
            build_pencil(2, 0, vec![ints(&[1, 2, 3, 4])]),
            Err(Error::Format(_))
        ));
        let h = HankelGen::new(3, ints(&[1, 2, 3, 4, 5])).unwrap();
        assert_eq!(h.entry(1, 2), &rat(4));
    }

    #[test]
    fn rectangular_shapes() {
        let p = build_pencil(3, 1, vec![ints(&[1, 2, 3, 4, 5]), ints(&[0, 1, 0, 1, 0])]).unwrap();
        let r = p.rect_system(1).unwrap();
        assert_eq!((r.matrix.rows(), r.matrix.cols()), (4, 2));
        for i in 0..4 {
            assert_eq!(r.matrix.get(i, 0), &p.linear_form(i));
            assert_eq!(r.matrix.get(i, 1), &p.linear_form(i + 1));
        }
        let q = build_pencil(4, 0, vec![ints(&[1, 2, 3, 4, 5, 6, 7])]).unwrap();
        assert_eq!(q.rect_system(0).unwrap().matrix.rows(), 7);
        assert!(q.rect_system(4).is_err());
        let t = toy().rect_system(1).unwrap();
        assert_eq!(t.matrix, toy().symbolic_matrix());
    }

    #[test]
    fn kernel_pattern_display() {
        let y = kernel_pattern(3, 1).unwrap();
        let (y1, y2, z) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1), MultiPoly::zero(2));
        assert_eq!(y.entries(), &[y1.clone(), z.clone(), y2.clone(), y1, z, y2]);
        assert_eq!(kernel_pattern(2, 1).unwrap().cols(), 1);
        assert_eq!(kernel_pattern(5, 2).unwrap().cols(), 3);
    }

    #[test]
    fn substitution_and_rotation() {
        let p = toy();
        let s = p.substitute_x1(&rat(1)).unwrap();
        assert_eq!(s.n(), 0);
        assert_eq!(s.mats()[0].gens(), ints(&[1, 1, 1]).as_slice());
        assert_eq!(p.substitute_x1(&rat(0)).unwrap().mats()[0], p.mats()[0]);
        let q = build_pencil(2, 2, vec![ints(&[1, 0, 2]), ints(&[0, 1, 1]), ints(&[3, -1, 0])]).unwrap();
        let m = vec![ints(&[2, 1]), ints(&[1, 1])];
        let qm = q.change_vars(&m).unwrap();
        let x = ints(&[3, -2]);
        let mx = crate::exact::matrix::mat_vec(&m, &x);
        assert_eq!(qm.eval(&x).unwrap(), q.eval(&mx).unwrap());
        assert!(matches!(
            q.change_vars(&[ints(&[1, 2]), ints(&[2, 4])]),
            Err(Error::Genericity(_))
        ));
    }
}
