//! Incidence, fiber and Lagrange systems, and the seeded parameter draws
//! that feed them.
//!
//! Variables are laid out globally as `x_1..x_n, y_1..y_{p+1}, z_1..z_{2m-p}`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::matrix::inverse;
use crate::exact::{jacobian, MultiPoly, PolyMatrix, Rational};
use crate::hankel::LinearHankelPencil;

/// Bound on the absolute value of drawn integers.
pub const DRAW_BOUND: i64 = 97;

/// `(H~_p(x) y, u'y - 1)` in `n + p + 1` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceSystem {
    pub polys: Vec<MultiPoly>,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub u: Vec<Rational>,
    /// `H~_p` over `Q[x_1..x_n]`.
    pub rect: PolyMatrix,
}

impl IncidenceSystem {
    pub fn nvars(&self) -> usize {
        self.n + self.p + 1
    }
}

/// `(H~ y, u'y - 1, z' jac_1 f, v'z - 1)`, square in `n + 2m + 1` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangeSystem {
    pub polys: Vec<MultiPoly>,
    pub v: Vec<Rational>,
    pub parent: IncidenceSystem,
}

impl LagrangeSystem {
    pub fn nvars(&self) -> usize {
        self.parent.n + 2 * self.parent.m + 1
    }
}

fn embed_matrix(mat: &PolyMatrix, nvars: usize) -> PolyMatrix {
    let positions: Vec<usize> = (0..mat.nvars()).collect();
    let entries = mat.entries().iter().map(|e| e.embed(nvars, &positions)).collect();
    PolyMatrix::new(mat.rows(), mat.cols(), entries).expect("shape preserved")
}

pub fn incidence_system(pencil: &LinearHankelPencil, u: &[Rational], p: usize) -> Result<IncidenceSystem> {
    let (m, n) = (pencil.m(), pencil.n());
    if u.len() != p + 1 {
        return Err(Error::Dimension(format!("u has length {}, expected {}", u.len(), p + 1)));
    }
    if u.iter().all(Zero::is_zero) {
        return Err(Error::Genericity("u must be nonzero".into()));
    }
    let rect = pencil.rect_system(p)?.matrix;
    let nv = n + p + 1;
    let big = embed_matrix(&rect, nv);
    let y: Vec<MultiPoly> = (0..=p).map(|j| MultiPoly::var(nv, n + j)).collect();
    let mut polys = big.mul_vec(&y)?;
    let mut norm = MultiPoly::constant(nv, -Rational::from_integer(1.into()));
    for (j, c) in u.iter().enumerate() {
        norm = &norm + &y[j].scale(c);
    }
    polys.push(norm);
    Ok(IncidenceSystem {
        polys,
        m,
        n,
        p,
        u: u.to_vec(),
        rect,
    })
}

/// The incidence system restricted to `x_1 = α`.
pub fn fiber_system(f: &IncidenceSystem, alpha: &Rational) -> Result<Vec<MultiPoly>> {
    if f.n == 0 {
        return Err(Error::Contract("fiber needs at least one x variable".into()));
    }
    let mut polys = f.polys.clone();
    polys.push(&MultiPoly::var(f.nvars(), 0) - &MultiPoly::constant(f.nvars(), alpha.clone()));
    Ok(polys)
}

pub fn lagrange_system(f: &IncidenceSystem, v: &[Rational]) -> Result<LagrangeSystem> {
    let rows = 2 * f.m - f.p;
    if v.len() != rows {
        return Err(Error::Dimension(format!("v has length {}, expected {rows}", v.len())));
    }
    if v.iter().all(Zero::is_zero) {
        return Err(Error::Genericity("v must be nonzero".into()));
    }
    let nv = f.n + 2 * f.m + 1;
    let inner = f.nvars();
    let positions: Vec<usize> = (0..inner).collect();
    let fs: Vec<MultiPoly> = f.polys.iter().map(|g| g.embed(nv, &positions)).collect();
    let jac = jacobian(&fs, &(1..inner).collect::<Vec<_>>())?;
    let z: Vec<MultiPoly> = (0..rows).map(|i| MultiPoly::var(nv, inner + i)).collect();
    let mut polys = fs.clone();
    for c in 0..jac.cols() {
        let mut acc = MultiPoly::zero(nv);
        for (i, zi) in z.iter().enumerate() {
            let e = jac.get(i, c);
            if !e.is_zero() {
                acc = &acc + &(zi * e);
            }
        }
        polys.push(acc);
    }
    let mut norm = MultiPoly::constant(nv, -Rational::from_integer(1.into()));
    for (i, c) in v.iter().enumerate() {
        norm = &norm + &z[i].scale(c);
    }
    polys.push(norm);
    Ok(LagrangeSystem {
        polys,
        v: v.to_vec(),
        parent: f.clone(),
    })
}

/// Randomness used at one recursion level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterDraw {
    pub seed: u64,
    pub depth: usize,
    pub mat: Vec<Vec<Rational>>,
    pub alpha: Rational,
    /// `u[p]` has length `p + 1`.
    pub u: Vec<Vec<Rational>>,
    /// `v[p]` has length `2m - p`.
    pub v: Vec<Vec<Rational>>,
}

/// Deterministic 64-bit mixing of the draw coordinates.
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut h: u64 = 0x243f_6a88_85a3_08d3;
    for &p in parts {
        h ^= p.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
        h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 31;
    }
    h
}

pub(crate) fn rng_for(parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(parts))
}

pub(crate) fn draw_int(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from_integer(rng.gen_range(-DRAW_BOUND..=DRAW_BOUND).into())
}

fn draw_nonzero_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..len).map(|_| draw_int(rng)).collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

pub fn draw_parameters(seed: u64, depth: usize, m: usize, n: usize, r: usize) -> Result<ParameterDraw> {
    if n == 0 {
        return Err(Error::Contract("parameters are drawn for n >= 1".into()));
    }
    let mut rng = rng_for(&[seed, depth as u64, m as u64, n as u64, r as u64]);
    let mut mat = None;
    for _ in 0..32 {
        let cand: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| draw_int(&mut rng)).collect()).collect();
        if inverse(&cand).is_some() {
            mat = Some(cand);
            break;
        }
    }
    let Some(mat) = mat else {
        return Err(Error::Randomness("no invertible change of variables in 32 draws".into()));
    };
    let alpha = draw_int(&mut rng);
    let u = (0..=r).map(|p| draw_nonzero_vec(&mut rng, p + 1)).collect();
    let v = (0..=r).map(|p| draw_nonzero_vec(&mut rng, 2 * m - p)).collect();
    Ok(ParameterDraw {
        seed,
        depth,
        mat,
        alpha,
        u,
        v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::hankel::build_pencil;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&c| rat(c)).collect()
    }

    fn toy() -> LinearHankelPencil {
        build_pencil(2, 1, vec![ints(&[0, 1, 0]), ints(&[1, 0, 1])]).unwrap()
    }

    #[test]
    fn toy_incidence_expansion() {
        let f = incidence_system(&toy(), &ints(&[0, 1]), 1).unwrap();
        let (x, y1, y2) = (MultiPoly::var(3, 0), MultiPoly::var(3, 1), MultiPoly::var(3, 2));
        assert_eq!(f.polys[0], &(&x * &y1) + &y2);
        assert_eq!(f.polys[1], &y1 + &(&x * &y2));
        assert_eq!(f.polys[2], &y2 - &MultiPoly::one(3));
        assert!(matches!(incidence_system(&toy(), &ints(&[0, 0]), 1), Err(Error::Genericity(_))));
    }

    #[test]
    fn shapes() {
        let p = build_pencil(3, 2, vec![ints(&[1, 2, 3, 4, 5]), ints(&[0, 1, 0, 1, 0]), ints(&[2, 0, 1, 0, 2])]).unwrap();
        for q in 0..3 {
            let f = incidence_system(&p, &vec![rat(1); q + 1], q).unwrap();
            assert_eq!(f.polys.len(), 6 - q);
            assert_eq!(f.nvars(), 2 + q + 1);
            assert_eq!(fiber_system(&f, &rat(0)).unwrap().len(), 7 - q);
            let l = lagrange_system(&f, &vec![rat(1); 6 - q]).unwrap();
            assert_eq!(l.polys.len(), l.nvars());
            assert_eq!(l.nvars(), 2 + 6 + 1);
        }
        let f0 = incidence_system(&p, &ints(&[3]), 0).unwrap();
        for g in &f0.polys[..5] {
            assert!(g.total_degree().unwrap() <= 2);
        }
    }

    #[test]
    fn toy_lagrange_has_only_y_derivatives() {
        let f = incidence_system(&toy(), &ints(&[2, 3]), 1).unwrap();
        let l = lagrange_system(&f, &ints(&[1, 1, 1])).unwrap();
        // f (3) + z' jac_1 f (p + 1 = 2) + v'z - 1.
        assert_eq!(l.polys.len(), 6);
        for g in &l.polys[3..5] {
            assert_eq!(g.degree_in(&[3, 4, 5]), Some(1));
        }
    }

    #[test]
    fn draws_are_deterministic_and_valid() {
        let a = draw_parameters(7, 0, 3, 3, 2).unwrap();
        assert_eq!(a, draw_parameters(7, 0, 3, 3, 2).unwrap());
        assert_ne!(a, draw_parameters(8, 0, 3, 3, 2).unwrap());
        assert!(inverse(&a.mat).is_some());
        for p in 0..=2 {
            assert_eq!(a.u[p].len(), p + 1);
            assert_eq!(a.v[p].len(), 6 - p);
        }
    }
}
