//! Multilinear Bézout bounds on the number of complex solutions computed at
//! each step of the recursion.
//!
//! Every count is an exact big integer. The closed forms are paired with
//! coefficient-extraction oracles that expand the underlying products of
//! linear forms directly.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn check_args(m: usize, n: usize, p: usize) {
    assert!(m >= 1 && n >= 1 && p < m, "bounds need m >= 1, n >= 1, 0 <= p < m");
}

/// `δ(m, n, p)`: bound on the number of isolated solutions of the Lagrange
/// system at rank `p` in `n` variables.
pub fn delta_bound(m: usize, n: usize, p: usize) -> BigUint {
    check_args(m, n, p);
    let (m, n, p) = (m as i64, n as i64, p as i64);
    let lo = 0.max(n - 2 * m + p + 1);
    let hi = p.min(n - 2 * m + 2 * p + 1);
    (lo..=hi)
        .map(|l| binomial(2 * m - p - 1, n - l) * binomial(n - 1, 2 * m - 2 * p - 2 + l) * binomial(p, l))
        .sum()
}

/// Dense polynomial in three variables, truncated to the box
/// `deg_X <= cap[0]`, `deg_Y <= cap[1]`, `deg_Z <= cap[2]`.
#[derive(Clone)]
struct Truncated3 {
    cap: [usize; 3],
    coeffs: Vec<BigUint>,
}

impl Truncated3 {
    fn one(cap: [usize; 3]) -> Self {
        let mut coeffs = vec![BigUint::zero(); (cap[0] + 1) * (cap[1] + 1) * (cap[2] + 1)];
        coeffs[0] = BigUint::one();
        Truncated3 { cap, coeffs }
    }

    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * (self.cap[1] + 1) + b) * (self.cap[2] + 1) + c
    }

    /// Multiplies by `(s_i + s_j)`, dropping monomials outside the box.
    fn mul_sum(&self, i: usize, j: usize) -> Self {
        let mut out = Truncated3 {
            cap: self.cap,
            coeffs: vec![BigUint::zero(); self.coeffs.len()],
        };
        for a in 0..=self.cap[0] {
            for b in 0..=self.cap[1] {
                for c in 0..=self.cap[2] {
                    let v = &self.coeffs[self.idx(a, b, c)];
                    if v.is_zero() {
                        continue;
                    }
                    for var in [i, j] {
                        let mut e = [a, b, c];
                        e[var] += 1;
                        if e[var] <= self.cap[var] {
                            let k = out.idx(e[0], e[1], e[2]);
                            out.coeffs[k] += v;
                        }
                    }
                }
            }
        }
        out
    }

    fn sum(&self) -> BigUint {
        self.coeffs.iter().sum()
    }
}

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;

/// Sum of the coefficients of
/// `(s_X+s_Y)^a (s_Y+s_Z)^b (s_X+s_Z)^c` modulo the pure powers
/// `s_X^{cap_X+1}, s_Y^{cap_Y+1}, s_Z^{cap_Z+1}`; zero if an exponent is
/// negative.
fn truncated_sum(a: i64, b: i64, c: i64, cap: [usize; 3]) -> BigUint {
    if a < 0 || b < 0 || c < 0 {
        return BigUint::zero();
    }
    let mut poly = Truncated3::one(cap);
    for _ in 0..a {
        poly = poly.mul_sum(X, Y);
    }
    for _ in 0..b {
        poly = poly.mul_sum(Y, Z);
    }
    for _ in 0..c {
        poly = poly.mul_sum(X, Z);
    }
    poly.sum()
}

fn caps(m: usize, n: usize, p: usize) -> [usize; 3] {
    [n, p, 2 * m - p - 2]
}

/// `δ(m, n, p)` by expanding `(s_X+s_Y)^{2m-p-1}(s_Y+s_Z)^{n-1}(s_X+s_Z)^p`.
pub fn delta_oracle(m: usize, n: usize, p: usize) -> BigUint {
    check_args(m, n, p);
    let (mi, ni, pi) = (m as i64, n as i64, p as i64);
    truncated_sum(2 * mi - pi - 1, ni - 1, pi, caps(m, n, p))
}

/// The four contributions to the degree bound of the homotopy curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyParts {
    pub p1: BigUint,
    pub p2: BigUint,
    pub p3: BigUint,
    pub p4: BigUint,
}

impl HomotopyParts {
    pub fn total(&self) -> BigUint {
        &self.p1 + &self.p2 + &self.p3 + &self.p4
    }
}

/// Contributions of the four `s_t`-homogeneous parts of the homotopy product.
pub fn homotopy_parts(m: usize, n: usize, p: usize) -> HomotopyParts {
    check_args(m, n, p);
    let cap = caps(m, n, p);
    let (mi, ni, pi) = (m as i64, n as i64, p as i64);
    let a = 2 * mi - pi - 1;
    HomotopyParts {
        p1: truncated_sum(a, ni - 1, pi, cap),
        p2: BigUint::from(a as u64) * truncated_sum(a - 1, ni - 1, pi, cap),
        p3: BigUint::from((ni - 1) as u64) * truncated_sum(a, ni - 2, pi, cap),
        p4: BigUint::from(pi as u64) * truncated_sum(a, ni - 1, pi - 1, cap),
    }
}

/// Exact bound on the degree of the homotopy curve used for the Lagrange
/// system at rank `p`.
pub fn homotopy_curve_bound(m: usize, n: usize, p: usize) -> BigUint {
    homotopy_parts(m, n, p).total()
}

/// Four-variable expansion of the full homotopy product modulo
/// `s_X^{n+1}, s_Y^{p+1}, s_Z^{2m-p-1}, s_t^2`, without splitting by parts.
pub fn homotopy_oracle(m: usize, n: usize, p: usize) -> BigUint {
    check_args(m, n, p);
    let [cx, cy, cz] = caps(m, n, p);
    let dims = [cx + 1, cy + 1, cz + 1, 2];
    let idx = |e: [usize; 4]| ((e[0] * dims[1] + e[1]) * dims[2] + e[2]) * dims[3] + e[3];
    let mut poly = vec![BigUint::zero(); dims.iter().product()];
    poly[0] = BigUint::one();
    let factors = [(X, Y, 2 * m - p - 1), (Y, Z, n - 1), (X, Z, p)];
    for &(i, j, times) in &factors {
        for _ in 0..times {
            let mut next = vec![BigUint::zero(); poly.len()];
            for a in 0..dims[0] {
                for b in 0..dims[1] {
                    for c in 0..dims[2] {
                        for d in 0..dims[3] {
                            let v = &poly[idx([a, b, c, d])];
                            if v.is_zero() {
                                continue;
                            }
                            for var in [i, j, 3] {
                                let mut e = [a, b, c, d];
                                e[var] += 1;
                                if e[var] < dims[var] {
                                    next[idx(e)] += v;
                                }
                            }
                        }
                    }
                }
            }
            poly = next;
        }
    }
    poly.iter().sum()
}

/// Per-level bounds and the total number of complex solutions the
/// recursion can produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    /// `(k, p, δ(m, k, p))` for `2m - 2r <= k <= n`, `0 <= p <= r`.
    pub per_level: Vec<(usize, usize, BigUint)>,
    pub base_degree: BigUint,
    pub total: BigUint,
}

impl BoundsReport {
    /// `Σ_p δ(m, k, p)` for one level.
    pub fn level_sum(&self, k: usize) -> BigUint {
        self.per_level.iter().filter(|(kk, _, _)| *kk == k).map(|(_, _, d)| d).sum()
    }

    /// JSON with plain integers, or decimal strings past `u64`.
    pub fn to_json(&self) -> Value {
        let num = |d: &BigUint| d.to_u64().map_or_else(|| json!(d.to_string()), |v| json!(v));
        json!({
            "m": self.m,
            "n": self.n,
            "r": self.r,
            "perLevel": self
                .per_level
                .iter()
                .map(|(k, p, d)| json!({"k": k, "p": p, "delta": num(d)}))
                .collect::<Vec<_>>(),
            "baseDegree": num(&self.base_degree),
            "total": num(&self.total),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("m = {}, n = {}, r = {}\n", self.m, self.n, self.r);
        out.push_str(&format!("{:>4} {:>4} {:>12}\n", "k", "p", "delta"));
        for (k, p, d) in &self.per_level {
            out.push_str(&format!("{k:>4} {p:>4} {d:>12}\n"));
        }
        out.push_str(&format!("base  {:>15}\n", self.base_degree));
        out.push_str(&format!("total {:>15}\n", self.total));
        out
    }
}

/// `C(2m-r-1, r)`, the degree of the incidence variety when the rank
/// locus is finite.
pub fn base_degree(m: usize, r: usize) -> BigUint {
    binomial(2 * m as i64 - r as i64 - 1, r as i64)
}

pub fn total_output_bound(m: usize, n: usize, r: usize) -> BoundsReport {
    assert!(r < m && n >= 1, "bounds need 0 <= r < m and n >= 1");
    let base = base_degree(m, r);
    let mut per_level = Vec::new();
    for k in (2 * m - 2 * r).max(1)..=n {
        for p in 0..=r {
            per_level.push((k, p, delta_bound(m, k, p)));
        }
    }
    let total = &base + per_level.iter().map(|(_, _, d)| d).sum::<BigUint>();
    BoundsReport {
        m,
        n,
        r,
        per_level,
        base_degree: base,
        total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: u64) -> BigUint {
        BigUint::from(k)
    }

    #[test]
    fn spot_values() {
        assert_eq!(delta_bound(3, 2, 2), u(9));
        assert_eq!(delta_bound(4, 3, 3), u(52));
        assert_eq!(delta_bound(3, 2, 0), u(0));
        assert_eq!(delta_bound(3, 3, 2), u(16));
        assert_eq!(delta_oracle(3, 2, 2), u(9));
        assert_eq!(delta_oracle(2, 1, 1), delta_bound(2, 1, 1));
        assert_eq!(binomial(5, 2), u(10));
        assert_eq!(binomial(2, 3), u(0));
        assert_eq!(binomial(-1, 0), u(0));
    }

    #[test]
    fn report_for_small_case() {
        let rep = total_output_bound(3, 2, 2);
        assert_eq!(rep.base_degree, u(3));
        assert_eq!(rep.level_sum(2), u(9));
        assert_eq!(rep.total, u(12));
        let base_only = total_output_bound(4, 1, 3);
        assert!(base_only.per_level.is_empty());
        assert_eq!(base_only.total, u(4));
        let t = total_output_bound(3, 3, 2);
        let extra = delta_bound(3, 3, 0) + delta_bound(3, 3, 1) + delta_bound(3, 3, 2);
        assert_eq!(t.total, u(3) + u(9) + extra);
        assert!(t.to_text().contains("total"));
        assert_eq!(rep.to_json()["total"], 12);
    }

    #[test]
    fn homotopy_split_matches_full_expansion() {
        for m in 1..=4 {
            for p in 0..m {
                for n in 1..=5 {
                    let parts = homotopy_parts(m, n, p);
                    assert_eq!(parts.p1, delta_bound(m, n, p));
                    assert_eq!(parts.total(), homotopy_oracle(m, n, p), "({m},{n},{p})");
                }
            }
        }
        assert!(homotopy_curve_bound(3, 2, 2) >= delta_bound(3, 2, 2));
    }

    fn b(n: i64, k: i64) -> BigUint {
        binomial(n, k)
    }

    /// The three homogeneous cases of the second homotopy part, summed
    /// over their index ranges.
    fn split_p2(m: i64, n: i64, p: i64) -> (BigUint, BigUint, BigUint) {
        let a: BigUint = (0.max(n - 2 * m + p + 2)..=p.min(n - 2 * m + 2 * p + 2))
            .map(|l| b(2 * m - p - 2, n - l) * b(n - 1, 2 * m - 2 * p - 3 + l) * b(p, l))
            .sum();
        let bb: BigUint = (0.max(n - 2 * m + p + 2)..=p.min(n - 2 * m + 2 * p + 1))
            .map(|l| b(2 * m - p - 2, n - l) * b(n - 1, 2 * m - 2 * p - 2 + l) * b(p, l))
            .sum();
        let c: BigUint = (0.max(n - 2 * m + p + 1)..=p.min(n - 2 * m + 2 * p + 1))
            .map(|l| b(2 * m - p - 2, n - 1 - l) * b(n - 1, 2 * m - 2 * p - 2 + l) * b(p, l))
            .sum();
        (a, bb, c)
    }

    #[test]
    fn second_part_splits_into_three_cases() {
        for m in 2..=6usize {
            for p in 1..m {
                for n in 1..=10usize {
                    let (a, bb, c) = split_p2(m as i64, n as i64, p as i64);
                    let parts = homotopy_parts(m, n, p);
                    assert_eq!(parts.p2, u((2 * m - p - 1) as u64) * (&a + &bb + &c), "({m},{n},{p})");
                    let d = delta_bound(m, n, p);
                    if !d.is_zero() {
                        assert!(a <= u(n as u64) * &d, "({m},{n},{p})");
                        assert!(bb <= d && c <= d, "({m},{n},{p})");
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_expansion_on_the_full_grid() {
        let mut cases = 0;
        for m in 2..=6 {
            for p in 1..m {
                for n in 1..=10 {
                    assert_eq!(delta_bound(m, n, p), delta_oracle(m, n, p), "({m},{n},{p})");
                    cases += 1;
                }
            }
        }
        assert_eq!(cases, 150);
    }
}
