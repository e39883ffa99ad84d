//! Independent oracles used by the integration and acceptance tests.
//!
//! Nothing here calls into the library: determinants are cofactor
//! expansions, ranks come from a separate elimination routine, cohomology is
//! a monomial count, and pure-tensor searches are exhaustive over `F_{p^2}`.

#![allow(dead_code, clippy::needless_range_loop, clippy::wrong_self_convention)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Minimal field interface for the oracle elimination.
pub trait Elem: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_e(&self, o: &Self) -> Self;
    fn sub_e(&self, o: &Self) -> Self;
    fn mul_e(&self, o: &Self) -> Self;
    fn inv_e(&self) -> Self;
}

impl Elem for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_e(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_e(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_e(&self, o: &Self) -> Self {
        self * o
    }
    fn inv_e(&self) -> Self {
        self.recip()
    }
}

/// An element of `Z/p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zp {
    pub v: u64,
    pub p: u64,
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

impl Zp {
    pub fn new(v: i64, p: u64) -> Zp {
        Zp { v: v.rem_euclid(p as i64) as u64, p }
    }
}

impl Elem for Zp {
    fn zero_like(&self) -> Self {
        Zp { v: 0, p: self.p }
    }
    fn is_zero_elem(&self) -> bool {
        self.v == 0
    }
    fn add_e(&self, o: &Self) -> Self {
        Zp { v: (self.v + o.v) % self.p, p: self.p }
    }
    fn sub_e(&self, o: &Self) -> Self {
        Zp { v: (self.v + self.p - o.v) % self.p, p: self.p }
    }
    fn mul_e(&self, o: &Self) -> Self {
        Zp { v: (self.v as u128 * o.v as u128 % self.p as u128) as u64, p: self.p }
    }
    fn inv_e(&self) -> Self {
        Zp { v: pow_mod(self.v, self.p - 2, self.p), p: self.p }
    }
}

/// Row-echelon rank by textbook elimination.
pub fn rank<T: Elem>(m: &[Vec<T>]) -> usize {
    let mut a: Vec<Vec<T>> = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero_elem()) else { continue };
        a.swap(r, piv);
        let inv = a[r][c].inv_e();
        for i in r + 1..rows {
            if a[i][c].is_zero_elem() {
                continue;
            }
            let f = a[i][c].mul_e(&inv);
            for k in c..cols {
                let t = f.mul_e(&a[r][k]);
                a[i][k] = a[i][k].sub_e(&t);
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Inverse by Gauss–Jordan on `[A | I]`.
pub fn inverse<T: Elem>(m: &[Vec<T>], one: &T) -> Option<Vec<Vec<T>>> {
    let n = m.len();
    let zero = one.zero_like();
    let mut a: Vec<Vec<T>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !a[i][c].is_zero_elem())?;
        a.swap(c, piv);
        let inv = a[c][c].inv_e();
        for k in 0..2 * n {
            a[c][k] = a[c][k].mul_e(&inv);
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero_elem() {
                let f = a[i][c].clone();
                for k in 0..2 * n {
                    let t = f.mul_e(&a[c][k]);
                    a[i][k] = a[i][k].sub_e(&t);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = Q::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Q>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][j] * det_cofactor(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// The type-A tensor, flat index `8a + 4b + 2c + d`.
pub fn type_a_w(a: &Q, b: &Q, c: &Q) -> Vec<Q> {
    let mut w = vec![Q::zero(); 16];
    let mut put = |i: [usize; 4], v: &Q| w[8 * i[0] + 4 * i[1] + 2 * i[2] + i[3]] = v.clone();
    put([1, 1, 0, 0], a);
    put([1, 0, 1, 0], b);
    put([0, 1, 1, 0], a);
    put([0, 0, 0, 0], c);
    put([0, 0, 1, 1], a);
    put([0, 1, 0, 1], b);
    put([1, 0, 0, 1], a);
    put([1, 1, 1, 1], c);
    w
}

/// The linear quadric `x⊗x⊗y⊗y − y⊗x⊗x⊗y − x⊗y⊗y⊗x + y⊗y⊗x⊗x`.
pub fn linear_w() -> Vec<Q> {
    let mut w = vec![Q::zero(); 16];
    w[3] = q(1, 1);
    w[9] = q(-1, 1);
    w[6] = q(-1, 1);
    w[12] = q(1, 1);
    w
}

/// `⟨−, w⟩` as a 4×4 matrix, row `2c + d`, column `2a + b`.
pub fn pairing_from_w(w: &[Q]) -> Vec<Vec<Q>> {
    let mut m = vec![vec![Q::zero(); 4]; 4];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    m[2 * c + d][2 * a + b] = w[8 * a + 4 * b + 2 * c + d].clone();
                }
            }
        }
    }
    m
}

/// Number of monomials of degree `deg` in `vars` variables, by enumeration.
pub fn monomials(vars: usize, deg: i64) -> u64 {
    if deg < 0 {
        return 0;
    }
    if vars == 1 {
        return 1;
    }
    (0..=deg).map(|first| monomials(vars - 1, deg - first)).sum()
}

/// `h^k(P^n, O(d))`: sections are monomials; top cohomology is dual to the
/// Laurent monomials with all exponents ≤ −1.
pub fn coh_pn(n: usize, d: i64) -> Vec<u64> {
    let mut out = vec![0; n + 1];
    out[0] = monomials(n + 1, d);
    if n > 0 {
        out[n] = monomials(n + 1, -d - (n as i64) - 1);
    }
    out
}

pub fn kunneth(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn euler(v: &[u64]) -> i64 {
    v.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

/// Coefficients of `1/((1−t)^2 (1−t^2))` by series multiplication.
pub fn hilbert_oracle(n: usize) -> Vec<u64> {
    let geometric = |step: usize| -> Vec<u64> { (0..=n).map(|i| u64::from(i % step == 0)).collect() };
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        (0..=n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
    };
    let g1 = geometric(1);
    mul(&mul(&g1, &g1), &geometric(2))
}

/// `dim Hom(R, K)` for the line `p ↦ K(p) = φ^{-1}(p ⊗ U_1)` (or
/// `φ^{-1}(U_0 ⊗ p)` when `first` is false): linear forms `Σ x[u][λ] p_u λ`
/// that vanish on `K(p)` for every `p`, tested at enough points to force a
/// quadratic to vanish.
pub fn hom_r_k_oracle<T: Elem>(phi: &[Vec<T>], one: &T, first: bool) -> usize {
    let inv = inverse(phi, one).expect("invertible");
    let zero = one.zero_like();
    let from_int = |n: i64| {
        let mut acc = zero.clone();
        for _ in 0..n {
            acc = acc.add_e(one);
        }
        acc
    };
    let points: Vec<[T; 2]> =
        vec![[one.clone(), zero.clone()], [zero.clone(), one.clone()], [one.clone(), one.clone()], [one.clone(), from_int(2)], [one.clone(), from_int(3)]];
    let mut rows = Vec::new();
    for p in &points {
        for j in 0..2 {
            // v = φ^{-1}(p ⊗ e_j) or φ^{-1}(e_j ⊗ p)
            let mut target = vec![zero.clone(); 4];
            for u in 0..2 {
                let idx = if first { 2 * u + j } else { 2 * j + u };
                target[idx] = p[u].clone();
            }
            let v: Vec<T> = (0..4)
                .map(|r| (0..4).fold(zero.clone(), |acc, c| acc.add_e(&inv[r][c].mul_e(&target[c]))))
                .collect();
            // unknown x[u][λ] at column 4u + λ
            let row: Vec<T> = (0..8).map(|col| p[col / 4].mul_e(&v[col % 4])).collect();
            rows.push(row);
        }
    }
    8 - rank(&rows)
}

/// `F_{p^2} = F_p[θ]/(θ² − nr)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp2 {
    pub a: u64,
    pub b: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct Fp2Ctx {
    pub p: u64,
    pub nr: u64,
}

impl Fp2Ctx {
    pub fn new(p: u64) -> Fp2Ctx {
        let nr = (2..p).find(|&n| pow_mod(n, (p - 1) / 2, p) == p - 1).expect("odd prime");
        Fp2Ctx { p, nr }
    }
    pub fn add(&self, x: Fp2, y: Fp2) -> Fp2 {
        Fp2 { a: (x.a + y.a) % self.p, b: (x.b + y.b) % self.p }
    }
    pub fn mul(&self, x: Fp2, y: Fp2) -> Fp2 {
        let p = self.p;
        Fp2 { a: (x.a * y.a + self.nr * (x.b * y.b % p)) % p, b: (x.a * y.b + x.b * y.a) % p }
    }
    pub fn from_base(&self, v: u64) -> Fp2 {
        Fp2 { a: v % self.p, b: 0 }
    }
    /// Representatives of `P^1(F_{p^2})`.
    pub fn p1_points(&self) -> Vec<[Fp2; 2]> {
        let mut pts = vec![[Fp2 { a: 0, b: 0 }, Fp2 { a: 1, b: 0 }]];
        for a in 0..self.p {
            for b in 0..self.p {
                pts.push([Fp2 { a: 1, b: 0 }, Fp2 { a, b }]);
            }
        }
        pts
    }
}

/// Exhaustive search for pure `φ ⊗ χ` in adjacent slots `j, j+1` with
/// `⟨φ⊗χ, w⟩ = 0`, over `F_{p^2}`. `w` is flat with index `8a+4b+2c+d`.
pub fn geometric_by_enumeration(w: &[u64], p: u64) -> bool {
    let ctx = Fp2Ctx::new(p);
    let pts = ctx.p1_points();
    for j in 0..4 {
        let (s0, s1) = (j, (j + 1) % 4);
        let rest: Vec<usize> = (0..4).filter(|&k| k != s0 && k != s1).collect();
        let entry = |x: usize, y: usize, c: usize, d: usize| {
            let mut idx = [0usize; 4];
            idx[s0] = x;
            idx[s1] = y;
            idx[rest[0]] = c;
            idx[rest[1]] = d;
            ctx.from_base(w[8 * idx[0] + 4 * idx[1] + 2 * idx[2] + idx[3]])
        };
        for phi in &pts {
            // partial[y][c][d] = Σ_x w φ_x
            let mut partial = [[[Fp2 { a: 0, b: 0 }; 2]; 2]; 2];
            for (y, py) in partial.iter_mut().enumerate() {
                for (c, pc) in py.iter_mut().enumerate() {
                    for (d, v) in pc.iter_mut().enumerate() {
                        *v = ctx.add(ctx.mul(entry(0, y, c, d), phi[0]), ctx.mul(entry(1, y, c, d), phi[1]));
                    }
                }
            }
            for chi in &pts {
                let all_zero = (0..2).all(|c| {
                    (0..2).all(|d| ctx.add(ctx.mul(partial[0][c][d], chi[0]), ctx.mul(partial[1][c][d], chi[1])) == Fp2 { a: 0, b: 0 })
                });
                if all_zero {
                    return false;
                }
            }
        }
    }
    true
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}
