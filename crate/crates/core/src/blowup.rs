//! Discrete invariants of the blow-up `H = Bl_{L_0 ⊔ L_1} G` of the
//! Grassmannian of lines along two disjoint conics `L_i ≅ P^1`.
//!
//! Only the Picard lattice `Z·h ⊕ Z·E_0 ⊕ Z·E_1`, the restriction to the
//! exceptional divisors `E_i ≅ P^1 × P^2`, and line-bundle cohomology on
//! `P^1`, `P^2` and `P^1 × P^2` are modelled.
//!
//! The restriction rule `h|_{E_i} = O(2, 0)` is not taken on faith: the
//! pullback of `O_G(1)` to `E_i` is pulled back from the center, where its
//! degree is `deg ω_G|_L / (−4)` because `ω_G = O_G(−4)`; the minors
//! computation in [`crate::grassmann`] gives `deg ω_G|_L = −8`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::{line_from_phi, splitting_type_restrictions, Orientation};
use crate::linalg::Matrix;
use crate::scalar::Field;

/// `ω_G = O_G(OMEGA_G_TWIST)` for `G = Gr(1,3)`.
pub const OMEGA_G_TWIST: i64 = -4;
/// Codimension of each center line in the 4-dimensional `G`.
pub const CENTER_CODIM: i64 = 3;
pub const DIM_H: i64 = 4;

/// `h·p^*O_G(1) + e0·E_0 + e1·E_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PicClass {
    pub h: i64,
    pub e0: i64,
    pub e1: i64,
}

impl PicClass {
    pub const fn new(h: i64, e0: i64, e1: i64) -> PicClass {
        PicClass { h, e0, e1 }
    }

    pub fn exceptional(i: usize) -> PicClass {
        if i == 0 {
            PicClass::new(0, 1, 0)
        } else {
            PicClass::new(0, 0, 1)
        }
    }

    pub fn hyperplane() -> PicClass {
        PicClass::new(1, 0, 0)
    }
}

impl Add for PicClass {
    type Output = PicClass;
    fn add(self, o: PicClass) -> PicClass {
        PicClass::new(self.h + o.h, self.e0 + o.e0, self.e1 + o.e1)
    }
}

impl Sub for PicClass {
    type Output = PicClass;
    fn sub(self, o: PicClass) -> PicClass {
        self + (-o)
    }
}

impl Neg for PicClass {
    type Output = PicClass;
    fn neg(self) -> PicClass {
        PicClass::new(-self.h, -self.e0, -self.e1)
    }
}

impl Mul<PicClass> for i64 {
    type Output = PicClass;
    fn mul(self, c: PicClass) -> PicClass {
        PicClass::new(self * c.h, self * c.e0, self * c.e1)
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.h, self.e0, self.e1)
    }
}

/// `O_{E_i}(m, n) = O_{P^1}(m) ⊠ O_{P^2}(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EPair {
    pub m: i64,
    pub n: i64,
}

impl EPair {
    pub const fn new(m: i64, n: i64) -> EPair {
        EPair { m, n }
    }
}

impl Add for EPair {
    type Output = EPair;
    fn add(self, o: EPair) -> EPair {
        EPair::new(self.m + o.m, self.n + o.n)
    }
}

impl fmt::Display for EPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

/// `h^k` for `k = 0..=dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohTable {
    pub dims: Vec<u64>,
}

impl CohTable {
    pub fn h(&self, k: usize) -> u64 {
        self.dims.get(k).copied().unwrap_or(0)
    }

    pub fn euler(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Cohomology of a direct sum of `mult` copies.
    pub fn scale(&self, mult: u64) -> CohTable {
        CohTable { dims: self.dims.iter().map(|d| d * mult).collect() }
    }

    /// Künneth product.
    pub fn kunneth(&self, other: &CohTable) -> CohTable {
        let mut dims = vec![0; self.dims.len() + other.dims.len() - 1];
        for (i, a) in self.dims.iter().enumerate() {
            for (j, b) in other.dims.iter().enumerate() {
                dims[i + j] += a * b;
            }
        }
        CohTable { dims }
    }
}

impl fmt::Display for CohTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn binom2(n: i64) -> u64 {
    // C(n, 2) for n ≥ 0
    if n < 2 {
        0
    } else {
        (n * (n - 1) / 2) as u64
    }
}

pub fn coh_p1(m: i64) -> CohTable {
    let h0 = if m >= 0 { (m + 1) as u64 } else { 0 };
    let h1 = if m <= -2 { (-m - 1) as u64 } else { 0 };
    CohTable { dims: vec![h0, h1] }
}

pub fn coh_p2(n: i64) -> CohTable {
    let h0 = if n >= 0 { binom2(n + 2) } else { 0 };
    let h2 = if n <= -3 { binom2(-n - 1) } else { 0 };
    CohTable { dims: vec![h0, 0, h2] }
}

pub fn coh_p1xp2(m: i64, n: i64) -> CohTable {
    coh_p1(m).kunneth(&coh_p2(n))
}

pub fn coh_p1xp1(m: i64, n: i64) -> CohTable {
    coh_p1(m).kunneth(&coh_p1(n))
}

/// Degree of `O_G(1)` on a center line, from `deg ω_G|_L` and `ω_G = O_G(−4)`.
pub fn center_degree() -> i64 {
    let id = Matrix::identity(&Field::Rational, 4);
    let line = line_from_phi(&id, Orientation::ContractFirst).expect("identity is invertible");
    let report = splitting_type_restrictions(&line).expect("identity line");
    report.omega_degree / OMEGA_G_TWIST
}

/// `deg ω_G|_L` for a center line.
pub fn omega_g_on_center() -> i64 {
    OMEGA_G_TWIST * center_degree()
}

/// Restriction `Pic(H) → Pic(E_i)`: `h ↦ (deg, 0)`, `E_i ↦ (2, −1)`
/// (`O_E(E) = O_E(−1)` on the fibers, twisted by the normal bundle degree
/// `6/3 = 2` on the base), `E_{1−i} ↦ 0`.
pub fn restrict_to_e(c: PicClass, i: usize) -> Result<EPair> {
    if i > 1 {
        return Err(Error::OutOfRange(format!("exceptional divisor index {i}")));
    }
    let d = center_degree();
    let own = if i == 0 { c.e0 } else { c.e1 };
    Ok(EPair::new(d * c.h + 2 * own, -own))
}

/// `ω_H = p^*ω_G ⊗ O((codim − 1)(E_0 + E_1))`.
pub fn canonical_class() -> PicClass {
    PicClass::new(OMEGA_G_TWIST, CENTER_CODIM - 1, CENTER_CODIM - 1)
}

/// `ω_{E_i} = (ω_H ⊗ O(E_i))|_{E_i}` by adjunction.
pub fn omega_e(i: usize) -> Result<EPair> {
    restrict_to_e(canonical_class() + PicClass::exceptional(i), i)
}

pub fn serre_dual_degree(k: i64, dim: i64) -> Result<i64> {
    if dim < 0 || k < 0 || k > dim {
        return Err(Error::OutOfRange(format!("degree {k} outside 0..={dim}")));
    }
    Ok(dim - k)
}

/// Length of the collection produced by the blow-up formula:
/// the base plus `codim − 1` copies of each center collection.
pub fn sod_length(base_len: usize, center_collection_lens: &[usize], codim: usize) -> Result<usize> {
    if codim < 2 {
        return Err(Error::OutOfRange(format!("blow-up center of codimension {codim} < 2")));
    }
    Ok(base_len + (codim - 1) * center_collection_lens.iter().sum::<usize>())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HkrTriple {
    pub h0_wedge2_t: u64,
    pub h1_t: u64,
    pub h2_o: u64,
    pub note: String,
}

impl HkrTriple {
    pub fn as_tuple(&self) -> (u64, u64, u64) {
        (self.h0_wedge2_t, self.h1_t, self.h2_o)
    }
}

/// `(h^0(∧²T), h^1(T), h^2(O))` for `P^1 × P^1`, with `∧²T = O(2,2)` and
/// `T = O(2,0) ⊕ O(0,2)`.
pub fn hkr_quadric() -> HkrTriple {
    let wedge = coh_p1xp1(2, 2);
    let tangent = coh_p1xp1(2, 0).dims.iter().zip(coh_p1xp1(0, 2).dims.iter()).map(|(a, b)| a + b).collect::<Vec<_>>();
    let structure = coh_p1xp1(0, 0);
    HkrTriple {
        h0_wedge2_t: wedge.h(0),
        h1_t: tangent[1],
        h2_o: structure.h(2),
        note: "the noncommutative deformation space is elsewhere quoted as 10-dimensional; \
               Kuenneth gives h^0(O(2,2)) = 9"
            .into(),
    }
}
