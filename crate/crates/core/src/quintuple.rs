//! Quintuples `(V_0, V_1, V_2, V_3, k·w)` and the data they determine:
//! the geometricity test, the relation spaces `R_0`, `R_1`, the line
//! `W = (R_0 ⊗ V_3) ∩ (V_0 ⊗ R_1)`, and the window of the associated
//! cubic ℤ-algebra.
//!
//! Tensors are indexed as `w[a][b][c][d]` with slot `k` standing for `V_k`
//! and basis index 0 = `x_k`, 1 = `y_k`.

use serde::Serialize;

use crate::binary_form::{BinaryForm, RootStructure};
use crate::error::{Error, Result};
use crate::linalg::{intersect_subspaces, Matrix};
use crate::scalar::{Field, Scalar};
use crate::tensor::Tensor;

/// Where a quintuple came from; only used for reporting.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Linear,
    TypeA { a: Scalar, b: Scalar, c: Scalar },
    Explicit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Quintuple {
    w: Tensor,
    family: Family,
}

impl Quintuple {
    /// Wrap an explicit tensor of shape `[2,2,2,2]`.
    pub fn new(w: Tensor) -> Result<Quintuple> {
        if w.shape() != [2, 2, 2, 2] {
            return Err(Error::Invalid(format!("a quintuple tensor has shape [2,2,2,2], got {:?}", w.shape())));
        }
        if w.labels() != [0, 1, 2, 3] {
            return Err(Error::Invalid(format!("slots must be labeled V_0..V_3, got {:?}", w.labels())));
        }
        if w.is_zero() {
            return Err(Error::Invalid("w must be nonzero".into()));
        }
        Ok(Quintuple { w, family: Family::Explicit })
    }

    /// Build from a function of the four basis indices.
    pub fn from_fn(field: &Field, f: impl Fn(usize, usize, usize, usize) -> Scalar) -> Result<Quintuple> {
        let mut data = Vec::with_capacity(16);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        data.push(f(a, b, c, d));
                    }
                }
            }
        }
        Quintuple::new(Tensor::from_vec(field, &[2, 2, 2, 2], &[0, 1, 2, 3], data)?)
    }

    pub fn w(&self) -> &Tensor {
        &self.w
    }

    pub fn field(&self) -> &Field {
        self.w.field()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn entry(&self, a: usize, b: usize, c: usize, d: usize) -> &Scalar {
        self.w.get(&[a, b, c, d])
    }

    /// Change of basis in each `V_i` (matrices act on column vectors).
    pub fn transform(&self, g: &[Matrix; 4]) -> Result<Quintuple> {
        let mut w = self.w.clone();
        for (slot, gi) in g.iter().enumerate() {
            w = w.transform_slot(slot, gi)?;
        }
        Ok(Quintuple { w, family: Family::Explicit })
    }

    pub fn reduce_mod(&self, p: u64) -> Result<Quintuple> {
        Quintuple::new(self.w.reduce_mod(p)?)
    }

    /// The 4×4 matrix of `V_j^∨ ⊗ V_{j+1}^∨ → V_{j+2} ⊗ V_{j+3}`; column
    /// `2a+b` pairs `a` in slot `j` and `b` in slot `j+1`, row `2c+d` is the
    /// output coordinate in slots `j+2`, `j+3` (indices mod 4).
    pub fn adjacent_contraction(&self, j: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field(), 4, 4);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        let mut idx = [0; 4];
                        idx[j % 4] = a;
                        idx[(j + 1) % 4] = b;
                        idx[(j + 2) % 4] = c;
                        idx[(j + 3) % 4] = d;
                        m.set(2 * c + d, 2 * a + b, self.w.get(&idx).clone());
                    }
                }
            }
        }
        m
    }
}

/// `x_0x_1y_2y_3 − y_0x_1x_2y_3 − x_0y_1y_2x_3 + y_0y_1x_2x_3` over `Q`.
pub fn build_linear_quadric() -> Quintuple {
    build_linear_quadric_over(&Field::Rational)
}

pub fn build_linear_quadric_over(field: &Field) -> Quintuple {
    let mut q = Quintuple::from_fn(field, |a, b, c, d| match (a, b, c, d) {
        (0, 0, 1, 1) | (1, 1, 0, 0) => field.one(),
        (1, 0, 0, 1) | (0, 1, 1, 0) => field.from_i64(-1),
        _ => field.zero(),
    })
    .expect("nonzero tensor");
    q.family = Family::Linear;
    q
}

/// Reason a parameter triple is rejected, or `None` when it is admissible.
pub fn excluded_locus_reason(a: &Scalar, b: &Scalar, c: &Scalar) -> Option<String> {
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Some("(0:0:0) is not a point of P^2".into());
    }
    let (a2, b2, c2) = (a * a, b * b, c * c);
    if a2 == b2 && b2 == c2 {
        return Some(format!("a^2 = b^2 = c^2 at ({a}:{b}:{c})"));
    }
    if a.is_zero() && b.is_zero() {
        return Some("(a:b:c) = (0:0:1)".into());
    }
    if a.is_zero() && c.is_zero() {
        return Some("(a:b:c) = (0:1:0)".into());
    }
    None
}

/// The type-A tensor with coefficients `a, b, a, c, a, b, a, c`.
pub fn build_type_a(a: &Scalar, b: &Scalar, c: &Scalar) -> Result<Quintuple> {
    let field = a.field();
    if !field.contains(b) || !field.contains(c) {
        return Err(Error::InvalidField("type-A parameters must share one field".into()));
    }
    if let Some(reason) = excluded_locus_reason(a, b, c) {
        return Err(Error::ExcludedLocus(reason));
    }
    let mut q = Quintuple::from_fn(&field, |i, j, k, l| match (i, j, k, l) {
        (1, 1, 0, 0) | (0, 1, 1, 0) | (0, 0, 1, 1) | (1, 0, 0, 1) => a.clone(),
        (1, 0, 1, 0) | (0, 1, 0, 1) => b.clone(),
        (0, 0, 0, 0) | (1, 1, 1, 1) => c.clone(),
        _ => field.zero(),
    })?;
    q.family = Family::TypeA { a: a.clone(), b: b.clone(), c: c.clone() };
    Ok(q)
}

/// A pair of functionals `(φ_j, φ_{j+1})` whose pure tensor contracts `w` to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PureWitness {
    /// Field containing the coordinates (an extension when the base has none).
    pub field: Field,
    pub phi: [Scalar; 2],
    pub chi: [Scalar; 2],
    /// Discriminant of the determinant quadratic when the witness needed a square root.
    pub disc: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlotPairReport {
    pub slot: usize,
    pub kernel_dim: usize,
    pub passes: bool,
    pub witness: Option<PureWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometricityReport {
    pub pairs: Vec<SlotPairReport>,
}

impl GeometricityReport {
    pub fn is_geometric(&self) -> bool {
        self.pairs.iter().all(|p| p.passes)
    }

    pub fn first_failure(&self) -> Option<&SlotPairReport> {
        self.pairs.iter().find(|p| !p.passes)
    }
}

/// Write a rank-one 2×2 matrix `κ[a][b]` as `φ(a)·χ(b)`.
fn factor_rank_one(k: [[Scalar; 2]; 2]) -> ([Scalar; 2], [Scalar; 2]) {
    let (a, b) = (0..2)
        .flat_map(|a| (0..2).map(move |b| (a, b)))
        .find(|&(a, b)| !k[a][b].is_zero())
        .expect("nonzero matrix");
    let inv = k[a][b].inv().expect("nonzero");
    let phi = [k[0][b].clone(), k[1][b].clone()];
    let chi = [&k[a][0] * &inv, &k[a][1] * &inv];
    (phi, chi)
}

fn as_block(col: &[Scalar]) -> [[Scalar; 2]; 2] {
    [[col[0].clone(), col[1].clone()], [col[2].clone(), col[3].clone()]]
}

fn det2(k: &[[Scalar; 2]; 2]) -> Scalar {
    &k[0][0] * &k[1][1] - &k[0][1] * &k[1][0]
}

fn check_pair(q: &Quintuple, j: usize) -> SlotPairReport {
    let m = q.adjacent_contraction(j);
    let ker = m.kernel_basis();
    let field = q.field().clone();
    let kernel_dim = ker.cols();
    let report = |passes, witness| SlotPairReport { slot: j, kernel_dim, passes, witness };
    match kernel_dim {
        0 => report(true, None),
        1 => {
            let k = as_block(&ker.col(0));
            if det2(&k).is_zero() {
                let (phi, chi) = factor_rank_one(k);
                report(false, Some(PureWitness { field, phi, chi, disc: None }))
            } else {
                report(true, None)
            }
        }
        _ => {
            // det(s·κ1 + t·κ2) is a binary quadratic; any root gives a singular
            // nonzero kernel element.
            let k1 = as_block(&ker.col(0));
            let k2 = as_block(&ker.col(1));
            let mixed = &(&k1[0][0] * &k2[1][1] + &k2[0][0] * &k1[1][1])
                - &(&k1[0][1] * &k2[1][0] + &k2[0][1] * &k1[1][0]);
            let form = BinaryForm::new(&field, vec![det2(&k1), mixed, det2(&k2)]).expect("same field");
            let (ext, root, disc) = if form.is_zero() {
                (field.clone(), [field.one(), field.zero()], None)
            } else {
                let rs = form.root_structure().expect("nonzero form");
                let root = rs.roots().remove(0);
                match rs {
                    RootStructure::IrreducibleQuadratic { disc, field: ext, .. } => (ext, root, Some(disc)),
                    _ => (field.clone(), root, None),
                }
            };
            let [s, t] = root;
            let comb = |x: &Scalar, y: &Scalar| &s * &ext.embed(x) + &t * &ext.embed(y);
            let k = [
                [comb(&k1[0][0], &k2[0][0]), comb(&k1[0][1], &k2[0][1])],
                [comb(&k1[1][0], &k2[1][0]), comb(&k1[1][1], &k2[1][1])],
            ];
            let (phi, chi) = factor_rank_one(k);
            report(false, Some(PureWitness { field: ext, phi, chi, disc }))
        }
    }
}

/// Decide, for each `j ∈ Z/4`, whether every pure `φ_j ⊗ φ_{j+1}` pairs with
/// `w` to a nonzero tensor, over the algebraic closure of the base field.
pub fn is_geometric(q: &Quintuple) -> GeometricityReport {
    GeometricityReport { pairs: (0..4).map(|j| check_pair(q, j)).collect() }
}

/// Contract `w` by `φ` in slot `j` and `χ` in slot `j+1` (mod 4), over the witness field.
pub fn contract_pair(q: &Quintuple, j: usize, phi: &[Scalar; 2], chi: &[Scalar; 2]) -> Result<Tensor> {
    let field = phi[0].field();
    let embedded = q.w.entries().iter().map(|x| field.embed(x)).collect();
    let w = Tensor::from_vec(&field, &[2, 2, 2, 2], &[0, 1, 2, 3], embedded)?;
    let (s0, s1) = (j % 4, (j + 1) % 4);
    // contract the higher slot first so the lower index stays valid
    if s0 < s1 {
        w.contract(s1, chi)?.contract(s0, phi)
    } else {
        w.contract(s0, phi)?.contract(s1, chi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationData {
    /// Columns span `R_0 ⊂ V_0⊗V_1⊗V_2` (coordinates `4a+2b+c`).
    pub r0: Matrix,
    /// Columns span `R_1 ⊂ V_1⊗V_2⊗V_3`.
    pub r1: Matrix,
    /// Columns span `(R_0⊗V_3) ∩ (V_0⊗R_1)` in the 16-dimensional space.
    pub w_line: Matrix,
    /// Columns span `R_0⊗V_3 + V_0⊗R_1`.
    pub relation_sum_rank: usize,
    pub w_spans_line: bool,
}

impl RelationData {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.r0.cols(), self.r1.cols(), self.w_line.cols())
    }

    pub fn is_valid(&self) -> bool {
        self.dims() == (2, 2, 1) && self.w_spans_line
    }
}

/// `R ⊗ V` as a 16×(2·dim R) matrix, tensor factor appended on the right.
fn tensor_right(r: &Matrix) -> Matrix {
    let f = r.field().clone();
    r.kronecker(&Matrix::identity(&f, 2))
}

/// `V ⊗ R`, tensor factor prepended on the left.
fn tensor_left(r: &Matrix) -> Matrix {
    let f = r.field().clone();
    Matrix::identity(&f, 2).kronecker(r)
}

pub fn relations(q: &Quintuple) -> RelationData {
    let field = q.field().clone();
    let basis = [[field.one(), field.zero()], [field.zero(), field.one()]];
    let cols = |slot: usize| -> Vec<Vec<Scalar>> {
        basis.iter().map(|xi| q.w.contract(slot, xi).expect("slot in range").entries().to_vec()).collect()
    };
    let r0 = Matrix::from_columns(&field, 8, &cols(3)).expect("length 8").column_basis();
    let r1 = Matrix::from_columns(&field, 8, &cols(0)).expect("length 8").column_basis();
    let left = tensor_right(&r0);
    let right = tensor_left(&r1);
    let w_line = intersect_subspaces(&left, &right).expect("same ambient space");
    let relation_sum_rank = left.hstack(&right).expect("same rows").rank();
    let w_spans_line = w_line.cols() == 1 && w_line.spans(q.w.entries()).unwrap_or(false);
    RelationData { r0, r1, w_line, relation_sum_rank, w_spans_line }
}

/// Coefficient of `t^n` in `1/((1−t)²(1−t²))`.
pub fn hilbert_dims(n: usize) -> u64 {
    let mut a: Vec<i64> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let at = |i: i64| if i >= 0 { a[i as usize] } else { 0 };
        let k = k as i64;
        let v = if k == 0 { 1 } else { 2 * at(k - 1) - 2 * at(k - 3) + at(k - 4) };
        a.push(v);
    }
    a[n] as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimCell {
    pub i: usize,
    pub j: usize,
    pub computed: u64,
    pub expected: u64,
}

impl DimCell {
    pub fn matches(&self) -> bool {
        self.computed == self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimTable {
    pub cells: Vec<DimCell>,
}

impl DimTable {
    pub fn get(&self, i: usize, j: usize) -> Option<u64> {
        self.cells.iter().find(|c| c.i == i && c.j == j).map(|c| c.computed)
    }

    pub fn mismatches(&self) -> Vec<&DimCell> {
        self.cells.iter().filter(|c| !c.matches()).collect()
    }

    pub fn all_match(&self) -> bool {
        self.cells.iter().all(DimCell::matches)
    }
}

/// Dimensions `A_{i,j}`, `0 ≤ i ≤ j ≤ 4`, of the ℤ-algebra window generated by `w`.
/// In lengths ≤ 2 there are no relations; length-3 and length-4 pieces are
/// quotients by `R_i` and by `R_0⊗V_3 + V_0⊗R_1`.
pub fn truncated_dims(q: &Quintuple) -> DimTable {
    let rel = relations(q);
    let mut cells = Vec::new();
    for i in 0..=4usize {
        for j in i..=4usize {
            let n = j - i;
            let computed = match (i, n) {
                (_, 0..=2) => 1u64 << n,
                (0, 3) => 8 - rel.r0.cols() as u64,
                (1, 3) => 8 - rel.r1.cols() as u64,
                (0, 4) => 16 - rel.relation_sum_rank as u64,
                _ => unreachable!("window is 0..=4"),
            };
            cells.push(DimCell { i, j, computed, expected: hilbert_dims(n) });
        }
    }
    DimTable { cells }
}
