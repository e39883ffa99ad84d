//! Geometric squares `(V, U_0^0, U_1^0, U_0^1, U_1^1, φ_0, φ_1)`, the square
//! attached to a quintuple, and the two quiver algebras compared by mutation:
//! the linear collection `O(−1,−2), O(−1,−1), O(0,−1), O(0,0)` and the
//! 3-block collection `R, K_0, K_1, O`.
//!
//! Arrow spaces are stored as duals. For a line `L_i` built from `φ_i`,
//! `Hom(R, K_i)` is the dual of the factor of `U_0^i ⊗ U_1^i` that is *not*
//! contracted by the parameter and `Hom(K_i, O)` is the dual of the
//! contracted factor; a path pairs to `(U_0^i ⊗ U_1^i)^∨` and lands in
//! `Hom(R, O) = V^∨` through `φ_i^T`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::{line_from_phi, reshuffle_rank, swap_matrix, EmbeddedLine, Orientation};
use crate::linalg::{IntMatrix, Matrix};
use crate::quintuple::{relations, truncated_dims, Quintuple};
use crate::scalar::{Field, Scalar};

/// How the second line of a square is read off `φ_1`.
///
/// `Literal` contracts `U_0^1` exactly like the first line; `Ruling` contracts
/// `U_1^1`. Only the orientation of the second line depends on this choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Literal,
    #[default]
    Ruling,
}

/// Environment variable consulted when no convention is given explicitly.
pub const CONVENTION_ENV: &str = "NCQ_DEFAULT_CONVENTION";

impl Convention {
    pub fn second_orientation(self) -> Orientation {
        match self {
            Convention::Literal => Orientation::ContractFirst,
            Convention::Ruling => Orientation::ContractSecond,
        }
    }

    pub fn other(self) -> Convention {
        match self {
            Convention::Literal => Convention::Ruling,
            Convention::Ruling => Convention::Literal,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Literal => "literal",
            Convention::Ruling => "ruling",
        }
    }

    /// Explicit choice if given, else the environment default, else `Ruling`.
    pub fn resolve(explicit: Option<Convention>) -> Result<Convention> {
        if let Some(c) = explicit {
            return Ok(c);
        }
        match std::env::var(CONVENTION_ENV) {
            Ok(v) if !v.trim().is_empty() => v.parse(),
            _ => Ok(Convention::default()),
        }
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Convention> {
        match s.trim().to_ascii_lowercase().as_str() {
            "literal" => Ok(Convention::Literal),
            "ruling" => Ok(Convention::Ruling),
            other => Err(Error::Parse(format!("unknown convention {other:?} (expected ruling|literal)"))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometricSquare {
    phi0: Matrix,
    phi1: Matrix,
    convention: Convention,
}

impl GeometricSquare {
    pub fn new(phi0: Matrix, phi1: Matrix, convention: Convention) -> Result<GeometricSquare> {
        for phi in [&phi0, &phi1] {
            if phi.rows() != 4 || phi.cols() != 4 {
                return Err(Error::DimensionMismatch { op: "geometric square", left: 4, right: phi.rows() });
            }
            if phi.determinant()?.is_zero() {
                return Err(Error::Singular);
            }
        }
        Ok(GeometricSquare { phi0, phi1, convention })
    }

    pub fn phi0(&self) -> &Matrix {
        &self.phi0
    }

    pub fn phi1(&self) -> &Matrix {
        &self.phi1
    }

    pub fn field(&self) -> &Field {
        self.phi0.field()
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn with_convention(&self, convention: Convention) -> GeometricSquare {
        GeometricSquare { convention, ..self.clone() }
    }

    /// `ψ = φ_1 ∘ φ_0⁻¹`; independent of the convention.
    pub fn psi(&self) -> Matrix {
        self.phi1.mul(&self.phi0.inverse().expect("invertible")).expect("4x4")
    }

    pub fn orientation(&self, i: usize) -> Orientation {
        if i == 0 {
            Orientation::ContractFirst
        } else {
            self.convention.second_orientation()
        }
    }

    pub fn line(&self, i: usize) -> EmbeddedLine {
        let phi = if i == 0 { &self.phi0 } else { &self.phi1 };
        line_from_phi(phi, self.orientation(i)).expect("invertible")
    }

    pub fn lines(&self) -> [EmbeddedLine; 2] {
        [self.line(0), self.line(1)]
    }
}

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum SquareOutcome {
    Square { square: GeometricSquare, det: Scalar },
    NotGeneric { reason: String, det: Scalar },
}

impl SquareOutcome {
    pub fn det(&self) -> &Scalar {
        match self {
            SquareOutcome::Square { det, .. } | SquareOutcome::NotGeneric { det, .. } => det,
        }
    }

    pub fn square(&self) -> Option<&GeometricSquare> {
        match self {
            SquareOutcome::Square { square, .. } => Some(square),
            SquareOutcome::NotGeneric { .. } => None,
        }
    }
}

/// `⟨−, w⟩: V_2^∨ ⊗ V_3^∨ → V_0 ⊗ V_1` with `M[(a,b),(c,d)] = w[a][b][c][d]`.
pub fn pairing_matrix(q: &Quintuple) -> Matrix {
    q.adjacent_contraction(2)
}

/// `□_w = (V_0⊗V_1, V_0, V_1, V_2^∨, V_3^∨, id, ⟨−,w⟩⁻¹)`.
pub fn square_from_quintuple(q: &Quintuple, convention: Convention) -> SquareOutcome {
    let m = pairing_matrix(q);
    let det = m.determinant().expect("square matrix");
    if det.is_zero() {
        return SquareOutcome::NotGeneric { reason: "det ⟨−,w⟩ = 0: the pairing is not an isomorphism".into(), det };
    }
    let phi0 = Matrix::identity(q.field(), 4);
    let phi1 = m.inverse().expect("nonzero determinant");
    let square = GeometricSquare::new(phi0, phi1, convention).expect("invertible");
    SquareOutcome::Square { square, det }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub label: String,
    pub dim: usize,
}

/// Shape of the block relations once both compositions are identified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RelationPattern {
    /// `b_i a_j = d_j c_i`: the outgoing index through `K_0` matches the
    /// incoming index through `K_1`.
    Crossed,
    /// `b_i a_j = d_i c_j`.
    Parallel,
    General,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuiverAlgebra {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// Dimension of the path space that contains the relations.
    pub path_space_dim: usize,
    /// Columns span the relation space.
    pub relations: Matrix,
    /// `gram[i][j] = dim Hom(E_i, E_j)`.
    pub gram: IntMatrix,
    /// For the block algebra: the 4×8 composition map into `Hom(R, O)`.
    pub composition: Option<Matrix>,
    pub pattern: Option<RelationPattern>,
}

impl QuiverAlgebra {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.iter().map(|a| a.dim).sum()
    }

    pub fn relation_dim(&self) -> usize {
        self.relations.cols()
    }

    pub fn total_dim(&self) -> i64 {
        self.gram.sum()
    }
}

/// Index of the path `(out, in)` through `K_i` as a vector of `(U_0^i ⊗ U_1^i)^∨`.
fn path_tensor_index(orientation: Orientation, out: usize, inn: usize) -> usize {
    match orientation {
        Orientation::ContractFirst => 2 * out + inn,
        Orientation::ContractSecond => 2 * inn + out,
    }
}

/// 4×4 block of the composition map for one line: column `2·out + in` is
/// `φ^T e_(path)`.
fn composition_block(phi: &Matrix, orientation: Orientation) -> Matrix {
    let mut c = Matrix::zeros(phi.field(), 4, 4);
    for out in 0..2 {
        for inn in 0..2 {
            let idx = path_tensor_index(orientation, out, inn);
            for r in 0..4 {
                c.set(r, 2 * out + inn, phi.get(idx, r).clone());
            }
        }
    }
    c
}

fn classify_pattern(c0: &Matrix, c1: &Matrix) -> RelationPattern {
    let Ok(inv) = c1.inverse() else {
        return RelationPattern::General;
    };
    let t = inv.mul(c0).expect("4x4");
    if reshuffle_rank(&t) == 1 {
        RelationPattern::Parallel
    } else if reshuffle_rank(&swap_matrix(t.field()).mul(&t).expect("4x4")) == 1 {
        RelationPattern::Crossed
    } else {
        RelationPattern::General
    }
}

pub const BLOCK_GRAM: [[i64; 4]; 4] = [[1, 2, 2, 4], [0, 1, 0, 2], [0, 0, 1, 2], [0, 0, 0, 1]];
pub const LINEAR_GRAM: [[i64; 4]; 4] = [[1, 2, 4, 6], [0, 1, 2, 4], [0, 0, 1, 2], [0, 0, 0, 1]];

pub fn block_gram() -> IntMatrix {
    IntMatrix(BLOCK_GRAM.iter().map(|r| r.to_vec()).collect())
}

pub fn linear_gram() -> IntMatrix {
    IntMatrix(LINEAR_GRAM.iter().map(|r| r.to_vec()).collect())
}

/// The endomorphism algebra of `R, K_0, K_1, O`. The two lines are assumed
/// disjoint, so `Hom(K_0, K_1) = 0`.
pub fn block_quiver(s: &GeometricSquare) -> QuiverAlgebra {
    let c0 = composition_block(s.phi0(), s.orientation(0));
    let c1 = composition_block(s.phi1(), s.orientation(1));
    let comp = c0.hstack(&c1).expect("4 rows");
    let relations = comp.kernel_basis();
    let hom_r_o = comp.rank() as i64;
    let arrows = vec![
        Arrow { from: 0, to: 1, label: "U_1^0*".into(), dim: 2 },
        Arrow { from: 0, to: 2, label: "U_1^1*".into(), dim: 2 },
        Arrow { from: 1, to: 3, label: "U_0^0*".into(), dim: 2 },
        Arrow { from: 2, to: 3, label: "U_0^1*".into(), dim: 2 },
    ];
    let a = |from: usize, to: usize| -> i64 {
        arrows.iter().filter(|x| x.from == from && x.to == to).map(|x| x.dim as i64).sum()
    };
    let gram = IntMatrix(vec![
        vec![1, a(0, 1), a(0, 2), hom_r_o],
        vec![0, 1, 0, a(1, 3)],
        vec![0, 0, 1, a(2, 3)],
        vec![0, 0, 0, 1],
    ]);
    QuiverAlgebra {
        vertices: ["R", "K0", "K1", "O"].iter().map(|v| v.to_string()).collect(),
        arrows,
        path_space_dim: comp.cols(),
        relations,
        gram,
        pattern: Some(classify_pattern(&c0, &c1)),
        composition: Some(comp),
    }
}

/// The linear collection `O(−1,−2) → O(−1,−1) → O(0,−1) → O(0,0)` with arrows
/// `V_2, V_1, V_0` and relations `R_0` among the length-3 paths.
pub fn linear_quiver(q: &Quintuple) -> Result<QuiverAlgebra> {
    let dims = truncated_dims(q);
    if !dims.all_match() {
        return Err(Error::Invalid(format!("window dimensions mismatch: {:?}", dims.mismatches())));
    }
    let rel = relations(q);
    let a = |i: usize, j: usize| dims.get(i, j).expect("window cell") as i64;
    let mut gram = IntMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in i..4 {
            gram.0[i][j] = a(3 - j, 3 - i);
        }
    }
    Ok(QuiverAlgebra {
        vertices: ["O(-1,-2)", "O(-1,-1)", "O(0,-1)", "O(0,0)"].iter().map(|v| v.to_string()).collect(),
        arrows: vec![
            Arrow { from: 0, to: 1, label: "V_2".into(), dim: 2 },
            Arrow { from: 1, to: 2, label: "V_1".into(), dim: 2 },
            Arrow { from: 2, to: 3, label: "V_0".into(), dim: 2 },
        ],
        path_space_dim: 8,
        relations: rel.r0,
        gram,
        composition: None,
        pattern: None,
    })
}

/// Rows express the mutated basis `O(−1,−1), O(0,−1), O(−1,0), O(0,0)` in
/// the linear basis, using `[O(−1,0)] = 2[O(−1,−1)] − [O(−1,−2)]`.
pub fn mutation_base_change() -> IntMatrix {
    IntMatrix::from_rows(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[-1, 2, 0, 0], &[0, 0, 0, 1]])
}

pub fn mutation_base_change_inverse() -> IntMatrix {
    IntMatrix::from_rows(&[&[2, 0, -1, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]])
}

/// `M·G·M^T` for the mutation base change.
pub fn gram_base_change(linear: &QuiverAlgebra) -> IntMatrix {
    let m = mutation_base_change();
    m.mul(&linear.gram).mul(&m.transpose())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MutationReport {
    pub algebra: QuiverAlgebra,
    /// `dim Hom(O(−1,0), O(0,0))`.
    pub new_hom_dim: usize,
    /// Rank of the multiplication `V_1 ⊗ V_2 → A_{1,3}` (4 means bijective).
    pub orthogonality_rank: usize,
    pub orthogonal: bool,
    pub gram_matches_block: bool,
    pub dims_match_block: bool,
    pub compositions_surjective: bool,
    /// `φ_1 ∘ C_m = id_{V_2^∨} ⊗ G`: the `V_2^∨` arrow index goes to `U_0^1 = V_2^∨`.
    pub respects_v2_factor: bool,
}

impl MutationReport {
    pub fn ok(&self) -> bool {
        self.orthogonal
            && self.gram_matches_block
            && self.dims_match_block
            && self.compositions_surjective
            && self.respects_v2_factor
            && self.new_hom_dim == 2
    }
}

/// The left null space of `sub` (rows annihilate the columns of `sub`):
/// the quotient map by that subspace.
fn quotient_map(sub: &Matrix, ambient: usize) -> Matrix {
    let f = sub.field().clone();
    if sub.cols() == 0 {
        return Matrix::identity(&f, ambient);
    }
    sub.transpose().kernel_basis().transpose()
}

/// Right-mutate the first two objects of the linear collection and compare
/// the result with the block algebra of the associated square.
pub fn mutate_linear_to_block(q: &Quintuple) -> Result<MutationReport> {
    let linear = linear_quiver(q)?;
    let field = q.field().clone();
    let rel = relations(q);

    // Hom(O(−1,0), O(0,0)) = ker(V_0⊗V_1⊗V_2 → A_{0,3}).
    let to_a03 = quotient_map(&rel.r0, 8);
    let r = to_a03.kernel_basis();
    let new_hom_dim = r.cols();

    // V_1⊗V_2 → A_{1,3}: no relations live in length 2.
    let length_two_relations = Matrix::zeros(&field, 4, 0);
    let orthogonality_rank = quotient_map(&length_two_relations, 4).rank();
    let orthogonal = orthogonality_rank == 4;

    // Compositions into Hom(O(−1,−1), O(0,0)) = V_0 ⊗ V_1.
    // Through O(0,−1): V_0 ⊗ V_1 itself. Through O(−1,0): r_d ⊗ ξ_c ↦ ⟨ξ_c, r_d⟩.
    let c_lin = Matrix::identity(&field, 4);
    let basis = [[field.one(), field.zero()], [field.zero(), field.one()]];
    let r_basis: Vec<Vec<Scalar>> =
        basis.iter().map(|xi| q.w().contract(3, xi).expect("slot 3").entries().to_vec()).collect();
    let mut c_m = Matrix::zeros(&field, 4, 4);
    for (d, rd) in r_basis.iter().enumerate() {
        for c in 0..2 {
            for ab in 0..4 {
                c_m.set(ab, 2 * c + d, rd[2 * ab + c].clone());
            }
        }
    }
    let compositions_surjective = c_lin.rank() == 4 && c_m.rank() == 4;
    let relations_m = c_lin.hstack(&c_m)?.kernel_basis();

    let mutated_gram = gram_base_change(&linear);
    let algebra = QuiverAlgebra {
        vertices: ["O(-1,-1)", "O(0,-1)", "O(-1,0)", "O(0,0)"].iter().map(|v| v.to_string()).collect(),
        arrows: vec![
            Arrow { from: 0, to: 1, label: "V_1".into(), dim: 2 },
            Arrow { from: 0, to: 2, label: "V_2*".into(), dim: 2 },
            Arrow { from: 1, to: 3, label: "V_0".into(), dim: 2 },
            Arrow { from: 2, to: 3, label: "R".into(), dim: new_hom_dim },
        ],
        path_space_dim: 8,
        relations: relations_m,
        gram: mutated_gram.clone(),
        composition: Some(c_lin.hstack(&c_m)?),
        pattern: None,
    };

    let (dims_match_block, respects_v2_factor) = match crate::square::square_from_quintuple(q, Convention::Ruling) {
        SquareOutcome::Square { square, .. } => {
            let block = block_quiver(&square);
            let dims = (algebra.vertex_count(), algebra.arrow_count(), algebra.relation_dim(), algebra.total_dim())
                == (block.vertex_count(), block.arrow_count(), block.relation_dim(), block.total_dim());
            let prod = square.phi1().mul(&c_m)?;
            (dims, is_identity_tensor_g(&prod))
        }
        SquareOutcome::NotGeneric { .. } => (false, false),
    };
    Ok(MutationReport {
        gram_matches_block: mutated_gram == block_gram() && mutated_gram == algebra.gram,
        algebra,
        new_hom_dim,
        orthogonality_rank,
        orthogonal,
        dims_match_block,
        compositions_surjective,
        respects_v2_factor,
    })
}

/// Whether `m[(c',d'),(c,r)] = δ_{c c'} · G[d'][r]` for some 2×2 `G`.
fn is_identity_tensor_g(m: &Matrix) -> bool {
    (0..2).all(|c1| {
        (0..2).all(|c| {
            (0..2).all(|d| {
                (0..2).all(|r| {
                    let x = m.get(2 * c1 + d, 2 * c + r);
                    if c1 == c {
                        x == m.get(d, r)
                    } else {
                        x.is_zero()
                    }
                })
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quintuple::{build_linear_quadric, build_type_a};

    fn int(n: i64) -> Scalar {
        Scalar::int(n)
    }

    #[test]
    fn linear_quadric_square() {
        let q = build_linear_quadric();
        let out = square_from_quintuple(&q, Convention::Ruling);
        assert_eq!(out.det(), &int(1));
        let s = out.square().unwrap();
        assert_eq!(reshuffle_rank(&s.psi()), 1);
    }

    #[test]
    fn type_a_determinants() {
        let q = build_type_a(&int(1), &int(1), &int(2)).unwrap();
        assert!(matches!(
            square_from_quintuple(&q, Convention::Ruling),
            SquareOutcome::NotGeneric { ref reason, .. } if reason.starts_with("det ⟨−,w⟩ = 0")
        ));
        let q = build_type_a(&int(0), &int(1), &int(1)).unwrap();
        let s = square_from_quintuple(&q, Convention::Literal);
        assert_eq!(s.square().unwrap().phi1(), &Matrix::identity(&Field::Rational, 4));
    }

    #[test]
    fn conventions_parse() {
        assert_eq!("Ruling".parse::<Convention>().unwrap(), Convention::Ruling);
        assert_eq!(" literal".parse::<Convention>().unwrap(), Convention::Literal);
        assert!("both".parse::<Convention>().is_err());
        assert_eq!(Convention::resolve(Some(Convention::Literal)).unwrap(), Convention::Literal);
        assert_eq!(Convention::default(), Convention::Ruling);
    }

    #[test]
    fn block_quiver_of_linear_quadric() {
        let s = square_from_quintuple(&build_linear_quadric(), Convention::Ruling);
        let b = block_quiver(s.square().unwrap());
        assert_eq!((b.vertex_count(), b.arrow_count(), b.relation_dim(), b.total_dim()), (4, 8, 4, 16));
        assert_eq!(b.gram, block_gram());
        assert_eq!(b.pattern, Some(RelationPattern::Crossed));
        let lit = block_quiver(&s.square().unwrap().with_convention(Convention::Literal));
        assert_eq!(lit.pattern, Some(RelationPattern::Parallel));
    }

    #[test]
    fn linear_quiver_and_base_change() {
        let l = linear_quiver(&build_linear_quadric()).unwrap();
        assert_eq!(l.gram, linear_gram());
        assert_eq!(l.total_dim(), 24);
        assert_eq!(l.relation_dim(), 2);
        assert_eq!(gram_base_change(&l), block_gram());
        let m = mutation_base_change();
        assert_eq!(m.mul(&mutation_base_change_inverse()), IntMatrix::from_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]));
    }

    #[test]
    fn mutation_of_examples() {
        for q in [build_linear_quadric(), build_type_a(&int(1), &int(2), &int(3)).unwrap()] {
            let r = mutate_linear_to_block(&q).unwrap();
            assert!(r.ok(), "{r:?}");
            assert_eq!(r.algebra.gram, block_gram());
        }
    }
}
