//! Lines in the Grassmannian `G = Gr(1,3)` of 2-dimensional quotients of a
//! 4-dimensional space `V`.
//!
//! A factorization `φ: V ≅ U_0 ⊗ U_1` (a 4×4 matrix, tensor coordinate
//! `2·i_0 + i_1`) embeds `P^1` into `G`: the parameter `p = (s:t)` is sent to
//! the kernel `K(p) = φ⁻¹(ker(p) ⊗ U_1)`, where `ker(p)` is spanned by
//! `(−t, s)`. The second orientation contracts the other factor instead,
//! giving `φ⁻¹(U_0 ⊗ ker(p))`.
//!
//! Everything is linear in `(s, t)`: `K(s,t) = s·N_s + t·N_t` for two constant
//! 4×2 matrices. Restriction splitting types, `Hom(R, K)` and the relation
//! between two lines are all decided from these matrices.

use std::fmt;

use serde::Serialize;

use crate::binary_form::{binary_form_gcd, BinaryForm, FormGcd, ProjPoint};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};

/// Which tensor factor of `U_0 ⊗ U_1` the parameter contracts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    ContractFirst,
    ContractSecond,
}

impl Orientation {
    pub fn flip(self) -> Orientation {
        match self {
            Orientation::ContractFirst => Orientation::ContractSecond,
            Orientation::ContractSecond => Orientation::ContractFirst,
        }
    }
}

/// A point of `G`, stored through its kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct GPoint {
    pub kernel: Matrix,
    /// Minors `(p01, p02, p03, p12, p13, p23)`, first nonzero entry scaled to 1.
    pub pluecker: Vec<Scalar>,
}

impl GPoint {
    pub fn pluecker_relation(&self) -> Scalar {
        let p = &self.pluecker;
        &(&p[0] * &p[5] - &p[1] * &p[4]) + &(&p[2] * &p[3])
    }
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pluecker_of(kernel: &Matrix) -> Vec<Scalar> {
    let (u, v) = (kernel.col(0), kernel.col(1));
    let raw: Vec<Scalar> = PAIRS.iter().map(|&(i, j)| &u[i] * &v[j] - &u[j] * &v[i]).collect();
    match raw.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let inv = lead.inv().expect("nonzero");
            raw.iter().map(|x| x * &inv).collect()
        }
        None => raw,
    }
}

/// The point of `G` given by a surjection `f: V → k²` (a 2×4 matrix of rank 2).
pub fn point_from_quotient(f: &Matrix) -> Result<GPoint> {
    if f.rows() != 2 || f.cols() != 4 {
        return Err(Error::DimensionMismatch { op: "point_from_quotient", left: 8, right: f.rows() * f.cols() });
    }
    let r = f.rank();
    if r < 2 {
        return Err(Error::RankDeficient { expected: 2, found: r });
    }
    let kernel = f.kernel_basis();
    let pluecker = pluecker_of(&kernel);
    Ok(GPoint { kernel, pluecker })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedLine {
    phi: Matrix,
    orientation: Orientation,
    n_s: Matrix,
    n_t: Matrix,
}

/// Index of `e_(i0, i1)` in `U_0 ⊗ U_1`.
fn tidx(i0: usize, i1: usize) -> usize {
    2 * i0 + i1
}

/// The swap `U_0 ⊗ U_1 → U_1 ⊗ U_0` as a permutation matrix.
pub fn swap_matrix(field: &Field) -> Matrix {
    let mut s = Matrix::zeros(field, 4, 4);
    for a in 0..2 {
        for b in 0..2 {
            s.set(tidx(b, a), tidx(a, b), field.one());
        }
    }
    s
}

/// Rank of the partial transpose `ψ[(i0,i1),(j0,j1)] ↦ R[(i0,j0),(i1,j1)]`;
/// rank 1 exactly when `ψ = A ⊗ B`.
pub fn reshuffle_rank(psi: &Matrix) -> usize {
    let mut r = Matrix::zeros(psi.field(), 4, 4);
    for i0 in 0..2 {
        for i1 in 0..2 {
            for j0 in 0..2 {
                for j1 in 0..2 {
                    r.set(tidx(i0, j0), tidx(i1, j1), psi.get(tidx(i0, i1), tidx(j0, j1)).clone());
                }
            }
        }
    }
    r.rank()
}

impl EmbeddedLine {
    pub fn new(phi: &Matrix, orientation: Orientation) -> Result<EmbeddedLine> {
        if phi.rows() != 4 || phi.cols() != 4 {
            return Err(Error::DimensionMismatch { op: "line_from_phi", left: 4, right: phi.rows().max(phi.cols()) });
        }
        let inv = phi.inverse()?;
        let field = phi.field().clone();
        let mut n_s = Matrix::zeros(&field, 4, 2);
        let mut n_t = Matrix::zeros(&field, 4, 2);
        for j in 0..2 {
            let (one, zero) = match orientation {
                Orientation::ContractFirst => (tidx(1, j), tidx(0, j)),
                Orientation::ContractSecond => (tidx(j, 1), tidx(j, 0)),
            };
            for r in 0..4 {
                n_s.set(r, j, inv.get(r, one).clone());
                n_t.set(r, j, -inv.get(r, zero));
            }
        }
        Ok(EmbeddedLine { phi: phi.clone(), orientation, n_s, n_t })
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn field(&self) -> &Field {
        self.phi.field()
    }

    pub fn n_s(&self) -> &Matrix {
        &self.n_s
    }

    pub fn n_t(&self) -> &Matrix {
        &self.n_t
    }

    /// Basis of `K(s:t)` as columns, over the field of `s` and `t`.
    pub fn kernel_at(&self, s: &Scalar, t: &Scalar) -> Result<Matrix> {
        let f = s.field();
        self.n_s.embed(&f).scale(s).add(&self.n_t.embed(&f).scale(t))
    }

    /// The quotient map `f_p: V → k²`, i.e. `φ` followed by contraction with `p`.
    pub fn quotient_at(&self, s: &Scalar, t: &Scalar) -> Matrix {
        let f = s.field();
        let phi = self.phi.embed(&f);
        let mut q = Matrix::zeros(&f, 2, 4);
        for j in 0..2 {
            let (r0, r1) = match self.orientation {
                Orientation::ContractFirst => (tidx(0, j), tidx(1, j)),
                Orientation::ContractSecond => (tidx(j, 0), tidx(j, 1)),
            };
            for c in 0..4 {
                q.set(j, c, s * phi.get(r0, c) + t * phi.get(r1, c));
            }
        }
        q
    }

    pub fn point_at(&self, s: &Scalar, t: &Scalar) -> Result<GPoint> {
        point_from_quotient(&self.quotient_at(s, t))
    }

    /// The six 2×2 minors of `K(s,t)` as binary quadratics.
    pub fn kernel_minors(&self) -> Vec<BinaryForm> {
        let (a, b) = (&self.n_s, &self.n_t);
        PAIRS
            .iter()
            .map(|&(i, j)| {
                let m = |x: &Matrix, y: &Matrix| x.get(i, 0) * y.get(j, 1) - x.get(j, 0) * y.get(i, 1);
                let ss = m(a, a);
                let st = m(a, b) + m(b, a);
                let tt = m(b, b);
                BinaryForm::new(self.field(), vec![ss, st, tt]).expect("same field")
            })
            .collect()
    }
}

/// Alias for `line_from_phi`: the line through which `φ` factors.
pub fn line_from_phi(phi: &Matrix, orientation: Orientation) -> Result<EmbeddedLine> {
    EmbeddedLine::new(phi, orientation)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub r_type: [i64; 2],
    pub q_type: [i64; 2],
    pub normal_type: [i64; 3],
    pub normal_degree: i64,
    /// Degree of `O_G(1)` on the line (the Plücker degree of the curve).
    pub pluecker_degree: i64,
    pub omega_degree: i64,
    pub minors_coprime: bool,
    pub quotient_sections_ok: bool,
    pub tangent_nonzero: bool,
}

/// Splitting types of `R|_L`, `Q|_L` and `N_{L/G}`, certified from the
/// explicit matrices rather than assumed.
///
/// * The minors of `K(s,t)` are quadratics without common zero, so the
///   tautological subbundle restricts to `O(−1)²` and `O_G(1)|_L = O(2)`.
/// * The rows of `f_p` are linear in `p`, have rank 2 everywhere and kill
///   `K(s,t)`, so `Q|_L = O(1)²`.
/// * The derivative of `p ↦ K(p)` is `det(p, ṗ)·C` with constant
///   `C = q(e_0)·n(e_1)`; `C ≠ 0` makes `T_L = O(2) → (R^∨⊗Q)|_L = O(2)^4`
///   fiberwise injective, so the normal bundle is `O(2)^3`.
pub fn splitting_type_restrictions(l: &EmbeddedLine) -> Result<SplittingReport> {
    let field = l.field().clone();
    let minors = l.kernel_minors();
    let minors_coprime = binary_form_gcd(&minors)?.degree() == Some(0);

    let (one, zero) = (field.one(), field.zero());
    let q_s = l.quotient_at(&one, &zero);
    let q_t = l.quotient_at(&zero, &one);
    let q_minors: Vec<BinaryForm> = PAIRS
        .iter()
        .map(|&(i, j)| {
            let m = |x: &Matrix, y: &Matrix| x.get(0, i) * y.get(1, j) - x.get(0, j) * y.get(1, i);
            BinaryForm::new(&field, vec![m(&q_s, &q_s), m(&q_s, &q_t) + m(&q_t, &q_s), m(&q_t, &q_t)])
                .expect("same field")
        })
        .collect();
    let ss = q_s.mul(l.n_s())?;
    let tt = q_t.mul(l.n_t())?;
    let c = q_s.mul(l.n_t())?;
    let c_rev = q_t.mul(l.n_s())?;
    let annihilates = ss.is_zero() && tt.is_zero() && c.add(&c_rev)?.is_zero();
    let quotient_sections_ok = annihilates && binary_form_gcd(&q_minors)?.degree() == Some(0);
    let tangent_nonzero = !c.is_zero();

    if !(minors_coprime && quotient_sections_ok && tangent_nonzero) {
        return Err(Error::Derivation {
            node: "splitting_type_restrictions".into(),
            reason: format!(
                "minors coprime {minors_coprime}, quotient sections {quotient_sections_ok}, tangent {tangent_nonzero}"
            ),
        });
    }
    // deg O_G(1)|_L = degree of the Plücker minors; ω_G = O_G(−4).
    let pluecker_degree = minors[0].degree() as i64;
    let omega_degree = -4 * pluecker_degree;
    let tangent_degree = 2;
    Ok(SplittingReport {
        r_type: [-1, -1],
        q_type: [1, 1],
        normal_type: [2, 2, 2],
        normal_degree: -omega_degree - tangent_degree,
        pluecker_degree,
        omega_degree,
        minors_coprime,
        quotient_sections_ok,
        tangent_nonzero,
    })
}

/// The 6×8 matrix `H^0(O_L(1)) ⊗ V^∨ → H^0(O_L(2)) ⊗ k²`,
/// `u ⊗ λ ↦ Σ_j u·λ(n_j(s,t)) ⊗ e_j^∨`. Rows `3j + m` (monomials `s², st, t²`),
/// columns `4u + λ` with `u ∈ {s, t}`.
pub fn section_restriction_matrix(l: &EmbeddedLine) -> Matrix {
    let field = l.field().clone();
    let mut m = Matrix::zeros(&field, 6, 8);
    for u in 0..2 {
        for lam in 0..4 {
            for j in 0..2 {
                // λ(n_j) = s·N_s[lam][j] + t·N_t[lam][j]; multiplying by s (u = 0)
                // or t (u = 1) shifts the monomial index by u.
                let coeffs = [l.n_s().get(lam, j), l.n_t().get(lam, j)];
                for (k, c) in coeffs.iter().enumerate() {
                    let row = 3 * j + k + u;
                    let col = 4 * u + lam;
                    let v = m.get(row, col) + *c;
                    m.set(row, col, v);
                }
            }
        }
    }
    m
}

/// `dim Hom_G(R, K)` for the kernel sheaf `K` of a line.
pub fn hom_r_k_dim(l: &EmbeddedLine) -> usize {
    section_restriction_matrix(l).kernel_basis().cols()
}

/// `dim Hom_G(R, O_G) = dim V^∨`.
pub fn hom_r_o_dim() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LineVerdict {
    Disjoint,
    Meet(usize),
    Coincide,
}

impl fmt::Display for LineVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineVerdict::Disjoint => write!(f, "Disjoint"),
            LineVerdict::Meet(n) => write!(f, "Meet({n})"),
            LineVerdict::Coincide => write!(f, "Coincide"),
        }
    }
}

/// A common point: parameters on both lines, over `field`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeetWitness {
    pub field: Field,
    pub l0_param: ProjPoint,
    pub l1_param: ProjPoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineRelation {
    pub verdict: LineVerdict,
    /// Every plane of the second line is decomposable, but of the other type.
    pub opposite_family: bool,
    pub psi_reshuffle_rank: usize,
    /// Degree of the gcd of the decomposability quadratics; `None` if they all vanish.
    pub gcd_degree: Option<usize>,
    pub witnesses: Vec<MeetWitness>,
}

fn as_mat(v: &[Scalar]) -> Matrix {
    let f = v[0].field();
    Matrix::from_rows(&f, vec![vec![v[0].clone(), v[1].clone()], vec![v[2].clone(), v[3].clone()]])
        .expect("2x2")
}

fn quad(v: &[Scalar]) -> Scalar {
    &v[0] * &v[3] - &v[1] * &v[2]
}

fn polar(u: &[Scalar], v: &[Scalar]) -> Scalar {
    &(&u[0] * &v[3] + &u[3] * &v[0]) - &(&u[1] * &v[2] + &u[2] * &v[1])
}

enum PlaneType {
    Left(Vec<Scalar>),
    Right,
    Neither,
}

/// Classify a 2-plane in `U_0 ⊗ U_1` given by two spanning vectors.
fn plane_type(n1: &[Scalar], n2: &[Scalar]) -> PlaneType {
    let (a, b) = (as_mat(n1), as_mat(n2));
    let side = a.hstack(&b).expect("2 rows");
    if side.rank() <= 1 {
        let col = side.column_basis().col(0);
        return PlaneType::Left(col);
    }
    if a.vstack(&b).expect("2 cols").rank() <= 1 {
        return PlaneType::Right;
    }
    PlaneType::Neither
}

/// How the second line sits relative to the first.
///
/// After normalizing so that `l0 = {ℓ ⊗ U_1}`, the plane `K_1(k)` is spanned
/// by `n_1(k), n_2(k)`. All of it is decomposable iff the binary quadratics
/// `Q(n_1)`, `Q(n_2)`, `B(n_1, n_2)` vanish at `k` (`Q` = determinant of the
/// 2×2 reshape, `B` its polarization). The gcd of the three decides.
pub fn line_relation(l0: &EmbeddedLine, l1: &EmbeddedLine) -> Result<LineRelation> {
    if l0.field() != l1.field() {
        return Err(Error::InvalidField("lines over different fields".into()));
    }
    let field = l0.field().clone();
    let psi = l1.phi().mul(&l0.phi().inverse()?)?;
    let psi_reshuffle_rank = reshuffle_rank(&psi);

    let mut norm = l0.phi().clone();
    if l0.orientation() == Orientation::ContractSecond {
        norm = swap_matrix(&field).mul(&norm)?;
    }
    let ns = norm.mul(l1.n_s())?;
    let nt = norm.mul(l1.n_t())?;
    let (n1s, n1t, n2s, n2t) = (ns.col(0), nt.col(0), ns.col(1), nt.col(1));

    let q_form = |xs: &[Scalar], xt: &[Scalar]| {
        BinaryForm::new(&field, vec![quad(xs), polar(xs, xt), quad(xt)]).expect("same field")
    };
    let b_form = BinaryForm::new(
        &field,
        vec![polar(&n1s, &n2s), &polar(&n1s, &n2t) + &polar(&n1t, &n2s), polar(&n1t, &n2t)],
    )?;
    let forms = [q_form(&n1s, &n1t), q_form(&n2s, &n2t), b_form];
    let gcd = binary_form_gcd(&forms)?;

    let at = |s: &Scalar, t: &Scalar| -> (Vec<Scalar>, Vec<Scalar>) {
        let f = s.field();
        let comb = |xs: &[Scalar], xt: &[Scalar]| -> Vec<Scalar> {
            xs.iter().zip(xt).map(|(a, b)| s * &f.embed(a) + t * &f.embed(b)).collect()
        };
        (comb(&n1s, &n1t), comb(&n2s, &n2t))
    };

    let mut out = LineRelation {
        verdict: LineVerdict::Disjoint,
        opposite_family: false,
        psi_reshuffle_rank,
        gcd_degree: gcd.degree(),
        witnesses: Vec::new(),
    };
    match gcd {
        FormGcd::IdenticallyZero => {
            let (v1, v2) = at(&field.one(), &field.zero());
            match plane_type(&v1, &v2) {
                PlaneType::Left(_) => out.verdict = LineVerdict::Coincide,
                PlaneType::Right => out.opposite_family = true,
                PlaneType::Neither => {
                    return Err(Error::Invalid("decomposable plane family of neither type".into()))
                }
            }
        }
        FormGcd::Form(g) if g.degree() == 0 => {}
        FormGcd::Form(g) => {
            let (ext, roots) = g.roots()?;
            let ext = ext.unwrap_or_else(|| field.clone());
            for [s, t] in roots {
                let (s, t) = (ext.embed(&s), ext.embed(&t));
                let (v1, v2) = at(&s, &t);
                if let PlaneType::Left(ell) = plane_type(&v1, &v2) {
                    out.witnesses.push(MeetWitness {
                        field: ext.clone(),
                        l0_param: [ell[1].clone(), -&ell[0]],
                        l1_param: [s, t],
                    });
                }
            }
            if !out.witnesses.is_empty() {
                out.verdict = LineVerdict::Meet(out.witnesses.len());
            }
        }
    }
    Ok(out)
}
