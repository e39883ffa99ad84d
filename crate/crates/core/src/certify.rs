//! The certification pipeline.
//!
//! A quintuple passes through seven stages, in order: geometricity,
//! relations, determinant, lines, quiver, ext, gram. The first failing stage
//! becomes the verdict.
//!
//! The Ext table of the collection `p^*R, C_0, C_1, O_H` on the blow-up is
//! not computed by general machinery. Every cell is a [`Derivation`]. A
//! derivation is a tree whose leaves are computable facts:
//!
//! * line-bundle cohomology on `E_i ≅ P^1 × P^2`;
//! * `dim Hom_G(R, K_i)`, computed from the line itself;
//! * `dim Hom_G(R, O_G)`;
//! * disjointness of the two centers;
//! * a few tagged axioms.
//!
//! Its inner nodes are long exact sequences and Serre duality.
//! [`ExtTable::verify`] replays each tree from its leaves alone.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::blowup::{canonical_class, coh_p1xp2, restrict_to_e, EPair, DIM_H};
use crate::error::{Error, Result};
use crate::grassmann::{
    hom_r_k_dim, hom_r_o_dim, line_relation, splitting_type_restrictions, LineRelation, LineVerdict,
};
use crate::io::input_digest;
use crate::linalg::IntMatrix;
use crate::quintuple::{
    build_type_a, excluded_locus_reason, is_geometric, relations, truncated_dims, GeometricityReport, Quintuple,
};
use crate::scalar::{Field, Scalar};
use crate::square::{
    block_gram, block_quiver, linear_quiver, mutate_linear_to_block, square_from_quintuple, Convention,
    GeometricSquare, MutationReport, QuiverAlgebra, SquareOutcome,
};

pub const SCHEMA_VERSION: u64 = 1;
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Degrees `0..=DIM_H` of Ext groups on the 4-fold.
const DEGREES: usize = DIM_H as usize + 1;

pub const OBJECTS: [&str; 4] = ["p*R", "C0", "C1", "O"];
pub const OBJECT_RANKS: [i64; 4] = [2, 2, 2, 1];

/// A summand of a line bundle on `E_i`, recomputed on replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Twist {
    /// An explicit `O_{E_i}(m, n)`.
    Sheaf(EPair),
    /// `(R^∨)|_{E_i}`, pulled back from the center; its splitting type is
    /// read off the line. Contributes rank 2.
    DualTautological,
    /// `ω_H|_{E_i}`.
    Canonical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unknown {
    /// `X → Y → Z → X[1]` with `X` unknown: the map `Y → Z` is known.
    First,
    /// `X → Y → Z → X[1]` with `Z` unknown: the map `X → Y` is known.
    Third,
}

/// The rank of the known map in one degree.
#[derive(Clone, Debug, PartialEq)]
pub enum RankFact {
    /// One side vanishes.
    Forced,
    Injective(String),
    Surjective(String),
    /// The kernel (degree 0 only) is the degree-0 value of another derivation.
    KernelFrom(Box<Derivation>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    /// `H^*(E_i, O(Σ twists))`, times the rank of the summands.
    Coh { divisor: usize, twists: Vec<Twist> },
    /// `Hom_G(R, K_i)` in degree 0, zero above (`K_i` is a kernel of `O^2`).
    HomRK { line: usize },
    /// `Hom_G(R, O_G)` in degree 0; higher groups vanish for the strong base collection.
    HomRO,
    /// Sheaves on `E_0` and `E_1` have no Ext between them.
    DisjointSupport,
    Axiom { name: String, value: Vec<u64> },
    /// `Ext^k(A, B) = Ext^{dim−k}(B, A ⊗ ω)^∨`.
    SerreDual { dim: usize, child: Box<Derivation> },
    Scale { mult: u64, child: Box<Derivation> },
    Les { unknown: Unknown, sequence: String, source: Box<Derivation>, target: Box<Derivation>, ranks: Vec<RankFact> },
}

/// A claim `Ext^*(…) = dims` with the rule that proves it.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub claim: String,
    pub rule: Rule,
    pub dims: Vec<u64>,
}

fn pad(mut v: Vec<u64>) -> Vec<u64> {
    v.resize(DEGREES, 0);
    v
}

fn derr(node: &str, reason: impl Into<String>) -> Error {
    Error::Derivation { node: node.to_string(), reason: reason.into() }
}

impl Derivation {
    fn new(claim: impl Into<String>, rule: Rule) -> Derivation {
        Derivation { claim: claim.into(), rule, dims: Vec::new() }
    }

    /// Evaluate the tree from its leaves against `s`.
    pub fn evaluate(&self, s: &GeometricSquare) -> Result<Vec<u64>> {
        let node = self.claim.as_str();
        match &self.rule {
            Rule::Coh { divisor, twists } => {
                let mut total = EPair::new(0, 0);
                let mut rank = 1;
                for t in twists {
                    total = total
                        + match t {
                            Twist::Sheaf(p) => *p,
                            Twist::Canonical => restrict_to_e(canonical_class(), *divisor)?,
                            Twist::DualTautological => {
                                let rep = splitting_type_restrictions(&s.line(*divisor))?;
                                if rep.r_type[0] != rep.r_type[1] {
                                    return Err(derr(node, "R restricted to the center is not balanced"));
                                }
                                rank *= 2;
                                EPair::new(-rep.r_type[0], 0)
                            }
                        };
                }
                Ok(pad(coh_p1xp2(total.m, total.n).scale(rank).dims))
            }
            Rule::HomRK { line } => Ok(pad(vec![hom_r_k_dim(&s.line(*line)) as u64])),
            Rule::HomRO => Ok(pad(vec![hom_r_o_dim() as u64])),
            Rule::DisjointSupport => {
                let rel = line_relation(&s.line(0), &s.line(1))?;
                if rel.verdict != LineVerdict::Disjoint {
                    return Err(derr(node, format!("centers are not disjoint: {}", rel.verdict)));
                }
                Ok(pad(Vec::new()))
            }
            Rule::Axiom { value, .. } => Ok(pad(value.clone())),
            Rule::SerreDual { dim, child } => {
                let c = child.evaluate(s)?;
                if c.iter().skip(dim + 1).any(|&x| x != 0) {
                    return Err(derr(node, "Serre dual of a group above the dimension"));
                }
                Ok(pad((0..=*dim).map(|k| c[dim - k]).collect()))
            }
            Rule::Scale { mult, child } => Ok(child.evaluate(s)?.iter().map(|x| x * mult).collect()),
            Rule::Les { unknown, source, target, ranks, .. } => {
                let src = source.evaluate(s)?;
                let tgt = target.evaluate(s)?;
                if ranks.len() != DEGREES {
                    return Err(derr(node, format!("{} rank facts for {DEGREES} degrees", ranks.len())));
                }
                let mut r = [0u64; DEGREES];
                for (k, fact) in ranks.iter().enumerate() {
                    let (a, b) = (src[k], tgt[k]);
                    r[k] = match fact {
                        RankFact::Forced if a == 0 || b == 0 => 0,
                        RankFact::Forced => return Err(derr(node, format!("rank in degree {k} is not forced ({a} → {b})"))),
                        RankFact::Injective(_) if a <= b => a,
                        RankFact::Surjective(_) if b <= a => b,
                        RankFact::Injective(_) | RankFact::Surjective(_) => {
                            return Err(derr(node, format!("impossible rank claim in degree {k} ({a} → {b})")))
                        }
                        RankFact::KernelFrom(d) => {
                            if k != 0 || *unknown != Unknown::First {
                                return Err(derr(node, "a kernel identifies only the degree-0 unknown of a covariant sequence"));
                            }
                            let kernel = d.evaluate(s)?[0];
                            if kernel > a || a - kernel > b {
                                return Err(derr(node, format!("kernel {kernel} incompatible with {a} → {b}")));
                            }
                            a - kernel
                        }
                    };
                }
                let out: Vec<u64> = match unknown {
                    Unknown::First => {
                        if tgt[DEGREES - 1] != r[DEGREES - 1] {
                            return Err(derr(node, "cokernel in the top degree would leave the dimension"));
                        }
                        (0..DEGREES).map(|k| (if k > 0 { tgt[k - 1] - r[k - 1] } else { 0 }) + src[k] - r[k]).collect()
                    }
                    Unknown::Third => {
                        if r[0] != src[0] {
                            return Err(derr(node, "the unknown term would have a group in degree −1"));
                        }
                        (0..DEGREES)
                            .map(|k| tgt[k] - r[k] + if k + 1 < DEGREES { src[k + 1] - r[k + 1] } else { 0 })
                            .collect()
                    }
                };
                // X → Y → Z: χ(X) − χ(Y) + χ(Z) = 0.
                let chi = |v: &[u64]| v.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum::<i64>();
                let (x, y, z) = match unknown {
                    Unknown::First => (chi(&out), chi(&src), chi(&tgt)),
                    Unknown::Third => (chi(&src), chi(&tgt), chi(&out)),
                };
                if x - y + z != 0 {
                    return Err(derr(node, "Euler characteristics do not add up"));
                }
                Ok(out)
            }
        }
    }

    /// Fill in `dims` at every node.
    pub fn settle(&mut self, s: &GeometricSquare) -> Result<()> {
        match &mut self.rule {
            Rule::SerreDual { child, .. } | Rule::Scale { child, .. } => child.settle(s)?,
            Rule::Les { source, target, ranks, .. } => {
                source.settle(s)?;
                target.settle(s)?;
                for fact in ranks.iter_mut() {
                    if let RankFact::KernelFrom(d) = fact {
                        d.settle(s)?;
                    }
                }
            }
            _ => {}
        }
        self.dims = self.evaluate(s)?;
        Ok(())
    }

    /// Replay every node and compare with the recorded dimensions.
    pub fn verify(&self, s: &GeometricSquare) -> Result<()> {
        match &self.rule {
            Rule::SerreDual { child, .. } | Rule::Scale { child, .. } => child.verify(s)?,
            Rule::Les { source, target, ranks, .. } => {
                source.verify(s)?;
                target.verify(s)?;
                for fact in ranks {
                    if let RankFact::KernelFrom(d) = fact {
                        d.verify(s)?;
                    }
                }
            }
            _ => {}
        }
        let again = self.evaluate(s)?;
        if again != self.dims {
            return Err(derr(&self.claim, format!("recorded {:?}, replayed {again:?}", self.dims)));
        }
        Ok(())
    }

    /// Names of the axioms used anywhere in the tree.
    pub fn axioms(&self, out: &mut Vec<String>) {
        match &self.rule {
            Rule::Axiom { name, .. } => out.push(name.clone()),
            Rule::HomRO => out.push(AX_STRONG_BASE.to_string()),
            Rule::SerreDual { child, .. } | Rule::Scale { child, .. } => child.axioms(out),
            Rule::Les { source, target, ranks, .. } => {
                source.axioms(out);
                target.axioms(out);
                for fact in ranks {
                    if let RankFact::KernelFrom(d) = fact {
                        d.axioms(out);
                    }
                }
            }
            _ => {}
        }
    }

    pub fn to_json(&self) -> Value {
        let (rule, extra) = match &self.rule {
            Rule::Coh { divisor, twists } => {
                let tw: Vec<Value> = twists
                    .iter()
                    .map(|t| match t {
                        Twist::Sheaf(p) => json!(format!("O{p}")),
                        Twist::DualTautological => json!("R^v"),
                        Twist::Canonical => json!("omega_H"),
                    })
                    .collect();
                ("cohomology_P1xP2", json!({ "divisor": divisor, "twists": tw }))
            }
            Rule::HomRK { line } => ("hom_R_K", json!({ "line": line })),
            Rule::HomRO => ("hom_R_O", json!({})),
            Rule::DisjointSupport => ("disjoint_support", json!({})),
            Rule::Axiom { name, .. } => ("axiom", json!({ "name": name })),
            Rule::SerreDual { dim, child } => ("serre_duality", json!({ "dim": dim, "child": child.to_json() })),
            Rule::Scale { mult, child } => ("direct_sum", json!({ "mult": mult, "child": child.to_json() })),
            Rule::Les { unknown, sequence, source, target, ranks } => {
                let ranks: Vec<Value> = ranks
                    .iter()
                    .map(|f| match f {
                        RankFact::Forced => json!("forced"),
                        RankFact::Injective(why) => json!({ "injective": why }),
                        RankFact::Surjective(why) => json!({ "surjective": why }),
                        RankFact::KernelFrom(d) => json!({ "kernel": d.to_json() }),
                    })
                    .collect();
                let unknown = match unknown {
                    Unknown::First => "first",
                    Unknown::Third => "third",
                };
                (
                    "long_exact_sequence",
                    json!({
                        "unknown": unknown, "sequence": sequence,
                        "source": source.to_json(), "target": target.to_json(), "ranks": ranks
                    }),
                )
            }
        };
        let mut v = json!({ "claim": self.claim, "rule": rule, "dims": self.dims });
        if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
            m.extend(e);
        }
        v
    }
}

const AX_FULLY_FAITHFUL: &str = "pullback along the blow-up is fully faithful";
const AX_STRONG_BASE: &str = "R, O is part of a strong full exceptional collection on G";
const AX_ORLOV: &str = "the blow-up functors from the center are fully faithful";

fn axiom(claim: &str, name: &str, value: Vec<u64>) -> Derivation {
    Derivation::new(claim, Rule::Axiom { name: name.into(), value })
}

fn coh(claim: String, divisor: usize, twists: Vec<Twist>) -> Derivation {
    Derivation::new(claim, Rule::Coh { divisor, twists })
}

fn scale(claim: String, mult: u64, child: Derivation) -> Derivation {
    Derivation::new(claim, Rule::Scale { mult, child: Box::new(child) })
}

fn les(claim: String, unknown: Unknown, sequence: String, source: Derivation, target: Derivation, ranks: Vec<RankFact>) -> Derivation {
    Derivation::new(claim, Rule::Les { unknown, sequence, source: Box::new(source), target: Box::new(target), ranks })
}

fn forced_except(k0: RankFact) -> Vec<RankFact> {
    std::iter::once(k0).chain(std::iter::repeat_n(RankFact::Forced, DEGREES - 1)).collect()
}

fn all_forced() -> Vec<RankFact> {
    vec![RankFact::Forced; DEGREES]
}

const O_E10: Twist = Twist::Sheaf(EPair::new(1, 0));
const EV_ON_SECTIONS: &str = "O^2 → O_E(1,0) is the evaluation of a basis of H^0(O_E(1,0))";

fn seq(i: usize) -> String {
    format!("0 → C{i} → O^2 → O_E{i}(1,0) → 0")
}

fn ext_rr() -> Derivation {
    axiom("Ext(p*R, p*R)", AX_FULLY_FAITHFUL, vec![1])
}

fn ext_oo() -> Derivation {
    axiom("Ext(O, O)", AX_FULLY_FAITHFUL, vec![1])
}

fn ext_ro() -> Derivation {
    Derivation::new("Ext(p*R, O)", Rule::HomRO)
}

fn ext_or() -> Derivation {
    axiom("Ext(O, p*R)", AX_STRONG_BASE, vec![])
}

fn ext_r_c(i: usize) -> Derivation {
    les(
        format!("Ext(p*R, C{i})"),
        Unknown::First,
        seq(i),
        scale("Ext(p*R, O^2)".into(), 2, ext_ro()),
        coh(format!("Ext(p*R, O_E{i}(1,0))"), i, vec![Twist::DualTautological, O_E10]),
        forced_except(RankFact::KernelFrom(Box::new(Derivation::new(format!("Hom_G(R, K{i})"), Rule::HomRK { line: i })))),
    )
}

fn ext_oe_to_r(i: usize) -> Derivation {
    Derivation::new(
        format!("Ext(O_E{i}(1,0), p*R)"),
        Rule::SerreDual {
            dim: DIM_H as usize,
            child: Box::new(coh(
                format!("Ext(p*R, O_E{i}(1,0) ⊗ ω_H)"),
                i,
                vec![Twist::DualTautological, O_E10, Twist::Canonical],
            )),
        },
    )
}

fn ext_c_r(i: usize) -> Derivation {
    les(
        format!("Ext(C{i}, p*R)"),
        Unknown::Third,
        seq(i),
        ext_oe_to_r(i),
        scale("Ext(O^2, p*R)".into(), 2, ext_or()),
        all_forced(),
    )
}

fn ext_c_o(i: usize) -> Derivation {
    let oe_to_o = Derivation::new(
        format!("Ext(O_E{i}(1,0), O)"),
        Rule::SerreDual {
            dim: DIM_H as usize,
            child: Box::new(coh(format!("Ext(O, O_E{i}(1,0) ⊗ ω_H)"), i, vec![O_E10, Twist::Canonical])),
        },
    );
    les(format!("Ext(C{i}, O)"), Unknown::Third, seq(i), oe_to_o, scale("Ext(O^2, O)".into(), 2, ext_oo()), all_forced())
}

fn ext_o_c(i: usize) -> Derivation {
    les(
        format!("Ext(O, C{i})"),
        Unknown::First,
        seq(i),
        scale("Ext(O, O^2)".into(), 2, ext_oo()),
        coh(format!("Ext(O, O_E{i}(1,0))"), i, vec![O_E10]),
        forced_except(RankFact::Surjective(EV_ON_SECTIONS.into())),
    )
}

/// `Ext(C_i, O_{E_j}(1,0))`, from the contravariant sequence of `C_i`.
fn ext_c_oe(i: usize, j: usize) -> Derivation {
    let (first, rank0) = if i == j {
        (
            axiom(&format!("Ext(O_E{i}(1,0), O_E{i}(1,0))"), AX_ORLOV, vec![1]),
            RankFact::Injective("a nonzero endomorphism of O_E(1,0) stays nonzero after composing with O^2 → O_E(1,0)".into()),
        )
    } else {
        (Derivation::new(format!("Ext(O_E{i}(1,0), O_E{j}(1,0))"), Rule::DisjointSupport), RankFact::Forced)
    };
    les(
        format!("Ext(C{i}, O_E{j}(1,0))"),
        Unknown::Third,
        seq(i),
        first,
        scale(format!("Ext(O^2, O_E{j}(1,0))"), 2, coh(format!("Ext(O, O_E{j}(1,0))"), j, vec![O_E10])),
        forced_except(rank0),
    )
}

fn ext_c_c(i: usize, j: usize) -> Derivation {
    let why = if i == j {
        "Hom(O^2, O^2) → Hom(O^2, O_E(1,0)) is bijective and Hom(O^2, O_E(1,0)) → Hom(C, O_E(1,0)) is onto"
    } else {
        "Hom(C, O^2) = Hom(O^2, O^2) maps bijectively onto Hom(O^2, O_E(1,0)) = Hom(C, O_E(1,0))"
    };
    les(
        format!("Ext(C{i}, C{j})"),
        Unknown::First,
        seq(j),
        scale(format!("Ext(C{i}, O^2)"), 2, ext_c_o(i)),
        ext_c_oe(i, j),
        forced_except(RankFact::Surjective(why.into())),
    )
}

/// Ext groups among `p^*R, C_0, C_1, O_H`, each with its derivation.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtTable {
    pub cells: Vec<Vec<Derivation>>,
}

impl ExtTable {
    pub fn dims(&self, i: usize, j: usize) -> &[u64] {
        &self.cells[i][j].dims
    }

    pub fn verify(&self, s: &GeometricSquare) -> Result<()> {
        self.cells.iter().flatten().try_for_each(|d| d.verify(s))
    }

    /// Forward `Ext^{>0}` and all backward Ext vanish; diagonal is `k`.
    pub fn is_strong_exceptional(&self) -> bool {
        (0..4).all(|i| {
            (0..4).all(|j| {
                let d = self.dims(i, j);
                match i.cmp(&j) {
                    std::cmp::Ordering::Equal => d[0] == 1 && d[1..].iter().all(|&x| x == 0),
                    std::cmp::Ordering::Less => d[1..].iter().all(|&x| x == 0),
                    std::cmp::Ordering::Greater => d.iter().all(|&x| x == 0),
                }
            })
        })
    }

    pub fn axioms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.cells.iter().flatten().for_each(|d| d.axioms(&mut out));
        out.sort();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter().enumerate().map(move |(j, d)| {
                    json!({ "from": OBJECTS[i], "to": OBJECTS[j], "dims": d.dims, "derivation": d.to_json() })
                })
            })
            .collect();
        json!({ "objects": OBJECTS, "ranks": OBJECT_RANKS, "cells": cells, "axioms": self.axioms() })
    }
}

/// Derive every Ext group of the collection on the blow-up along the two
/// lines of `s`.
pub fn ext_table(s: &GeometricSquare) -> Result<ExtTable> {
    let mut cells = vec![
        vec![ext_rr(), ext_r_c(0), ext_r_c(1), ext_ro()],
        vec![ext_c_r(0), ext_c_c(0, 0), ext_c_c(0, 1), ext_c_o(0)],
        vec![ext_c_r(1), ext_c_c(1, 0), ext_c_c(1, 1), ext_c_o(1)],
        vec![ext_or(), ext_o_c(0), ext_o_c(1), ext_oo()],
    ];
    for d in cells.iter_mut().flatten() {
        d.settle(s)?;
    }
    Ok(ExtTable { cells })
}

/// Euler pairing `χ(E_i, E_j) = Σ (−1)^k dim Ext^k`.
pub fn gram_of(t: &ExtTable) -> IntMatrix {
    IntMatrix(
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| t.dims(i, j).iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum())
                    .collect()
            })
            .collect(),
    )
}

pub const STAGES: [&str; 7] = ["geometricity", "relations", "determinant", "lines", "quiver", "ext", "gram"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Degenerate { stage: String, reason: String },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }

    pub fn stage(&self) -> Option<&str> {
        match self {
            Verdict::Certified => None,
            Verdict::Degenerate { stage, .. } => Some(stage),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub input_digest: String,
    pub field: Field,
    pub convention: Convention,
    pub geometricity: GeometricityReport,
    pub relation_dims: Option<(usize, usize, usize)>,
    pub dims_match: Option<bool>,
    pub det: Option<Scalar>,
    pub lines: Option<LineRelation>,
    /// The same two lines read with the other convention.
    pub lines_other_convention: Option<LineRelation>,
    pub block: Option<QuiverAlgebra>,
    pub linear: Option<QuiverAlgebra>,
    pub mutation: Option<MutationReport>,
    pub ext: Option<ExtTable>,
    pub gram: Option<IntMatrix>,
    pub verdict: Verdict,
}

fn point_json(p: &[Scalar; 2]) -> Value {
    json!([p[0].to_string(), p[1].to_string()])
}

fn line_json(rel: &LineRelation) -> Value {
    let witnesses: Vec<Value> = rel
        .witnesses
        .iter()
        .map(|w| json!({ "field": w.field.tag(), "l0": point_json(&w.l0_param), "l1": point_json(&w.l1_param) }))
        .collect();
    json!({
        "verdict": rel.verdict.to_string(),
        "opposite_family": rel.opposite_family,
        "psi_reshuffle_rank": rel.psi_reshuffle_rank,
        "gcd_degree": rel.gcd_degree,
        "witnesses": witnesses,
    })
}

fn quiver_json(q: &QuiverAlgebra) -> Value {
    json!({
        "vertices": q.vertex_count(),
        "arrows": q.arrow_count(),
        "relations": q.relation_dim(),
        "total": q.total_dim(),
        "gram": q.gram,
        "pattern": q.pattern,
    })
}

fn geometricity_json(g: &GeometricityReport) -> Value {
    let pairs: Vec<Value> = g
        .pairs
        .iter()
        .map(|p| {
            let witness = p.witness.as_ref().map(|w| {
                json!({
                    "field": w.field.tag(),
                    "phi": point_json(&w.phi),
                    "chi": point_json(&w.chi),
                })
            });
            json!({ "slot": p.slot, "kernel_dim": p.kernel_dim, "passes": p.passes, "witness": witness })
        })
        .collect();
    json!({ "geometric": g.is_geometric(), "pairs": pairs })
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            Verdict::Certified => json!({ "status": "Certified" }),
            Verdict::Degenerate { stage, reason } => json!({ "status": "Degenerate", "stage": stage, "reason": reason }),
        };
        let mut stages = serde_json::Map::new();
        stages.insert("geometricity".into(), geometricity_json(&self.geometricity));
        if let Some((r0, r1, inter)) = self.relation_dims {
            stages.insert(
                "relations".into(),
                json!({ "dim_r0": r0, "dim_r1": r1, "dim_intersection": inter, "hilbert_dims_match": self.dims_match }),
            );
        }
        if let Some(det) = &self.det {
            stages.insert("determinant".into(), json!({ "value": det.to_string() }));
        }
        if let Some(rel) = &self.lines {
            let mut v = line_json(rel);
            if let (Value::Object(m), Some(other)) = (&mut v, &self.lines_other_convention) {
                m.insert(
                    "other_convention".into(),
                    json!({ "convention": self.convention.other().as_str(), "relation": line_json(other) }),
                );
            }
            stages.insert("lines".into(), v);
        }
        if let Some(b) = &self.block {
            let mut v = json!({ "block": quiver_json(b) });
            if let (Value::Object(m), Some(l)) = (&mut v, &self.linear) {
                m.insert("linear".into(), quiver_json(l));
            }
            if let (Value::Object(m), Some(mu)) = (&mut v, &self.mutation) {
                m.insert(
                    "mutation".into(),
                    json!({
                        "ok": mu.ok(),
                        "mutated": quiver_json(&mu.algebra),
                        "gram_matches_block": mu.gram_matches_block,
                        "new_hom_dim": mu.new_hom_dim,
                        "orthogonality_rank": mu.orthogonality_rank,
                        "orthogonal": mu.orthogonal,
                    }),
                );
            }
            stages.insert("quiver".into(), v);
        }
        if let Some(t) = &self.ext {
            stages.insert("ext".into(), t.to_json());
        }
        if let Some(g) = &self.gram {
            stages.insert("gram".into(), json!({ "euler_pairing": g, "block_gram": block_gram(), "equal": *g == block_gram() }));
        }
        json!({
            "schema_version": SCHEMA_VERSION,
            "toolkit_version": TOOLKIT_VERSION,
            "input_digest": self.input_digest,
            "field": self.field.tag(),
            "convention": self.convention.as_str(),
            "checked_conditions": STAGES,
            "stages": Value::Object(stages),
            "verdict": verdict,
        })
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable") + "\n"
    }
}

/// Run every stage on `q`; the first failure becomes the verdict.
pub fn full_pipeline(q: &Quintuple, convention: Convention) -> Certificate {
    let mut cert = Certificate {
        input_digest: input_digest(q),
        field: q.field().clone(),
        convention,
        geometricity: is_geometric(q),
        relation_dims: None,
        dims_match: None,
        det: None,
        lines: None,
        lines_other_convention: None,
        block: None,
        linear: None,
        mutation: None,
        ext: None,
        gram: None,
        verdict: Verdict::Certified,
    };
    if let Err((stage, reason)) = run_stages(q, convention, &mut cert) {
        cert.verdict = Verdict::Degenerate { stage: stage.into(), reason };
    }
    cert
}

fn run_stages(q: &Quintuple, convention: Convention, cert: &mut Certificate) -> std::result::Result<(), (&'static str, String)> {
    if let Some(f) = cert.geometricity.first_failure() {
        return Err(("geometricity", format!("a pure tensor contracts w to zero in slots {} and {}", f.slot, (f.slot + 1) % 4)));
    }

    let rel = relations(q);
    cert.relation_dims = Some(rel.dims());
    let dims = truncated_dims(q);
    cert.dims_match = Some(dims.all_match());
    if !rel.is_valid() {
        let (a, b, c) = rel.dims();
        return Err(("relations", format!("relation dimensions ({a}, {b}, {c}) instead of (2, 2, 1)")));
    }
    if let Some(m) = dims.mismatches().first() {
        return Err(("relations", format!("dim A_{{{},{}}} = {} instead of {}", m.i, m.j, m.computed, m.expected)));
    }

    let square = match square_from_quintuple(q, convention) {
        SquareOutcome::Square { square, det } => {
            cert.det = Some(det);
            square
        }
        SquareOutcome::NotGeneric { reason, det } => {
            cert.det = Some(det);
            return Err(("determinant", reason));
        }
    };

    let [l0, l1] = square.lines();
    let lr = line_relation(&l0, &l1).map_err(|e| ("lines", e.to_string()))?;
    let other = square.with_convention(convention.other());
    let [o0, o1] = other.lines();
    cert.lines_other_convention = line_relation(&o0, &o1).ok();
    let verdict = lr.verdict.clone();
    cert.lines = Some(lr);
    if verdict != LineVerdict::Disjoint {
        return Err(("lines", verdict.to_string()));
    }

    let block = block_quiver(&square);
    let dims = (block.vertex_count(), block.arrow_count(), block.relation_dim(), block.total_dim());
    let block_ok = dims == (4, 8, 4, 16) && block.gram == block_gram();
    cert.block = Some(block);
    cert.linear = linear_quiver(q).ok();
    let mutation = mutate_linear_to_block(q).map_err(|e| ("quiver", e.to_string()))?;
    let mutation_ok = mutation.ok();
    cert.mutation = Some(mutation);
    if !block_ok {
        return Err(("quiver", format!("block quiver dimensions {dims:?} or Gram differ from the expected shape")));
    }
    if !mutation_ok {
        return Err(("quiver", "mutation of the linear collection does not reproduce the block algebra".into()));
    }

    let table = ext_table(&square).map_err(|e| ("ext", e.to_string()))?;
    table.verify(&square).map_err(|e| ("ext", e.to_string()))?;
    let strong = table.is_strong_exceptional();
    let gram = gram_of(&table);
    cert.ext = Some(table);
    if !strong {
        return Err(("ext", "the Ext table is not that of a strong exceptional collection".into()));
    }

    cert.gram = Some(gram.clone());
    let mutated = &cert.mutation.as_ref().expect("set above").algebra.gram;
    let block_gram_now = &cert.block.as_ref().expect("set above").gram;
    if gram != *block_gram_now || gram != *mutated {
        return Err(("gram", "Euler pairing, block Gram and mutated linear Gram disagree".into()));
    }
    Ok(())
}

/// Statistics of [`sweep_type_a`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub samples: usize,
    pub seed: u64,
    pub height: i64,
    pub convention: Convention,
    pub certified: usize,
    /// Parameter triples outside the admissible locus of the family.
    pub excluded: usize,
    /// Failures by first failing stage.
    pub by_stage: BTreeMap<String, usize>,
}

impl SweepReport {
    pub fn certified_fraction(&self) -> f64 {
        self.certified as f64 / self.samples as f64
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": "type-a",
            "samples": self.samples,
            "seed": self.seed,
            "height": self.height,
            "convention": self.convention.as_str(),
            "certified": self.certified,
            "excluded": self.excluded,
            "degenerate_by_stage": self.by_stage,
            "certified_fraction": self.certified_fraction(),
        })
    }
}

/// A random rational `p/q` with `|p| ≤ height`, `1 ≤ q ≤ height`.
pub fn random_rational(rng: &mut impl Rng, height: i64) -> Scalar {
    Scalar::rational(rng.random_range(-height..=height), rng.random_range(1..=height))
}

/// Parameter triples drawn by [`sweep_type_a`], in order.
pub fn sample_type_a_params(samples: usize, seed: u64, height: i64) -> Vec<[Scalar; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| [random_rational(&mut rng, height), random_rational(&mut rng, height), random_rational(&mut rng, height)])
        .collect()
}

/// Certify `samples` random type-A quintuples over `Q` with parameters of
/// height at most `height`.
pub fn sweep_type_a(samples: usize, seed: u64, height: i64, convention: Convention) -> Result<SweepReport> {
    if samples == 0 || height < 1 {
        return Err(Error::OutOfRange("a sweep needs at least one sample and height ≥ 1".into()));
    }
    let mut report = SweepReport {
        samples,
        seed,
        height,
        convention,
        certified: 0,
        excluded: 0,
        by_stage: BTreeMap::new(),
    };
    for [a, b, c] in sample_type_a_params(samples, seed, height) {
        if excluded_locus_reason(&a, &b, &c).is_some() {
            report.excluded += 1;
            continue;
        }
        let q = build_type_a(&a, &b, &c)?;
        match full_pipeline(&q, convention).verdict {
            Verdict::Certified => report.certified += 1,
            Verdict::Degenerate { stage, .. } => *report.by_stage.entry(stage).or_default() += 1,
        }
    }
    Ok(report)
}
