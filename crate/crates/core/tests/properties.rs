mod common;

use common::*;
use ncquad_core::certify::full_pipeline;
use ncquad_core::grassmann::line_relation;
use ncquad_core::io::{QuintupleFile, QuintupleSpec};
use ncquad_core::quintuple::{build_type_a, excluded_locus_reason, hilbert_dims, is_geometric, Quintuple};
use ncquad_core::square::{block_quiver, square_from_quintuple, Convention};
use ncquad_core::{Field, Matrix, Scalar};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-12i64..=12, 1i64..=8)
}

fn scalar((n, d): (i64, i64)) -> Scalar {
    Scalar::rational(n, d)
}

fn gl2() -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-3i64..=3).prop_filter("invertible", |m| m[0] * m[3] - m[1] * m[2] != 0)
}

fn to_matrix(m: [i64; 4]) -> Matrix {
    Matrix::from_i64(&Field::Rational, &[&m[0..2], &m[2..4]])
}

fn explicit(w: &[i64]) -> Quintuple {
    Quintuple::from_fn(&Field::Rational, |a, b, c, d| Scalar::int(w[8 * a + 4 * b + 2 * c + d])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hilbert_dims_match_series(n in 0usize..40) {
        prop_assert_eq!(hilbert_dims(n), hilbert_oracle(n)[n]);
    }

    #[test]
    fn geometricity_is_invariant_under_base_change(
        w in prop::collection::vec(-2i64..=2, 16),
        g in prop::array::uniform4(gl2()),
    ) {
        prop_assume!(w.iter().any(|&x| x != 0));
        let q = explicit(&w);
        let moved = q.transform(&g.map(to_matrix)).unwrap();
        prop_assert_eq!(is_geometric(&q).is_geometric(), is_geometric(&moved).is_geometric());
    }

    #[test]
    fn geometricity_agrees_with_enumeration_mod_7(w in prop::collection::vec(0u64..7, 16)) {
        prop_assume!(w.iter().any(|&x| x != 0));
        let f = Field::prime(7).unwrap();
        let q = Quintuple::from_fn(&f, |a, b, c, d| f.from_i64(w[8 * a + 4 * b + 2 * c + d] as i64)).unwrap();
        prop_assert_eq!(is_geometric(&q).is_geometric(), geometric_by_enumeration(&w, 7));
    }

    #[test]
    fn line_relation_is_symmetric(a in small_rational(), b in small_rational(), c in small_rational()) {
        let (a, b, c) = (scalar(a), scalar(b), scalar(c));
        prop_assume!(excluded_locus_reason(&a, &b, &c).is_none());
        let q = build_type_a(&a, &b, &c).unwrap();
        for conv in [Convention::Ruling, Convention::Literal] {
            if let Some(s) = square_from_quintuple(&q, conv).square() {
                let [l0, l1] = s.lines();
                let forward = line_relation(&l0, &l1).unwrap();
                let backward = line_relation(&l1, &l0).unwrap();
                prop_assert_eq!(forward.verdict, backward.verdict);
            }
        }
    }

    #[test]
    fn block_relations_match_rank_oracle(a in small_rational(), b in small_rational(), c in small_rational()) {
        let (a, b, c) = (scalar(a), scalar(b), scalar(c));
        prop_assume!(excluded_locus_reason(&a, &b, &c).is_none());
        let q = build_type_a(&a, &b, &c).unwrap();
        let Some(s) = square_from_quintuple(&q, Convention::Ruling).square().cloned() else { return Ok(()) };
        // paths R → K_i → O land in V^∨ through φ_i^T; relations are the kernel
        let mut rows = vec![Vec::new(); 4];
        for phi in [s.phi0(), s.phi1()] {
            for (r, row) in rows.iter_mut().enumerate() {
                for col in 0..4 {
                    row.push(phi.get(col, r).as_rational().unwrap().clone());
                }
            }
        }
        let relations = 8 - rank(&rows);
        let block = block_quiver(&s);
        prop_assert_eq!(block.relation_dim(), relations);
        prop_assert_eq!(block.total_dim(), 4 + 8 + (8 - relations) as i64);
    }

    #[test]
    fn rational_and_large_prime_verdicts_agree(a in -6i64..=6, b in -6i64..=6, c in -6i64..=6) {
        let (sa, sb, sc) = (Scalar::int(a), Scalar::int(b), Scalar::int(c));
        prop_assume!(excluded_locus_reason(&sa, &sb, &sc).is_none());
        let over_q = full_pipeline(&build_type_a(&sa, &sb, &sc).unwrap(), Convention::Ruling);
        let f = Field::prime(1_000_003).unwrap();
        let over_p = full_pipeline(&build_type_a(&f.from_i64(a), &f.from_i64(b), &f.from_i64(c)).unwrap(), Convention::Ruling);
        prop_assert_eq!(over_q.verdict.stage(), over_p.verdict.stage());
    }

    #[test]
    fn quintuple_files_round_trip(
        entries in prop::collection::vec(small_rational(), 16),
        prime in prop::sample::select(vec![None, Some(5u64), Some(101)]),
    ) {
        let w = entries.iter().map(|&(n, d)| q(n, d)).collect();
        let field = prime.map_or(Field::Rational, |p| Field::prime(p).unwrap());
        let file = QuintupleFile { spec: QuintupleSpec::Explicit { w }, field };
        let text = file.to_string_pretty();
        prop_assert_eq!(QuintupleFile::parse(&text).unwrap(), file);
    }
}

#[test]
fn type_a_builder_matches_the_entry_table() {
    let (a, b, c) = (q(2, 3), q(-5, 1), q(7, 4));
    let lib = build_type_a(&Scalar::Rational(a.clone()), &Scalar::Rational(b.clone()), &Scalar::Rational(c.clone())).unwrap();
    let oracle = type_a_w(&a, &b, &c);
    for (i, x) in lib.w().entries().iter().enumerate() {
        assert_eq!(x.as_rational().unwrap(), &oracle[i], "entry {i}");
    }
}

#[test]
fn cohomology_oracle_self_check() {
    assert_eq!(coh_pn(1, -8), vec![0, 7]);
    assert_eq!(coh_pn(2, 2), vec![6, 0, 0]);
    assert_eq!(coh_pn(2, -3), vec![0, 0, 1]);
}
