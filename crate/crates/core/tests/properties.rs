mod common;

use common::suites::{self, check_reduce_form, check_valuation};
use common::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use simclass::classify::{classify, level};
use simclass::rings::{KElem, Val};

const CASES: u32 = 256;

fn cfg() -> Config {
    Config { cases: CASES, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..Config::default() }
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn valuation_axioms_on_rationals(p in prop::sample::select(vec![2u64, 3, 5, 7]),
                                     a in -2000i64..2000, b in 1i64..2000, c in -2000i64..2000, d in 1i64..2000) {
        let ring = zloc(p);
        check_valuation(&ring, &KElem::rat(a, b), &KElem::rat(c, d));
        prop_assert_eq!(ring.val(&KElem::int(0)), Val::Inf);
    }

    #[test]
    fn classify_is_conjugation_invariant(p in prop::sample::select(vec![2u64, 3, 5]), seed in any::<u64>()) {
        let ring = zloc(p);
        let mut g = rng(seed);
        let a = rand_matrix(&ring, &mut g);
        let b = conjugate(&ring, &rand_gl2(&ring, &mut g), &a);
        prop_assert_eq!(classify(&ring, &a).unwrap(), classify(&ring, &b).unwrap());
        prop_assert_eq!(level(&ring, &a), level(&ring, &b));
    }

    #[test]
    fn reduce_form_is_idempotent(a in 1i64..400, b in -400i64..400, c in 1i64..400) {
        prop_assume!(b * b - 4 * a * c < 0);
        check_reduce_form(a, b, c);
    }
}

#[test]
fn valuation_axioms_on_all_rings() {
    suites::valuation_axioms(1, CASES);
}

#[test]
fn classify_is_conjugation_invariant_on_all_rings() {
    suites::conjugation_invariance(2, CASES);
}

#[test]
fn witnesses_are_exact() {
    suites::witness_soundness(3, CASES);
}

#[test]
fn matrices_are_similar_to_their_transposes() {
    suites::transpose_similarity(4, CASES);
}

#[test]
fn canonical_matrix_round_trip() {
    suites::canonical_round_trip(5, CASES);
}

#[test]
fn equivalence_ignores_scaling() {
    suites::scaling_invariance(6, CASES);
}

#[test]
fn reduced_forms_on_seeded_samples() {
    suites::reduce_form_properties(7, CASES);
}

#[test]
fn oracle_soundness() {
    suites::oracle_soundness(8, CASES);
}
