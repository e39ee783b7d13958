//! Seeded property loops shared by the property tests and the acceptance run.

use num_bigint::BigInt;
use rand::Rng;

use simclass::classify::{canonical_matrix, classify, similar, witness};
use simclass::linalg::Matrix;
use simclass::lm::{equivalent, is_non_zero_divisor, matrix_to_ideal, reduce_form, BQForm, LmRing};
use simclass::oracle::{conj_search_mod, verify_mod};
use simclass::rings::{rat_of, Integers, KElem, RingDesc, ScalarField, Val};

use super::*;

pub fn check_valuation(ring: &RingDesc, x: &KElem, y: &KElem) {
    let (vx, vy) = (ring.val(x), ring.val(y));
    assert_eq!(ring.val(&ring.mul(x, y)), vx + vy, "{x} * {y}");
    assert!(ring.val(&ring.add(x, y)) >= vx.min(vy), "{x} + {y}");
    if vx != vy {
        assert_eq!(ring.val(&ring.add(x, y)), vx.min(vy));
    }
    assert_eq!(ring.val(&ring.neg(x)), vx);
    if !x.is_zero() {
        assert_eq!(ring.val(&ring.inv(x).unwrap()), Val::Fin(-vx.fin().unwrap()));
        assert!(ring.is_unit(&ring.unit_part(x)));
    } else {
        assert_eq!(vx, Val::Inf);
    }
    assert_eq!(ring.is_integral(x), vx.ge(0));
}

pub fn valuation_axioms(seed: u64, cases: u32) {
    let mut g = rng(seed);
    for ring in test_rings() {
        assert_eq!(ring.val(&ring.one()), Val::Fin(0));
        assert_eq!(ring.val(&ring.uniformizer()), Val::Fin(1));
        for _ in 0..cases {
            let x = rand_field(&ring, &mut g);
            let y = rand_field(&ring, &mut g);
            check_valuation(&ring, &x, &y);
        }
    }
}

pub fn conjugation_invariance(seed: u64, cases: u32) {
    let mut g = rng(seed);
    for ring in test_rings() {
        for _ in 0..cases {
            let a = rand_matrix(&ring, &mut g);
            let b = conjugate(&ring, &rand_gl2(&ring, &mut g), &a);
            assert_eq!(classify(&ring, &a).unwrap(), classify(&ring, &b).unwrap(), "{ring:?} {a:?}");
        }
    }
}

pub fn witness_soundness(seed: u64, cases: u32) {
    let mut g = rng(seed);
    for ring in test_rings() {
        let mut found = 0;
        for _ in 0..cases {
            let (a, b) = rand_pair(&ring, &mut g, 3);
            match witness(&ring, &a, &b).unwrap() {
                Some(w) => {
                    found += 1;
                    assert!(is_conjugator(&ring, &w.u, &a, &b), "{ring:?} {a:?} {b:?}");
                }
                None => assert!(!similar(&ring, &a, &b).unwrap()),
            }
        }
        assert!(found > 0, "{ring:?}: no similar pairs generated");
    }
}

pub fn transpose_similarity(seed: u64, cases: u32) {
    let mut g = rng(seed);
    for ring in test_rings() {
        for _ in 0..cases {
            let a = rand_matrix(&ring, &mut g);
            let at = a.transpose();
            let w = witness(&ring, &a, &at).unwrap();
            let w = w.unwrap_or_else(|| panic!("{ring:?}: {a:?} not similar to its transpose"));
            assert!(is_conjugator(&ring, &w.u, &a, &at));
        }
    }
}

pub fn canonical_round_trip(seed: u64, cases: u32) {
    let mut g = rng(seed);
    for ring in test_rings() {
        for _ in 0..cases {
            let a = rand_matrix(&ring, &mut g);
            let form = classify(&ring, &a).unwrap();
            let c = canonical_matrix(&form).unwrap();
            assert_eq!(classify(&ring, &c).unwrap(), form, "{ring:?} {a:?}");
            assert_eq!(c.char_poly(&ring), a.char_poly(&ring));
            assert!(similar(&ring, &a, &c).unwrap());
        }
    }
}

fn scaling_case<F: ScalarField>(field: &LmRing, base: &F, a: &Matrix, alpha: &[KElem]) -> bool {
    let f = a.char_poly(base);
    if !is_non_zero_divisor(base, &f, alpha) {
        return false;
    }
    let j = matrix_to_ideal(base, &f, a).unwrap();
    let scaled = j.scale(base, alpha);
    assert!(equivalent(field, &j, &scaled).unwrap(), "{a:?} scaled by {alpha:?}");
    true
}

pub fn scaling_invariance(seed: u64, cases: u32) {
    let mut g = rng(seed);
    let mut count = 0;
    while count < cases {
        let mut e = || KElem::int(g.gen_range(-9..=9));
        let m = Matrix::m2(e(), e(), e(), e());
        let tr = rat_of(&m.trace(&Integers)).to_integer();
        let det = rat_of(&m.det(&Integers)).to_integer();
        if &tr * &tr - 4 * &det >= BigInt::from(0) {
            continue;
        }
        let mut r = || KElem::rat(g.gen_range(-20..=20), g.gen_range(1..=6));
        let alpha = [r(), r()];
        if scaling_case(&LmRing::Integers, &Integers, &m, &alpha) {
            count += 1;
        }
    }
    for ring in [zloc(2), zloc(3), fptloc(2), golden()] {
        let field = LmRing::Dvr(ring.clone());
        let mut count = 0;
        while count < cases {
            let a = rand_matrix(&ring, &mut g);
            let alpha = [rand_field(&ring, &mut g), rand_field(&ring, &mut g)];
            if a.char_poly(&ring).is_separable(&ring) && scaling_case(&field, &field, &a, &alpha) {
                count += 1;
            }
        }
    }
}

pub fn check_reduce_form(a: i64, b: i64, c: i64) {
    let f = BQForm::new(a, b, c);
    let r = reduce_form(&f).unwrap();
    assert!(r.is_reduced(), "{f:?} -> {r:?}");
    assert_eq!(r.discriminant(), f.discriminant());
    assert_eq!(reduce_form(&r).unwrap(), r);
    // an SL2 change of variables lands on the same reduced form
    let shifted = BQForm { a: BigInt::from(a), b: BigInt::from(b + 2 * a), c: BigInt::from(a + b + c) };
    assert_eq!(reduce_form(&shifted).unwrap(), r);
    let swapped = BQForm { a: BigInt::from(c), b: BigInt::from(-b), c: BigInt::from(a) };
    assert_eq!(reduce_form(&swapped).unwrap(), r);
}

pub fn reduce_form_properties(seed: u64, cases: u32) {
    let mut g = rng(seed);
    let mut count = 0;
    while count < cases {
        let (a, b, c) = (g.gen_range(1..400i64), g.gen_range(-400..400i64), g.gen_range(1..400i64));
        if b * b - 4 * a * c >= 0 {
            continue;
        }
        check_reduce_form(a, b, c);
        count += 1;
    }
}

/// Direction (i): no residue witness means not similar.
/// Direction (ii): similar means the exact witness reduces to a residue witness
/// and the search finds one.
pub fn oracle_soundness(seed: u64, cases: u32) {
    let mut g = rng(seed);
    for (ring, n) in [(zloc(2), 3), (zloc(3), 2), (fptloc(2), 3), (zloc(5), 1)] {
        let (mut yes, mut no) = (0, 0);
        for _ in 0..cases {
            let (a, b) = rand_pair(&ring, &mut g, 3);
            let found = conj_search_mod(&ring, &a, &b, n, 1_000_000).unwrap();
            let sim = similar(&ring, &a, &b).unwrap();
            match &found {
                Some(w) => assert!(verify_mod(&ring, &w.u, &a, &b, n)),
                None => {
                    no += 1;
                    assert!(!sim, "{ring:?}: no residue witness mod pi^{n} for a similar pair");
                }
            }
            if sim {
                yes += 1;
                let u = witness(&ring, &a, &b).unwrap().unwrap().u;
                assert!(verify_mod(&ring, &u, &a, &b, n));
                assert!(found.is_some());
            }
        }
        assert!(yes > 0 && no > 0, "{ring:?}: degenerate sample ({yes} similar, {no} separated)");
    }
}

pub type Suite = (&'static str, fn(u64, u32));

pub const SUITES: [Suite; 8] = [
    ("valuation axioms", valuation_axioms),
    ("conjugation invariance of classify", conjugation_invariance),
    ("witness soundness", witness_soundness),
    ("transpose similarity", transpose_similarity),
    ("classify/canonical_matrix round trip", canonical_round_trip),
    ("scaling invariance of equivalent", scaling_invariance),
    ("reduce_form idempotence and discriminant", reduce_form_properties),
    ("oracle soundness", oracle_soundness),
];
