mod common;

use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use simclass::classify::{class_list, class_number, classify, level, similar, ClassNumber};
use simclass::dedekind::{
    default_x0, is_free, is_principal, lattice_from_generators, mult_matrix, r_span, steinitz, FracIdealR, Freeness,
    LElem, LLattice, QuadBase,
};
use simclass::hnf::{hnf, rat_hnf, solve_in_span};
use simclass::linalg::Matrix;
use simclass::parse::parse_poly;
use simclass::rings::{rat_of, KElem, ScalarField, Val};

type M = [[i64; 2]; 2];

fn residue_matrix(a: &Matrix, m: i64) -> M {
    let r = |i: usize, j: usize| {
        let x = rat_of(a.get(i, j));
        let m = BigInt::from(m);
        let inv = x.denom().extended_gcd(&m).x;
        (x.numer() * inv).mod_floor(&m).to_i64().unwrap()
    };
    [[r(0, 0), r(0, 1)], [r(1, 0), r(1, 1)]]
}

/// Every `U` in `M_2(Z/m)`, checking `U A = B U` and `gcd(det U, p) = 1`.
fn brute_conjugate(a: M, b: M, p: i64, m: i64) -> bool {
    for u0 in 0..m {
        for u1 in 0..m {
            for u2 in 0..m {
                for u3 in 0..m {
                    let det = (u0 * u3 - u1 * u2).rem_euclid(m);
                    if det % p == 0 {
                        continue;
                    }
                    let u = [[u0, u1], [u2, u3]];
                    let ok = (0..2).all(|i| {
                        (0..2).all(|j| {
                            let l = u[i][0] * a[0][j] + u[i][1] * a[1][j];
                            let r = b[i][0] * u[0][j] + b[i][1] * u[1][j];
                            (l - r).rem_euclid(m) == 0
                        })
                    });
                    if ok {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[test]
fn similarity_matches_brute_force_mod_prime_powers() {
    let mut g = rng(11);
    for (p, n) in [(2i64, 3u32), (3, 2), (5, 1), (2, 2)] {
        let ring = zloc(p as u64);
        let m = p.pow(n);
        let mut checked = 0;
        while checked < 60 {
            let (a, b) = rand_pair(&ring, &mut g, n as i64 - 1);
            let below = |x: &Matrix| matches!(level(&ring, x), Val::Fin(k) if k < n as i64);
            if !below(&a) || !below(&b) {
                continue;
            }
            let brute = brute_conjugate(residue_matrix(&a, m), residue_matrix(&b, m), p, m);
            assert_eq!(similar(&ring, &a, &b).unwrap(), brute, "p={p} n={n} {a:?} {b:?}");
            checked += 1;
        }
    }
}

/// Orbits of `GL_2(Z/m)` on the reductions of integer matrices with characteristic
/// polynomial exactly `x^2 - tr x + det`, restricted to reductions of level below `n`.
fn brute_orbit_count(tr: i64, det: i64, p: i64, n: u32) -> usize {
    let m = p.pow(n);
    let mut mats: Vec<M> = Vec::new();
    for x in -12i64..=12 {
        // x (tr - x) - y z = det
        let rhs = x * (tr - x) - det;
        let mut yz = Vec::new();
        if rhs == 0 {
            for t in -12i64..=12 {
                yz.push((0, t));
                yz.push((t, 0));
            }
        } else {
            for y in 1..=rhs.abs() {
                if rhs % y == 0 {
                    yz.push((y, rhs / y));
                    yz.push((-y, -rhs / y));
                }
            }
        }
        for (y, z) in yz {
            let a = [[x.rem_euclid(m), y.rem_euclid(m)], [z.rem_euclid(m), (tr - x).rem_euclid(m)]];
            let scalar = a[0][1] == 0 && a[1][0] == 0 && a[0][0] == a[1][1];
            if !scalar && !mats.contains(&a) {
                mats.push(a);
            }
        }
    }
    let mut reps: Vec<M> = Vec::new();
    for a in mats {
        if !reps.iter().any(|s| brute_conjugate(a, *s, p, m)) {
            reps.push(a);
        }
    }
    reps.len()
}

#[test]
fn class_numbers_match_orbit_counts() {
    // f = x^2 - tr x + det irreducible with v(Delta) small enough that every class has level < n
    for (p, n, tr, det) in [(3i64, 2u32, 0i64, -2i64), (3, 2, 0, 1), (5, 1, 0, -2), (2, 3, 1, -1), (2, 3, 0, 1), (3, 2, 0, -18)] {
        let ring = zloc(p as u64);
        let f = poly(&ring, &format!("x^2-({tr})*x+({det})"));
        let ClassNumber::Finite(c) = class_number(&ring, &f, None).unwrap() else { panic!() };
        let below = class_list(&ring, &f, None)
            .unwrap()
            .iter()
            .filter(|x| matches!(level(&ring, &simclass::classify::canonical_matrix(x).unwrap()), Val::Fin(k) if k < n as i64))
            .count();
        assert!(below as u64 <= c);
        assert_eq!(brute_orbit_count(tr, det, p, n), below, "p={p} n={n} f={f:?}");
    }
}

fn brute_hnf_check(rows: &[Vec<BigInt>]) {
    let h = hnf(rows);
    let rat = |v: &[Vec<BigInt>]| -> Vec<Vec<BigRational>> {
        v.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
    };
    for (i, r) in h.iter().enumerate() {
        let j = r.iter().position(|x| !x.is_zero()).unwrap();
        assert!(r[j].is_positive());
        for above in &h[..i] {
            assert!(!above[j].is_negative() && above[j] < r[j]);
        }
        for below in &h[i + 1..] {
            assert!(below[..=j].iter().all(Zero::is_zero));
        }
    }
    let (hr, or) = (rat(&h), rat(rows));
    for r in &or {
        assert!(solve_in_span(&hr, r).is_some());
    }
    for r in &hr {
        let c = solve_in_span(&or, r).unwrap();
        let back: Vec<BigInt> =
            (0..r.len()).map(|j| c.iter().zip(rows).map(|(ci, row)| ci * &row[j]).sum()).collect();
        assert_eq!(back.iter().map(|x| BigRational::from_integer(x.clone())).collect::<Vec<_>>(), *r);
    }
}

#[test]
fn hnf_is_an_echelon_basis_of_the_same_lattice() {
    let mut g = rng(12);
    for _ in 0..300 {
        let nr = g.gen_range(1..=5);
        let nc = g.gen_range(1..=4);
        let rows: Vec<Vec<BigInt>> =
            (0..nr).map(|_| (0..nc).map(|_| BigInt::from(g.gen_range(-30..=30))).collect()).collect();
        brute_hnf_check(&rows);
        let scaled: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), BigInt::from(6))).collect())
            .collect();
        let mut perm = scaled.clone();
        perm.reverse();
        assert_eq!(rat_hnf(&scaled), rat_hnf(&perm));
    }
}

fn ideal_is_principal_brute(base: &QuadBase, i: &FracIdealR) -> bool {
    let [mut z1, mut z2] = i.z_basis(base);
    let n = i.norm();
    let norm = |u: &KElem| base.norm(u);
    // Lagrange reduction of the basis under the norm form
    loop {
        if norm(&z2) < norm(&z1) {
            std::mem::swap(&mut z1, &mut z2);
        }
        let dot = (norm(&base.add(&z1, &z2)) - norm(&z1) - norm(&z2)) / BigRational::from_integer(2.into());
        let ratio = dot / norm(&z1);
        if ratio.abs() * BigRational::from_integer(2.into()) <= BigRational::one() {
            break;
        }
        let mu = ratio.round();
        z2 = base.sub(&z2, &base.mul(&base.elem(mu, BigRational::zero()), &z1));
    }
    // N(u z1 + v z2) is a positive definite form in (u, v); bound its minimum eigenvalue
    let (a, c) = (norm(&z1), norm(&z2));
    let b = norm(&base.add(&z1, &z2)) - &a - &c;
    let f = |x: &BigRational| x.to_f64().unwrap();
    let (fa, fb, fc) = (f(&a), f(&b), f(&c));
    let lam = (fa + fc) / 2.0 - (((fa - fc) / 2.0).powi(2) + (fb / 2.0).powi(2)).sqrt();
    let r = (f(&n) / lam).sqrt().ceil() as i64 + 1;
    for u in -r..=r {
        for v in -r..=r {
            let x = base.add(&base.mul(&base.from_int(u), &z1), &base.mul(&base.from_int(v), &z2));
            if !x.is_zero() && norm(&x) == n {
                return true;
            }
        }
    }
    false
}

fn det_ideal(j: &LLattice) -> FracIdealR {
    let b = j.base();
    let zb = j.z_basis();
    let mut g = Vec::new();
    for u in &zb {
        for v in &zb {
            g.push(b.sub(&b.mul(&u.x, &v.y), &b.mul(&u.y, &v.x)));
        }
    }
    g.retain(|x| !x.is_zero());
    FracIdealR::from_gens(b, &g).unwrap()
}

fn rand_lelem<R: Rng>(base: &QuadBase, g: &mut R) -> LElem {
    let mut q = || BigRational::new(g.gen_range(-6..=6).into(), g.gen_range(1..=3).into());
    LElem::from_coords(base, &[q(), q(), q(), q()])
}

#[test]
fn freeness_matches_principality_of_the_determinant_ideal() {
    let mut g = rng(13);
    let mut seen = (0, 0);
    for d in [-5i64, -6, -1, -2, -10, -13] {
        let base = QuadBase::new(d).unwrap();
        for fs in ["x^2-2", "x^2-x+7", "x^2+3", "x^2-3x+1", "x^2+x+2"] {
            let f = parse_poly(&base, fs).unwrap();
            for _ in 0..8 {
                let gens: Vec<LElem> = (0..g.gen_range(1..=2)).map(|_| rand_lelem(&base, &mut g)).collect();
                let j = match lattice_from_generators(&base, &f, &gens) {
                    Ok(j) => j,
                    Err(simclass::Error::NotFullRank | simclass::Error::NotIrreducible) => continue,
                    Err(e) => panic!("{e:?}"),
                };
                let x0 = default_x0(&j);
                let st = steinitz(&j, &x0).unwrap();
                let det = det_ideal(&j);
                assert_eq!(det, st.scale(&base, &x0.y).unwrap(), "d={d} f={fs}");
                let brute = ideal_is_principal_brute(&base, &det);
                assert_eq!(is_principal(&base, &st).is_some(), brute);
                match is_free(&j) {
                    Freeness::Free(b) => {
                        seen.0 += 1;
                        assert!(brute, "d={d} f={fs}: free but Steinitz class nontrivial");
                        assert_eq!(r_span(&base, &[b.b1.clone(), b.b2.clone()]), j.hnf());
                        let a = mult_matrix(&j, &b).unwrap();
                        assert_eq!(a.char_poly(&base), f);
                        assert!(a.entries().all(|x| base.is_integral(x)));
                    }
                    Freeness::NotFree { steinitz } => {
                        seen.1 += 1;
                        assert!(!brute, "d={d} f={fs}: Steinitz class trivial but reported not free");
                        assert_eq!(steinitz, st);
                    }
                }
            }
        }
    }
    assert!(seen.0 > 0 && seen.1 > 0, "{seen:?}");
}

#[test]
fn principal_ideals_have_generators() {
    let mut g = rng(14);
    for d in [-1i64, -2, -5, -6, -14] {
        let base = QuadBase::new(d).unwrap();
        for _ in 0..40 {
            let x = base.elem(BigRational::from_integer(g.gen_range(-9..=9).into()), BigRational::from_integer(g.gen_range(-9..=9).into()));
            let y = base.elem(BigRational::from_integer(g.gen_range(-9..=9).into()), BigRational::from_integer(g.gen_range(-9..=9).into()));
            if x.is_zero() {
                continue;
            }
            let px = FracIdealR::from_gens(&base, std::slice::from_ref(&x)).unwrap();
            let gen = is_principal(&base, &px).unwrap();
            assert_eq!(FracIdealR::from_gens(&base, &[gen]).unwrap(), px);
            if y.is_zero() {
                continue;
            }
            let i = FracIdealR::from_gens(&base, &[x, y]).unwrap();
            assert_eq!(is_principal(&base, &i).is_some(), ideal_is_principal_brute(&base, &i), "d={d} {i}");
            assert!(BigRational::one() <= i.norm() || !i.is_integral());
        }
    }
}

#[test]
fn classify_agrees_with_level_on_integer_samples() {
    let mut g = rng(15);
    let ring = zloc(3);
    for _ in 0..200 {
        let a = rand_matrix(&ring, &mut g);
        let b = conjugate(&ring, &rand_gl2(&ring, &mut g), &a.transpose());
        assert_eq!(classify(&ring, &a).unwrap(), classify(&ring, &b).unwrap());
    }
}
