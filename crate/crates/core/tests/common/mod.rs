#![allow(dead_code)]

pub mod suites;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use simclass::linalg::Matrix;
use simclass::parse::{parse_elem, parse_poly};
use simclass::poly::MonicPoly;
use simclass::rings::{KElem, Ramification, RingDesc, ScalarField, Val};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn zloc(p: u64) -> RingDesc {
    RingDesc::zloc(p).unwrap()
}

pub fn fptloc(p: u64) -> RingDesc {
    RingDesc::fptloc(p).unwrap()
}

/// `Z_(2)[w]` with `w^2 = w + 1`, so `2w - 1 = sqrt 5`.
pub fn golden() -> RingDesc {
    RingDesc::quad_ext(zloc(2), KElem::int(1), KElem::int(1), Ramification::Unramified).unwrap()
}

/// `Z_(2)[w]` with `w^2 = 2`.
pub fn eisenstein2() -> RingDesc {
    RingDesc::quad_ext(zloc(2), KElem::int(0), KElem::int(2), Ramification::Eisenstein).unwrap()
}

pub fn test_rings() -> Vec<RingDesc> {
    vec![zloc(2), zloc(3), zloc(5), fptloc(2), fptloc(3), golden(), eisenstein2()]
}

pub fn elem(ring: &RingDesc, s: &str) -> KElem {
    parse_elem(ring, s).unwrap()
}

pub fn poly(ring: &RingDesc, s: &str) -> MonicPoly {
    parse_poly(ring, s).unwrap()
}

pub fn mat(ring: &RingDesc, rows: [[&str; 2]; 2]) -> Matrix {
    let e = |s: &str| elem(ring, s);
    Matrix::m2(e(rows[0][0]), e(rows[0][1]), e(rows[1][0]), e(rows[1][1]))
}

/// A random integral element with small coefficients.
pub fn rand_int<R: Rng>(ring: &RingDesc, rng: &mut R) -> KElem {
    match ring {
        RingDesc::ZLoc { .. } => KElem::int(rng.gen_range(-12..=12)),
        RingDesc::FpTLoc { p } => {
            let deg = rng.gen_range(0..=3);
            let mut s = String::from("0");
            for i in 0..=deg {
                let c = rng.gen_range(0..*p);
                if c != 0 {
                    s.push_str(&format!("+{c}*t^{i}"));
                }
            }
            elem(ring, &s)
        }
        RingDesc::QuadExt(e) => {
            let base = e.base().clone();
            KElem::quad(rand_int(&base, rng), rand_int(&base, rng))
        }
    }
}

/// A random element of `K`, integral or not.
pub fn rand_field<R: Rng>(ring: &RingDesc, rng: &mut R) -> KElem {
    let x = rand_int(ring, rng);
    let k = rng.gen_range(-3..=3);
    let u = loop {
        let u = rand_int(ring, rng);
        if ring.is_unit(&u) {
            break u;
        }
    };
    ring.div(&ring.mul(&x, &ring.pi_pow(k)), &u).unwrap()
}

/// A random matrix in `GL_2(R)`.
pub fn rand_gl2<R: Rng>(ring: &RingDesc, rng: &mut R) -> Matrix {
    loop {
        let u = Matrix::m2(rand_int(ring, rng), rand_int(ring, rng), rand_int(ring, rng), rand_int(ring, rng));
        if ring.is_unit(&u.det(ring)) {
            return u;
        }
    }
}

/// `c I + pi^k M` with random `c`, `M`, and `k <= 3`.
pub fn rand_matrix<R: Rng>(ring: &RingDesc, rng: &mut R) -> Matrix {
    let c = rand_int(ring, rng);
    let k = rng.gen_range(0..=3);
    let pk = ring.pi_pow(k);
    let m = Matrix::m2(rand_int(ring, rng), rand_int(ring, rng), rand_int(ring, rng), rand_int(ring, rng));
    Matrix::scalar(ring, 2, &c).add(ring, &m.scale(ring, &pk))
}

pub fn conjugate(ring: &RingDesc, u: &Matrix, a: &Matrix) -> Matrix {
    u.mul(ring, a).mul(ring, &u.inverse(ring).unwrap())
}

/// Two matrices with the same characteristic polynomial and independently
/// chosen levels, each hidden behind a random conjugation.
///
/// Uses `[[-r, pi^l], [T/pi^l, a + r]]` with `T = b - r(r + a)`.
pub fn rand_pair<R: Rng>(ring: &RingDesc, rng: &mut R, max_level: i64) -> (Matrix, Matrix) {
    loop {
        let a = rand_int(ring, rng);
        let r = rand_int(ring, rng);
        let k = rng.gen_range(0..=2 * max_level + 1);
        let t = ring.mul(&rand_int(ring, rng), &ring.pi_pow(k));
        let vt = match ring.val(&t) {
            Val::Fin(v) => v.min(max_level),
            Val::Inf => max_level,
        };
        let l1 = rng.gen_range(0..=vt);
        let l2 = rng.gen_range(0..=vt);
        let family = |l: i64| {
            let pl = ring.pi_pow(l);
            Matrix::m2(ring.neg(&r), pl.clone(), ring.div(&t, &pl).unwrap(), ring.add(&a, &r))
        };
        let (m1, m2) = (family(l1), family(l2));
        if !m1.is_integral(ring) || !m2.is_integral(ring) {
            continue;
        }
        return (conjugate(ring, &rand_gl2(ring, rng), &m1), conjugate(ring, &rand_gl2(ring, rng), &m2));
    }
}

/// `2x2` product written out by hand.
pub fn mul2(ring: &RingDesc, x: &Matrix, y: &Matrix) -> [[KElem; 2]; 2] {
    let e = |i: usize, j: usize| {
        ring.add(&ring.mul(x.get(i, 0), y.get(0, j)), &ring.mul(x.get(i, 1), y.get(1, j)))
    };
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// `U A = B U`, `U` integral and `det U` a unit, checked without library matrix helpers.
pub fn is_conjugator(ring: &RingDesc, u: &Matrix, a: &Matrix, b: &Matrix) -> bool {
    let det = ring.sub(&ring.mul(u.get(0, 0), u.get(1, 1)), &ring.mul(u.get(0, 1), u.get(1, 0)));
    mul2(ring, u, a) == mul2(ring, b, u) && u.entries().all(|x| ring.is_integral(x)) && ring.is_unit(&det)
}
