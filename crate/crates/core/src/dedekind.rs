//! Lattices in a quadratic extension `L = K(theta)` of an imaginary quadratic
//! field `K = Q(w)`, `w^2 = d`, over the base ring `R = Z[w]`.
//!
//! A full lattice `J` splits as `J = a (x0 + u0) + (J ∩ K)` for the coefficient
//! ideal `a` of any `x0` outside `K`, so `J` is free over `R` exactly when the
//! Steinitz ideal `a (J ∩ K)` is principal.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hnf::{common_den, hnf, rat_hnf, solve_in_span};
use crate::linalg::Matrix;
use crate::poly::MonicPoly;
use crate::rings::{quad_inv, quad_mul, rat_of, Integers, KElem, ScalarField};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn rat_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}

/// `Q(w)` with `w^2 = d`, `d < 0` squarefree and `d ≡ 2, 3 (mod 4)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadBase {
    d: i64,
}

impl QuadBase {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::NotImaginaryQuadratic);
        }
        let squarefree = (2..).take_while(|p| p * p <= -d).all(|p| (-d) % (p * p) != 0);
        if !squarefree || d.rem_euclid(4) == 1 {
            return Err(Error::InvalidParams(format!("d = {d} must be squarefree with d = 2, 3 mod 4")));
        }
        Ok(QuadBase { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn elem(&self, x: BigRational, y: BigRational) -> KElem {
        KElem::quad(KElem::Rat(x), KElem::Rat(y))
    }

    pub fn w(&self) -> KElem {
        self.elem(q(0), q(1))
    }

    /// `(x, y)` with `u = x + y w`.
    pub fn split(&self, u: &KElem) -> (BigRational, BigRational) {
        match u {
            KElem::Rat(r) => (r.clone(), q(0)),
            _ => {
                let (x, y) = u.parts().expect("element of Q(w)");
                (rat_of(x).clone(), rat_of(y).clone())
            }
        }
    }

    pub fn conj(&self, u: &KElem) -> KElem {
        let (x, y) = self.split(u);
        self.elem(x, -y)
    }

    pub fn norm(&self, u: &KElem) -> BigRational {
        let (x, y) = self.split(u);
        &x * &x - q(self.d) * &y * &y
    }

    /// A square root in `K`, if one exists.
    pub fn sqrt(&self, u: &KElem) -> Option<KElem> {
        let (x, y) = self.split(u);
        let n = rat_sqrt(&self.norm(u))?;
        for s in [n.clone(), -n] {
            let p2 = (&x + &s) / q(2);
            let Some(p) = rat_sqrt(&p2) else { continue };
            let cand = if p.is_zero() {
                match rat_sqrt(&(&x / q(self.d))) {
                    Some(y) => self.elem(q(0), y),
                    None => continue,
                }
            } else {
                self.elem(p.clone(), &y / (q(2) * &p))
            };
            if self.mul(&cand, &cand) == self.elem(x.clone(), y.clone()) {
                return Some(cand);
            }
        }
        None
    }
}

impl ScalarField for QuadBase {
    fn zero(&self) -> KElem {
        self.elem(q(0), q(0))
    }

    fn from_bigint(&self, n: &BigInt) -> KElem {
        self.elem(BigRational::from_integer(n.clone()), q(0))
    }

    fn mul(&self, x: &KElem, y: &KElem) -> KElem {
        let (x, y) = (self.lift(x), self.lift(y));
        quad_mul(&Integers, &KElem::int(0), &KElem::int(self.d), &x, &y)
    }

    fn inv(&self, x: &KElem) -> Result<KElem> {
        quad_inv(&Integers, &KElem::int(0), &KElem::int(self.d), &self.lift(x))
    }

    fn is_integral(&self, x: &KElem) -> bool {
        let (a, b) = self.split(x);
        a.is_integer() && b.is_integer()
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn symbol(&self, name: &str) -> Option<KElem> {
        (name == "w").then(|| self.w())
    }
}

impl QuadBase {
    fn lift(&self, x: &KElem) -> KElem {
        let (a, b) = self.split(x);
        self.elem(a, b)
    }
}

impl fmt::Display for QuadBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[w], w^2 = {}", self.d)
    }
}

/// A fractional ideal `Z a + Z (b + c w)` of `R`, with `a, c > 0` and `0 <= b < a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FracIdealR {
    a: BigRational,
    b: BigRational,
    c: BigRational,
}

impl FracIdealR {
    /// The ideal whose `Z`-span is generated by `gens`.
    pub fn from_z_gens(base: &QuadBase, gens: &[KElem]) -> Result<Self> {
        let rows: Vec<Vec<BigRational>> = gens
            .iter()
            .map(|g| {
                let (x, y) = base.split(g);
                vec![y, x]
            })
            .collect();
        let h = rat_hnf(&rows);
        if h.len() != 2 || h[0][0].is_zero() {
            return Err(Error::NotFullRank);
        }
        let out = FracIdealR { a: h[1][1].clone(), b: h[0][1].clone(), c: h[0][0].clone() };
        let w = base.w();
        let [g1, g2] = out.z_basis(base);
        if !out.contains(base, &base.mul(&w, &g1)) || !out.contains(base, &base.mul(&w, &g2)) {
            return Err(Error::NotAnIdeal);
        }
        Ok(out)
    }

    /// The ideal `R g_1 + ... + R g_k`.
    pub fn from_gens(base: &QuadBase, gens: &[KElem]) -> Result<Self> {
        let w = base.w();
        let mut all = gens.to_vec();
        all.extend(gens.iter().map(|g| base.mul(g, &w)));
        Self::from_z_gens(base, &all)
    }

    pub fn unit(base: &QuadBase) -> Self {
        Self::from_gens(base, &[base.one()]).expect("R is an ideal")
    }

    pub fn z_basis(&self, base: &QuadBase) -> [KElem; 2] {
        [base.elem(self.a.clone(), q(0)), base.elem(self.b.clone(), self.c.clone())]
    }

    pub fn contains(&self, base: &QuadBase, u: &KElem) -> bool {
        let (x, y) = base.split(u);
        let n = &y / &self.c;
        n.is_integer() && ((x - n * &self.b) / &self.a).is_integer()
    }

    /// Index-style norm `a c`, multiplicative on fractional ideals.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.c
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer() && self.c.is_integer()
    }

    pub fn scale(&self, base: &QuadBase, k: &KElem) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g: Vec<KElem> = self.z_basis(base).iter().map(|g| base.mul(k, g)).collect();
        Self::from_z_gens(base, &g)
    }

    pub fn conj(&self, base: &QuadBase) -> Self {
        let g: Vec<KElem> = self.z_basis(base).iter().map(|g| base.conj(g)).collect();
        Self::from_z_gens(base, &g).expect("conjugate of an ideal")
    }

    pub fn inverse(&self, base: &QuadBase) -> Self {
        let n = base.elem(BigRational::one() / self.norm(), q(0));
        let inv = self.conj(base).scale(base, &n).expect("nonzero norm");
        debug_assert_eq!(ideal_mul(base, self, &inv), FracIdealR::unit(base));
        inv
    }
}

impl fmt::Display for FracIdealR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() && self.c == self.a {
            return write!(f, "({})", self.a);
        }
        let g = KElem::quad(KElem::Rat(self.b.clone()), KElem::Rat(self.c.clone()));
        write!(f, "({}, {})", self.a, g)
    }
}

pub fn ideal_mul(base: &QuadBase, i1: &FracIdealR, i2: &FracIdealR) -> FracIdealR {
    let mut g = Vec::new();
    for x in i1.z_basis(base) {
        for y in i2.z_basis(base) {
            g.push(base.mul(&x, &y));
        }
    }
    FracIdealR::from_z_gens(base, &g).expect("product of ideals")
}

/// A generator of `I`, searched among elements of norm `N(I)`.
pub fn is_principal(base: &QuadBase, ideal: &FracIdealR) -> Option<KElem> {
    let den = common_den(&[vec![ideal.a.clone(), ideal.b.clone(), ideal.c.clone()]]);
    let dk = base.from_bigint(&den);
    let j = ideal.scale(base, &dk).expect("nonzero");
    let n = j.norm().to_integer();
    let ad = BigInt::from(-base.d);
    let ymax = (&n / &ad).sqrt();
    let mut y = BigInt::zero();
    while y <= ymax {
        let rest = &n - &ad * &y * &y;
        let x = rest.sqrt();
        if &x * &x == rest {
            for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let alpha = base.elem(BigRational::from_integer(&x * sx), BigRational::from_integer(&y * sy));
                if FracIdealR::from_gens(base, std::slice::from_ref(&alpha)).ok().as_ref() == Some(&j) {
                    return Some(base.div(&alpha, &dk).expect("nonzero"));
                }
            }
        }
        y += 1;
    }
    None
}

/// `x + y theta` with `x, y` in `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LElem {
    pub x: KElem,
    pub y: KElem,
}

impl LElem {
    pub fn new(x: KElem, y: KElem) -> Self {
        LElem { x, y }
    }

    pub fn from_k(x: KElem, base: &QuadBase) -> Self {
        LElem { x, y: base.zero() }
    }

    /// From coordinates over `(1, w, theta, w theta)`.
    pub fn from_coords(base: &QuadBase, c: &[BigRational; 4]) -> Self {
        LElem { x: base.elem(c[0].clone(), c[1].clone()), y: base.elem(c[2].clone(), c[3].clone()) }
    }

    pub fn coords(&self, base: &QuadBase) -> [BigRational; 4] {
        let (x0, x1) = base.split(&self.x);
        let (y0, y1) = base.split(&self.y);
        [x0, x1, y0, y1]
    }

    pub fn add(&self, base: &QuadBase, o: &LElem) -> LElem {
        LElem { x: base.add(&self.x, &o.x), y: base.add(&self.y, &o.y) }
    }

    pub fn scale(&self, base: &QuadBase, k: &KElem) -> LElem {
        LElem { x: base.mul(k, &self.x), y: base.mul(k, &self.y) }
    }

    /// Product in `L`, using `theta^2 = a theta + b`.
    pub fn mul(&self, base: &QuadBase, a: &KElem, b: &KElem, o: &LElem) -> LElem {
        let u = KElem::quad(self.x.clone(), self.y.clone());
        let v = KElem::quad(o.x.clone(), o.y.clone());
        let p = quad_mul(base, a, b, &u, &v);
        let (x, y) = p.parts().unwrap();
        LElem { x: x.clone(), y: y.clone() }
    }
}

impl fmt::Display for LElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let y = self.y.to_string();
        match (self.x.is_zero(), self.y.is_zero()) {
            (_, true) => write!(f, "{}", self.x),
            (true, false) if y == "1" => write!(f, "th"),
            (true, false) => write!(f, "({y})*th"),
            (false, false) if y == "1" => write!(f, "{}+th", self.x),
            (false, false) => write!(f, "{}+({y})*th", self.x),
        }
    }
}

/// A full `R[theta]`-stable lattice in `L`, stored by the HNF of its `Z`-basis
/// in coordinates `(1, w, theta, w theta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LLattice {
    base: QuadBase,
    f: MonicPoly,
    a: KElem,
    b: KElem,
    hnf: Vec<Vec<BigRational>>,
}

fn z_gens(base: &QuadBase, elems: &[LElem]) -> Vec<Vec<BigRational>> {
    let w = base.w();
    let mut rows = Vec::new();
    for g in elems {
        rows.push(g.coords(base).to_vec());
        rows.push(g.scale(base, &w).coords(base).to_vec());
    }
    rows
}

/// HNF of the `R`-span of `elems`.
pub fn r_span(base: &QuadBase, elems: &[LElem]) -> Vec<Vec<BigRational>> {
    rat_hnf(&z_gens(base, elems))
}

pub fn lattice_from_generators(base: &QuadBase, f: &MonicPoly, gens: &[LElem]) -> Result<LLattice> {
    let (a, b) = f.quad_ab(base)?;
    if !base.is_integral(&a) || !base.is_integral(&b) {
        return Err(Error::NotIntegral);
    }
    let disc = base.add(&base.mul(&a, &a), &base.mul(&base.from_int(4), &b));
    if base.sqrt(&disc).is_some() {
        return Err(Error::NotIrreducible);
    }
    let theta = LElem::new(base.zero(), base.one());
    let mut all = gens.to_vec();
    all.extend(gens.iter().map(|g| g.mul(base, &a, &b, &theta)));
    let hnf = r_span(base, &all);
    if hnf.len() != 4 {
        return Err(Error::NotFullRank);
    }
    let j = LLattice { base: base.clone(), f: f.clone(), a, b, hnf };
    assert!(j.is_module(), "span is not closed under w and theta");
    Ok(j)
}

impl LLattice {
    pub fn base(&self) -> &QuadBase {
        &self.base
    }

    pub fn poly(&self) -> &MonicPoly {
        &self.f
    }

    pub fn hnf(&self) -> &[Vec<BigRational>] {
        &self.hnf
    }

    pub fn z_basis(&self) -> Vec<LElem> {
        self.hnf.iter().map(|r| LElem::from_coords(&self.base, &[r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone()])).collect()
    }

    pub fn contains(&self, z: &LElem) -> bool {
        solve_in_span(&self.hnf, &z.coords(&self.base)).is_some()
    }

    pub fn theta(&self) -> LElem {
        LElem::new(self.base.zero(), self.base.one())
    }

    pub fn mul(&self, x: &LElem, y: &LElem) -> LElem {
        x.mul(&self.base, &self.a, &self.b, y)
    }

    /// Closure under multiplication by `w` and by `theta`.
    pub fn is_module(&self) -> bool {
        let w = LElem::from_k(self.base.w(), &self.base);
        let th = self.theta();
        self.z_basis().iter().all(|z| self.contains(&self.mul(&w, z)) && self.contains(&self.mul(&th, z)))
    }

    fn integer_rows_perm(&self, perm: [usize; 4]) -> Vec<Vec<BigRational>> {
        let rows: Vec<Vec<BigRational>> =
            self.hnf.iter().map(|r| perm.iter().map(|&i| r[i].clone()).collect()).collect();
        rat_hnf(&rows)
    }
}

/// `J ∩ K`.
pub fn intersect_base(j: &LLattice) -> FracIdealR {
    let h = j.integer_rows_perm([2, 3, 0, 1]);
    let gens: Vec<KElem> = h
        .iter()
        .filter(|r| r[0].is_zero() && r[1].is_zero())
        .map(|r| j.base.elem(r[2].clone(), r[3].clone()))
        .collect();
    
    FracIdealR::from_z_gens(&j.base, &gens).expect("J ∩ K is a full ideal")
}

/// The image of `J` under `x + y theta -> y`.
pub fn projection(j: &LLattice) -> FracIdealR {
    let gens: Vec<KElem> = j.hnf.iter().map(|r| j.base.elem(r[2].clone(), r[3].clone())).collect();
    FracIdealR::from_z_gens(&j.base, &gens).expect("projection is a full ideal")
}

/// `theta / D` where `D` is the common denominator of the projection.
pub fn default_x0(j: &LLattice) -> LElem {
    let p = projection(j);
    let d = common_den(&[vec![p.a, p.b, p.c]]);
    LElem::new(j.base.zero(), j.base.elem(BigRational::new(1.into(), d), q(0)))
}

/// `{k in K : k x0 in J + K}`.
pub fn coefficient_ideal(j: &LLattice, x0: &LElem) -> Result<FracIdealR> {
    if x0.y.is_zero() {
        return Err(Error::X0InBase);
    }
    let yi = j.base.inv(&x0.y)?;
    projection(j).scale(&j.base, &yi)
}

pub fn steinitz(j: &LLattice, x0: &LElem) -> Result<FracIdealR> {
    Ok(ideal_mul(&j.base, &coefficient_ideal(j, x0)?, &intersect_base(j)))
}

/// An `R`-basis `(b1, b2)` of a free lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeBasis {
    pub b1: LElem,
    pub b2: LElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Freeness {
    Free(FreeBasis),
    NotFree { steinitz: FracIdealR },
}

/// An element of `J` whose `theta`-coordinate is `t`.
fn lift_projection(j: &LLattice, t: &KElem) -> LElem {
    let (t0, t1) = j.base.split(t);
    let proj: Vec<Vec<BigRational>> = j.hnf.iter().map(|r| vec![r[2].clone(), r[3].clone()]).collect();
    let n = solve_in_span(&proj, &[t0, t1]).expect("target lies in the projection");
    let mut z = LElem::new(j.base.zero(), j.base.zero());
    for (c, r) in n.iter().zip(j.z_basis()) {
        z = z.add(&j.base, &r.scale(&j.base, &j.base.from_bigint(c)));
    }
    z
}

/// `u0` in `K` with `a (x0 + u0) ⊆ J`, the first hit over coset representatives.
pub fn find_u0(j: &LLattice, x0: &LElem) -> Result<KElem> {
    let base = &j.base;
    let ca = coefficient_ideal(j, x0)?;
    let cb = intersect_base(j);
    let [k1, k2] = ca.z_basis(base);
    let w: Vec<KElem> = [&k1, &k2]
        .iter()
        .map(|k| {
            let z = lift_projection(j, &base.mul(k, &x0.y));
            base.sub(&z.x, &base.mul(k, &x0.x))
        })
        .collect();
    // b / (k1 a^-1 b) in coordinates of the Z-basis of b
    let sub = ideal_mul(base, &ca.inverse(base).scale(base, &k1)?, &cb);
    let bb = cb.z_basis(base);
    let brows: Vec<Vec<BigRational>> = bb.iter().map(|g| {
        let (x, y) = base.split(g);
        vec![x, y]
    }).collect();
    let srows: Vec<Vec<BigInt>> = sub
        .z_basis(base)
        .iter()
        .map(|g| {
            let (x, y) = base.split(g);
            solve_in_span(&brows, &[x, y]).expect("sublattice of J ∩ K")
        })
        .collect();
    let h = hnf(&srows);
    let (h11, h22) = (h[0][0].to_u64().expect("small index"), h[1][1].to_u64().expect("small index"));
    for i in 0..h11 {
        for jj in 0..h22 {
            let beta = base.add(&base.mul(&base.from_int(i as i64), &bb[0]), &base.mul(&base.from_int(jj as i64), &bb[1]));
            let u0 = base.div(&base.add(&w[0], &beta), &k1)?;
            if cb.contains(base, &base.sub(&base.mul(&k2, &u0), &w[1])) {
                return Ok(u0);
            }
        }
    }
    unreachable!("a coset representative always exists")
}

pub fn is_free(j: &LLattice) -> Freeness {
    let base = &j.base;
    let x0 = default_x0(j);
    let ca = coefficient_ideal(j, &x0).expect("x0 lies outside K");
    let cb = intersect_base(j);
    let st = ideal_mul(base, &ca, &cb);
    let Some(gamma) = is_principal(base, &st) else {
        return Freeness::NotFree { steinitz: st };
    };
    let u0 = find_u0(j, &x0).expect("x0 lies outside K");
    let y = LElem::new(base.add(&x0.x, &u0), x0.y.clone());
    let [k1, k2] = ca.z_basis(base);
    assert!(j.contains(&y.scale(base, &k1)) && j.contains(&y.scale(base, &k2)));
    let basis = match (is_principal(base, &ca), is_principal(base, &cb)) {
        (Some(alpha), Some(beta)) => FreeBasis { b1: LElem::from_k(beta, base), b2: y.scale(base, &alpha) },
        _ => {
            let inv = ca.inverse(base);
            let e = inv.z_basis(base);
            let rows: Vec<Vec<BigRational>> = [&k1, &k2]
                .iter()
                .flat_map(|k| e.iter().map(|g| {
                    let (x, yy) = base.split(&base.mul(k, g));
                    vec![x, yy]
                }))
                .collect();
            let n = solve_in_span(&rows, &[q(1), q(0)]).expect("a a^-1 = R");
            let comb = |c0: &BigInt, c1: &BigInt| {
                base.add(&base.mul(&base.from_bigint(c0), &e[0]), &base.mul(&base.from_bigint(c1), &e[1]))
            };
            let c1 = comb(&n[0], &n[1]);
            let c2 = comb(&n[2], &n[3]);
            let b1 = y.scale(base, &k1).add(base, &LElem::from_k(base.neg(&base.mul(&gamma, &c2)), base));
            let b2 = y.scale(base, &k2).add(base, &LElem::from_k(base.mul(&gamma, &c1), base));
            FreeBasis { b1, b2 }
        }
    };
    assert_eq!(r_span(base, &[basis.b1.clone(), basis.b2.clone()]), j.hnf, "free basis does not span J");
    Freeness::Free(basis)
}

/// The matrix `A` of multiplication by `theta` on a free basis: `theta b_i = sum_j A_ij b_j`.
pub fn mult_matrix(j: &LLattice, basis: &FreeBasis) -> Result<Matrix> {
    let base = &j.base;
    if r_span(base, &[basis.b1.clone(), basis.b2.clone()]) != j.hnf {
        return Err(Error::NotFree);
    }
    let th = j.theta();
    let bm = Matrix::m2(basis.b1.x.clone(), basis.b1.y.clone(), basis.b2.x.clone(), basis.b2.y.clone());
    let t1 = j.mul(&th, &basis.b1);
    let t2 = j.mul(&th, &basis.b2);
    let tm = Matrix::m2(t1.x, t1.y, t2.x, t2.y);
    let a = tm.mul(base, &bm.inverse(base)?);
    assert!(a.is_integral(base), "multiplication matrix is not over R");
    assert!(a.char_poly(base) == j.f, "multiplication matrix has the wrong characteristic polynomial");
    Ok(a)
}
