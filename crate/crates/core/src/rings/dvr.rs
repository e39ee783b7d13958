use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::elem::{KElem, Val};
use super::fp_poly::{FpPoly, RatFunc};
use super::{quad_inv, quad_mul, rat_of, ScalarField};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ramification {
    Unramified,
    Eisenstein,
}

/// A discrete valuation ring, described by how to compute in its fraction field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingDesc {
    /// `Z` localized at `p`.
    ZLoc { p: u64 },
    /// `F_p[t]` localized at `t`.
    FpTLoc { p: u64 },
    /// `base[w]` with `w^2 = a w + b`.
    QuadExt(Box<QuadExt>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    base: RingDesc,
    a: KElem,
    b: KElem,
    ramification: Ramification,
}

impl QuadExt {
    pub fn base(&self) -> &RingDesc {
        &self.base
    }

    /// Coefficients `(a, b)` of the relation `w^2 = a w + b`.
    pub fn relation(&self) -> (&KElem, &KElem) {
        (&self.a, &self.b)
    }

    pub fn ramification(&self) -> Ramification {
        self.ramification
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(Error::InvalidRing(format!("{p} is not a supported prime")));
    }
    Ok(())
}

fn big_val(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

impl RingDesc {
    pub fn zloc(p: u64) -> Result<RingDesc> {
        check_prime(p)?;
        Ok(RingDesc::ZLoc { p })
    }

    pub fn fptloc(p: u64) -> Result<RingDesc> {
        check_prime(p)?;
        Ok(RingDesc::FpTLoc { p })
    }

    /// Adjoins a root `w` of `x^2 - a x - b` to `base`.
    pub fn quad_ext(base: RingDesc, a: KElem, b: KElem, ramification: Ramification) -> Result<RingDesc> {
        match base {
            RingDesc::ZLoc { .. } => {}
            RingDesc::FpTLoc { p } if p != 2 => {}
            RingDesc::FpTLoc { .. } => {
                return Err(Error::Unsupported("quadratic extensions of F_2(t)".into()));
            }
            RingDesc::QuadExt(_) => return Err(Error::Unsupported("towers of quadratic extensions".into())),
        }
        if !base.contains(&a) || !base.contains(&b) {
            return Err(Error::InvalidRing("minimal polynomial coefficients must lie in the base".into()));
        }
        if !base.is_integral(&a) || !base.is_integral(&b) {
            return Err(Error::InvalidRing("minimal polynomial must be integral".into()));
        }
        match ramification {
            Ramification::Unramified => {
                for d in base.residue_field_reps() {
                    let f = base.sub(&base.sub(&base.mul(&d, &d), &base.mul(&a, &d)), &b);
                    if base.val(&f).ge(1) {
                        return Err(Error::InvalidRing("minimal polynomial is reducible mod p".into()));
                    }
                }
            }
            Ramification::Eisenstein => {
                if !base.val(&a).ge(1) || base.val(&b) != Val::Fin(1) {
                    return Err(Error::InvalidRing("minimal polynomial is not Eisenstein".into()));
                }
            }
        }
        Ok(RingDesc::QuadExt(Box::new(QuadExt { base, a, b, ramification })))
    }

    pub fn ext(&self) -> Option<&QuadExt> {
        match self {
            RingDesc::QuadExt(e) => Some(e),
            _ => None,
        }
    }

    /// Residue characteristic.
    pub fn prime(&self) -> u64 {
        match self {
            RingDesc::ZLoc { p } | RingDesc::FpTLoc { p } => *p,
            RingDesc::QuadExt(e) => e.base.prime(),
        }
    }

    /// Size of the residue field.
    pub fn residue_field_size(&self) -> u64 {
        match self {
            RingDesc::QuadExt(e) if e.ramification == Ramification::Unramified => self.prime() * self.prime(),
            _ => self.prime(),
        }
    }

    /// `q^n` if it fits in a `u128`.
    pub fn quotient_size(&self, n: u32) -> Option<u128> {
        (self.residue_field_size() as u128).checked_pow(n)
    }

    /// Whether `x` has the element shape used by this ring's fraction field.
    pub fn contains(&self, x: &KElem) -> bool {
        match (self, x) {
            (RingDesc::ZLoc { .. }, KElem::Rat(_)) => true,
            (RingDesc::FpTLoc { p }, KElem::Func(f)) => f.p() == *p,
            (RingDesc::QuadExt(e), KElem::Quad(q)) => e.base.contains(&q.0) && e.base.contains(&q.1),
            _ => false,
        }
    }

    pub fn val(&self, x: &KElem) -> Val {
        if x.is_zero() {
            return Val::Inf;
        }
        match self {
            RingDesc::ZLoc { p } => {
                let r = rat_of(x);
                Val::Fin(big_val(r.numer(), *p) - big_val(r.denom(), *p))
            }
            RingDesc::FpTLoc { .. } => match x {
                KElem::Func(f) => Val::Fin(f.val_t().expect("nonzero")),
                _ => panic!("expected an element of F_p(t), got {x:?}"),
            },
            RingDesc::QuadExt(e) => {
                let (u, w) = x.parts().expect("quadratic element");
                let (vu, vw) = (e.base.val(u), e.base.val(w));
                match e.ramification {
                    Ramification::Unramified => vu.min(vw),
                    Ramification::Eisenstein => {
                        let dbl = |v: Val| match v {
                            Val::Fin(k) => Val::Fin(2 * k),
                            Val::Inf => Val::Inf,
                        };
                        dbl(vu).min(dbl(vw) + Val::Fin(1))
                    }
                }
            }
        }
    }

    pub fn is_unit(&self, x: &KElem) -> bool {
        self.val(x) == Val::Fin(0)
    }

    /// Whether `x` divides `y` in the ring.
    pub fn divides(&self, x: &KElem, y: &KElem) -> bool {
        self.val(y) >= self.val(x)
    }

    /// `v(2)`; infinite in characteristic two.
    pub fn e(&self) -> Val {
        self.val(&self.from_int(2))
    }

    pub fn uniformizer(&self) -> KElem {
        match self {
            RingDesc::ZLoc { p } => KElem::int(*p as i64),
            RingDesc::FpTLoc { p } => KElem::Func(RatFunc::from_poly(FpPoly::monomial(*p, 1, 1))),
            RingDesc::QuadExt(e) => match e.ramification {
                Ramification::Unramified => self.embed(&e.base.uniformizer()),
                Ramification::Eisenstein => KElem::quad(e.base.zero(), e.base.one()),
            },
        }
    }

    /// `pi^k` for any integer `k`.
    pub fn pi_pow(&self, k: i64) -> KElem {
        let x = self.pow(&self.uniformizer(), k.unsigned_abs() as u32);
        if k < 0 {
            self.inv(&x).expect("uniformizer is nonzero")
        } else {
            x
        }
    }

    /// `x / pi^v(x)`; zero stays zero.
    pub fn unit_part(&self, x: &KElem) -> KElem {
        match self.val(x) {
            Val::Fin(v) => self.mul(x, &self.pi_pow(-v)),
            Val::Inf => x.clone(),
        }
    }

    /// Base element viewed in the extension.
    pub fn embed(&self, x: &KElem) -> KElem {
        match self {
            RingDesc::QuadExt(e) => KElem::quad(x.clone(), e.base.zero()),
            _ => x.clone(),
        }
    }

    /// Canonical representative of `x mod pi^n`; `x` must be integral.
    pub fn residue(&self, x: &KElem, n: u32) -> Result<KElem> {
        if !self.is_integral(x) {
            return Err(Error::NotIntegral);
        }
        Ok(match self {
            RingDesc::ZLoc { p } => {
                let m = BigInt::from(*p).pow(n);
                let r = rat_of(x);
                let g = r.denom().extended_gcd(&m);
                let inv = g.x.mod_floor(&m);
                let v = (r.numer() * inv).mod_floor(&m);
                KElem::Rat(BigRational::from_integer(v))
            }
            RingDesc::FpTLoc { .. } => {
                let KElem::Func(f) = x else { panic!("expected an element of F_p(t)") };
                let n = n as usize;
                let v = f.num().mul(&f.den().inv_series(n)).truncate(n);
                KElem::Func(RatFunc::from_poly(v))
            }
            RingDesc::QuadExt(e) => {
                let (u, w) = x.parts().expect("quadratic element");
                let (nu, nw) = match e.ramification {
                    Ramification::Unramified => (n, n),
                    Ramification::Eisenstein => (n.div_ceil(2), n / 2),
                };
                KElem::quad(e.base.residue(u, nu)?, e.base.residue(w, nw)?)
            }
        })
    }

    /// Whether `x ≡ y (mod pi^n)`.
    pub fn congruent(&self, x: &KElem, y: &KElem, n: u32) -> bool {
        self.val(&self.sub(x, y)).ge(n as i64)
    }

    fn base_digits(&self, x: &KElem, n: u32) -> Vec<u64> {
        match self {
            RingDesc::ZLoc { p } => {
                let mut v = rat_of(x).to_integer();
                let pb = BigInt::from(*p);
                (0..n)
                    .map(|_| {
                        let (q, r) = v.div_mod_floor(&pb);
                        v = q;
                        r.to_u64().unwrap()
                    })
                    .collect()
            }
            RingDesc::FpTLoc { .. } => {
                let KElem::Func(f) = x else { panic!("expected an element of F_p(t)") };
                (0..n as usize).map(|i| f.num().coeff(i)).collect()
            }
            RingDesc::QuadExt(_) => unreachable!("digits of a base ring only"),
        }
    }

    fn base_from_digits(&self, d: &[u64]) -> KElem {
        match self {
            RingDesc::ZLoc { p } => {
                let pb = BigInt::from(*p);
                let v = d.iter().rev().fold(BigInt::zero(), |acc, &x| acc * &pb + BigInt::from(x));
                KElem::Rat(BigRational::from_integer(v))
            }
            RingDesc::FpTLoc { p } => KElem::Func(RatFunc::from_poly(FpPoly::new(*p, d.to_vec()))),
            RingDesc::QuadExt(_) => unreachable!("digits of a base ring only"),
        }
    }

    /// Position of `x mod pi^n` in the canonical enumeration of `R / pi^n`.
    pub fn residue_key(&self, x: &KElem, n: u32) -> Result<u128> {
        let r = self.residue(x, n)?;
        let digits: Vec<u64> = match self {
            RingDesc::ZLoc { .. } | RingDesc::FpTLoc { .. } => self.base_digits(&r, n),
            RingDesc::QuadExt(e) => {
                let (u, w) = r.parts().unwrap();
                let p = self.prime();
                match e.ramification {
                    Ramification::Unramified => {
                        let du = e.base.base_digits(u, n);
                        let dw = e.base.base_digits(w, n);
                        du.iter().zip(&dw).map(|(a, b)| a + p * b).collect()
                    }
                    Ramification::Eisenstein => {
                        let du = e.base.base_digits(u, n.div_ceil(2));
                        let dw = e.base.base_digits(w, n / 2);
                        (0..n as usize).map(|j| if j % 2 == 0 { du[j / 2] } else { dw[j / 2] }).collect()
                    }
                }
            }
        };
        let q = self.residue_field_size() as u128;
        Ok(digits.iter().rev().fold(0u128, |acc, &d| acc * q + d as u128))
    }

    /// Inverse of [`RingDesc::residue_key`].
    pub fn from_key(&self, key: u128, n: u32) -> KElem {
        let q = self.residue_field_size() as u128;
        let mut k = key;
        let digits: Vec<u64> = (0..n)
            .map(|_| {
                let d = (k % q) as u64;
                k /= q;
                d
            })
            .collect();
        match self {
            RingDesc::ZLoc { .. } | RingDesc::FpTLoc { .. } => self.base_from_digits(&digits),
            RingDesc::QuadExt(e) => {
                let p = self.prime();
                let (du, dw): (Vec<u64>, Vec<u64>) = match e.ramification {
                    Ramification::Unramified => (digits.iter().map(|d| d % p).collect(), digits.iter().map(|d| d / p).collect()),
                    Ramification::Eisenstein => (
                        digits.iter().step_by(2).copied().collect(),
                        digits.iter().skip(1).step_by(2).copied().collect(),
                    ),
                };
                KElem::quad(e.base.base_from_digits(&du), e.base.base_from_digits(&dw))
            }
        }
    }

    /// Canonical representatives of the residue field `R / pi`.
    pub fn residue_field_reps(&self) -> Vec<KElem> {
        (0..self.residue_field_size() as u128).map(|k| self.from_key(k, 1)).collect()
    }
}

impl ScalarField for RingDesc {
    fn zero(&self) -> KElem {
        self.from_int(0)
    }

    fn from_bigint(&self, n: &BigInt) -> KElem {
        match self {
            RingDesc::ZLoc { .. } => KElem::Rat(BigRational::from_integer(n.clone())),
            RingDesc::FpTLoc { p } => {
                let r = n.mod_floor(&BigInt::from(*p)).to_u64().unwrap();
                KElem::Func(RatFunc::from_poly(FpPoly::constant(*p, r)))
            }
            RingDesc::QuadExt(e) => KElem::quad(e.base.from_bigint(n), e.base.zero()),
        }
    }

    fn mul(&self, x: &KElem, y: &KElem) -> KElem {
        match (self, x, y) {
            (RingDesc::ZLoc { .. }, KElem::Rat(a), KElem::Rat(b)) => KElem::Rat(a * b),
            (RingDesc::FpTLoc { .. }, KElem::Func(a), KElem::Func(b)) => KElem::Func(a.mul(b)),
            (RingDesc::QuadExt(e), _, _) => quad_mul(&e.base, &e.a, &e.b, x, y),
            _ => panic!("element does not belong to {self}: {x:?} * {y:?}"),
        }
    }

    fn inv(&self, x: &KElem) -> Result<KElem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match (self, x) {
            (RingDesc::ZLoc { .. }, KElem::Rat(a)) => Ok(KElem::Rat(BigRational::one() / a)),
            (RingDesc::FpTLoc { .. }, KElem::Func(a)) => Ok(KElem::Func(a.inv().unwrap())),
            (RingDesc::QuadExt(e), _) => quad_inv(&e.base, &e.a, &e.b, x),
            _ => panic!("element does not belong to {self}: {x:?}"),
        }
    }

    fn is_integral(&self, x: &KElem) -> bool {
        self.val(x).ge(0)
    }

    fn characteristic(&self) -> u64 {
        match self {
            RingDesc::ZLoc { .. } => 0,
            RingDesc::FpTLoc { p } => *p,
            RingDesc::QuadExt(e) => e.base.characteristic(),
        }
    }

    fn symbol(&self, name: &str) -> Option<KElem> {
        match self {
            RingDesc::ZLoc { .. } => None,
            RingDesc::FpTLoc { p } => (name == "t").then(|| KElem::Func(RatFunc::from_poly(FpPoly::monomial(*p, 1, 1)))),
            RingDesc::QuadExt(e) => {
                if name == "w" {
                    Some(KElem::quad(e.base.zero(), e.base.one()))
                } else {
                    e.base.symbol(name).map(|x| self.embed(&x))
                }
            }
        }
    }
}

impl fmt::Display for RingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDesc::ZLoc { p } => write!(f, "ZLoc({p})"),
            RingDesc::FpTLoc { p } => write!(f, "FpTLoc({p})"),
            RingDesc::QuadExt(e) => {
                let kind = match e.ramification {
                    Ramification::Unramified => "unramified",
                    Ramification::Eisenstein => "eisenstein",
                };
                write!(f, "QuadExt({}, w^2 = ({})*w + ({}), {kind})", e.base, e.a, e.b)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> RingDesc {
        RingDesc::quad_ext(RingDesc::zloc(2).unwrap(), KElem::int(1), KElem::int(1), Ramification::Unramified).unwrap()
    }

    fn sqrt2() -> RingDesc {
        RingDesc::quad_ext(RingDesc::zloc(2).unwrap(), KElem::int(0), KElem::int(2), Ramification::Eisenstein).unwrap()
    }

    #[test]
    fn zloc_valuation_and_residue() {
        let r = RingDesc::zloc(3).unwrap();
        assert_eq!(r.val(&KElem::rat(18, 5)), Val::Fin(2));
        assert_eq!(r.val(&KElem::rat(1, 9)), Val::Fin(-2));
        assert_eq!(r.residue(&KElem::rat(1, 2), 2).unwrap(), KElem::int(5));
        assert_eq!(r.residue(&KElem::rat(1, 3), 1), Err(Error::NotIntegral));
    }

    #[test]
    fn fptloc_residue() {
        let r = RingDesc::fptloc(2).unwrap();
        let t = r.symbol("t").unwrap();
        let x = r.div(&r.one(), &r.add(&r.one(), &t)).unwrap();
        // 1/(1+t) = 1 + t + t^2 + ... in characteristic two
        let res = r.residue(&x, 3).unwrap();
        assert_eq!(res.to_string(), "1+t+t^2");
    }

    #[test]
    fn extension_validation() {
        let z2 = RingDesc::zloc(2).unwrap();
        assert!(matches!(
            RingDesc::quad_ext(z2.clone(), KElem::int(0), KElem::int(1), Ramification::Unramified),
            Err(Error::InvalidRing(_))
        ));
        assert!(matches!(
            RingDesc::quad_ext(z2, KElem::int(0), KElem::int(4), Ramification::Eisenstein),
            Err(Error::InvalidRing(_))
        ));
        assert!(matches!(
            RingDesc::quad_ext(RingDesc::fptloc(2).unwrap(), KElem::int(0), KElem::int(0), Ramification::Eisenstein),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn extension_valuations() {
        let s = golden();
        assert_eq!(s.e(), Val::Fin(1));
        assert_eq!(s.residue_field_size(), 4);
        let e = sqrt2();
        assert_eq!(e.e(), Val::Fin(2));
        let w = e.symbol("w").unwrap();
        assert_eq!(e.val(&e.mul(&w, &e.from_int(3))), Val::Fin(1));
        assert_eq!(e.val(&e.mul(&w, &w)), Val::Fin(2));
    }

    #[test]
    fn keys_roundtrip() {
        for ring in [RingDesc::zloc(3).unwrap(), RingDesc::fptloc(3).unwrap(), golden(), sqrt2()] {
            let n = 3;
            let total = ring.quotient_size(n).unwrap();
            for k in 0..total {
                let x = ring.from_key(k, n);
                assert_eq!(ring.residue(&x, n).unwrap(), x);
                assert_eq!(ring.residue_key(&x, n).unwrap(), k);
            }
        }
    }

    #[test]
    fn residues_are_distinct_mod_pi_n() {
        let ring = sqrt2();
        let n = 3;
        let reps: Vec<KElem> = (0..ring.quotient_size(n).unwrap()).map(|k| ring.from_key(k, n)).collect();
        for (i, x) in reps.iter().enumerate() {
            for y in &reps[i + 1..] {
                assert!(!ring.congruent(x, y, n));
            }
        }
    }
}
