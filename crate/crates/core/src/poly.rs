//! Monic polynomials over a field, square roots and factorization of quadratics.

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rings::fp_poly::inv_mod;
use crate::rings::{FpPoly, KElem, RatFunc, RingDesc, ScalarField};

/// A monic polynomial in `x`; `coeffs[i]` multiplies `x^i` and the last entry is one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonicPoly {
    coeffs: Vec<KElem>,
}

impl MonicPoly {
    /// Builds from ascending coefficients; the leading one must equal one.
    pub fn new<F: ScalarField>(field: &F, mut coeffs: Vec<KElem>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        match coeffs.last() {
            Some(c) if *c == field.one() => Ok(MonicPoly { coeffs }),
            _ => Err(Error::Parse("polynomial is not monic".into())),
        }
    }

    /// `x^2 - a x - b`.
    pub fn quadratic<F: ScalarField>(field: &F, a: &KElem, b: &KElem) -> Self {
        MonicPoly { coeffs: vec![field.neg(b), field.neg(a), field.one()] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[KElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &KElem {
        &self.coeffs[i]
    }

    /// `(a, b)` with `f = x^2 - a x - b`, i.e. `x^2 = a x + b` modulo `f`.
    pub fn quad_ab<F: ScalarField>(&self, field: &F) -> Result<(KElem, KElem)> {
        if self.degree() != 2 {
            return Err(Error::DimensionMismatch("expected a quadratic polynomial".into()));
        }
        Ok((field.neg(&self.coeffs[1]), field.neg(&self.coeffs[0])))
    }

    pub fn eval<F: ScalarField>(&self, field: &F, x: &KElem) -> KElem {
        self.coeffs.iter().rev().fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
    }

    /// Ascending coefficients of `f'`.
    pub fn derivative<F: ScalarField>(&self, field: &F) -> Vec<KElem> {
        let mut d: Vec<KElem> =
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| field.mul(&field.from_int(i as i64), c)).collect();
        while d.last().is_some_and(|c| c.is_zero()) {
            d.pop();
        }
        d
    }

    pub fn is_separable<F: ScalarField>(&self, field: &F) -> bool {
        let g = poly_gcd(field, self.coeffs.clone(), self.derivative(field));
        g.len() == 1
    }

    pub fn is_integral<F: ScalarField>(&self, field: &F) -> bool {
        self.coeffs.iter().all(|c| field.is_integral(c))
    }
}

fn poly_rem<F: ScalarField>(field: &F, mut a: Vec<KElem>, b: &[KElem]) -> Vec<KElem> {
    let lb = field.inv(b.last().unwrap()).unwrap();
    while a.len() >= b.len() {
        let c = field.mul(a.last().unwrap(), &lb);
        let shift = a.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            a[shift + i] = field.sub(&a[shift + i], &field.mul(&c, bi));
        }
        a.pop();
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
    }
    a
}

/// Greatest common divisor up to a scalar; the empty vector is the zero polynomial.
fn poly_gcd<F: ScalarField>(field: &F, mut a: Vec<KElem>, mut b: Vec<KElem>) -> Vec<KElem> {
    while !b.is_empty() {
        let r = poly_rem(field, a, &b);
        a = b;
        b = r;
    }
    a
}

fn fmt_coeff_term(f: &mut fmt::Formatter<'_>, c: &KElem, i: usize, first: bool) -> fmt::Result {
    let mono = match i {
        0 => String::new(),
        1 => "x".to_string(),
        _ => format!("x^{i}"),
    };
    let (neg, mag) = match c {
        KElem::Rat(r) if r.is_negative() => (true, KElem::Rat(-r)),
        _ => (false, c.clone()),
    };
    if neg {
        write!(f, "-")?;
    } else if !first {
        write!(f, "+")?;
    }
    let one = matches!(&mag, KElem::Rat(r) if r == &BigRational::from_integer(1.into()))
        || matches!(&mag, KElem::Func(r) if r.den().is_one() && r.num().is_one())
        || matches!(&mag, KElem::Quad(q) if q.1.is_zero() && matches!(&q.0, KElem::Rat(r) if r == &BigRational::from_integer(1.into())));
    if i == 0 {
        return write!(f, "{mag}");
    }
    if one {
        return write!(f, "{mono}");
    }
    let s = mag.to_string();
    if s.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '^') {
        write!(f, "{s}*{mono}")
    } else {
        write!(f, "({s})*{mono}")
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            fmt_coeff_term(f, c, i, first)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Discriminant `a^2 + 4b` of `x^2 - a x - b`.
pub fn disc_quad<F: ScalarField>(field: &F, f: &MonicPoly) -> Result<KElem> {
    let (a, b) = f.quad_ab(field)?;
    Ok(field.add(&field.mul(&a, &a), &field.mul(&field.from_int(4), &b)))
}

fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    let pw = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * b as u128 % p as u128) as u64;
            }
            b = (b as u128 * b as u128 % p as u128) as u64;
            e >>= 1;
        }
        r
    };
    if pw(a, (p - 1) / 2) != 1 {
        return None;
    }
    // Tonelli-Shanks
    let (mut q, mut s) = (p - 1, 0);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pw(z, (p - 1) / 2) == p - 1)?;
    let (mut m, mut c, mut t, mut r) = (s, pw(z, q), pw(a, q), pw(a, q.div_ceil(2)));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = (tt as u128 * tt as u128 % p as u128) as u64;
            i += 1;
        }
        let b = pw(c, 1 << (m - i - 1));
        m = i;
        c = (b as u128 * b as u128 % p as u128) as u64;
        t = (t as u128 * c as u128 % p as u128) as u64;
        r = (r as u128 * b as u128 % p as u128) as u64;
    }
    Some(r)
}

fn poly_sqrt(f: &FpPoly) -> Option<FpPoly> {
    let p = f.p();
    let Some(n) = f.degree() else { return Some(f.clone()) };
    if n % 2 == 1 {
        return None;
    }
    if p == 2 {
        if f.coeffs().iter().enumerate().any(|(i, &c)| i % 2 == 1 && c != 0) {
            return None;
        }
        return Some(FpPoly::new(2, f.coeffs().iter().step_by(2).copied().collect()));
    }
    let m = n / 2;
    let mut s = vec![0u64; m + 1];
    s[m] = sqrt_mod_p(f.lead(), p)?;
    let two_inv = inv_mod((2 * s[m]) % p, p);
    for k in (0..m).rev() {
        let mut acc = f.coeff(m + k);
        for i in (k + 1)..=m {
            let j = m + k - i;
            if j > k && j <= m {
                acc = (acc + p - (s[i] as u128 * s[j] as u128 % p as u128) as u64) % p;
            }
        }
        s[k] = (acc as u128 * two_inv as u128 % p as u128) as u64;
    }
    let r = FpPoly::new(p, s);
    (r.mul(&r) == *f).then_some(r)
}

fn rat_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (num_integer::Roots::sqrt(n), num_integer::Roots::sqrt(d));
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

/// A square root of `x` in the fraction field of `ring`, if one exists.
pub fn sqrt(ring: &RingDesc, x: &KElem) -> Result<Option<KElem>> {
    if x.is_zero() {
        return Ok(Some(x.clone()));
    }
    Ok(match ring {
        RingDesc::ZLoc { .. } => rat_sqrt(x.as_rat().unwrap()).map(KElem::Rat),
        RingDesc::FpTLoc { .. } => {
            let KElem::Func(f) = x else { unreachable!() };
            // num/den is a square iff num*den is, with root sqrt(num*den)/den
            poly_sqrt(&f.num().mul(f.den())).map(|g| KElem::Func(RatFunc::new(g, f.den().clone())))
        }
        RingDesc::QuadExt(e) => {
            let base = e.base();
            if base.characteristic() == 2 {
                return Err(Error::Unsupported("square roots over extensions of F_2(t)".into()));
            }
            let (a, b) = e.relation();
            let (u, w) = x.parts().unwrap();
            // x = X + Y*s with s^2 = D, where w = (a + s)/2
            let d = base.add(&base.mul(a, a), &base.mul(&base.from_int(4), b));
            let half = base.inv(&base.from_int(2))?;
            let big_x = base.add(u, &base.mul(&base.mul(w, a), &half));
            let big_y = base.mul(w, &half);
            let mut cands: Vec<(KElem, KElem)> = Vec::new();
            if big_y.is_zero() {
                if let Some(r) = sqrt(base, &big_x)? {
                    cands.push((r, base.zero()));
                }
                if let Some(r) = sqrt(base, &base.div(&big_x, &d)?)? {
                    cands.push((base.zero(), r));
                }
            } else {
                let nrm = base.sub(&base.mul(&big_x, &big_x), &base.mul(&d, &base.mul(&big_y, &big_y)));
                if let Some(n0) = sqrt(base, &nrm)? {
                    for n in [n0.clone(), base.neg(&n0)] {
                        let alpha2 = base.mul(&base.add(&big_x, &n), &half);
                        if let Some(alpha) = sqrt(base, &alpha2)? {
                            if alpha.is_zero() {
                                continue;
                            }
                            let beta = base.div(&big_y, &base.mul(&base.from_int(2), &alpha))?;
                            cands.push((alpha, beta));
                        }
                    }
                }
            }
            cands.into_iter().find_map(|(alpha, beta)| {
                // alpha + beta*s = (alpha - beta*a) + 2*beta*w
                let r = KElem::quad(base.sub(&alpha, &base.mul(&beta, a)), base.mul(&base.from_int(2), &beta));
                (ring.mul(&r, &r) == *x).then_some(r)
            })
        }
    })
}

/// Solves `z^2 + z = c` over `F_2(t)`. Returns one root; the other is `z + 1`.
pub fn solve_artin_schreier(c: &RatFunc) -> Option<RatFunc> {
    assert_eq!(c.p(), 2, "Artin-Schreier solver works over F_2(t)");
    // z = n/e with e^2 = den(c) and n^2 + n e = num(c)
    let e = poly_sqrt(c.den())?;
    let num = c.num();
    let de = e.degree().unwrap_or(0);
    let dn = num.degree().unwrap_or(0);
    let bound = de.max(dn / 2);
    let unknowns = bound + 1;
    let rows = (2 * bound).max(bound + de) + 1;
    if dn >= rows {
        return None;
    }
    // column j: image of t^j under n -> n^2 + n e
    let cols: Vec<FpPoly> = (0..unknowns)
        .map(|j| {
            let m = FpPoly::monomial(2, 1, j);
            m.mul(&m).add(&m.mul(&e))
        })
        .collect();
    let mut aug: Vec<Vec<u8>> = (0..rows)
        .map(|i| {
            let mut r: Vec<u8> = cols.iter().map(|c| c.coeff(i) as u8).collect();
            r.push(num.coeff(i) as u8);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let Some(pr) = (row..rows).find(|&r| aug[r][col] == 1) else { continue };
        aug.swap(row, pr);
        for r in 0..rows {
            if r != row && aug[r][col] == 1 {
                let src = aug[row].clone();
                for (x, y) in aug[r].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if aug[row..].iter().any(|r| r[unknowns] == 1) {
        return None;
    }
    let mut sol = vec![0u64; unknowns];
    for (r, &col) in pivots.iter().enumerate() {
        sol[col] = aug[r][unknowns] as u64;
    }
    let z = RatFunc::new(FpPoly::new(2, sol), e);
    (z.mul(&z).add(&z) == *c).then_some(z)
}

/// Roots of a quadratic in the fraction field, ordered so that `v(l1) >= v(l2)`
/// (ties broken by the element order). `None` when `f` is irreducible.
pub fn quad_factor(ring: &RingDesc, f: &MonicPoly) -> Result<Option<(KElem, KElem)>> {
    let (a, b) = f.quad_ab(ring)?;
    let roots = if ring.characteristic() != 2 {
        let d = disc_quad(ring, f)?;
        match sqrt(ring, &d)? {
            None => return Ok(None),
            Some(s) => {
                let half = ring.inv(&ring.from_int(2))?;
                (ring.mul(&ring.add(&a, &s), &half), ring.mul(&ring.sub(&a, &s), &half))
            }
        }
    } else {
        if ring.ext().is_some() {
            return Err(Error::Unsupported("factoring over extensions of F_2(t)".into()));
        }
        if a.is_zero() {
            match sqrt(ring, &b)? {
                None => return Ok(None),
                Some(s) => (s.clone(), s),
            }
        } else {
            let c = ring.div(&b, &ring.mul(&a, &a))?;
            let KElem::Func(cf) = c else { unreachable!() };
            match solve_artin_schreier(&cf) {
                None => return Ok(None),
                Some(z) => {
                    let z = KElem::Func(z);
                    let r1 = ring.mul(&a, &z);
                    (r1.clone(), ring.add(&r1, &a))
                }
            }
        }
    };
    let (r1, r2) = roots;
    debug_assert!(f.eval(ring, &r1).is_zero() && f.eval(ring, &r2).is_zero());
    let key = |r: &KElem| (std::cmp::Reverse(ring.val(r)), r.clone());
    Ok(Some(if key(&r1) <= key(&r2) { (r1, r2) } else { (r2, r1) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Ramification;

    fn fpt(p: u64, c: &[u64]) -> KElem {
        KElem::Func(RatFunc::from_poly(FpPoly::new(p, c.to_vec())))
    }

    #[test]
    fn tonelli() {
        for p in [3u64, 5, 7, 13, 17, 97] {
            for a in 1..p {
                if let Some(r) = sqrt_mod_p(a, p) {
                    assert_eq!(r * r % p, a);
                }
            }
        }
    }

    #[test]
    fn poly_square_roots() {
        let g = FpPoly::new(5, vec![2, 3, 1]);
        let r = poly_sqrt(&g.mul(&g)).unwrap();
        assert!(r == g || r == g.neg());
        assert!(poly_sqrt(&FpPoly::new(5, vec![2, 0, 1])).is_none());
    }

    #[test]
    fn factor_over_zloc() {
        let r = RingDesc::zloc(3).unwrap();
        let f = MonicPoly::quadratic(&r, &KElem::int(3), &KElem::int(-2));
        let (l1, l2) = quad_factor(&r, &f).unwrap().unwrap();
        assert_eq!((l1, l2), (KElem::int(1), KElem::int(2)));
        let g = MonicPoly::quadratic(&r, &KElem::int(0), &KElem::int(18));
        assert!(quad_factor(&r, &g).unwrap().is_none());
    }

    #[test]
    fn artin_schreier_cases() {
        // z^2 + z = t^2 + t has z = t
        let c = RatFunc::from_poly(FpPoly::new(2, vec![0, 1, 1]));
        let z = solve_artin_schreier(&c).unwrap();
        assert!(z.mul(&z).add(&z) == c);
        // z^2 + z = t has no solution (odd degree)
        assert!(solve_artin_schreier(&RatFunc::from_poly(FpPoly::new(2, vec![0, 1]))).is_none());
        // z^2 + z = 1 has no solution over F_2(t)
        assert!(solve_artin_schreier(&RatFunc::from_poly(FpPoly::new(2, vec![1]))).is_none());
    }

    #[test]
    fn char_two_factoring() {
        let r = RingDesc::fptloc(2).unwrap();
        // x^2 - t x - (t^2 + t^3) is irreducible: z^2 + z = 1 + t has no root
        let f = MonicPoly::quadratic(&r, &fpt(2, &[0, 1]), &fpt(2, &[0, 0, 1, 1]));
        assert!(quad_factor(&r, &f).unwrap().is_none());
        // x^2 + t x + t^3 + t^4 = (x + t^2)(x + t + t^2)
        let f = MonicPoly::quadratic(&r, &fpt(2, &[0, 1]), &fpt(2, &[0, 0, 0, 1, 1]));
        let (l1, l2) = quad_factor(&r, &f).unwrap().unwrap();
        assert!(f.eval(&r, &l1).is_zero() && f.eval(&r, &l2).is_zero());
        assert!(r.val(&l1) >= r.val(&l2));
        // x^2 - t^3 is irreducible and inseparable
        let g = MonicPoly::quadratic(&r, &fpt(2, &[]), &fpt(2, &[0, 0, 0, 1]));
        assert!(quad_factor(&r, &g).unwrap().is_none());
        assert!(!g.is_separable(&r));
        // x^2 - t^2 = (x - t)^2
        let h = MonicPoly::quadratic(&r, &fpt(2, &[]), &fpt(2, &[0, 0, 1]));
        let (l1, l2) = quad_factor(&r, &h).unwrap().unwrap();
        assert_eq!(l1, l2);
    }

    #[test]
    fn sqrt_in_extension() {
        let s = RingDesc::quad_ext(RingDesc::zloc(2).unwrap(), KElem::int(1), KElem::int(1), Ramification::Unramified)
            .unwrap();
        let w = s.symbol("w").unwrap();
        for x in [s.from_int(3), s.add(&w, &s.from_int(2)), w.clone()] {
            let sq = s.mul(&x, &x);
            let r = sqrt(&s, &sq).unwrap().unwrap();
            assert_eq!(s.mul(&r, &r), sq);
        }
        // 5 = (2w - 1)^2 becomes a square
        let r = sqrt(&s, &s.from_int(5)).unwrap().unwrap();
        assert_eq!(s.mul(&r, &r), s.from_int(5));
        assert!(sqrt(&s, &w).unwrap().is_none());
    }

    #[test]
    fn separability() {
        let r = RingDesc::zloc(5).unwrap();
        let f = MonicPoly::quadratic(&r, &KElem::int(2), &KElem::int(-1));
        assert!(!f.is_separable(&r));
        assert!(MonicPoly::quadratic(&r, &KElem::int(0), &KElem::int(2)).is_separable(&r));
    }
}
