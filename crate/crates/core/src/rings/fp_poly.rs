//! Dense polynomials over a prime field `F_p` and reduced fractions of them.

use std::cmp::Ordering;
use std::fmt;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// A polynomial in `t` over `F_p`, coefficients in ascending order, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn constant(p: u64, a: u64) -> Self {
        FpPoly::new(p, vec![a])
    }

    pub fn monomial(p: u64, a: u64, deg: usize) -> Self {
        let mut c = vec![0; deg + 1];
        c[deg] = a;
        FpPoly::new(p, c)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    /// Order of vanishing at `t = 0`, `None` for zero.
    pub fn ord_t(&self) -> Option<usize> {
        self.c.iter().position(|&x| x != 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| (self.coeff(i) + o.coeff(i)) % self.p).collect();
        FpPoly::new(self.p, c)
    }

    pub fn neg(&self) -> Self {
        let c = self.c.iter().map(|&x| (self.p - x) % self.p).collect();
        FpPoly::new(self.p, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: u64) -> Self {
        let c = self.c.iter().map(|&x| mul_mod(x, a % self.p, self.p)).collect();
        FpPoly::new(self.p, c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(x, y, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, c)
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        FpPoly { p: self.p, c }
    }

    /// Drops the lowest `k` coefficients (exact division by `t^k` when they vanish).
    pub fn unshift(&self, k: usize) -> Self {
        FpPoly::new(self.p, self.c.iter().skip(k).copied().collect())
    }

    pub fn truncate(&self, n: usize) -> Self {
        FpPoly::new(self.p, self.c.iter().take(n).copied().collect())
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let p = self.p;
        let dl = inv_mod(d.lead(), p);
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = mul_mod(r[i + dd], dl, p);
            q[i] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &y) in d.c.iter().enumerate() {
                r[i + j] = (r[i + j] + p - mul_mod(coef, y, p)) % p;
            }
        }
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lead(), self.p))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse modulo `t^n`; requires a nonzero constant term.
    pub fn inv_series(&self, n: usize) -> Self {
        let p = self.p;
        let c0 = inv_mod(self.coeff(0), p);
        let mut out = vec![0u64; n];
        for k in 0..n {
            let mut s = if k == 0 { 1 } else { 0 };
            for j in 1..=k {
                s = (s + p - mul_mod(self.coeff(j), out[k - j], p)) % p;
            }
            out[k] = mul_mod(s, c0, p);
        }
        FpPoly::new(p, out)
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &x)| mul_mod(x, i as u64 % self.p, self.p))
            .collect();
        FpPoly::new(self.p, c)
    }

    fn fmt_var(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.c.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "{var}")?,
                (1, _) => write!(f, "{c}*{var}")?,
                (_, 1) => write!(f, "{var}^{i}")?,
                _ => write!(f, "{c}*{var}^{i}")?,
            }
        }
        Ok(())
    }

    fn is_monomial(&self) -> bool {
        self.c.iter().filter(|&&x| x != 0).count() <= 1
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_var(f, "t")
    }
}

impl Ord for FpPoly {
    fn cmp(&self, o: &Self) -> Ordering {
        self.c.len().cmp(&o.c.len()).then_with(|| self.c.iter().rev().cmp(o.c.iter().rev()))
    }
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// An element of `F_p(t)`: reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: FpPoly,
    den: FpPoly,
}

impl RatFunc {
    pub fn new(num: FpPoly, den: FpPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let p = num.p();
        if num.is_zero() {
            return RatFunc { num, den: FpPoly::constant(p, 1) };
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.divrem(&g);
        let (mut d, _) = den.divrem(&g);
        let l = inv_mod(d.lead(), p);
        n = n.scale(l);
        d = d.scale(l);
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(num: FpPoly) -> Self {
        let p = num.p();
        RatFunc { num, den: FpPoly::constant(p, 1) }
    }

    pub fn p(&self) -> u64 {
        self.num.p()
    }

    pub fn num(&self) -> &FpPoly {
        &self.num
    }

    pub fn den(&self) -> &FpPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }

    /// `t`-adic valuation, `None` for zero.
    pub fn val_t(&self) -> Option<i64> {
        let n = self.num.ord_t()? as i64;
        Some(n - self.den.ord_t().unwrap_or(0) as i64)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &FpPoly| !p.is_monomial();
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if wrap(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if wrap(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl Ord for RatFunc {
    fn cmp(&self, o: &Self) -> Ordering {
        self.num.cmp(&o.num).then_with(|| self.den.cmp(&o.den))
    }
}

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
