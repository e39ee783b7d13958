//! Matrices with characteristic polynomial `f` versus lattices in `K[x]/(f)`.
//!
//! A lattice with basis `u_1..u_n` corresponds to the matrix `A` with
//! `w u_i = sum_j A_ij u_j`, where `w` is the class of `x`. Equivalence of ideals
//! is decided through reduced binary quadratic forms over `Z` (imaginary
//! quadratic `f`) and through the similarity classification over a DVR.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::classify::similar;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::MonicPoly;
use crate::rings::{rat_of, Integers, KElem, RingDesc, ScalarField};

/// The coefficient ring of a lattice: `Z` or one of the DVRs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LmRing {
    Integers,
    Dvr(RingDesc),
}

impl ScalarField for LmRing {
    fn zero(&self) -> KElem {
        match self {
            LmRing::Integers => Integers.zero(),
            LmRing::Dvr(r) => r.zero(),
        }
    }
    fn from_bigint(&self, n: &BigInt) -> KElem {
        match self {
            LmRing::Integers => Integers.from_bigint(n),
            LmRing::Dvr(r) => r.from_bigint(n),
        }
    }
    fn mul(&self, x: &KElem, y: &KElem) -> KElem {
        match self {
            LmRing::Integers => Integers.mul(x, y),
            LmRing::Dvr(r) => r.mul(x, y),
        }
    }
    fn inv(&self, x: &KElem) -> Result<KElem> {
        match self {
            LmRing::Integers => Integers.inv(x),
            LmRing::Dvr(r) => r.inv(x),
        }
    }
    fn is_integral(&self, x: &KElem) -> bool {
        match self {
            LmRing::Integers => Integers.is_integral(x),
            LmRing::Dvr(r) => r.is_integral(x),
        }
    }
    fn characteristic(&self) -> u64 {
        match self {
            LmRing::Integers => 0,
            LmRing::Dvr(r) => r.characteristic(),
        }
    }
    fn symbol(&self, name: &str) -> Option<KElem> {
        match self {
            LmRing::Integers => None,
            LmRing::Dvr(r) => r.symbol(name),
        }
    }
}

/// A lattice in `K[x]/(f)` given by coordinate vectors in the power basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    pub f: MonicPoly,
    /// `basis[i][j]` is the coefficient of `w^j` in `u_i`.
    pub basis: Vec<Vec<KElem>>,
}

impl IdealBasis {
    pub fn new(f: MonicPoly, basis: Vec<Vec<KElem>>) -> Self {
        IdealBasis { f, basis }
    }

    pub fn coords(&self) -> Result<Matrix> {
        Matrix::new(self.basis.clone())
    }

    /// `alpha * J`.
    pub fn scale<F: ScalarField>(&self, field: &F, alpha: &[KElem]) -> IdealBasis {
        let basis = self.basis.iter().map(|u| mul_mod_f(field, &self.f, alpha, u)).collect();
        IdealBasis { f: self.f.clone(), basis }
    }

    /// Display of the basis elements as polynomials in `w`.
    pub fn display_elems(&self) -> Vec<String> {
        self.basis.iter().map(|u| elem_string(u)).collect()
    }
}

impl fmt::Display for IdealBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.display_elems().join(", "))
    }
}

/// Formats `sum c_j w^j`.
pub fn elem_string(u: &[KElem]) -> String {
    let mut out = String::new();
    for (j, c) in u.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = match j {
            0 => String::new(),
            1 => "w".into(),
            _ => format!("w^{j}"),
        };
        let s = c.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(m) if matches!(c, KElem::Rat(_)) => (true, m.to_string()),
            _ => (false, s),
        };
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if j == 0 {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&mono);
        } else if mag.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '^') {
            out.push_str(&format!("{mag}*{mono}"));
        } else {
            out.push_str(&format!("({mag})*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `w * u` in coordinates.
fn times_w<F: ScalarField>(field: &F, f: &MonicPoly, u: &[KElem]) -> Vec<KElem> {
    let n = f.degree();
    let top = u[n - 1].clone();
    (0..n)
        .map(|j| {
            let prev = if j == 0 { field.zero() } else { u[j - 1].clone() };
            field.sub(&prev, &field.mul(&top, f.coeff(j)))
        })
        .collect()
}

/// Product in `K[x]/(f)` of two coordinate vectors.
pub fn mul_mod_f<F: ScalarField>(field: &F, f: &MonicPoly, x: &[KElem], y: &[KElem]) -> Vec<KElem> {
    let n = f.degree();
    let mut acc = vec![field.zero(); n];
    let mut pw = y.to_vec();
    for (j, c) in x.iter().enumerate() {
        if j > 0 {
            pw = times_w(field, f, &pw);
        }
        for (a, p) in acc.iter_mut().zip(&pw) {
            *a = field.add(a, &field.mul(c, p));
        }
    }
    acc
}

/// The companion matrix with ones below the diagonal and `-c_j` in the last column.
pub fn companion<F: ScalarField>(field: &F, f: &MonicPoly) -> Matrix {
    let n = f.degree();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j == n - 1 {
                        field.neg(f.coeff(i))
                    } else if i == j + 1 {
                        field.one()
                    } else {
                        field.zero()
                    }
                })
                .collect()
        })
        .collect();
    Matrix::new(rows).expect("degree is positive")
}

fn check_relation<F: ScalarField>(field: &F, f: &MonicPoly, a: &Matrix, basis: &[Vec<KElem>]) -> bool {
    basis.iter().enumerate().all(|(i, u)| {
        let lhs = times_w(field, f, u);
        let rhs = (0..basis.len()).fold(vec![field.zero(); u.len()], |acc, j| {
            acc.iter().zip(&basis[j]).map(|(s, b)| field.add(s, &field.mul(a.get(i, j), b))).collect()
        });
        lhs == rhs
    })
}

fn probe_vectors<F: ScalarField>(field: &F, n: usize) -> Vec<Vec<KElem>> {
    let unit = |k: usize| (0..n).map(|i| if i == k { field.one() } else { field.zero() }).collect::<Vec<_>>();
    let mut out = vec![unit(n - 1)];
    out.extend((0..n - 1).map(unit));
    // deterministic small vectors for larger n
    let mut s: u64 = 0x9e37_79b9_7f4a_7c15;
    for _ in 0..64 {
        out.push(
            (0..n)
                .map(|_| {
                    s ^= s << 13;
                    s ^= s >> 7;
                    s ^= s << 17;
                    field.from_int((s % 7) as i64 - 3)
                })
                .collect(),
        );
    }
    out
}

/// A lattice `J` whose basis satisfies `w u_i = sum_j A_ij u_j`.
pub fn matrix_to_ideal<F: ScalarField>(field: &F, f: &MonicPoly, a: &Matrix) -> Result<IdealBasis> {
    if !a.is_square() || a.nrows() != f.degree() {
        return Err(Error::DimensionMismatch("matrix size must equal the degree".into()));
    }
    if a.char_poly(field) != *f {
        return Err(Error::CharPolyMismatch);
    }
    if !f.is_separable(field) {
        return Err(Error::NotSeparable);
    }
    let n = f.degree();
    // adj(xI - A) = sum_j x^j B_j with B_{n-1} = I, B_{j-1} = A B_j + c_j I
    let mut bs = vec![Matrix::identity(field, n)];
    for j in (1..n).rev() {
        let prev = bs.last().unwrap();
        bs.push(a.mul(field, prev).add(field, &Matrix::scalar(field, n, f.coeff(j))));
    }
    bs.reverse();
    for e in probe_vectors(field, n) {
        let cols: Vec<Vec<KElem>> = bs.iter().map(|b| b.mul_vec(field, &e)).collect();
        let basis: Vec<Vec<KElem>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        let m = Matrix::new(basis.clone())?;
        if m.rank(field) == n {
            assert!(check_relation(field, f, a, &basis), "lattice basis does not satisfy w X = A X");
            return Ok(IdealBasis::new(f.clone(), basis));
        }
    }
    Err(Error::NotFullRank)
}

/// The matrix of multiplication by `w` in the basis of `J`.
pub fn ideal_to_matrix<F: ScalarField>(field: &F, j: &IdealBasis) -> Result<Matrix> {
    let n = j.f.degree();
    if j.basis.len() != n || j.basis.iter().any(|u| u.len() != n) {
        return Err(Error::DimensionMismatch("basis must have n vectors of length n".into()));
    }
    let u = j.coords()?;
    if u.rank(field) != n {
        return Err(Error::NotFullRank);
    }
    let theta = Matrix::new(j.basis.iter().map(|v| times_w(field, &j.f, v)).collect())?;
    let a = theta.mul(field, &u.inverse(field)?);
    if !a.is_integral(field) {
        return Err(Error::NotAnIdeal);
    }
    debug_assert!(check_relation(field, &j.f, &a, &j.basis));
    Ok(a)
}

/// Whether `alpha` is invertible in `K[x]/(f)`.
pub fn is_non_zero_divisor<F: ScalarField>(field: &F, f: &MonicPoly, alpha: &[KElem]) -> bool {
    let n = f.degree();
    let rows = (0..n)
        .map(|i| {
            let e: Vec<KElem> = (0..n).map(|k| if k == i { field.one() } else { field.zero() }).collect();
            mul_mod_f(field, f, alpha, &e)
        })
        .collect();
    !Matrix::new(rows).expect("positive degree").det(field).is_zero()
}

/// `A x^2 + B xy + C y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BQForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl BQForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        BQForm { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_reduced(&self) -> bool {
        let ab = self.b.abs();
        ab <= self.a && self.a <= self.c && (!(ab == self.a || self.a == self.c) || !self.b.is_negative())
    }
}

impl fmt::Display for BQForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Gauss reduction of a positive definite form.
pub fn reduce_form(form: &BQForm) -> Result<BQForm> {
    if !form.discriminant().is_negative() {
        return Err(Error::IndefiniteForm);
    }
    if !form.a.is_positive() {
        return Err(Error::NotPositiveDefinite);
    }
    let (mut a, mut b, mut c) = (form.a.clone(), form.b.clone(), form.c.clone());
    let two = BigInt::from(2);
    loop {
        // normalize: -a < b <= a
        if !(-&a < b && b <= a) {
            let a2 = &two * &a;
            let s = (&a - &b).div_floor(&a2);
            // b' = b + 2as, c' = a s^2 + b s + c
            c = &a * &s * &s + &b * &s + &c;
            b += &a2 * &s;
        }
        if a > c || (a == c && b.is_negative()) {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        break;
    }
    let out = BQForm { a, b, c };
    debug_assert!(out.is_reduced() && out.discriminant() == form.discriminant());
    Ok(out)
}

/// The primitive form `N(x u1 + y u2) / content` of a lattice over `Z`, for
/// imaginary quadratic `f`, with the basis oriented like `(1, w)`.
pub fn ideal_to_form(j: &IdealBasis) -> Result<BQForm> {
    let z = Integers;
    if j.f.degree() != 2 || j.f.coeffs().iter().any(|c| c.as_rat().is_none()) {
        return Err(Error::NotImaginaryQuadratic);
    }
    let (a, b) = j.f.quad_ab(&z)?;
    let disc = rat_of(&a) * rat_of(&a) + BigRational::from_integer(4.into()) * rat_of(&b);
    if !disc.is_negative() || !j.f.is_integral(&z) {
        return Err(Error::NotImaginaryQuadratic);
    }
    let mut u = j.basis.clone();
    if u.len() != 2 || u.iter().any(|v| v.len() != 2) {
        return Err(Error::DimensionMismatch("expected two basis vectors".into()));
    }
    let det = Matrix::new(u.clone())?.det(&z);
    if det.is_zero() {
        return Err(Error::NotFullRank);
    }
    if rat_of(&det).is_negative() {
        u.swap(0, 1);
    }
    let norm = |v: &[KElem]| {
        let (x, y) = (rat_of(&v[0]), rat_of(&v[1]));
        x * x + rat_of(&a) * x * y - rat_of(&b) * y * y
    };
    let sum: Vec<KElem> = u[0].iter().zip(&u[1]).map(|(p, q)| p.add(q)).collect();
    let fa = norm(&u[0]);
    let fc = norm(&u[1]);
    let fb = norm(&sum) - &fa - &fc;
    let coeffs = [fa, fb, fc];
    let den = coeffs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|r| (r * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Ok(BQForm { a: &ints[0] / &g, b: &ints[1] / &g, c: &ints[2] / &g })
}

/// Whether `alpha_1 J_1 = alpha_2 J_2` for some nonzero `alpha_i`.
pub fn equivalent(ring: &LmRing, j1: &IdealBasis, j2: &IdealBasis) -> Result<bool> {
    if j1.f != j2.f {
        return Ok(false);
    }
    match ring {
        LmRing::Integers => {
            if j1.f.degree() != 2 {
                return Err(Error::UnsupportedRing);
            }
            Ok(reduce_form(&ideal_to_form(j1)?)? == reduce_form(&ideal_to_form(j2)?)?)
        }
        LmRing::Dvr(r) => {
            if j1.f.degree() != 2 {
                return Err(Error::UnsupportedRing);
            }
            let a1 = ideal_to_matrix(ring, j1)?;
            let a2 = ideal_to_matrix(ring, j2)?;
            similar(r, &a1, &a2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ints(v: &[i64]) -> Vec<KElem> {
        v.iter().map(|&x| KElem::int(x)).collect()
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::new(rows.iter().map(|r| ints(r)).collect()).unwrap()
    }

    #[test]
    fn companion_layout() {
        let z = Integers;
        let f = parse_poly(&z, "x^2+6").unwrap();
        assert_eq!(companion(&z, &f), mat(&[&[0, -6], &[1, 0]]));
        let g = parse_poly(&z, "x^3-1").unwrap();
        assert_eq!(companion(&z, &g), mat(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(companion(&z, &g).char_poly(&z), g);
    }

    #[test]
    fn matrices_to_ideals() {
        let z = Integers;
        let f = parse_poly(&z, "x^2+6").unwrap();
        let j = matrix_to_ideal(&z, &f, &mat(&[&[0, 1], &[-6, 0]])).unwrap();
        assert_eq!(j.basis, vec![ints(&[1, 0]), ints(&[0, 1])]);
        let j = matrix_to_ideal(&z, &f, &mat(&[&[0, 2], &[-3, 0]])).unwrap();
        assert_eq!(j.basis, vec![ints(&[2, 0]), ints(&[0, 1])]);
        assert_eq!(matrix_to_ideal(&z, &f, &mat(&[&[0, 1], &[-5, 0]])), Err(Error::CharPolyMismatch));
    }

    #[test]
    fn ideals_to_matrices() {
        let z = Integers;
        let f = parse_poly(&z, "x^2+6").unwrap();
        let j = IdealBasis::new(f.clone(), vec![ints(&[2, 0]), ints(&[0, 1])]);
        assert_eq!(ideal_to_matrix(&z, &j).unwrap(), mat(&[&[0, 2], &[-3, 0]]));
        let not_ideal = IdealBasis::new(f, vec![ints(&[4, 0]), ints(&[1, 1])]);
        assert_eq!(ideal_to_matrix(&z, &not_ideal), Err(Error::NotAnIdeal));
    }

    #[test]
    fn zero_divisors() {
        let z = Integers;
        let f = parse_poly(&z, "x^2+6").unwrap();
        assert!(is_non_zero_divisor(&z, &f, &ints(&[2, 0])));
        assert!(!is_non_zero_divisor(&z, &f, &ints(&[0, 0])));
        assert!(is_non_zero_divisor(&z, &f, &ints(&[0, 1])));
        let g = parse_poly(&z, "x^2-1").unwrap();
        assert!(!is_non_zero_divisor(&z, &g, &ints(&[1, 1])));
    }

    #[test]
    fn forms() {
        let z = Integers;
        let f = parse_poly(&z, "x^2+6").unwrap();
        let j1 = IdealBasis::new(f.clone(), vec![ints(&[1, 0]), ints(&[0, 1])]);
        let j2 = IdealBasis::new(f.clone(), vec![ints(&[2, 0]), ints(&[0, 1])]);
        assert_eq!(ideal_to_form(&j1).unwrap(), BQForm::new(1, 0, 6));
        assert_eq!(ideal_to_form(&j2).unwrap(), BQForm::new(2, 0, 3));
        let g = parse_poly(&z, "x^2+1").unwrap();
        let j3 = IdealBasis::new(g, vec![ints(&[1, 0]), ints(&[0, 1])]);
        assert_eq!(ideal_to_form(&j3).unwrap(), BQForm::new(1, 0, 1));
        let real = IdealBasis::new(parse_poly(&z, "x^2-5").unwrap(), vec![ints(&[1, 0]), ints(&[0, 1])]);
        assert_eq!(ideal_to_form(&real), Err(Error::NotImaginaryQuadratic));
    }

    #[test]
    fn reduction() {
        assert_eq!(reduce_form(&BQForm::new(2, 0, 3)).unwrap(), BQForm::new(2, 0, 3));
        assert_eq!(reduce_form(&BQForm::new(3, 6, 5)).unwrap(), BQForm::new(2, 0, 3));
        assert_eq!(reduce_form(&BQForm::new(1, 2, 7)).unwrap(), BQForm::new(1, 0, 6));
        assert_eq!(reduce_form(&BQForm::new(1, 0, -6)), Err(Error::IndefiniteForm));
        assert_eq!(reduce_form(&BQForm::new(-1, 0, -6)), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn equivalence_over_z() {
        let z = Integers;
        let f = parse_poly(&z, "x^2+6").unwrap();
        let j1 = IdealBasis::new(f.clone(), vec![ints(&[1, 0]), ints(&[0, 1])]);
        let j2 = IdealBasis::new(f.clone(), vec![ints(&[2, 0]), ints(&[0, 1])]);
        let j3 = j2.scale(&z, &ints(&[0, 1]));
        assert_eq!(j3.basis, vec![ints(&[0, 2]), ints(&[-6, 0])]);
        assert!(!equivalent(&LmRing::Integers, &j1, &j2).unwrap());
        assert!(equivalent(&LmRing::Integers, &j2, &j3).unwrap());
    }
}
