//! Dense matrices over a [`ScalarField`].

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::MonicPoly;
use crate::rings::{KElem, ScalarField};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: Vec<Vec<KElem>>,
}

impl Matrix {
    pub fn new(rows: Vec<Vec<KElem>>) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        if rows.is_empty() || n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix rows must be nonempty and of equal length".into()));
        }
        Ok(Matrix { rows })
    }

    /// A 2x2 matrix `[[a, b], [c, d]]`.
    pub fn m2(a: KElem, b: KElem, c: KElem, d: KElem) -> Self {
        Matrix { rows: vec![vec![a, b], vec![c, d]] }
    }

    pub fn identity<F: ScalarField>(field: &F, n: usize) -> Self {
        Matrix {
            rows: (0..n).map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect(),
        }
    }

    pub fn scalar<F: ScalarField>(field: &F, n: usize, c: &KElem) -> Self {
        Matrix::identity(field, n).scale(field, c)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> &KElem {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<KElem>] {
        &self.rows
    }

    pub fn entries(&self) -> impl Iterator<Item = &KElem> {
        self.rows.iter().flatten()
    }

    pub fn mul<F: ScalarField>(&self, field: &F, o: &Matrix) -> Matrix {
        assert_eq!(self.ncols(), o.nrows(), "matrix product dimension mismatch");
        let rows = (0..self.nrows())
            .map(|i| {
                (0..o.ncols())
                    .map(|j| {
                        (0..self.ncols())
                            .fold(field.zero(), |acc, k| field.add(&acc, &field.mul(&self.rows[i][k], &o.rows[k][j])))
                    })
                    .collect()
            })
            .collect();
        Matrix { rows }
    }

    pub fn mul_vec<F: ScalarField>(&self, field: &F, v: &[KElem]) -> Vec<KElem> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b))))
            .collect()
    }

    fn zip_with(&self, o: &Matrix, f: impl Fn(&KElem, &KElem) -> KElem) -> Matrix {
        assert_eq!((self.nrows(), self.ncols()), (o.nrows(), o.ncols()));
        Matrix {
            rows: self.rows.iter().zip(&o.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect()).collect(),
        }
    }

    pub fn add<F: ScalarField>(&self, field: &F, o: &Matrix) -> Matrix {
        self.zip_with(o, |x, y| field.add(x, y))
    }

    pub fn sub<F: ScalarField>(&self, field: &F, o: &Matrix) -> Matrix {
        self.zip_with(o, |x, y| field.sub(x, y))
    }

    pub fn scale<F: ScalarField>(&self, field: &F, c: &KElem) -> Matrix {
        Matrix { rows: self.rows.iter().map(|r| r.iter().map(|x| field.mul(c, x)).collect()).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix { rows: (0..self.ncols()).map(|j| self.rows.iter().map(|r| r[j].clone()).collect()).collect() }
    }

    pub fn is_integral<F: ScalarField>(&self, field: &F) -> bool {
        self.entries().all(|x| field.is_integral(x))
    }

    pub fn trace<F: ScalarField>(&self, field: &F) -> KElem {
        (0..self.nrows()).fold(field.zero(), |acc, i| field.add(&acc, &self.rows[i][i]))
    }

    /// Determinant by elimination over the fraction field.
    pub fn det<F: ScalarField>(&self, field: &F) -> KElem {
        assert!(self.is_square());
        let n = self.nrows();
        let mut m = self.rows.clone();
        let mut det = field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return field.zero() };
            if p != c {
                m.swap(p, c);
                det = field.neg(&det);
            }
            det = field.mul(&det, &m[c][c]);
            let inv = field.inv(&m[c][c]).unwrap();
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = field.mul(&m[r][c], &inv);
                for k in c..n {
                    let t = field.mul(&f, &m[c][k]);
                    m[r][k] = field.sub(&m[r][k], &t);
                }
            }
        }
        det
    }

    pub fn inverse<F: ScalarField>(&self, field: &F) -> Result<Matrix> {
        assert!(self.is_square());
        let n = self.nrows();
        let id = Matrix::identity(field, n);
        let mut m: Vec<Vec<KElem>> =
            self.rows.iter().zip(&id.rows).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !m[r][c].is_zero()).ok_or(Error::DivisionByZero)?;
            m.swap(p, c);
            let inv = field.inv(&m[c][c])?;
            m[c] = m[c].iter().map(|x| field.mul(x, &inv)).collect();
            for r in 0..n {
                if r == c || m[r][c].is_zero() {
                    continue;
                }
                let f = m[r][c].clone();
                for k in 0..2 * n {
                    let t = field.mul(&f, &m[c][k]);
                    m[r][k] = field.sub(&m[r][k], &t);
                }
            }
        }
        Ok(Matrix { rows: m.into_iter().map(|r| r[n..].to_vec()).collect() })
    }

    pub fn rank<F: ScalarField>(&self, field: &F) -> usize {
        let mut m = self.rows.clone();
        let (nr, nc) = (self.nrows(), self.ncols());
        let mut rank = 0;
        for c in 0..nc {
            let Some(p) = (rank..nr).find(|&r| !m[r][c].is_zero()) else { continue };
            m.swap(p, rank);
            let inv = field.inv(&m[rank][c]).unwrap();
            for r in rank + 1..nr {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = field.mul(&m[r][c], &inv);
                for k in c..nc {
                    let t = field.mul(&f, &m[rank][k]);
                    m[r][k] = field.sub(&m[r][k], &t);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Characteristic polynomial `det(xI - A)`, computed without division.
    pub fn char_poly<F: ScalarField>(&self, field: &F) -> MonicPoly {
        assert!(self.is_square());
        let n = self.nrows();
        // Berkowitz: descending coefficients of the leading principal minors
        let mut coeffs = vec![field.one()];
        for r in 0..n {
            let a = &self.rows[r][r];
            let mut col = vec![field.one(), field.neg(a)];
            let mut v: Vec<KElem> = (0..r).map(|i| self.rows[i][r].clone()).collect();
            for _ in 0..r {
                let rv = (0..r).fold(field.zero(), |acc, j| field.add(&acc, &field.mul(&self.rows[r][j], &v[j])));
                col.push(field.neg(&rv));
                v = (0..r)
                    .map(|i| (0..r).fold(field.zero(), |acc, j| field.add(&acc, &field.mul(&self.rows[i][j], &v[j]))))
                    .collect();
            }
            let next: Vec<KElem> = (0..r + 2)
                .map(|i| {
                    (0..=i.min(r)).fold(field.zero(), |acc, j| {
                        if i - j < col.len() && j < coeffs.len() {
                            field.add(&acc, &field.mul(&col[i - j], &coeffs[j]))
                        } else {
                            acc
                        }
                    })
                })
                .collect();
            coeffs = next;
        }
        coeffs.reverse();
        MonicPoly::new(field, coeffs).expect("characteristic polynomial is monic")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
