//! Expressions such as `x^2 - t*x - (t^2 + t^3)` or `1+w`, read into a field.
//!
//! Grammar: sums and differences of products, `/` by constants, `^` with integer
//! exponents, parentheses, decimal integers, the variable `x` and whatever named
//! constants the field exposes. A number directly followed by a name or `(`
//! multiplies (`2w`, `3(x+1)`).

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::MonicPoly;
use crate::rings::{KElem, ScalarField};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[st..i].iter().collect();
            out.push(Tok::Num(lit.parse().unwrap()));
        } else if c.is_alphabetic() {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

/// Polynomial in `x`, ascending coefficients, trimmed.
type Poly = Vec<KElem>;

struct Parser<'a, F: ScalarField> {
    field: &'a F,
    toks: Vec<Tok>,
    pos: usize,
}

impl<F: ScalarField> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn trim(mut p: Poly) -> Poly {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let z = self.field.zero();
        Self::trim((0..n).map(|i| self.field.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
    }

    fn neg(&self, a: &Poly) -> Poly {
        a.iter().map(|c| self.field.neg(c)).collect()
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(x, y));
            }
        }
        Self::trim(out)
    }

    fn constant(p: &Poly) -> Option<KElem> {
        match p.len() {
            0 => None,
            1 => Some(p[0].clone()),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.add(&acc, &t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.add(&acc, &self.neg(&t));
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Name(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let u = self.unary()?;
                acc = self.mul(&acc, &u);
            } else if self.eat('/') {
                let u = self.unary()?;
                let d = if u.is_empty() {
                    return Err(Error::DivisionByZero);
                } else {
                    Self::constant(&u).ok_or_else(|| Error::Parse("division by a non-constant".into()))?
                };
                let inv = self.field.inv(&d)?;
                acc = acc.iter().map(|c| self.field.mul(c, &inv)).collect();
            } else if self.starts_primary() {
                let u = self.power()?;
                acc = self.mul(&acc, &u);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            let u = self.unary()?;
            return Ok(self.neg(&u));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.peek() {
            Some(Tok::Num(n)) => {
                let n: u32 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                self.pos += 1;
                n
            }
            _ => return Err(Error::Parse("expected an integer exponent".into())),
        };
        let mut acc: Poly = vec![self.field.one()];
        for _ in 0..e {
            acc = self.mul(&acc, &base);
        }
        if neg {
            let c = Self::constant(&acc).ok_or_else(|| Error::Parse("negative power of a non-constant".into()))?;
            acc = vec![self.field.inv(&c)?];
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Poly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Self::trim(vec![self.field.from_bigint(&n)]))
            }
            Some(Tok::Name(s)) => {
                self.pos += 1;
                if s == "x" {
                    return Ok(vec![self.field.zero(), self.field.one()]);
                }
                let v = self.field.symbol(&s).ok_or_else(|| Error::Parse(format!("unknown name {s:?}")))?;
                Ok(Self::trim(vec![v]))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn parse_raw<F: ScalarField>(field: &F, s: &str) -> Result<Poly> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { field, toks, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(out)
}

/// Reads a field element; `x` is not allowed.
pub fn parse_elem<F: ScalarField>(field: &F, s: &str) -> Result<KElem> {
    let p = parse_raw(field, s)?;
    match p.len() {
        0 => Ok(field.zero()),
        1 => Ok(p[0].clone()),
        _ => Err(Error::Parse(format!("{s:?} is not a constant"))),
    }
}

/// Reads a monic polynomial in `x`.
pub fn parse_poly<F: ScalarField>(field: &F, s: &str) -> Result<MonicPoly> {
    MonicPoly::new(field, parse_raw(field, s)?)
}

/// Reads a matrix given as rows of element strings.
pub fn parse_matrix<F: ScalarField>(field: &F, rows: &[Vec<String>]) -> Result<Matrix> {
    let rows = rows.iter().map(|r| r.iter().map(|s| parse_elem(field, s)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    Matrix::new(rows)
}
