use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::fp_poly::RatFunc;

/// A valuation value: an integer or `+inf` (the valuation of zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Fin(i64),
    Inf,
}

impl Val {
    pub fn fin(self) -> Option<i64> {
        match self {
            Val::Fin(v) => Some(v),
            Val::Inf => None,
        }
    }

    pub fn is_inf(self) -> bool {
        self == Val::Inf
    }

    /// `self >= n`.
    pub fn ge(self, n: i64) -> bool {
        self >= Val::Fin(n)
    }

    pub fn minus(self, n: i64) -> Val {
        match self {
            Val::Fin(v) => Val::Fin(v - n),
            Val::Inf => Val::Inf,
        }
    }
}

impl Add for Val {
    type Output = Val;
    fn add(self, o: Val) -> Val {
        match (self, o) {
            (Val::Fin(a), Val::Fin(b)) => Val::Fin(a + b),
            _ => Val::Inf,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Fin(v) => write!(f, "{v}"),
            Val::Inf => write!(f, "inf"),
        }
    }
}

/// An element of one of the supported fraction fields.
///
/// `Rat` lives in `Q`, `Func` in `F_p(t)`, and `Quad(x, y)` stands for `x + y*w`
/// in a quadratic extension whose generator `w` is fixed by the ambient ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum KElem {
    Rat(BigRational),
    Func(RatFunc),
    Quad(Box<(KElem, KElem)>),
}

impl KElem {
    pub fn int(n: i64) -> KElem {
        KElem::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rat(n: i64, d: i64) -> KElem {
        KElem::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn quad(x: KElem, y: KElem) -> KElem {
        KElem::Quad(Box::new((x, y)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            KElem::Rat(r) => r.is_zero(),
            KElem::Func(f) => f.is_zero(),
            KElem::Quad(q) => q.0.is_zero() && q.1.is_zero(),
        }
    }

    pub fn add(&self, o: &KElem) -> KElem {
        match (self, o) {
            (KElem::Rat(a), KElem::Rat(b)) => KElem::Rat(a + b),
            (KElem::Func(a), KElem::Func(b)) => KElem::Func(a.add(b)),
            (KElem::Quad(a), KElem::Quad(b)) => KElem::quad(a.0.add(&b.0), a.1.add(&b.1)),
            _ => panic!("mixed element kinds: {self:?} + {o:?}"),
        }
    }

    pub fn neg(&self) -> KElem {
        match self {
            KElem::Rat(a) => KElem::Rat(-a),
            KElem::Func(a) => KElem::Func(a.neg()),
            KElem::Quad(a) => KElem::quad(a.0.neg(), a.1.neg()),
        }
    }

    pub fn sub(&self, o: &KElem) -> KElem {
        self.add(&o.neg())
    }

    /// The pair `(x, y)` of a `Quad` element.
    pub fn parts(&self) -> Option<(&KElem, &KElem)> {
        match self {
            KElem::Quad(q) => Some((&q.0, &q.1)),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<&BigRational> {
        match self {
            KElem::Rat(r) => Some(r),
            _ => None,
        }
    }

    fn is_atomic(&self) -> bool {
        match self {
            KElem::Rat(r) => r.is_integer(),
            KElem::Func(f) => f.den().is_one() && f.num().coeffs().iter().filter(|&&c| c != 0).count() <= 1,
            KElem::Quad(_) => false,
        }
    }

    fn is_one(&self) -> bool {
        match self {
            KElem::Rat(r) => r.is_one(),
            KElem::Func(f) => f.den().is_one() && f.num().is_one(),
            KElem::Quad(q) => q.0.is_one() && q.1.is_zero(),
        }
    }

    fn is_negative_rat(&self) -> bool {
        matches!(self, KElem::Rat(r) if r.is_negative())
    }
}

fn variant(x: &KElem) -> u8 {
    match x {
        KElem::Rat(_) => 0,
        KElem::Func(_) => 1,
        KElem::Quad(_) => 2,
    }
}

impl Ord for KElem {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (KElem::Rat(a), KElem::Rat(b)) => a.cmp(b),
            (KElem::Func(a), KElem::Func(b)) => a.cmp(b),
            (KElem::Quad(a), KElem::Quad(b)) => a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)),
            _ => variant(self).cmp(&variant(o)),
        }
    }
}

impl PartialOrd for KElem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KElem::Rat(r) => write!(f, "{r}"),
            KElem::Func(r) => write!(f, "{r}"),
            KElem::Quad(q) => {
                let (x, y) = (&q.0, &q.1);
                if y.is_zero() {
                    return write!(f, "{x}");
                }
                if !x.is_zero() {
                    write!(f, "{x}")?;
                }
                let neg = y.is_negative_rat();
                let ya = if neg { y.neg() } else { y.clone() };
                if neg {
                    write!(f, "-")?;
                } else if !x.is_zero() {
                    write!(f, "+")?;
                }
                if ya.is_one() {
                    write!(f, "w")
                } else if ya.is_atomic() {
                    write!(f, "{ya}*w")
                } else {
                    write!(f, "({ya})*w")
                }
            }
        }
    }
}
