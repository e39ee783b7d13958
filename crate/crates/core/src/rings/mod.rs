//! Exact arithmetic in the fraction fields of the supported rings.

mod dvr;
mod elem;
pub(crate) mod fp_poly;

pub use dvr::{QuadExt, Ramification, RingDesc};
pub use elem::{KElem, Val};
pub use fp_poly::{FpPoly, RatFunc};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Field operations on [`KElem`] together with a notion of integrality.
pub trait ScalarField {
    fn zero(&self) -> KElem;
    fn from_bigint(&self, n: &BigInt) -> KElem;
    fn mul(&self, x: &KElem, y: &KElem) -> KElem;
    fn inv(&self, x: &KElem) -> Result<KElem>;
    fn is_integral(&self, x: &KElem) -> bool;
    fn characteristic(&self) -> u64;
    /// Value of a named constant (`t`, `w`) in expressions.
    fn symbol(&self, name: &str) -> Option<KElem>;

    fn from_int(&self, n: i64) -> KElem {
        self.from_bigint(&BigInt::from(n))
    }

    fn one(&self) -> KElem {
        self.from_int(1)
    }

    fn add(&self, x: &KElem, y: &KElem) -> KElem {
        x.add(y)
    }

    fn sub(&self, x: &KElem, y: &KElem) -> KElem {
        x.sub(y)
    }

    fn neg(&self, x: &KElem) -> KElem {
        x.neg()
    }

    fn div(&self, x: &KElem, y: &KElem) -> Result<KElem> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    fn pow(&self, x: &KElem, n: u32) -> KElem {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, x);
        }
        acc
    }

    fn is_zero(&self, x: &KElem) -> bool {
        x.is_zero()
    }
}

/// The integers inside `Q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl ScalarField for Integers {
    fn zero(&self) -> KElem {
        KElem::Rat(BigRational::zero())
    }

    fn from_bigint(&self, n: &BigInt) -> KElem {
        KElem::Rat(BigRational::from_integer(n.clone()))
    }

    fn mul(&self, x: &KElem, y: &KElem) -> KElem {
        KElem::Rat(rat_of(x) * rat_of(y))
    }

    fn inv(&self, x: &KElem) -> Result<KElem> {
        let r = rat_of(x);
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(KElem::Rat(BigRational::one() / r))
    }

    fn is_integral(&self, x: &KElem) -> bool {
        rat_of(x).is_integer()
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn symbol(&self, _name: &str) -> Option<KElem> {
        None
    }
}

pub fn rat_of(x: &KElem) -> &BigRational {
    x.as_rat().unwrap_or_else(|| panic!("expected a rational, got {x:?}"))
}

/// `(x1 + y1 w)(x2 + y2 w)` with `w^2 = a w + b`.
pub(crate) fn quad_mul<F: ScalarField>(base: &F, a: &KElem, b: &KElem, u: &KElem, v: &KElem) -> KElem {
    let (x1, y1) = u.parts().expect("quadratic element");
    let (x2, y2) = v.parts().expect("quadratic element");
    let yy = base.mul(y1, y2);
    let x = base.add(&base.mul(x1, x2), &base.mul(b, &yy));
    let y = base.add(&base.add(&base.mul(x1, y2), &base.mul(x2, y1)), &base.mul(a, &yy));
    KElem::quad(x, y)
}

/// Norm `x^2 + a x y - b y^2` of `x + y w`.
pub(crate) fn quad_norm<F: ScalarField>(base: &F, a: &KElem, b: &KElem, u: &KElem) -> KElem {
    let (x, y) = u.parts().expect("quadratic element");
    let t = base.add(&base.mul(x, x), &base.mul(a, &base.mul(x, y)));
    base.sub(&t, &base.mul(b, &base.mul(y, y)))
}

/// Conjugate `(x + a y) - y w`.
pub(crate) fn quad_conj<F: ScalarField>(base: &F, a: &KElem, u: &KElem) -> KElem {
    let (x, y) = u.parts().expect("quadratic element");
    KElem::quad(base.add(x, &base.mul(a, y)), base.neg(y))
}

pub(crate) fn quad_inv<F: ScalarField>(base: &F, a: &KElem, b: &KElem, u: &KElem) -> Result<KElem> {
    let n = quad_norm(base, a, b, u);
    let ni = base.inv(&n)?;
    let (x, y) = quad_conj(base, a, u).parts().map(|(x, y)| (x.clone(), y.clone())).unwrap();
    Ok(KElem::quad(base.mul(&x, &ni), base.mul(&y, &ni)))
}
