//! Explicit conjugations: triangular forms, the level of a matrix and cyclic-vector
//! transition matrices.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rings::{KElem, RingDesc, ScalarField, Val};

/// A transition matrix `U` with `U A = B U` and `det U` a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GL2Witness {
    pub u: Matrix,
}

impl GL2Witness {
    /// Exact check of `U A = B U` and `v(det U) = 0`.
    pub fn verify(&self, ring: &RingDesc, a: &Matrix, b: &Matrix) -> bool {
        ring.is_unit(&self.u.det(ring)) && self.u.is_integral(ring) && self.u.mul(ring, a) == b.mul(ring, &self.u)
    }
}

pub(crate) fn check_mat2(ring: &RingDesc, a: &Matrix) -> Result<()> {
    if a.nrows() != 2 || a.ncols() != 2 {
        return Err(Error::DimensionMismatch("expected a 2x2 matrix".into()));
    }
    if !a.entries().all(|x| ring.contains(x)) {
        return Err(Error::InvalidParams("matrix entries do not belong to the ring".into()));
    }
    if !a.is_integral(ring) {
        return Err(Error::NotIntegral);
    }
    Ok(())
}

/// `min(v(A12), v(A21), v(A22 - A11))`: the largest `k` with `A ≡ c I (mod pi^k)`.
pub fn level(ring: &RingDesc, a: &Matrix) -> Val {
    let d = ring.sub(a.get(1, 1), a.get(0, 0));
    ring.val(a.get(0, 1)).min(ring.val(a.get(1, 0))).min(ring.val(&d))
}

/// Conjugates `A` to `[[l1, *], [0, l2]]`: returns `(U, T)` with `U A = T U`.
pub fn triangularize(ring: &RingDesc, a: &Matrix, roots: (&KElem, &KElem)) -> Result<(GL2Witness, Matrix)> {
    check_mat2(ring, a)?;
    let (l1, l2) = roots;
    let f = a.char_poly(ring);
    if !f.eval(ring, l1).is_zero() || !f.eval(ring, l2).is_zero() || ring.add(l1, l2) != a.trace(ring) {
        return Err(Error::CharPolyMismatch);
    }
    let m = a.sub(ring, &Matrix::scalar(ring, 2, l2));
    let mut u = vec![m.get(1, 0).clone(), ring.neg(m.get(0, 0))];
    if u.iter().all(|x| x.is_zero()) {
        u = vec![m.get(1, 1).clone(), ring.neg(m.get(0, 1))];
    }
    let ident = Matrix::identity(ring, 2);
    let uu = if u.iter().all(|x| x.is_zero()) {
        ident
    } else {
        // left eigenvector u A = l2 u, made primitive
        let s = ring.val(&u[0]).min(ring.val(&u[1]));
        let sh = ring.pi_pow(-s.fin().unwrap());
        let u: Vec<KElem> = u.iter().map(|x| ring.mul(x, &sh)).collect();
        if ring.is_unit(&u[1]) {
            let c = ring.inv(&u[1])?;
            Matrix::m2(ring.one(), ring.zero(), ring.mul(&u[0], &c), ring.one())
        } else {
            let c = ring.inv(&u[0])?;
            Matrix::m2(ring.zero(), ring.one(), ring.one(), ring.mul(&u[1], &c))
        }
    };
    let t = uu.mul(ring, a).mul(ring, &uu.inverse(ring)?);
    let w = GL2Witness { u: uu };
    assert!(
        t.get(1, 0).is_zero() && t.get(1, 1) == l2 && t.get(0, 0) == l1 && w.verify(ring, a, &t),
        "triangularization failed verification"
    );
    Ok((w, t))
}

/// The representative `tau` of an upper triangular class with diagonal `(l1, l2)`.
pub fn reducible_normalize(ring: &RingDesc, l1: &KElem, l2: &KElem, tau_raw: &KElem) -> KElem {
    let j = ring.val(tau_raw).min(ring.val(&ring.sub(l1, l2)));
    match j {
        Val::Fin(j) => ring.pi_pow(j),
        Val::Inf => ring.zero(),
    }
}

/// `U` with `U A = C U` for two matrices of equal characteristic polynomial and
/// equal finite level `k`, built from cyclic vectors of `(A - C11 I) / pi^k`.
pub(crate) fn conjugator(ring: &RingDesc, a: &Matrix, c: &Matrix, k: i64) -> Matrix {
    let shift = Matrix::scalar(ring, 2, c.get(0, 0));
    let scale = ring.pi_pow(-k);
    let frame = |m: &Matrix| -> Matrix {
        let m1 = m.sub(ring, &shift).scale(ring, &scale);
        assert!(m1.is_integral(ring), "matrices are not congruent to the same scalar");
        let z = ring.zero();
        let o = ring.one();
        for e in [vec![o.clone(), z.clone()], vec![z.clone(), o.clone()], vec![o.clone(), o.clone()]] {
            let ae = m1.mul_vec(ring, &e);
            let p = Matrix::m2(e[0].clone(), ae[0].clone(), e[1].clone(), ae[1].clone());
            if ring.is_unit(&p.det(ring)) {
                return p;
            }
        }
        panic!("no cyclic vector for a matrix of level zero");
    };
    let pa = frame(a);
    let pc = frame(c);
    pc.mul(ring, &pa.inverse(ring).expect("unit determinant"))
}
