//! Similarity classes of 2x2 matrices over a discrete valuation ring.
//!
//! For a fixed characteristic polynomial `f = x^2 - a x - b`, the class of `A` is
//! determined by its level `k = min(v(A12), v(A21), v(A22 - A11))`. Equivalently,
//! `A` corresponds to the lattice `R pi^n + R(r + w)` in `K[w]`, and `k` is the
//! index of its multiplier order. The forms below label the attainable levels
//! according to the arithmetic of `f`.

mod reduce;
mod search;

use std::fmt;

pub use reduce::{level, reducible_normalize, triangularize, GL2Witness};
pub use search::{compute_m, MCase};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lm::IdealBasis;
use crate::poly::{quad_factor, MonicPoly};
use crate::rings::{KElem, RingDesc, ScalarField, Val};
use reduce::{check_mat2, conjugator};
use search::{find_r, max_level, QuadData};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Reducible { l1: KElem, l2: KElem, tau: KElem },
    Unit2 { a: KElem, b: KElem, k: u32 },
    Case1 { r: KElem, i: u32 },
    Case21 { n: u32 },
    Case22Main { n: u32 },
    Case22Extra { r: KElem, i: u32 },
    Char2Sep { r: KElem, i: u32 },
    Insep { i: u32, u: KElem, s: KElem },
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormKind::Reducible { l1, l2, tau } => write!(f, "Reducible{{l1={l1},l2={l2},tau={tau}}}"),
            FormKind::Unit2 { a, b, k } => write!(f, "Unit2{{a={a},b={b},k={k}}}"),
            FormKind::Case1 { r, i } => write!(f, "Case1{{r={r},i={i}}}"),
            FormKind::Case21 { n } => write!(f, "Case21{{n={n}}}"),
            FormKind::Case22Main { n } => write!(f, "Case22Main{{n={n}}}"),
            FormKind::Case22Extra { r, i } => write!(f, "Case22Extra{{r={r},i={i}}}"),
            FormKind::Char2Sep { r, i } => write!(f, "Char2Sep{{r={r},i={i}}}"),
            FormKind::Insep { i, u, s } => write!(f, "Insep{{i={i},u={u},s={s}}}"),
        }
    }
}

/// A canonical form: one representative per similarity class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonForm {
    pub ring: RingDesc,
    pub f: MonicPoly,
    pub kind: FormKind,
}

impl fmt::Display for CanonForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassNumber {
    Finite(u64),
    /// Number of classes of index at most the given bound; more may exist.
    LowerBound(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Regime {
    Unit2,
    Case1 { m: u32, r: KElem },
    Case21,
    Case22 { h: u32, m: u32, r: KElem },
    Char2Sep { m: u32, r: KElem },
    Insep,
}

fn regime(q: &QuadData) -> Result<Regime> {
    let ring = q.ring;
    let e = ring.e();
    let va = q.v(&q.a);
    Ok(match e {
        Val::Fin(0) => Regime::Unit2,
        Val::Fin(_) if va < e => {
            let (m, r) = compute_m(ring, &q.f, MCase::Case1)?;
            Regime::Case1 { m, r }
        }
        Val::Fin(_) => {
            let vd = q.v(&q.delta()).fin().ok_or(Error::NotIrreducible)?;
            if vd % 2 == 1 {
                Regime::Case21
            } else {
                let (m, r) = compute_m(ring, &q.f, MCase::Case22)?;
                Regime::Case22 { h: (vd / 2) as u32, m, r }
            }
        }
        Val::Inf if !q.a.is_zero() => {
            let (m, r) = compute_m(ring, &q.f, MCase::Char2Sep)?;
            Regime::Char2Sep { m, r }
        }
        Val::Inf => Regime::Insep,
    })
}

fn label(q: &QuadData, reg: &Regime, k: u32) -> Result<FormKind> {
    Ok(match reg {
        Regime::Unit2 => FormKind::Unit2 { a: q.a.clone(), b: q.b.clone(), k },
        Regime::Case1 { r, .. } => FormKind::Case1 { r: r.clone(), i: k },
        Regime::Case21 => FormKind::Case21 { n: k },
        Regime::Case22 { h, r, .. } => {
            if k <= *h {
                FormKind::Case22Main { n: k }
            } else {
                FormKind::Case22Extra { r: r.clone(), i: k - h }
            }
        }
        Regime::Char2Sep { r, .. } => FormKind::Char2Sep { r: r.clone(), i: k },
        Regime::Insep => {
            let ring = q.ring;
            let u = find_r(q, k).ok_or_else(|| Error::InvalidParams(format!("no class of index {k}")))?;
            let s = ring.mul(&ring.sub(&q.b, &ring.mul(&u, &u)), &ring.pi_pow(-(k as i64)));
            FormKind::Insep { i: k, u, s }
        }
    })
}

/// Index of the class of an irreducible-`f` matrix, read off its lattice
/// `R A12 + R(w - A11)` normalized to `R pi^n + R(r + w)`.
fn lattice_index(q: &QuadData, a: &Matrix) -> u32 {
    let ring = q.ring;
    let n = ring.val(a.get(0, 1));
    let r = ring.neg(a.get(0, 0));
    let idx = n.min(q.v(&q.t_of(&r)).minus(n.fin().unwrap())).min(q.v(&q.two_r_a(&r)));
    idx.fin().expect("irreducible polynomial gives a finite index") as u32
}

/// Assigns the canonical form of the similarity class of `A`.
pub fn classify(ring: &RingDesc, a: &Matrix) -> Result<CanonForm> {
    check_mat2(ring, a)?;
    let f = a.char_poly(ring);
    let q = QuadData::new(ring, &f)?;
    let kind = match quad_factor(ring, &f)? {
        Some((l1, l2)) => {
            let (_, t) = triangularize(ring, a, (&l1, &l2))?;
            let tau = reducible_normalize(ring, &l1, &l2, t.get(0, 1));
            FormKind::Reducible { l1, l2, tau }
        }
        None => {
            let reg = regime(&q)?;
            label(&q, &reg, lattice_index(&q, a))?
        }
    };
    Ok(CanonForm { ring: ring.clone(), f, kind })
}

fn invalid(msg: &str) -> Error {
    Error::InvalidParams(msg.to_string())
}

fn pi_power_index(ring: &RingDesc, x: &KElem) -> Option<i64> {
    let v = ring.val(x).fin()?;
    (ring.pi_pow(v) == *x).then_some(v)
}

/// The representative matrix of a canonical form.
pub fn canonical_matrix(form: &CanonForm) -> Result<Matrix> {
    let ring = &form.ring;
    let q = QuadData::new(ring, &form.f)?;
    let (a, b) = (&q.a, &q.b);
    let pi = |k: i64| ring.pi_pow(k);
    let m = match &form.kind {
        FormKind::Reducible { l1, l2, tau } => {
            if ring.add(l1, l2) != *a || ring.mul(l1, l2) != ring.neg(b) {
                return Err(invalid("roots do not match the polynomial"));
            }
            if ring.val(l1) < ring.val(l2) {
                return Err(invalid("roots must satisfy v(l1) >= v(l2)"));
            }
            let d = ring.val(&ring.sub(l1, l2));
            let ok = if tau.is_zero() { d.is_inf() } else { pi_power_index(ring, tau).is_some_and(|j| j >= 0 && d.ge(j)) };
            if !ok {
                return Err(invalid("tau must be 0 (equal roots) or pi^j with j <= v(l1 - l2)"));
            }
            Matrix::m2(l1.clone(), tau.clone(), ring.zero(), l2.clone())
        }
        kind => {
            if quad_factor(ring, &form.f)?.is_some() {
                return Err(invalid("irreducible form over a reducible polynomial"));
            }
            let reg = regime(&q)?;
            let kind_matches = matches!(
                (kind, &reg),
                (FormKind::Unit2 { .. }, Regime::Unit2)
                    | (FormKind::Case1 { .. }, Regime::Case1 { .. })
                    | (FormKind::Case21 { .. }, Regime::Case21)
                    | (FormKind::Case22Main { .. }, Regime::Case22 { .. })
                    | (FormKind::Case22Extra { .. }, Regime::Case22 { .. })
                    | (FormKind::Char2Sep { .. }, Regime::Char2Sep { .. })
                    | (FormKind::Insep { .. }, Regime::Insep)
            );
            if !kind_matches {
                return Err(invalid("form does not match the arithmetic of the polynomial"));
            }
            match kind {
                FormKind::Unit2 { a: fa, b: fb, k } => {
                    if fa != a || fb != b {
                        return Err(invalid("a, b do not match the polynomial"));
                    }
                    let k = *k as i64;
                    let d = q.delta();
                    if !q.v(&d).ge(2 * k) {
                        return Err(invalid("need v(a^2/4 + b) >= 2k"));
                    }
                    let h = q.half_a();
                    Matrix::m2(h.clone(), pi(k), ring.mul(&d, &pi(-k)), h)
                }
                FormKind::Case1 { r, i } | FormKind::Char2Sep { r, i } => {
                    let i = *i as i64;
                    if !ring.is_integral(r) || !q.v(&q.t_of(r)).ge(2 * i) || !q.v(a).ge(i) {
                        return Err(invalid("need v(b - r(r+a)) >= 2i and i <= v(a)"));
                    }
                    Matrix::m2(ring.neg(r), pi(i), ring.mul(&q.t_of(r), &pi(-i)), ring.add(a, r))
                }
                FormKind::Case21 { n } | FormKind::Case22Main { n } => {
                    let n = *n as i64;
                    let d = q.delta();
                    if !q.v(&d).ge(2 * n) {
                        return Err(invalid("need v(delta) >= 2n"));
                    }
                    let h = q.half_a();
                    Matrix::m2(h.clone(), pi(n), ring.mul(&d, &pi(-n)), h)
                }
                FormKind::Case22Extra { r, i } => {
                    let d = q.delta();
                    let vd = q.v(&d).fin().unwrap();
                    let i = *i as i64;
                    let e = ring.e().fin().unwrap();
                    let dr = ring.sub(&d, &ring.mul(r, r));
                    if !ring.is_integral(r) || i < 1 || i > e || !q.v(&dr).ge(vd + 2 * i) {
                        return Err(invalid("need 1 <= i <= e and v(delta - r^2) >= v(delta) + 2i"));
                    }
                    let j = vd / 2 + i;
                    let h = q.half_a();
                    Matrix::m2(ring.sub(&h, r), pi(j), ring.mul(&dr, &pi(-j)), ring.add(&h, r))
                }
                FormKind::Insep { i, u, s } => {
                    let i64_ = *i as i64;
                    let lhs = ring.add(&ring.mul(u, u), &ring.mul(s, &pi(i64_)));
                    if !ring.is_integral(u) || lhs != *b || !q.v(s).ge(i64_) {
                        return Err(invalid("need u^2 + s pi^i = b with v(s) >= i"));
                    }
                    Matrix::m2(u.clone(), s.clone(), pi(i64_), u.clone())
                }
                FormKind::Reducible { .. } => unreachable!(),
            }
        }
    };
    Ok(m)
}

fn bound_for(f: &MonicPoly, ring: &RingDesc, bound: Option<u32>) -> Result<Option<u32>> {
    if f.is_separable(ring) {
        Ok(None)
    } else {
        bound.map(Some).ok_or(Error::InsepBoundRequired)
    }
}

/// All canonical forms with characteristic polynomial `f`, by increasing index.
///
/// Polynomials with a repeated root (and inseparable ones) have classes of every
/// index; only those of index at most `bound` are listed, plus the scalar class
/// when there is one.
pub fn class_list(ring: &RingDesc, f: &MonicPoly, bound: Option<u32>) -> Result<Vec<CanonForm>> {
    let q = QuadData::new(ring, f)?;
    let bound = bound_for(f, ring, bound)?;
    let form = |kind| CanonForm { ring: ring.clone(), f: f.clone(), kind };
    if let Some((l1, l2)) = quad_factor(ring, f)? {
        let d = ring.val(&ring.sub(&l1, &l2));
        let top = match d {
            Val::Fin(d) => d as u32,
            Val::Inf => bound.unwrap(),
        };
        let mut out: Vec<CanonForm> = (0..=top)
            .map(|j| form(FormKind::Reducible { l1: l1.clone(), l2: l2.clone(), tau: ring.pi_pow(j as i64) }))
            .collect();
        if d.is_inf() {
            out.push(form(FormKind::Reducible { l1: l1.clone(), l2, tau: ring.zero() }));
        }
        return Ok(out);
    }
    let reg = regime(&q)?;
    let kmax = match bound {
        Some(b) => max_level(&q, b).0,
        None => {
            // any valid level satisfies 2k <= v(a^2 + 4b), and 2k <= 2v(a) in characteristic two
            let cap = if ring.characteristic() == 2 {
                q.v(&q.a)
            } else {
                q.v(&ring.add(&ring.mul(&q.a, &q.a), &ring.mul(&ring.from_int(4), &q.b))).fin().map(|v| Val::Fin(v / 2)).unwrap_or(Val::Inf)
            };
            max_level(&q, cap.fin().expect("irreducible polynomial has a finite cap") as u32).0
        }
    };
    (0..=kmax).map(|k| Ok(form(label(&q, &reg, k)?))).collect()
}

/// Number of similarity classes with characteristic polynomial `f`, by the
/// closed formulas of each case.
pub fn class_number(ring: &RingDesc, f: &MonicPoly, bound: Option<u32>) -> Result<ClassNumber> {
    let q = QuadData::new(ring, f)?;
    if let Some((l1, l2)) = quad_factor(ring, f)? {
        return Ok(match ring.val(&ring.sub(&l1, &l2)) {
            Val::Fin(d) => ClassNumber::Finite(d as u64 + 1),
            Val::Inf => {
                let b = bound.ok_or(Error::InsepBoundRequired)?;
                ClassNumber::LowerBound(b as u64 + 2)
            }
        });
    }
    let vd = |x: &KElem| q.v(x).fin().unwrap() as u64;
    Ok(match regime(&q)? {
        Regime::Unit2 | Regime::Case21 => ClassNumber::Finite(vd(&q.delta()) / 2 + 1),
        Regime::Case1 { m, .. } | Regime::Char2Sep { m, .. } => ClassNumber::Finite(m as u64 + 1),
        Regime::Case22 { h, m, .. } => ClassNumber::Finite(h as u64 + m as u64 + 1),
        Regime::Insep => {
            let b = bound.ok_or(Error::InsepBoundRequired)?;
            ClassNumber::LowerBound(class_list(ring, f, Some(b))?.len() as u64)
        }
    })
}

/// Whether `A` and `B` are conjugate by `GL_2(R)`.
pub fn similar(ring: &RingDesc, a: &Matrix, b: &Matrix) -> Result<bool> {
    check_mat2(ring, a)?;
    check_mat2(ring, b)?;
    if a.char_poly(ring) != b.char_poly(ring) {
        return Ok(false);
    }
    Ok(classify(ring, a)? == classify(ring, b)?)
}

/// `U` with `U A = C U` where `C` is the canonical matrix of the class of `A`.
pub fn to_canonical(ring: &RingDesc, a: &Matrix) -> Result<(CanonForm, GL2Witness)> {
    let form = classify(ring, a)?;
    let c = canonical_matrix(&form)?;
    let u = match level(ring, a) {
        Val::Inf => Matrix::identity(ring, 2),
        Val::Fin(k) => conjugator(ring, a, &c, k),
    };
    let w = GL2Witness { u };
    assert!(w.verify(ring, a, &c), "transition matrix to the canonical form failed verification");
    Ok((form, w))
}

/// A verified transition matrix `U` with `U A = B U`, or `None` when not similar.
pub fn witness(ring: &RingDesc, a: &Matrix, b: &Matrix) -> Result<Option<GL2Witness>> {
    if !similar(ring, a, b)? {
        return Ok(None);
    }
    let (_, ua) = to_canonical(ring, a)?;
    let (_, ub) = to_canonical(ring, b)?;
    let u = ub.u.inverse(ring)?.mul(ring, &ua.u);
    let w = GL2Witness { u };
    assert!(w.verify(ring, a, b), "similarity witness failed verification");
    Ok(Some(w))
}

/// Lattice bases `(X1, X2)` in `K[w]` for every class of an irreducible `f`,
/// in the order of [`class_list`].
pub fn ideal_reps(ring: &RingDesc, f: &MonicPoly, bound: Option<u32>) -> Result<Vec<IdealBasis>> {
    if quad_factor(ring, f)?.is_some() {
        return Err(Error::InvalidParams("polynomial is reducible".into()));
    }
    class_list(ring, f, bound)?
        .iter()
        .map(|form| {
            let c = canonical_matrix(form)?;
            // (A12, w - A11) satisfies w X = A X
            let basis = vec![
                vec![c.get(0, 1).clone(), ring.zero()],
                vec![ring.neg(c.get(0, 0)), ring.one()],
            ];
            Ok(IdealBasis::new(f.clone(), basis))
        })
        .collect()
}
