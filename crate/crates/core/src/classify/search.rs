//! Level-by-level residue searches behind `compute_m` and the class enumeration.

use crate::error::{Error, Result};
use crate::poly::MonicPoly;
use crate::rings::{KElem, RingDesc, ScalarField, Val};

/// The data of `f = x^2 - a x - b` over a fixed ring.
#[derive(Clone, Debug)]
pub(crate) struct QuadData<'a> {
    pub ring: &'a RingDesc,
    pub f: MonicPoly,
    pub a: KElem,
    pub b: KElem,
}

impl<'a> QuadData<'a> {
    pub fn new(ring: &'a RingDesc, f: &MonicPoly) -> Result<Self> {
        let (a, b) = f.quad_ab(ring)?;
        if !ring.contains(&a) || !ring.contains(&b) {
            return Err(Error::InvalidParams("polynomial coefficients do not belong to the ring".into()));
        }
        if !ring.is_integral(&a) || !ring.is_integral(&b) {
            return Err(Error::NotIntegral);
        }
        Ok(QuadData { ring, f: f.clone(), a, b })
    }

    pub fn v(&self, x: &KElem) -> Val {
        self.ring.val(x)
    }

    /// `b - r(r + a)`.
    pub fn t_of(&self, r: &KElem) -> KElem {
        let rg = self.ring;
        rg.sub(&self.b, &rg.mul(r, &rg.add(r, &self.a)))
    }

    /// `2r + a`.
    pub fn two_r_a(&self, r: &KElem) -> KElem {
        let rg = self.ring;
        rg.add(&rg.mul(&rg.from_int(2), r), &self.a)
    }

    /// Whether `R pi^k + R(r + w)` can have multiplier order of index `k`.
    pub fn valid(&self, r: &KElem, k: u32) -> bool {
        let k = k as i64;
        self.v(&self.two_r_a(r)).ge(k) && self.v(&self.t_of(r)).ge(2 * k)
    }

    /// `a^2/4 + b`, defined when `a/2` is integral.
    pub fn delta(&self) -> KElem {
        let rg = self.ring;
        let half_a = rg.div(&self.a, &rg.from_int(2)).expect("2 is nonzero here");
        rg.add(&rg.mul(&half_a, &half_a), &self.b)
    }

    pub fn half_a(&self) -> KElem {
        self.ring.div(&self.a, &self.ring.from_int(2)).expect("2 is nonzero here")
    }
}

/// Lifts a set of residues mod `pi^j` to all admissible residues mod `pi^(j+1)`.
fn lift(ring: &RingDesc, cands: &[KElem], j: u32, keep: impl Fn(&KElem) -> bool) -> Vec<KElem> {
    let step = ring.pi_pow(j as i64);
    let mut out: Vec<(u128, KElem)> = Vec::new();
    for r in cands {
        for d in ring.residue_field_reps() {
            let x = ring.add(r, &ring.mul(&d, &step));
            if keep(&x) {
                let x = ring.residue(&x, j + 1).expect("integral");
                let key = ring.residue_key(&x, j + 1).expect("integral");
                out.push((key, x));
            }
        }
    }
    out.sort_by_key(|p| p.0);
    out.dedup_by_key(|p| p.0);
    out.into_iter().map(|p| p.1).collect()
}

/// Least residue `r mod pi^k` with `v(2r+a) >= k` and `v(b - r(r+a)) >= 2k`.
pub(crate) fn find_r(q: &QuadData, k: u32) -> Option<KElem> {
    let mut cands = vec![q.ring.zero()];
    for j in 0..k {
        cands = lift(q.ring, &cands, j, |x| q.valid(x, j + 1));
        if cands.is_empty() {
            return None;
        }
    }
    cands.into_iter().next()
}

/// Largest `k <= cap` admitting a valid `r`, together with that `r`.
pub(crate) fn max_level(q: &QuadData, cap: u32) -> (u32, KElem) {
    let mut cands = vec![q.ring.zero()];
    let mut k = 0;
    while k < cap {
        let next = lift(q.ring, &cands, k, |x| q.valid(x, k + 1));
        if next.is_empty() {
            break;
        }
        cands = next;
        k += 1;
    }
    (k, cands.into_iter().next().unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MCase {
    Case1,
    Case22,
    Char2Sep,
}

/// The maximal `m` of the case together with its least realizing residue `r`.
pub fn compute_m(ring: &RingDesc, f: &MonicPoly, case: MCase) -> Result<(u32, KElem)> {
    let q = QuadData::new(ring, f)?;
    let e = ring.e();
    let va = q.v(&q.a);
    match case {
        MCase::Case1 | MCase::Char2Sep => {
            let ok = match case {
                MCase::Case1 => matches!(e, Val::Fin(x) if x > 0) && va < e,
                _ => e.is_inf() && !va.is_inf(),
            };
            if !ok {
                return Err(Error::InvalidParams("valuation preconditions of the case fail".into()));
            }
            let cap = va.fin().unwrap() as u32;
            let mut cands = vec![ring.zero()];
            let mut m = 0;
            while m < cap {
                let next = lift(ring, &cands, m, |x| q.v(&q.t_of(x)).ge(2 * (m as i64 + 1)));
                if next.is_empty() {
                    break;
                }
                cands = next;
                m += 1;
            }
            Ok((m, cands.into_iter().next().unwrap()))
        }
        MCase::Case22 => {
            let Val::Fin(ev) = e else {
                return Err(Error::InvalidParams("case 2.2 needs 0 < v(2) < inf".into()));
            };
            if ev == 0 || va < e {
                return Err(Error::InvalidParams("case 2.2 needs v(a) >= v(2) > 0".into()));
            }
            let delta = q.delta();
            let Val::Fin(vd) = q.v(&delta) else {
                return Err(Error::NotIrreducible);
            };
            if vd % 2 != 0 {
                return Err(Error::InvalidParams("case 2.2 needs v(delta) even".into()));
            }
            let h = vd / 2;
            let d0 = ring.mul(&delta, &ring.pi_pow(-2 * h));
            let mut cands = vec![ring.zero()];
            let mut m = 0;
            while (m as i64) < ev {
                let next = lift(ring, &cands, m, |rho| {
                    ring.val(&ring.sub(&d0, &ring.mul(rho, rho))).ge(2 * (m as i64 + 1))
                });
                if next.is_empty() {
                    break;
                }
                cands = next;
                m += 1;
            }
            let rho = cands.into_iter().next().unwrap();
            let r = ring.residue(&ring.mul(&ring.pi_pow(h), &rho), (h as u32) + m)?;
            Ok((m, r))
        }
    }
}
