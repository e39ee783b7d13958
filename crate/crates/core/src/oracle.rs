//! Brute-force conjugacy over the finite quotients `R / pi^N`.
//!
//! A negative answer at any `N` proves non-similarity over `R`; a positive one
//! proves nothing on its own.

use crate::classify::level;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::MonicPoly;
use crate::rings::{KElem, RingDesc, ScalarField, Val};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `R / pi^n` for a fixed ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRing {
    pub ring: RingDesc,
    pub n: u32,
}

impl QuotientRing {
    pub fn new(ring: &RingDesc, n: u32) -> Self {
        QuotientRing { ring: ring.clone(), n }
    }

    pub fn size(&self) -> Option<u128> {
        self.ring.quotient_size(self.n)
    }

    pub fn reduce(&self, x: &KElem) -> Result<KElem> {
        self.ring.residue(x, self.n)
    }

    pub fn key(&self, x: &KElem) -> Result<u128> {
        self.ring.residue_key(x, self.n)
    }

    pub fn add(&self, x: &KElem, y: &KElem) -> KElem {
        self.reduce(&self.ring.add(x, y)).expect("integral")
    }

    pub fn mul(&self, x: &KElem, y: &KElem) -> KElem {
        self.reduce(&self.ring.mul(x, y)).expect("integral")
    }

    pub fn elements(&self, budget: u64) -> Result<Vec<KElem>> {
        enumerate_quotient(&self.ring, self.n, budget)
    }
}

fn over_budget(needed: impl ToString, budget: u64) -> Error {
    Error::BudgetExceeded { needed: needed.to_string(), budget }
}

/// All residues mod `pi^n`, ordered by key.
pub fn enumerate_quotient(ring: &RingDesc, n: u32, budget: u64) -> Result<Vec<KElem>> {
    let size = ring.quotient_size(n).filter(|&s| s <= budget as u128);
    let Some(size) = size else {
        let needed = ring.quotient_size(n).map_or_else(|| "overflow".to_string(), |s| s.to_string());
        return Err(over_budget(needed, budget));
    };
    Ok((0..size).map(|k| ring.from_key(k, n)).collect())
}

/// A residue matrix `U` with `U A ≡ B U (mod pi^n)` and `det U` a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueWitness {
    pub u: Matrix,
    pub n: u32,
}

/// Whether `U` conjugates `A` to `B` modulo `pi^n`.
pub fn verify_mod(ring: &RingDesc, u: &Matrix, a: &Matrix, b: &Matrix, n: u32) -> bool {
    let d = u.mul(ring, a).sub(ring, &b.mul(ring, u));
    u.is_integral(ring) && ring.is_unit(&u.det(ring)) && d.entries().all(|x| ring.val(x).ge(n as i64))
}

/// Coefficient matrix of `u -> U A - B U` on `(u11, u12, u21, u22)`.
fn commutator_system(ring: &RingDesc, a: &Matrix, b: &Matrix) -> Vec<Vec<KElem>> {
    let mut rows = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let mut row = vec![ring.zero(); 4];
            for k in 0..2 {
                // (U A)_ij = sum_k u_ik A_kj ; (B U)_ij = sum_k B_ik u_kj
                row[2 * i + k] = ring.add(&row[2 * i + k], a.get(k, j));
                row[2 * k + j] = ring.sub(&row[2 * k + j], b.get(i, k));
            }
            rows.push(row);
        }
    }
    rows
}

/// Diagonalizes `M` by row and column operations over the DVR; returns the
/// diagonal valuations and the accumulated column transform `C`.
fn smith_columns(ring: &RingDesc, mut m: Vec<Vec<KElem>>) -> (Vec<Val>, Vec<Vec<KElem>>) {
    let n = m[0].len();
    let rows = m.len();
    let mut c: Vec<Vec<KElem>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect()).collect();
    let mut diag = Vec::new();
    for t in 0..n.min(rows) {
        let mut best: Option<(Val, usize, usize)> = None;
        for i in t..rows {
            for j in t..n {
                let v = ring.val(&m[i][j]);
                if best.as_ref().is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let (v, bi, bj) = best.unwrap();
        if v.is_inf() {
            break;
        }
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        for row in c.iter_mut() {
            row.swap(t, bj);
        }
        let p = m[t][t].clone();
        for i in t + 1..rows {
            let f = ring.div(&m[i][t], &p).expect("pivot is nonzero");
            for j in t..n {
                m[i][j] = ring.sub(&m[i][j], &ring.mul(&f, &m[t][j]));
            }
        }
        for j in t + 1..n {
            let f = ring.div(&m[t][j], &p).expect("pivot is nonzero");
            for i in 0..rows {
                m[i][j] = ring.sub(&m[i][j], &ring.mul(&f, &m[i][t]));
            }
            for row in c.iter_mut() {
                row[j] = ring.sub(&row[j], &ring.mul(&f, &row[t]));
            }
        }
        diag.push(v);
    }
    while diag.len() < n {
        diag.push(Val::Inf);
    }
    (diag, c)
}

/// Exhaustive search for `U` in `GL_2(R / pi^n)` with `U A ≡ B U (mod pi^n)`.
///
/// Candidates are restricted to the solution module of the linear condition.
/// Returns the identity when `A ≡ B`, and otherwise the witness whose entry
/// keys `(u11, u12, u21, u22)` are lexicographically least.
pub fn conj_search_mod(ring: &RingDesc, a: &Matrix, b: &Matrix, n: u32, budget: u64) -> Result<Option<ResidueWitness>> {
    for m in [a, b] {
        if m.nrows() != 2 || m.ncols() != 2 {
            return Err(Error::DimensionMismatch("expected 2x2 matrices".into()));
        }
        if !m.is_integral(ring) {
            return Err(Error::NotIntegral);
        }
    }
    let id = Matrix::identity(ring, 2);
    if verify_mod(ring, &id, a, b, n) {
        return Ok(Some(ResidueWitness { u: id, n }));
    }
    let (diag, c) = smith_columns(ring, commutator_system(ring, a, b));
    // u' = C^-1 u with pi^(n - v_i) | u'_i, taken mod pi^n
    let mut ranges: Vec<(u32, u32)> = Vec::new();
    let mut total: u128 = 1;
    for v in &diag {
        let free = match v {
            Val::Fin(v) if (*v as u64) < n as u64 => *v as u32,
            _ => n,
        };
        let size = ring.quotient_size(free).ok_or_else(|| over_budget("overflow", budget))?;
        total = total.saturating_mul(size);
        ranges.push((free, n - free));
    }
    if total > budget as u128 {
        return Err(over_budget(total, budget));
    }
    let choices: Vec<Vec<KElem>> = ranges
        .iter()
        .map(|&(free, shift)| {
            let s = ring.pi_pow(shift as i64);
            enumerate_quotient(ring, free, budget).map(|xs| xs.iter().map(|x| ring.mul(x, &s)).collect())
        })
        .collect::<Result<_>>()?;
    let mut best: Option<([u128; 4], Matrix)> = None;
    let mut idx = [0usize; 4];
    loop {
        let up: Vec<&KElem> = (0..4).map(|i| &choices[i][idx[i]]).collect();
        let u: Vec<KElem> = (0..4)
            .map(|r| {
                let s = (0..4).fold(ring.zero(), |acc, k| ring.add(&acc, &ring.mul(&c[r][k], up[k])));
                ring.residue(&s, n).expect("integral")
            })
            .collect();
        let um = Matrix::m2(u[0].clone(), u[1].clone(), u[2].clone(), u[3].clone());
        if ring.is_unit(&um.det(ring)) {
            debug_assert!(verify_mod(ring, &um, a, b, n));
            let key = [0, 1, 2, 3].map(|i| ring.residue_key(&u[i], n).expect("integral"));
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, um));
            }
        }
        let mut pos = 0;
        loop {
            if pos == 4 {
                return Ok(best.map(|(_, u)| ResidueWitness { u, n }));
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Outcome for one pair of levels `k < l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub k: u32,
    pub l: u32,
    pub predicted_similar: bool,
    pub found_similar: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelFamilyReport {
    pub cutoff: Val,
    pub pairs: Vec<PairCheck>,
}

impl LevelFamilyReport {
    pub fn agrees(&self) -> bool {
        self.pairs.iter().all(|p| p.predicted_similar == p.found_similar)
    }
}

/// Checks the family `M_l = [[-r, pi^l], [T/pi^l, a + r]]`, `T = b - r(r+a)`,
/// for `0 <= k < l <= n` against the prediction that `M_k` and `M_l` are
/// conjugate mod `pi^n` iff their levels agree after truncation at `n`.
/// Levels below the cutoff `min(v(2r+a), v(T)/2)` are all distinct.
pub fn exhaustive_level_check(ring: &RingDesc, f: &MonicPoly, r: &KElem, n: u32, budget: u64) -> Result<LevelFamilyReport> {
    let (a, b) = f.quad_ab(ring)?;
    if !ring.is_integral(&a) || !ring.is_integral(&b) || !ring.is_integral(r) {
        return Err(Error::NotIntegral);
    }
    let t = ring.sub(&b, &ring.mul(r, &ring.add(r, &a)));
    let two_r_a = ring.add(&ring.mul(&ring.from_int(2), r), &a);
    let vt = ring.val(&t);
    let half = match vt {
        Val::Fin(v) => Val::Fin(v / 2),
        Val::Inf => Val::Inf,
    };
    let cutoff = ring.val(&two_r_a).min(half);
    let top = match vt {
        Val::Fin(v) => n.min(v as u32),
        Val::Inf => n,
    };
    let mat = |l: u32| {
        let l = l as i64;
        Matrix::m2(ring.neg(r), ring.pi_pow(l), ring.mul(&t, &ring.pi_pow(-l)), ring.add(&a, r))
    };
    let trunc = |m: &Matrix| level(ring, m).min(Val::Fin(n as i64));
    let mut pairs = Vec::new();
    for l in 1..=top {
        for k in 0..l {
            let (mk, ml) = (mat(k), mat(l));
            let found = conj_search_mod(ring, &mk, &ml, n, budget)?.is_some();
            pairs.push(PairCheck { k, l, predicted_similar: trunc(&mk) == trunc(&ml), found_similar: found });
        }
    }
    Ok(LevelFamilyReport { cutoff, pairs })
}
