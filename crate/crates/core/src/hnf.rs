//! Hermite normal forms of integer and rational row lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row-style HNF: nonzero rows in echelon form with positive pivots and the
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut piv = 0;
    for j in 0..ncols {
        if piv == m.len() {
            break;
        }
        loop {
            let best = (piv..m.len()).filter(|&i| !m[i][j].is_zero()).min_by_key(|&i| m[i][j].abs());
            let Some(best) = best else { break };
            m.swap(piv, best);
            let mut done = true;
            for i in piv + 1..m.len() {
                if m[i][j].is_zero() {
                    continue;
                }
                let q = m[i][j].div_floor(&m[piv][j]);
                let pr = m[piv].clone();
                for (x, p) in m[i].iter_mut().zip(&pr) {
                    *x -= &q * p;
                }
                if !m[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[piv][j].is_zero() {
            continue;
        }
        if m[piv][j].is_negative() {
            for x in m[piv].iter_mut() {
                *x = -&*x;
            }
        }
        let pr = m[piv].clone();
        for i in 0..piv {
            let q = m[i][j].div_floor(&pr[j]);
            if !q.is_zero() {
                for (x, p) in m[i].iter_mut().zip(&pr) {
                    *x -= &q * p;
                }
            }
        }
        piv += 1;
    }
    m.truncate(piv);
    m
}

/// Least common multiple of all denominators.
pub fn common_den(rows: &[Vec<BigRational>]) -> BigInt {
    rows.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// HNF of the `Z`-span of rational rows; canonical for the lattice they span.
pub fn rat_hnf(rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let d = common_den(rows);
    let ints: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.iter().map(|x| (x * &d).to_integer()).collect()).collect();
    let dr = BigRational::from_integer(d);
    hnf(&ints).into_iter().map(|r| r.into_iter().map(|x| BigRational::from_integer(x) / &dr).collect()).collect()
}

/// Integer coefficients `n` with `sum n_i rows_i = target`, if any.
pub fn solve_in_span(rows: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigInt>> {
    let k = rows.len();
    let aug: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..k).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            v
        })
        .collect();
    let d = BigRational::from_integer(common_den(rows).lcm(&common_den(&[target.to_vec()])));
    let ints: Vec<Vec<BigInt>> = aug
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .map(|(j, x)| if j < target.len() { (x * &d).to_integer() } else { x.to_integer() })
                .collect()
        })
        .collect();
    let h = hnf(&ints);
    let mut rest: Vec<BigInt> = target.iter().map(|x| (x * &d).to_integer()).collect();
    let mut coef = vec![BigInt::zero(); k];
    let n = target.len();
    for row in &h {
        let Some(j) = row[..n].iter().position(|x| !x.is_zero()) else { break };
        if rest[..j].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = rest[j].div_rem(&row[j]);
        if !r.is_zero() {
            return None;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= &q * y;
        }
        for (c, y) in coef.iter_mut().zip(&row[n..]) {
            *c += &q * y;
        }
    }
    if rest.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(coef)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn rats(v: &[&[(i64, i64)]]) -> Vec<Vec<BigRational>> {
        v.iter().map(|r| r.iter().map(|&(a, b)| BigRational::new(a.into(), b.into())).collect()).collect()
    }

    #[test]
    fn small_hnf() {
        assert_eq!(hnf(&ints(&[&[3, 0], &[2, 1]])), ints(&[&[1, 2], &[0, 3]]));
        assert_eq!(hnf(&ints(&[&[4, 6], &[6, 9], &[2, 3]])), ints(&[&[2, 3]]));
        assert_eq!(hnf(&ints(&[&[0, -5], &[0, 0]])), ints(&[&[0, 5]]));
        assert!(hnf(&ints(&[&[0, 0]])).is_empty());
    }

    #[test]
    fn rational_hnf_is_canonical() {
        let a = rat_hnf(&rats(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 3)]]));
        let b = rat_hnf(&rats(&[&[(1, 2), (1, 3)], &[(1, 1), (1, 3)], &[(3, 2), (2, 3)]]));
        assert_eq!(a, b);
    }

    #[test]
    fn span_solutions() {
        let rows = rats(&[&[(2, 1), (0, 1)], &[(0, 1), (3, 1)], &[(1, 1), (1, 1)]]);
        let t = rats(&[&[(1, 1), (0, 1)]]).remove(0);
        let c = solve_in_span(&rows, &t).unwrap();
        let got: Vec<BigRational> = (0..2)
            .map(|j| (0..3).map(|i| BigRational::from_integer(c[i].clone()) * &rows[i][j]).sum())
            .collect();
        assert_eq!(got, t);
        let rows = rats(&[&[(2, 1), (0, 1)], &[(0, 1), (2, 1)]]);
        assert!(solve_in_span(&rows, &rats(&[&[(1, 1), (0, 1)]])[0]).is_none());
    }
}
