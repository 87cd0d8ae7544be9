//! Automorphism counts by short-vector enumeration and backtracking.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{is_positive_definite, QuadForm};

type Q = Ratio<i128>;

/// `x` with `0 < xᵗAx <= bound`, for a positive definite integer matrix `A`.
/// Both `x` and `-x` are returned.
pub fn short_vectors(a: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut q: Vec<Vec<Q>> = a
        .iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x as i128)).collect())
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let t = q[k][i] * q[i][l];
                q[k][l] -= t;
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    descend(&q, n, Q::from_integer(bound as i128), &mut x, &mut out);
    out.retain(|v| v.iter().any(|&c| c != 0));
    out
}

fn descend(q: &[Vec<Q>], level: usize, remaining: Q, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if level == 0 {
        out.push(x.clone());
        return;
    }
    let i = level - 1;
    let n = q.len();
    let mut center = Q::zero();
    for j in i + 1..n {
        center -= q[i][j] * Q::from_integer(x[j] as i128);
    }
    let ratio = remaining / q[i][i];
    let reach = isqrt(ratio.floor().to_integer()) + 1;
    let lo = (center - Q::from_integer(reach)).floor().to_integer();
    let hi = (center + Q::from_integer(reach)).ceil().to_integer();
    for xi in lo..=hi {
        let d = Q::from_integer(xi) - center;
        let used = q[i][i] * d * d;
        if used <= remaining {
            x[i] = xi as i64;
            descend(q, i, remaining - used, x, out);
        }
    }
    x[i] = 0;
}

fn isqrt(v: i128) -> i128 {
    if v <= 0 {
        return 0;
    }
    let mut r = (v as f64).sqrt() as i128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

struct Search<'a> {
    target: &'a [Vec<i64>],
    vecs: Vec<Vec<i64>>,
    images: Vec<Vec<i64>>,
    by_col: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn count(&self, j: usize, chosen: &mut Vec<usize>, limit: u64) -> u64 {
        let n = self.target.len();
        if j == n {
            return 1;
        }
        let mut total = 0;
        for &c in &self.by_col[j] {
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(i, &w)| dot(&self.images[w], &self.vecs[c]) == self.target[i][j]);
            if ok {
                chosen.push(c);
                total += self.count(j + 1, chosen, limit - total);
                chosen.pop();
                if total >= limit {
                    return total;
                }
            }
        }
        total
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter().map(|r| dot(r, v)).collect()
}

/// Number of integral `T` with `TᵗAT = B` (at most `limit`), for positive
/// definite integer matrices of equal size.
pub fn count_isometries_gram(a: &[Vec<i64>], b: &[Vec<i64>], limit: u64) -> u64 {
    let n = a.len();
    assert_eq!(n, b.len(), "dimension mismatch");
    let bound = (0..n).map(|i| b[i][i]).max().unwrap_or(0);
    let vecs = short_vectors(a, bound);
    let images: Vec<Vec<i64>> = vecs.iter().map(|v| mat_vec(a, v)).collect();
    let by_col = (0..n)
        .map(|j| {
            (0..vecs.len())
                .filter(|&k| dot(&images[k], &vecs[k]) == b[j][j])
                .collect()
        })
        .collect();
    let s = Search {
        target: b,
        vecs,
        images,
        by_col,
    };
    s.count(0, &mut Vec::new(), limit)
}

fn doubled(form: &QuadForm) -> Result<Vec<Vec<i64>>> {
    if !is_positive_definite(form) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(form.doubled_gram().iter().map(|r| r.to_vec()).collect())
}

/// Order of the integral orthogonal group of the form.
pub fn aut_order(form: &QuadForm) -> Result<u64> {
    let a = doubled(form)?;
    Ok(count_isometries_gram(&a, &a, u64::MAX))
}

/// Whether the two forms are integrally equivalent.
pub fn is_isometric(a: &QuadForm, b: &QuadForm) -> Result<bool> {
    let (ga, gb) = (doubled(a)?, doubled(b)?);
    Ok(count_isometries_gram(&ga, &gb, One::one()) > 0)
}
