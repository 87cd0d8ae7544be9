//! Direct count of self-congruences modulo `p^r`.

use rayon::prelude::*;

use crate::arith::{residue, RatMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_ORACLE_BUDGET: u128 = 100_000_000;

/// Candidate budget, overridable through `NIPPAUDIT_ORACLE_BUDGET`.
pub fn oracle_budget() -> u128 {
    std::env::var("NIPPAUDIT_ORACLE_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

pub fn congruence_count_oracle(gram: &RatMatrix, p: u64, r: u32) -> Result<u64> {
    congruence_count_oracle_with_budget(gram, p, r, oracle_budget())
}

/// `#{X over Z/p^r : XᵗAX ≡ A (mod p^r)}`. Refuses when the nominal
/// candidate count `p^{n²r}` exceeds `budget`.
pub fn congruence_count_oracle_with_budget(gram: &RatMatrix, p: u64, r: u32, budget: u128) -> Result<u64> {
    let n = gram.dim();
    let candidates = (p as u128)
        .checked_pow((n * n) as u32 * r)
        .unwrap_or(u128::MAX);
    if candidates > budget {
        return Err(Error::BudgetExceeded { candidates, budget });
    }
    let m = p.pow(r);
    let a: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| residue(&gram[(i, j)], m)).collect())
        .collect::<Result<_>>()?;
    let total = (m as usize).pow(n as u32);
    let vecs: Vec<Vec<u64>> = (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let x = (code % m as usize) as u64;
                    code /= m as usize;
                    x
                })
                .collect()
        })
        .collect();
    let dot = |x: &[u64], y: &[u64]| -> u64 {
        x.iter().zip(y).fold(0u64, |s, (a, b)| (s + a * b) % m)
    };
    let av: Vec<Vec<u64>> = vecs
        .iter()
        .map(|v| a.iter().map(|row| dot(row, v)).collect())
        .collect();
    let by_col: Vec<Vec<usize>> = (0..n)
        .map(|j| (0..total).filter(|&k| dot(&av[k], &vecs[k]) == a[j][j]).collect())
        .collect();
    let ctx = Ctx {
        a: &a,
        vecs: &vecs,
        av: &av,
        by_col: &by_col,
        m,
    };
    if n == 0 {
        return Ok(1);
    }
    Ok(by_col[0]
        .par_iter()
        .map(|&first| ctx.count(1, &mut vec![first]))
        .sum())
}

struct Ctx<'a> {
    a: &'a [Vec<u64>],
    vecs: &'a [Vec<u64>],
    av: &'a [Vec<u64>],
    by_col: &'a [Vec<usize>],
    m: u64,
}

impl Ctx<'_> {
    fn count(&self, j: usize, chosen: &mut Vec<usize>) -> u64 {
        if j == self.a.len() {
            return 1;
        }
        let mut total = 0;
        for &c in &self.by_col[j] {
            let fits = chosen.iter().enumerate().all(|(i, &w)| {
                self.av[w]
                    .iter()
                    .zip(&self.vecs[c])
                    .fold(0u64, |s, (x, y)| (s + x * y) % self.m)
                    == self.a[i][j]
            });
            if fits {
                chosen.push(c);
                total += self.count(j + 1, chosen);
                chosen.pop();
            }
        }
        total
    }
}
