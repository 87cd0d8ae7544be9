use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::QuadForm;
use crate::arith::{hilbert_symbol, RatMatrix, Rational};
use crate::error::{Error, Result};

/// Which pairs enter the Hasse product over a diagonalisation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HasseConvention {
    /// `Π_{i<j} (a_i, a_j)_p`
    #[default]
    StrictPairs,
    /// `Π_{i<=j} (a_i, a_j)_p`, which differs by `(-1, det)_p`.
    WithDiagonal,
}

impl HasseConvention {
    pub fn flipped(self) -> Self {
        match self {
            HasseConvention::StrictPairs => HasseConvention::WithDiagonal,
            HasseConvention::WithDiagonal => HasseConvention::StrictPairs,
        }
    }
}

/// Diagonal entries of a rational diagonalisation of a symmetric matrix,
/// by symmetric elimination.
pub fn diagonalize(gram: &RatMatrix) -> Result<Vec<Rational>> {
    let mut a = gram.clone();
    let n = a.dim();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                swap_basis(&mut a, k, j);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_zero())
            {
                // all remaining diagonal entries vanish, so e_k + e_j has
                // norm 2 a_kj != 0
                if i != k {
                    swap_basis(&mut a, k, i);
                }
                add_basis(&mut a, k, j);
            } else {
                return Err(Error::Degenerate);
            }
        }
        let p = a[(k, k)].clone();
        let col: Vec<Rational> = (0..n).map(|i| a[(i, k)].clone()).collect();
        for i in k + 1..n {
            for j in k + 1..n {
                let d = &col[i] * &col[j] / &p;
                a[(i, j)] -= d;
            }
            a[(i, k)] = Rational::zero();
            a[(k, i)] = Rational::zero();
        }
        out.push(p);
    }
    Ok(out)
}

fn swap_basis(a: &mut RatMatrix, i: usize, j: usize) {
    let n = a.dim();
    for c in 0..n {
        let t = a[(i, c)].clone();
        a[(i, c)] = a[(j, c)].clone();
        a[(j, c)] = t;
    }
    for r in 0..n {
        let t = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = t;
    }
}

/// Replace basis vector `e_k` by `e_k + e_j`.
fn add_basis(a: &mut RatMatrix, k: usize, j: usize) {
    let n = a.dim();
    for c in 0..n {
        let v = a[(j, c)].clone();
        a[(k, c)] += v;
    }
    for r in 0..n {
        let v = a[(r, j)].clone();
        a[(r, k)] += v;
    }
}

pub fn hasse_invariant(gram: &RatMatrix, p: u64, convention: HasseConvention) -> Result<i8> {
    let d = diagonalize(gram)?;
    let mut s = 1i8;
    for i in 0..d.len() {
        let start = match convention {
            HasseConvention::StrictPairs => i + 1,
            HasseConvention::WithDiagonal => i,
        };
        for j in start..d.len() {
            s *= hilbert_symbol(&d[i], &d[j], p)?;
        }
    }
    Ok(s)
}

/// Hasse symbol of the form's Gram matrix `M` at `p`.
pub fn hasse_symbol_of_form(form: &QuadForm, p: u64, convention: HasseConvention) -> Result<i8> {
    hasse_invariant(&form.gram(), p, convention)
}
