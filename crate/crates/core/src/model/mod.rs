//! Quaternary forms, their Gram matrices and the table records built on them.

mod hasse;

pub use hasse::{diagonalize, hasse_invariant, hasse_symbol_of_form, HasseConvention};

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{int, rat, RatMatrix, Rational};
use crate::error::{Error, Result};
use crate::ingest::SplittingExpr;

/// Position of `f_ij` (i < j) in the coefficient vector
/// `[f11, f22, f33, f44, f12, f13, f23, f14, f24, f34]`.
const OFF_DIAGONAL: [((usize, usize), usize); 6] = [
    ((0, 1), 4),
    ((0, 2), 5),
    ((1, 2), 6),
    ((0, 3), 7),
    ((1, 3), 8),
    ((2, 3), 9),
];

/// A quaternary integral quadratic form `Σ f_ij x_i x_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub coeffs: [i64; 10],
}

impl QuadForm {
    pub fn new(coeffs: [i64; 10]) -> Self {
        QuadForm { coeffs }
    }

    /// Form whose doubled Gram matrix is the given even symmetric matrix.
    pub fn from_doubled_gram(a: &[[i64; 4]; 4]) -> Self {
        let mut coeffs = [0i64; 10];
        for i in 0..4 {
            assert!(a[i][i] % 2 == 0, "doubled Gram matrix must have even diagonal");
            coeffs[i] = a[i][i] / 2;
        }
        for ((i, j), k) in OFF_DIAGONAL {
            coeffs[k] = a[i][j];
        }
        QuadForm { coeffs }
    }

    /// The half-integral Gram matrix `M`.
    pub fn gram(&self) -> RatMatrix {
        gram_from_coeffs(&self.coeffs)
    }

    /// The integral Gram matrix `2M` (even diagonal).
    pub fn doubled_gram(&self) -> [[i64; 4]; 4] {
        let mut a = [[0i64; 4]; 4];
        for i in 0..4 {
            a[i][i] = 2 * self.coeffs[i];
        }
        for ((i, j), k) in OFF_DIAGONAL {
            a[i][j] = self.coeffs[k];
            a[j][i] = self.coeffs[k];
        }
        a
    }

    pub fn doubled_gram_matrix(&self) -> RatMatrix {
        let a = self.doubled_gram();
        RatMatrix::from_rows(a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn is_primitive(&self) -> bool {
        self.coeffs.iter().fold(0i64, |g, c| g.gcd(c)) == 1
    }

    /// `Q(x) = xᵗ M x`.
    pub fn eval(&self, x: &[i64; 4]) -> i64 {
        let a = self.doubled_gram();
        let mut s = 0;
        for i in 0..4 {
            for j in 0..4 {
                s += x[i] * a[i][j] * x[j];
            }
        }
        s / 2
    }

    /// The form after the integral change of basis `x -> T x` (columns of `T`
    /// are the new basis vectors).
    pub fn transformed(&self, t: &[[i64; 4]; 4]) -> QuadForm {
        let a = self.doubled_gram();
        let mut b = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut s = 0;
                for k in 0..4 {
                    for l in 0..4 {
                        s += t[k][i] * a[k][l] * t[l][j];
                    }
                }
                b[i][j] = s;
            }
        }
        QuadForm::from_doubled_gram(&b)
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn gram_from_coeffs(coeffs: &[i64; 10]) -> RatMatrix {
    let mut m = RatMatrix::zeros(4);
    for i in 0..4 {
        m[(i, i)] = int(coeffs[i]);
    }
    for ((i, j), k) in OFF_DIAGONAL {
        m[(i, j)] = rat(coeffs[k], 2);
        m[(j, i)] = rat(coeffs[k], 2);
    }
    m
}

pub fn is_positive_definite(form: &QuadForm) -> bool {
    form.gram()
        .leading_minors()
        .iter()
        .all(|m| m.is_positive())
}

/// `det(2M)`, the discriminant in the tables' convention.
pub fn discriminant_of(form: &QuadForm) -> Result<u64> {
    let d = form.doubled_gram_matrix().det();
    if d.is_zero() {
        return Err(Error::Degenerate);
    }
    if !is_positive_definite(form) {
        return Err(Error::NotPositiveDefinite);
    }
    d.to_integer()
        .to_u64()
        .ok_or_else(|| Error::Domain(format!("discriminant {d} out of range")))
}

/// Smallest `N > 0` with `N·(2M)⁻¹` integral with even diagonal.
pub fn compute_level(form: &QuadForm) -> Result<u64> {
    let inv = form
        .doubled_gram_matrix()
        .inverse()
        .ok_or(Error::Degenerate)?;
    let mut level = num_bigint::BigInt::one();
    for i in 0..4 {
        for j in 0..4 {
            let x = if i == j {
                &inv[(i, j)] / int(2)
            } else {
                inv[(i, j)].clone()
            };
            level = level.lcm(x.denom());
        }
    }
    level
        .to_u64()
        .ok_or_else(|| Error::Domain("level out of range".into()))
}

/// One class in a genus, as tabulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormRecord {
    pub form: QuadForm,
    pub level: u64,
    pub hasse: BTreeMap<u64, i8>,
    pub aut_count: u64,
}

/// Density and Jordan splitting tabulated for one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixEntry {
    pub density: Rational,
    pub splitting: SplittingExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusRecord {
    pub discriminant: u64,
    pub genus_id: u32,
    pub forms: Vec<FormRecord>,
    pub mass: Rational,
    pub appendix: BTreeMap<u64, AppendixEntry>,
}

impl GenusRecord {
    /// `d#id`, the label used in the tables.
    pub fn label(&self) -> String {
        format!("{}#{}", self.discriminant, self.genus_id)
    }

    pub fn first_form(&self) -> Option<&QuadForm> {
        self.forms.first().map(|f| &f.form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: [i64; 10] = [1, 1, 11, 11, 1, 0, 0, 1, 0, 8];

    fn diag(a: i64, b: i64, c: i64, d: i64) -> QuadForm {
        QuadForm::new([a, b, c, d, 0, 0, 0, 0, 0, 0])
    }

    #[test]
    fn gram_of_worked_example() {
        let m = gram_from_coeffs(&EXAMPLE);
        let h = rat(1, 2);
        let z = int(0);
        let expect = RatMatrix::from_rows(vec![
            vec![int(1), h.clone(), z.clone(), h.clone()],
            vec![h.clone(), int(1), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), int(11), int(4)],
            vec![h, z.clone(), int(4), int(11)],
        ]);
        assert_eq!(m, expect);
        assert_eq!(m.det(), int(76));
        assert_eq!(gram_from_coeffs(&[1, 1, 1, 1, 0, 0, 0, 0, 0, 0]), RatMatrix::identity(4));
        assert_eq!(gram_from_coeffs(&[2, 2, 0, 0, 2, 0, 0, 0, 0, 0]).det(), int(0));
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant_of(&QuadForm::new(EXAMPLE)).unwrap(), 1216);
        assert_eq!(discriminant_of(&diag(1, 1, 1, 1)).unwrap(), 16);
        assert_eq!(discriminant_of(&diag(1, 1, 1, 2)).unwrap(), 32);
        assert!(matches!(
            discriminant_of(&QuadForm::new([2, 2, 0, 0, 2, 0, 0, 0, 0, 0])),
            Err(Error::Degenerate)
        ));
        assert!(matches!(
            discriminant_of(&diag(1, 1, -1, -1)),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn positive_definiteness() {
        assert!(is_positive_definite(&QuadForm::new(EXAMPLE)));
        assert!(!is_positive_definite(&diag(1, 1, 1, -1)));
        assert!(!is_positive_definite(&diag(0, 0, 0, 0)));
    }

    /// Level by searching N = 1, 2, ... directly against the definition.
    fn level_by_search(form: &QuadForm, limit: u64) -> Option<u64> {
        let inv = form.doubled_gram_matrix().inverse()?;
        (1..=limit).find(|&n| {
            let s = inv.scaled(&int(n as i64));
            (0..4).all(|i| {
                (0..4).all(|j| {
                    s[(i, j)].is_integer() && (i != j || s[(i, i)].to_integer().is_even())
                })
            })
        })
    }

    #[test]
    fn levels() {
        assert_eq!(compute_level(&diag(1, 1, 1, 1)).unwrap(), 4);
        for f in [
            QuadForm::new(EXAMPLE),
            diag(1, 1, 1, 2),
            diag(1, 2, 3, 5),
            QuadForm::new([1, 1, 1, 1, -1, 0, -1, 0, 0, -1]),
            QuadForm::new([2, 3, 3, 5, 1, 1, 1, 2, 1, 3]),
        ] {
            let d = discriminant_of(&f).unwrap();
            let lvl = compute_level(&f).unwrap();
            assert_eq!(Some(lvl), level_by_search(&f, 4 * d), "{f}");
            assert_eq!((4 * d) % lvl, 0);
        }
        assert!(compute_level(&QuadForm::new([2, 2, 0, 0, 2, 0, 0, 0, 0, 0])).is_err());
    }

    #[test]
    fn doubled_gram_round_trip() {
        let f = QuadForm::new(EXAMPLE);
        assert_eq!(QuadForm::from_doubled_gram(&f.doubled_gram()), f);
        assert_eq!(f.eval(&[1, 0, 0, 0]), 1);
        assert_eq!(f.eval(&[0, 0, 1, 1]), 11 + 11 + 8);
        assert!(f.is_primitive());
        assert!(!QuadForm::new([2, 2, 2, 2, 0, 0, 0, 0, 0, 0]).is_primitive());
    }
}
