//! p-adic Jordan splittings by exact symmetric reduction.
//!
//! Every step picks an entry of minimal p-adic valuation. A diagonal pivot
//! splits off a one-dimensional block; at `p = 2` an off-diagonal pivot that
//! is strictly smaller than every diagonal entry splits off an even 2×2 block.
//! At odd `p` such a pivot is first moved onto the diagonal by `e_i += e_j`.

use num_traits::Zero;

use crate::arith::{int, pow_rat, residue, valuation, RatMatrix, Rational};
use crate::error::{Error, Result};
use crate::ingest::{EvenLetter, SplitGroup, SplitItem, SplittingExpr};
use crate::model::QuadForm;

/// `p^scale_exp · unit`, where `unit` has p-adic unit determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanBlock {
    pub scale_exp: i64,
    pub unit: RatMatrix,
}

impl JordanBlock {
    pub fn dim(&self) -> usize {
        self.unit.dim()
    }

    pub fn matrix(&self, p: u64) -> RatMatrix {
        self.unit.scaled(&pow_rat(p, self.scale_exp))
    }
}

/// All blocks of one scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constituent<'a> {
    pub scale_exp: i64,
    pub blocks: Vec<&'a JordanBlock>,
}

impl Constituent<'_> {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim()).sum()
    }

    /// Product of the unit determinants.
    pub fn unit_det(&self) -> Rational {
        self.blocks.iter().map(|b| b.unit.det()).product()
    }

    pub fn is_odd(&self) -> bool {
        self.blocks.iter().any(|b| b.dim() == 1)
    }
}

/// Blocks in order of nondecreasing scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanSplitting {
    pub prime: u64,
    pub blocks: Vec<JordanBlock>,
}

impl JordanSplitting {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim()).sum()
    }

    /// Blocks grouped by scale, strictly increasing.
    pub fn constituents(&self) -> Vec<Constituent<'_>> {
        let mut out: Vec<Constituent<'_>> = Vec::new();
        for b in &self.blocks {
            match out.last_mut() {
                Some(c) if c.scale_exp == b.scale_exp => c.blocks.push(b),
                _ => out.push(Constituent {
                    scale_exp: b.scale_exp,
                    blocks: vec![b],
                }),
            }
        }
        out
    }

    /// Total valuation of the determinant.
    pub fn det_valuation(&self) -> i64 {
        self.blocks
            .iter()
            .map(|b| b.scale_exp * b.dim() as i64)
            .sum()
    }
}

pub fn reassemble(split: &JordanSplitting) -> RatMatrix {
    let blocks: Vec<RatMatrix> = split.blocks.iter().map(|b| b.matrix(split.prime)).collect();
    RatMatrix::block_diag(&blocks)
}

struct Pivot {
    valuation: i64,
    i: usize,
    j: usize,
}

fn min_pivot(a: &RatMatrix, p: u64, diagonal: bool) -> Result<Option<Pivot>> {
    let n = a.dim();
    let mut best: Option<Pivot> = None;
    for i in 0..n {
        let range = if diagonal { i..i + 1 } else { i + 1..n };
        for j in range {
            if a[(i, j)].is_zero() {
                continue;
            }
            let v = valuation(&a[(i, j)], p)?;
            if best.as_ref().is_none_or(|b| v < b.valuation) {
                best = Some(Pivot { valuation: v, i, j });
            }
        }
    }
    Ok(best)
}

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

/// Orthogonal complement of the principal block on `idx`.
fn complement(a: &RatMatrix, idx: &[usize]) -> RatMatrix {
    let n = a.dim();
    let rest: Vec<usize> = (0..n).filter(|k| !idx.contains(k)).collect();
    let block = a.principal(idx);
    let inv = block.inverse().expect("pivot block is invertible");
    let mut out = RatMatrix::zeros(rest.len());
    for (r, &i) in rest.iter().enumerate() {
        for (c, &j) in rest.iter().enumerate().skip(r) {
            let mut s = a[(i, j)].clone();
            for (x, &k) in idx.iter().enumerate() {
                if a[(i, k)].is_zero() {
                    continue;
                }
                for (y, &l) in idx.iter().enumerate() {
                    s -= &a[(i, k)] * &inv[(x, y)] * &a[(l, j)];
                }
            }
            out[(r, c)] = s.clone();
            out[(c, r)] = s;
        }
    }
    out
}

/// Jordan splitting of a nondegenerate symmetric rational matrix over `Z_p`.
pub fn jordan_split(gram: &RatMatrix, p: u64) -> Result<JordanSplitting> {
    let mut a = gram.clone();
    let mut blocks = Vec::new();
    while a.dim() > 0 {
        let diag = min_pivot(&a, p, true)?;
        let off = min_pivot(&a, p, false)?;
        let idx = match (diag, off) {
            (None, None) => return Err(Error::Degenerate),
            (Some(d), o) if o.as_ref().is_none_or(|o| d.valuation <= o.valuation) => vec![d.i],
            (_, Some(o)) if p == 2 => vec![o.i, o.j],
            (_, Some(o)) => {
                add_basis(&mut a, o.i, o.j);
                vec![o.i]
            }
            (Some(_), None) => unreachable!(),
        };
        let block = a.principal(&idx);
        let v = if idx.len() == 1 {
            valuation(&block[(0, 0)], p)?
        } else {
            valuation(&block[(0, 1)], p)?
        };
        blocks.push(JordanBlock {
            scale_exp: v,
            unit: block.scaled(&pow_rat(p, -v)),
        });
        a = complement(&a, &idx);
    }
    Ok(JordanSplitting { prime: p, blocks })
}

/// Jordan splitting of the half-integral Gram matrix `M` of a form.
pub fn jordan_split_form(form: &QuadForm, p: u64) -> Result<JordanSplitting> {
    jordan_split(&form.gram(), p)
}

/// Render a splitting in appendix notation. Even 2×2 blocks are replaced by
/// the standard block of the same `Z_2` class: `A` when the unit determinant
/// is `3 mod 8`, `B` when it is `7 mod 8`.
pub fn to_splitting_expr(split: &JordanSplitting) -> Result<SplittingExpr> {
    let p = split.prime;
    let mut groups = Vec::new();
    for c in split.constituents() {
        let mut items = Vec::new();
        for b in &c.blocks {
            if b.dim() == 1 {
                items.push(SplitItem::diagonal(b.matrix(p)[(0, 0)].clone()));
            } else {
                let letter = match residue(&b.unit.det(), 8)? {
                    3 => EvenLetter::A,
                    7 => EvenLetter::B,
                    r => return Err(Error::Domain(format!("even block with det {r} mod 8"))),
                };
                items.push(SplitItem::even(letter, pow_rat(2, c.scale_exp + 1)));
            }
        }
        groups.push(SplitGroup {
            bracketed: true,
            items,
        });
    }
    Ok(SplittingExpr { groups })
}

/// `true` when every block has unit determinant, odd-p blocks are 1×1 and
/// 2×2 blocks at `p = 2` have an even diagonal.
pub fn is_well_formed(split: &JordanSplitting) -> bool {
    let p = split.prime;
    let scales_sorted = split.blocks.windows(2).all(|w| w[0].scale_exp <= w[1].scale_exp);
    scales_sorted
        && split.blocks.iter().all(|b| {
            let det = b.unit.det();
            let unit = !det.is_zero() && valuation(&det, p).ok() == Some(0);
            let shape = match b.dim() {
                1 => true,
                2 => {
                    p == 2
                        && [(0, 0), (1, 1)].iter().all(|&ij| {
                            let x = &b.unit[ij];
                            x.is_zero() || valuation(&(x / int(2)), 2).is_ok_and(|v| v >= 0)
                        })
                }
                _ => false,
            };
            unit && shape
        })
}
