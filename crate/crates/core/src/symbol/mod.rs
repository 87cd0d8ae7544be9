//! Local genus symbols and `Z_p`-equivalence.

mod canonical;

pub use canonical::{canonicalize_2, CanonicalSymbol2};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::arith::{bad_primes, fmt_rational, legendre_symbol, pow_rat, residue, RatMatrix};
use crate::error::{Error, Result};
use crate::jordan::{jordan_split, JordanSplitting};
use crate::model::{discriminant_of, QuadForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddConstituent {
    pub scale_exp: i64,
    pub dim: usize,
    pub sign: i8,
}

/// Symbol at an odd prime: a complete invariant of `Z_p`-equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddSymbol {
    pub prime: u64,
    pub entries: Vec<OddConstituent>,
}

impl OddSymbol {
    pub fn from_splitting(split: &JordanSplitting) -> Result<Self> {
        let p = split.prime;
        assert!(p != 2, "odd symbol needs an odd prime");
        let entries = split
            .constituents()
            .iter()
            .map(|c| {
                let r = residue(&c.unit_det(), p)?;
                Ok(OddConstituent {
                    scale_exp: c.scale_exp,
                    dim: c.dim(),
                    sign: legendre_symbol(&BigInt::from(r), p),
                })
            })
            .collect::<Result<_>>()?;
        Ok(OddSymbol { prime: p, entries })
    }
}

impl fmt::Display for OddSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                format!(
                    "{}^{}{}",
                    fmt_rational(&pow_rat(self.prime, e.scale_exp)),
                    if e.sign > 0 { '+' } else { '-' },
                    e.dim
                )
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constituent2 {
    pub scale_exp: i64,
    pub dim: usize,
    /// `+1` when the unit determinant is `±1 mod 8`, `-1` when `±3 mod 8`.
    pub sign: i8,
    /// Type I (odd) constituent.
    pub odd: bool,
    /// Trace mod 8 of a diagonalisation; zero for type II.
    pub oddity: u8,
}

/// 2-adic symbol read off a Jordan splitting, before canonical reduction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol2 {
    pub constituents: Vec<Constituent2>,
}

impl Symbol2 {
    pub fn from_splitting(split: &JordanSplitting) -> Result<Self> {
        assert_eq!(split.prime, 2, "2-adic symbol needs p = 2");
        let constituents = split
            .constituents()
            .iter()
            .map(|c| {
                let det = residue(&c.unit_det(), 8)?;
                let mut oddity = 0u64;
                for b in c.blocks.iter().filter(|b| b.dim() == 1) {
                    oddity += residue(&b.unit[(0, 0)], 8)?;
                }
                Ok(Constituent2 {
                    scale_exp: c.scale_exp,
                    dim: c.dim(),
                    sign: if det == 1 || det == 7 { 1 } else { -1 },
                    odd: c.is_odd(),
                    oddity: (oddity % 8) as u8,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Symbol2 { constituents })
    }

    /// Maximal runs of type I constituents with consecutive scales, as
    /// index lists into `constituents`.
    pub fn compartments(&self) -> Vec<Vec<usize>> {
        let c = &self.constituents;
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (k, x) in c.iter().enumerate() {
            if !x.odd {
                continue;
            }
            match out.last_mut() {
                Some(run)
                    if *run.last().unwrap() == k - 1
                        && c[k - 1].scale_exp + 1 == x.scale_exp =>
                {
                    run.push(k)
                }
                _ => out.push(vec![k]),
            }
        }
        out
    }

    /// Maximal runs in which every pair of scale-adjacent forms (empty forms
    /// counting as type II) has a type I member.
    pub fn trains(&self) -> Vec<Vec<usize>> {
        let c = &self.constituents;
        let mut out: Vec<Vec<usize>> = Vec::new();
        for k in 0..c.len() {
            let joined = k > 0 && {
                let (prev, cur) = (&c[k - 1], &c[k]);
                match cur.scale_exp - prev.scale_exp {
                    1 => prev.odd || cur.odd,
                    2 => prev.odd && cur.odd,
                    _ => false,
                }
            };
            if joined {
                out.last_mut().unwrap().push(k);
            } else {
                out.push(vec![k]);
            }
        }
        out
    }
}

fn fmt_constituent2(c: &Constituent2, oddity: Option<u8>) -> String {
    let mut s = format!(
        "{}^{}{}",
        fmt_rational(&pow_rat(2, c.scale_exp)),
        if c.sign > 0 { '+' } else { '-' },
        c.dim
    );
    match oddity {
        _ if !c.odd => s.push_str("_II"),
        Some(t) => s.push_str(&format!("_{t}")),
        None => {}
    }
    s
}

impl fmt::Display for Symbol2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .constituents
            .iter()
            .map(|c| fmt_constituent2(c, Some(c.oddity)))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn check_dim(gram: &RatMatrix) -> Result<()> {
    if num_traits::Zero::is_zero(&gram.det()) {
        return Err(Error::Degenerate);
    }
    Ok(())
}

pub fn symbol_odd_p(gram: &RatMatrix, p: u64) -> Result<OddSymbol> {
    if p == 2 {
        return Err(Error::Domain("symbol_odd_p needs an odd prime".into()));
    }
    check_dim(gram)?;
    OddSymbol::from_splitting(&jordan_split(gram, p)?)
}

pub fn symbol_2(gram: &RatMatrix) -> Result<Symbol2> {
    check_dim(gram)?;
    Symbol2::from_splitting(&jordan_split(gram, 2)?)
}

/// Complete local invariant at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocalSymbol {
    Odd(OddSymbol),
    Two(CanonicalSymbol2),
}

impl fmt::Display for LocalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalSymbol::Odd(s) => write!(f, "{s}"),
            LocalSymbol::Two(s) => write!(f, "{s}"),
        }
    }
}

pub fn local_symbol(gram: &RatMatrix, p: u64) -> Result<LocalSymbol> {
    if p == 2 {
        Ok(LocalSymbol::Two(canonicalize_2(&symbol_2(gram)?)))
    } else {
        Ok(LocalSymbol::Odd(symbol_odd_p(gram, p)?))
    }
}

pub fn equivalent_over_zp(a: &RatMatrix, b: &RatMatrix, p: u64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(local_symbol(a, p)? == local_symbol(b, p)?)
}

/// Discriminant together with the local symbols of `M` at every `p | 2d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenusSymbol {
    pub discriminant: u64,
    pub local: BTreeMap<u64, LocalSymbol>,
}

impl fmt::Display for GenusSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}", self.discriminant)?;
        for (p, s) in &self.local {
            write!(f, "; p={p}: {s}")?;
        }
        Ok(())
    }
}

pub fn genus_symbol(form: &QuadForm) -> Result<GenusSymbol> {
    let d = discriminant_of(form)?;
    let gram = form.gram();
    let local = bad_primes(d)
        .into_iter()
        .map(|p| Ok((p, local_symbol(&gram, p)?)))
        .collect::<Result<_>>()?;
    Ok(GenusSymbol {
        discriminant: d,
        local,
    })
}

/// Whether all forms lie in one genus.
pub fn same_genus(forms: &[QuadForm]) -> Result<bool> {
    let (first, rest) = forms
        .split_first()
        .ok_or_else(|| Error::Domain("same_genus of an empty list".into()))?;
    let g = genus_symbol(first)?;
    for f in rest {
        if genus_symbol(f)? != g {
            return Ok(false);
        }
    }
    Ok(true)
}
