//! Canonical 2-adic symbols.
//!
//! Two relations generate all equivalences between 2-adic symbols: oddity
//! fusion (only the total oddity of a compartment is an invariant) and sign
//! walking (the signs of two constituents of one train may be flipped
//! together, changing by 4 the oddity of each compartment touched). The
//! canonical form stores each compartment's total oddity on its first
//! constituent and walks every sign towards the head of its train.

use std::fmt;

use super::{fmt_constituent2, symbol_2, Constituent2, Symbol2};
use crate::arith::{int, pow_rat, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalSymbol2 {
    pub constituents: Vec<Constituent2>,
    compartments: Vec<Vec<usize>>,
}

pub fn canonicalize_2(sym: &Symbol2) -> CanonicalSymbol2 {
    let mut c = sym.constituents.clone();
    let compartments = sym.compartments();
    let trains = sym.trains();

    for comp in &compartments {
        let total: u32 = comp.iter().map(|&i| c[i].oddity as u32).sum();
        for &i in comp {
            c[i].oddity = 0;
        }
        c[comp[0]].oddity = (total % 8) as u8;
    }

    for train in &trains {
        for w in (1..train.len()).rev() {
            let cur = train[w];
            if c[cur].sign > 0 {
                continue;
            }
            let prev = train[w - 1];
            c[cur].sign = 1;
            c[prev].sign = -c[prev].sign;
            for comp in &compartments {
                if comp.contains(&prev) || comp.contains(&cur) {
                    c[comp[0]].oddity = (c[comp[0]].oddity + 4) % 8;
                }
            }
        }
    }

    CanonicalSymbol2 {
        constituents: c,
        compartments,
    }
}

/// Units for the one-dimensional entries of the representative.
const UNITS: [i64; 4] = [1, 3, 5, 7];

impl CanonicalSymbol2 {
    pub fn compartments(&self) -> &[Vec<usize>] {
        &self.compartments
    }

    pub fn dim(&self) -> usize {
        self.constituents.iter().map(|c| c.dim).sum()
    }

    /// Total oddity of the whole form.
    pub fn oddity(&self) -> u8 {
        (self.constituents.iter().map(|c| c.oddity as u32).sum::<u32>() % 8) as u8
    }

    /// A block-diagonal Gram matrix with this canonical symbol, built from
    /// the units `1, 3, 5, 7` and the even blocks `[[0,1],[1,0]]`,
    /// `[[2,1],[1,2]]`. Candidates are tried in a fixed order (by scale,
    /// then unit tuple) and the first match is returned, so the matrix
    /// depends on the symbol alone.
    pub fn representative(&self) -> RatMatrix {
        let choices: Vec<Vec<Vec<RatMatrix>>> = self
            .constituents
            .iter()
            .map(|c| {
                let scale = pow_rat(2, c.scale_exp);
                if c.odd {
                    unit_tuples(c.dim)
                        .into_iter()
                        .map(|t| {
                            t.iter()
                                .map(|&u| RatMatrix::diagonal(&[int(u) * &scale]))
                                .collect()
                        })
                        .collect()
                } else {
                    let k = c.dim / 2;
                    let last = if c.sign > 0 { hyperbolic() } else { anisotropic() };
                    let mut blocks = vec![hyperbolic().scaled(&scale); k - 1];
                    blocks.push(last.scaled(&scale));
                    vec![blocks]
                }
            })
            .collect();
        let mut pick = vec![0usize; choices.len()];
        loop {
            let blocks: Vec<RatMatrix> = pick
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| choices[i][k].iter().cloned())
                .collect();
            let m = RatMatrix::block_diag(&blocks);
            if symbol_2(&m).map(|s| canonicalize_2(&s) == *self).unwrap_or(false) {
                return m;
            }
            // odometer over the candidate lists
            let mut i = 0;
            loop {
                if i == pick.len() {
                    panic!("no realisation of canonical symbol {self}");
                }
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }
}

fn hyperbolic() -> RatMatrix {
    RatMatrix::from_i64(&[&[0, 1], &[1, 0]])
}

fn anisotropic() -> RatMatrix {
    RatMatrix::from_i64(&[&[2, 1], &[1, 2]])
}

/// Nondecreasing unit tuples of length `dim`.
fn unit_tuples(dim: usize) -> Vec<Vec<i64>> {
    fn rec(dim: usize, from: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == dim {
            out.push(cur.clone());
            return;
        }
        for k in from..UNITS.len() {
            cur.push(UNITS[k]);
            rec(dim, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, 0, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for CanonicalSymbol2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.constituents.len() {
            if let Some(comp) = self.compartments.iter().find(|comp| comp[0] == i) {
                let inner: Vec<String> = comp
                    .iter()
                    .map(|&k| fmt_constituent2(&self.constituents[k], None))
                    .collect();
                parts.push(format!(
                    "[{}]_{}",
                    inner.join(" "),
                    self.constituents[comp[0]].oddity
                ));
                i += comp.len();
            } else {
                parts.push(fmt_constituent2(&self.constituents[i], None));
                i += 1;
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::equivalent_over_zp;

    fn diag(entries: &[i64]) -> RatMatrix {
        RatMatrix::diagonal(&entries.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    fn canon(m: &RatMatrix) -> CanonicalSymbol2 {
        canonicalize_2(&symbol_2(m).unwrap())
    }

    #[test]
    fn oddity_fusion() {
        assert_eq!(canon(&diag(&[1, 7])), canon(&diag(&[3, 5])));
        assert_ne!(canon(&diag(&[1, 1])), canon(&diag(&[1, 5])));
    }

    #[test]
    fn even_blocks_differ() {
        let a = RatMatrix::from_i64(&[&[2, 1], &[1, 2]]);
        let b = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_ne!(canon(&a), canon(&b));
        assert!(!equivalent_over_zp(&a, &b, 2).unwrap());
    }

    #[test]
    fn sign_walking() {
        // <1> + <2> = <3> + <6>, <1> + <4> = <5> + <20>
        assert_eq!(canon(&diag(&[1, 2])), canon(&diag(&[3, 6])));
        assert_eq!(canon(&diag(&[1, 4])), canon(&diag(&[5, 20])));
        // no walking across an empty pair of scales
        assert_ne!(canon(&diag(&[1, 8])), canon(&diag(&[5, 40])));
    }

    #[test]
    fn idempotent_and_representative() {
        for m in [
            diag(&[1, 2, 4, 8]),
            diag(&[3, 6, 12, 40]),
            RatMatrix::block_diag(&[RatMatrix::from_i64(&[&[2, 1], &[1, 2]]), diag(&[6, 20])]),
            RatMatrix::from_i64(&[&[2, 1, 0, 1], &[1, 2, 0, 0], &[0, 0, 22, 8], &[1, 0, 8, 22]]),
        ] {
            let c = canon(&m);
            let rep = c.representative();
            assert_eq!(canon(&rep), c, "{m}");
            assert!(equivalent_over_zp(&rep, &m, 2).unwrap());
        }
    }

    #[test]
    fn display() {
        let c = canon(&RatMatrix::from_i64(&[
            &[2, 1, 0, 1],
            &[1, 2, 0, 0],
            &[0, 0, 22, 8],
            &[1, 0, 8, 22],
        ]));
        assert_eq!(c.to_string(), "1^+2_II [2^+1]_7 [32^-1]_3");
    }
}
