//! Z_2-equivalence decisions checked against an exhaustive search for
//! transforms modulo 2^k.

mod common;

use std::collections::BTreeMap;

use common::Searcher;

use nippaudit_core::arith::{int, RatMatrix};
use nippaudit_core::symbol::{canonicalize_2, symbol_2, CanonicalSymbol2};

fn to_rat(a: &[Vec<i64>]) -> RatMatrix {
    RatMatrix::from_rows(a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
}

fn canon(a: &[Vec<i64>]) -> CanonicalSymbol2 {
    canonicalize_2(&symbol_2(&to_rat(a)).unwrap())
}

#[test]
fn small_binary_family_matches_search() {
    let (checked, disagreements) = common::binary_family_check();
    assert!(checked > 1000);
    assert!(disagreements.is_empty(), "{disagreements:?}");
}

fn diag_and_blocks(dim: usize, max_scale: u32) -> Vec<Vec<Vec<i64>>> {
    // pieces: odd units 2^s u, and even blocks 2^s [[2,1],[1,2]], 2^s [[0,1],[1,0]]
    let mut pieces: Vec<(usize, Vec<Vec<i64>>)> = Vec::new();
    for s in 0..=max_scale {
        let q = 1i64 << s;
        for u in [1, 3, 5, 7] {
            pieces.push((1, vec![vec![q * u]]));
        }
        pieces.push((2, vec![vec![2 * q, q], vec![q, 2 * q]]));
        pieces.push((2, vec![vec![0, q], vec![q, 0]]));
    }
    let mut out = Vec::new();
    fn rec(
        dim: usize,
        from: usize,
        pieces: &[(usize, Vec<Vec<i64>>)],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<Vec<i64>>>,
    ) {
        let used: usize = cur.iter().map(|&i| pieces[i].0).sum();
        if used == dim {
            let mut m = vec![vec![0i64; dim]; dim];
            let mut off = 0;
            for &i in cur.iter() {
                let (d, b) = &pieces[i];
                for r in 0..*d {
                    for c in 0..*d {
                        m[off + r][off + c] = b[r][c];
                    }
                }
                off += d;
            }
            out.push(m);
            return;
        }
        for k in from..pieces.len() {
            if used + pieces[k].0 <= dim {
                cur.push(k);
                rec(dim, k, pieces, cur, out);
                cur.pop();
            }
        }
    }
    rec(dim, 0, &pieces, &mut Vec::new(), &mut out);
    out
}

fn mix(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    // an integral unimodular change of basis, so the search sees
    // non-diagonal inputs
    let n = a.len();
    let mut t = vec![vec![0i64; n]; n];
    for i in 0..n {
        t[i][i] = 1;
        if i + 1 < n {
            t[i][i + 1] = 1;
        }
    }
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    out[i][j] += t[k][i] * a[k][l] * t[l][j];
                }
            }
        }
    }
    out
}

fn check_family(dim: usize, max_scale: u32) {
    let k = max_scale + 3;
    let forms = diag_and_blocks(dim, max_scale);
    let mut classes: BTreeMap<CanonicalSymbol2, Vec<Vec<Vec<i64>>>> = BTreeMap::new();
    for f in forms {
        classes.entry(canon(&f)).or_default().push(f);
    }
    // same symbol => search finds a transform
    for (sym, members) in &classes {
        let head = mix(&members[0]);
        let searcher = Searcher::new(&head, k);
        for m in members {
            assert!(searcher.finds(m), "{sym}: {head:?} !~ {m:?}");
        }
        assert_eq!(canon(&sym.representative().rows().iter().map(|r| r.iter().map(|x| x.to_integer().try_into().unwrap()).collect()).collect::<Vec<Vec<i64>>>()), *sym);
    }
    // different symbols, same determinant => no transform
    let reps: Vec<(&CanonicalSymbol2, &Vec<Vec<i64>>)> =
        classes.iter().map(|(s, m)| (s, &m[0])).collect();
    let det = |m: &Vec<Vec<i64>>| to_rat(m).det();
    for (i, (si, a)) in reps.iter().enumerate() {
        let searcher = Searcher::new(a, k);
        for (sj, b) in reps.iter().skip(i + 1) {
            if det(a) != det(b) {
                continue;
            }
            assert!(!searcher.finds(b), "{si} and {sj} are congruent: {a:?} {b:?}");
        }
    }
}

#[test]
fn binary_forms_up_to_scale_eight() {
    check_family(2, 3);
}

#[test]
#[ignore = "extended run, a few minutes"]
fn ternary_forms_up_to_scale_four() {
    check_family(3, 2);
}
