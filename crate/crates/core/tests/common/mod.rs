//! Independent class enumeration for small discriminants.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nippaudit_core::arith::{int, RatMatrix};
use nippaudit_core::autmass::{aut_order, is_isometric};
use nippaudit_core::symbol::equivalent_over_zp;
use nippaudit_core::symbol::{genus_symbol, GenusSymbol};
use nippaudit_core::QuadForm;

fn det4(a: &[[i64; 4]; 4]) -> i64 {
    let m = |r: [usize; 3], c: [usize; 3]| -> i64 {
        a[r[0]][c[0]] * (a[r[1]][c[1]] * a[r[2]][c[2]] - a[r[1]][c[2]] * a[r[2]][c[1]])
            - a[r[0]][c[1]] * (a[r[1]][c[0]] * a[r[2]][c[2]] - a[r[1]][c[2]] * a[r[2]][c[0]])
            + a[r[0]][c[2]] * (a[r[1]][c[0]] * a[r[2]][c[1]] - a[r[1]][c[1]] * a[r[2]][c[0]])
    };
    a[0][0] * m([1, 2, 3], [1, 2, 3]) - a[0][1] * m([1, 2, 3], [0, 2, 3]) + a[0][2] * m([1, 2, 3], [0, 1, 3])
        - a[0][3] * m([1, 2, 3], [0, 1, 2])
}

fn leading_positive(a: &[[i64; 4]; 4]) -> bool {
    let d1 = a[0][0];
    let d2 = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let d3 = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    d1 > 0 && d2 > 0 && d3 > 0 && det4(a) > 0
}

/// Every form satisfying the necessary Minkowski conditions with
/// discriminant `<= max_d`, keyed by discriminant. Covers every class.
pub fn reduced_candidates(max_d: u64) -> BTreeMap<u64, Vec<QuadForm>> {
    candidates_where(max_d, |_| true)
}

/// Candidates of exactly one discriminant.
pub fn candidates_of_disc(d: u64) -> Vec<QuadForm> {
    candidates_where(d, |x| x == d).remove(&d).unwrap_or_default()
}

fn candidates_where(max_d: u64, keep: impl Fn(u64) -> bool) -> BTreeMap<u64, Vec<QuadForm>> {
    let mut out: BTreeMap<u64, Vec<QuadForm>> = BTreeMap::new();
    // f11 f22 f33 f44 <= 4 det M = d / 4
    let cap = (max_d / 4) as i64;
    for f11 in 1..=cap {
        for f22 in f11..=cap / f11 {
            for f33 in f22..=cap / (f11 * f22) {
                for f44 in f33..=cap / (f11 * f22 * f33) {
                    for f12 in -f11..=0 {
                        for f13 in -f11..=0 {
                            for f14 in -f11..=0 {
                                for f23 in -f22..=f22 {
                                    for f24 in -f22..=f22 {
                                        for f34 in -f33..=f33 {
                                            let c = [f11, f22, f33, f44, f12, f13, f23, f14, f24, f34];
                                            let form = QuadForm::new(c);
                                            let a = form.doubled_gram();
                                            if !leading_positive(&a) {
                                                continue;
                                            }
                                            let d = det4(&a) as u64;
                                            if d <= max_d && keep(d) {
                                                out.entry(d).or_default().push(form);
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

pub struct Class {
    pub form: QuadForm,
    pub aut: u64,
}

pub struct Genus {
    pub symbol: GenusSymbol,
    pub classes: Vec<Class>,
}

/// Classes of discriminant `d` grouped into genera.
pub fn genera_of(candidates: &[QuadForm]) -> Vec<Genus> {
    let mut by_symbol: BTreeMap<GenusSymbol, Vec<Class>> = BTreeMap::new();
    for form in candidates {
        let sym = genus_symbol(form).unwrap();
        let aut = aut_order(form).unwrap();
        let classes = by_symbol.entry(sym).or_default();
        let seen = classes
            .iter()
            .any(|c| c.aut == aut && is_isometric(&c.form, form).unwrap());
        if !seen {
            classes.push(Class { form: *form, aut });
        }
    }
    by_symbol
        .into_iter()
        .map(|(symbol, classes)| Genus { symbol, classes })
        .collect()
}

/// Primitive classes of discriminant `d`, grouped into genera in a fixed
/// order.
pub fn primitive_genera(d: u64) -> Vec<Genus> {
    let forms: Vec<QuadForm> = candidates_of_disc(d).into_iter().filter(|f| f.is_primitive()).collect();
    genera_of(&forms)
}

/// Exhaustive search for X with XᵗAX ≡ B (mod 2^k), X invertible mod 2.
pub struct Searcher {
    n: usize,
    m: i64,
    vecs: Vec<Vec<i64>>,
    // A·v mod 2^k for every v
    av: Vec<Vec<i64>>,
    by_norm: BTreeMap<i64, Vec<usize>>,
}

impl Searcher {
    pub fn new(a: &[Vec<i64>], k: u32) -> Self {
        let n = a.len();
        let m = 1i64 << k;
        let total = 1usize << (k as usize * n);
        let vecs: Vec<Vec<i64>> = (0..total)
            .map(|mut code| {
                (0..n)
                    .map(|_| {
                        let x = (code % m as usize) as i64;
                        code /= m as usize;
                        x
                    })
                    .collect()
            })
            .collect();
        let av: Vec<Vec<i64>> = vecs
            .iter()
            .map(|v| (0..n).map(|i| (0..n).map(|j| a[i][j] * v[j]).sum::<i64>().rem_euclid(m)).collect())
            .collect();
        let mut by_norm: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (idx, v) in vecs.iter().enumerate() {
            let norm = v.iter().zip(&av[idx]).map(|(x, y)| x * y).sum::<i64>().rem_euclid(m);
            by_norm.entry(norm).or_default().push(idx);
        }
        Searcher { n, m, vecs, av, by_norm }
    }

    pub fn finds(&self, b: &[Vec<i64>]) -> bool {
        self.search(0, &mut Vec::new(), b)
    }

    fn search(&self, j: usize, chosen: &mut Vec<usize>, b: &[Vec<i64>]) -> bool {
        if j == self.n {
            return det_mod2(&chosen.iter().map(|&c| &self.vecs[c]).collect::<Vec<_>>());
        }
        let Some(cands) = self.by_norm.get(&b[j][j].rem_euclid(self.m)) else {
            return false;
        };
        for &idx in cands {
            let v = &self.vecs[idx];
            let fits = chosen.iter().enumerate().all(|(i, &c)| {
                self.av[c].iter().zip(v).map(|(x, y)| x * y).sum::<i64>().rem_euclid(self.m)
                    == b[i][j].rem_euclid(self.m)
            });
            if fits {
                chosen.push(idx);
                if self.search(j + 1, chosen, b) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
}

fn det_mod2(cols: &[&Vec<i64>]) -> bool {
    let n = cols.len();
    let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| cols[j][i] & 1).collect()).collect();
    let mut rank = 0;
    for c in 0..n {
        if let Some(p) = (rank..n).find(|&r| a[r][c] == 1) {
            a.swap(rank, p);
            for r in 0..n {
                if r != rank && a[r][c] == 1 {
                    for j in 0..n {
                        a[r][j] ^= a[rank][j];
                    }
                }
            }
            rank += 1;
        }
    }
    rank == n
}

/// Every pair of 2×2 integral matrices with entries in `-4..=4` and odd
/// determinant of absolute value at most 15: symbol decision against the
/// mod 2^5 search. Returns the pair count and the disagreeing pairs.
pub fn binary_family_check() -> (usize, Vec<String>) {
    let mut forms = Vec::new();
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            for c in -4i64..=4 {
                let det = a * c - b * b;
                if det % 2 != 0 && det.abs() <= 15 {
                    forms.push(vec![vec![a, b], vec![b, c]]);
                }
            }
        }
    }
    let to_rat = |a: &Vec<Vec<i64>>| RatMatrix::from_rows(a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect());
    let mats: Vec<RatMatrix> = forms.iter().map(to_rat).collect();
    let mut bad = Vec::new();
    let mut checked = 0;
    for (i, x) in forms.iter().enumerate() {
        let searcher = Searcher::new(x, 5);
        for (j, y) in forms.iter().enumerate() {
            let fast = equivalent_over_zp(&mats[i], &mats[j], 2).unwrap();
            checked += 1;
            if fast != searcher.finds(y) {
                bad.push(format!("{x:?} vs {y:?}: symbol says {fast}"));
            }
        }
    }
    (checked, bad)
}

pub mod synth {
    //! Tables in the plain layout rendered from enumerated genera.

    use std::fmt::Write;

    use nippaudit_core::arith::{bad_primes, fmt_rational, rat};
    use nippaudit_core::autmass::{is_isometric, nipp_density};
    use nippaudit_core::jordan::{jordan_split, to_splitting_expr};
    use nippaudit_core::model::{compute_level, hasse_symbol_of_form, HasseConvention};
    use nippaudit_core::{QuadForm, Rational};
    use num_traits::Zero;

    use super::Genus;

    pub const EXAMPLE: [i64; 10] = [1, 1, 11, 11, 1, 0, 0, 1, 0, 8];
    pub const EXAMPLE_CLAIM: &str = "[2A]+[(58/3)+(38/29)]";

    /// Overrides for one appendix entry: (disc, id, p, density, splitting).
    pub type Override = (u64, u32, u64, String, String);

    pub fn render(discs: &[(u64, Vec<Genus>)], overrides: &[Override]) -> (String, String) {
        let mut main = String::from("# main table\n");
        let mut app = String::from("# appendix\n");
        for (d, genera) in discs {
            for (k, g) in genera.iter().enumerate() {
                let id = k as u32 + 1;
                let mut mass = Rational::zero();
                for c in &g.classes {
                    mass += rat(1, c.aut as i64);
                }
                writeln!(main, "disc {d} genus {id} mass {}", fmt_rational(&mass)).unwrap();
                for c in &g.classes {
                    let coeffs: Vec<String> = c.form.coeffs.iter().map(i64::to_string).collect();
                    let hasse: Vec<String> = bad_primes(*d)
                        .into_iter()
                        .map(|p| {
                            let h = hasse_symbol_of_form(&c.form, p, HasseConvention::StrictPairs).unwrap();
                            format!("{p}:{}", if h > 0 { '+' } else { '-' })
                        })
                        .collect();
                    writeln!(
                        main,
                        "  [{}] level {} hasse {} aut {}",
                        coeffs.join(","),
                        compute_level(&c.form).unwrap(),
                        hasse.join(","),
                        c.aut
                    )
                    .unwrap();
                }
                writeln!(app, "disc {d} genus {id}").unwrap();
                let first: &QuadForm = &g.classes[0].form;
                for p in bad_primes(*d) {
                    let o = overrides.iter().find(|o| (o.0, o.1, o.2) == (*d, id, p));
                    let (density, splitting) = match o {
                        Some(o) => (o.3.clone(), o.4.clone()),
                        None => (
                            fmt_rational(&nipp_density(first, p).unwrap()),
                            to_splitting_expr(&jordan_split(&first.gram(), p).unwrap()).unwrap().to_string(),
                        ),
                    };
                    writeln!(app, "  p {p} density {density} splitting {splitting}").unwrap();
                }
            }
        }
        (main, app)
    }

    /// Genera of `d`, reordered so the genus of `form` gets ordinal `id`
    /// and lists `form` first in place of its enumerated representative.
    pub fn place(mut genera: Vec<Genus>, form: &QuadForm, id: u32) -> Vec<Genus> {
        let at = genera
            .iter()
            .position(|g| g.classes.iter().any(|c| is_isometric(&c.form, form).unwrap()))
            .expect("form enumerated");
        let mut g = genera.remove(at);
        let k = g.classes.iter().position(|c| is_isometric(&c.form, form).unwrap()).unwrap();
        g.classes[k].form = *form;
        g.classes.swap(0, k);
        genera.insert((id as usize - 1).min(genera.len()), g);
        genera
    }
}

pub mod corpus {
    //! Locating the published tables.

    use std::path::{Path, PathBuf};

    use nippaudit_core::ingest::{join_tables, parse_appendix, parse_main_table, read_normalized, FormatDescriptor, RawDataset};

    /// `NIPPAUDIT_CORPUS_DIR`, else `data/nipp` at the workspace root.
    pub fn corpus_dir() -> PathBuf {
        std::env::var_os("NIPPAUDIT_CORPUS_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/nipp"))
    }

    fn txt_files(dir: &Path) -> Vec<PathBuf> {
        let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
            .map(|it| it.filter_map(|e| e.ok().map(|e| e.path())).collect())
            .unwrap_or_default();
        v.retain(|p| p.is_file());
        v.sort();
        v
    }

    /// The dataset, from `dataset.json` or from `main/` and `appendix/`
    /// (parsed with `descriptor.toml` when present). `Err` says why it is
    /// unavailable.
    pub fn load() -> Result<RawDataset, String> {
        let dir = corpus_dir();
        let json = dir.join("dataset.json");
        if json.is_file() {
            let text = std::fs::read_to_string(&json).map_err(|e| e.to_string())?;
            return read_normalized(&text).map_err(|e| e.to_string());
        }
        let mains = txt_files(&dir.join("main"));
        let apps = txt_files(&dir.join("appendix"));
        if mains.is_empty() {
            return Err(format!("corpus unavailable: no tables under {}", dir.display()));
        }
        let desc_path = dir.join("descriptor.toml");
        let desc = if desc_path.is_file() {
            FormatDescriptor::load(&desc_path).map_err(|e| e.to_string())?
        } else {
            FormatDescriptor::plain()
        };
        let read = |p: &PathBuf| std::fs::read_to_string(p).map_err(|e| e.to_string());
        let name = |p: &PathBuf| p.file_name().unwrap().to_string_lossy().into_owned();
        let main = mains
            .iter()
            .map(|p| parse_main_table(&read(p)?, &name(p), &desc).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        let app = apps
            .iter()
            .map(|p| parse_appendix(&read(p)?, &name(p), &desc).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        join_tables(main, app).map_err(|e| e.to_string())
    }
}
