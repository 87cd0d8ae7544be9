//! Cross-checks of a normalized dataset against recomputed invariants.

mod report;

pub use report::{emit_report, render_human, ReportFormat};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{bad_primes, fmt_rational, Rational};
use crate::autmass::{aut_order, mass_from_aut, nipp_density, siegel_mass};
use crate::error::{Error, Result};
use crate::ingest::{fingerprint, RawDataset};
use crate::jordan::{jordan_split, to_splitting_expr};
use crate::model::{compute_level, discriminant_of, hasse_symbol_of_form, GenusRecord, HasseConvention};
use crate::symbol::{equivalent_over_zp, genus_symbol};

const ERRATA: &str = include_str!("../../data/appendix_errata.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Membership,
    Splittings,
    Densities,
    Columns,
    Mass,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::Membership,
        Check::Splittings,
        Check::Densities,
        Check::Columns,
        Check::Mass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Membership => "membership",
            Check::Splittings => "splittings",
            Check::Densities => "densities",
            Check::Columns => "columns",
            Check::Mass => "mass",
        }
    }

    /// Comma separated list, e.g. `splittings,densities`.
    pub fn parse_list(s: &str) -> Result<BTreeSet<Check>> {
        s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse()).collect()
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingField {
    GenusMembership,
    Splitting,
    Density,
    Level,
    Hasse,
    Aut,
    Mass,
    Structural,
}

impl fmt::Display for FindingField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FindingField::GenusMembership => "genus_membership",
            FindingField::Splitting => "splitting",
            FindingField::Density => "density",
            FindingField::Level => "level",
            FindingField::Hasse => "hasse",
            FindingField::Aut => "aut",
            FindingField::Mass => "mass",
            FindingField::Structural => "structural",
        };
        f.write_str(s)
    }
}

/// One disagreement between a tabulated value and its recomputation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AuditFinding {
    pub discriminant: u64,
    pub genus_id: u32,
    pub prime: Option<u64>,
    pub field: FindingField,
    /// Position of the form within the genus, for per-form fields.
    pub form: Option<usize>,
    pub tabulated: String,
    pub recomputed: String,
}

impl AuditFinding {
    fn key(&self) -> (u64, u32, Option<u64>, FindingField, Option<usize>) {
        (self.discriminant, self.genus_id, self.prime, self.field, self.form)
    }

    pub fn label(&self) -> String {
        format!("{}#{}", self.discriminant, self.genus_id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub fingerprint: String,
    pub checks: Vec<Check>,
    pub hasse_convention: HasseConvention,
    pub genera: usize,
    pub findings: Vec<AuditFinding>,
    pub summary: BTreeMap<FindingField, usize>,
    pub gates: BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
pub struct AuditOptions {
    pub checks: BTreeSet<Check>,
    pub hasse_convention: HasseConvention,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            checks: Check::ALL.into_iter().collect(),
            hasse_convention: HasseConvention::default(),
            threads: None,
        }
    }
}

struct Ctx<'a> {
    g: &'a GenusRecord,
    out: Vec<AuditFinding>,
}

impl Ctx<'_> {
    fn push(&mut self, prime: Option<u64>, field: FindingField, form: Option<usize>, tab: String, rec: String) {
        self.out.push(AuditFinding {
            discriminant: self.g.discriminant,
            genus_id: self.g.genus_id,
            prime,
            field,
            form,
            tabulated: tab,
            recomputed: rec,
        });
    }
}

fn check_membership(cx: &mut Ctx) {
    let g = cx.g;
    let mut first = None;
    for (i, f) in g.forms.iter().enumerate() {
        match discriminant_of(&f.form) {
            Ok(d) if d == g.discriminant => {}
            Ok(d) => {
                cx.push(None, FindingField::GenusMembership, Some(i), format!("disc {}", g.discriminant), format!("disc {d}"));
                continue;
            }
            Err(e) => {
                cx.push(None, FindingField::GenusMembership, Some(i), f.form.to_string(), e.to_string());
                continue;
            }
        }
        let sym = match genus_symbol(&f.form) {
            Ok(s) => s,
            Err(e) => {
                cx.push(None, FindingField::GenusMembership, Some(i), f.form.to_string(), e.to_string());
                continue;
            }
        };
        match &first {
            None => first = Some(sym),
            Some(s) if *s == sym => {}
            Some(s) => cx.push(None, FindingField::GenusMembership, Some(i), s.to_string(), sym.to_string()),
        }
    }
}

fn recomputed_splitting(gram: &crate::arith::RatMatrix, p: u64) -> String {
    jordan_split(gram, p)
        .and_then(|s| to_splitting_expr(&s))
        .map_or_else(|e| e.to_string(), |e| e.to_string())
}

fn check_appendix(cx: &mut Ctx, splittings: bool, densities: bool) {
    let g = cx.g;
    let Some(first) = g.first_form() else {
        cx.push(None, FindingField::Structural, None, "no forms".into(), String::new());
        return;
    };
    if g.appendix.is_empty() {
        cx.push(None, FindingField::Structural, None, "no appendix record".into(), String::new());
        return;
    }
    let want = bad_primes(g.discriminant);
    for &p in &want {
        if !g.appendix.contains_key(&p) {
            cx.push(Some(p), FindingField::Structural, None, "missing".into(), "appendix entry required".into());
        }
    }
    let gram = first.gram();
    for (&p, entry) in &g.appendix {
        if !want.contains(&p) {
            cx.push(Some(p), FindingField::Structural, None, entry.splitting.to_string(), "prime does not divide 2d".into());
            continue;
        }
        if splittings {
            let claimed = entry.splitting.to_gram();
            let same = if claimed.dim() == gram.dim() {
                equivalent_over_zp(&gram, &claimed, p)
            } else {
                Ok(false)
            };
            match same {
                Ok(true) => {}
                Ok(false) => cx.push(Some(p), FindingField::Splitting, None, entry.splitting.to_string(), recomputed_splitting(&gram, p)),
                Err(e) => cx.push(Some(p), FindingField::Splitting, None, entry.splitting.to_string(), e.to_string()),
            }
        }
        if densities {
            match nipp_density(first, p) {
                Ok(x) if x == entry.density => {}
                Ok(x) => cx.push(Some(p), FindingField::Density, None, fmt_rational(&entry.density), fmt_rational(&x)),
                Err(e) => cx.push(Some(p), FindingField::Density, None, fmt_rational(&entry.density), e.to_string()),
            }
        }
    }
}

fn check_columns(cx: &mut Ctx, conv: HasseConvention) {
    let g = cx.g;
    for (i, f) in g.forms.iter().enumerate() {
        match compute_level(&f.form) {
            Ok(l) if l == f.level => {}
            Ok(l) => cx.push(None, FindingField::Level, Some(i), f.level.to_string(), l.to_string()),
            Err(e) => cx.push(None, FindingField::Level, Some(i), f.level.to_string(), e.to_string()),
        }
        for (&p, &s) in &f.hasse {
            match hasse_symbol_of_form(&f.form, p, conv) {
                Ok(h) if h == s => {}
                Ok(h) => cx.push(Some(p), FindingField::Hasse, Some(i), s.to_string(), h.to_string()),
                Err(e) => cx.push(Some(p), FindingField::Hasse, Some(i), s.to_string(), e.to_string()),
            }
        }
        match aut_order(&f.form) {
            Ok(a) if a == f.aut_count => {}
            Ok(a) => cx.push(None, FindingField::Aut, Some(i), f.aut_count.to_string(), a.to_string()),
            Err(e) => cx.push(None, FindingField::Aut, Some(i), f.aut_count.to_string(), e.to_string()),
        }
    }
}

fn check_mass(cx: &mut Ctx) {
    let g = cx.g;
    let show = |r: Result<Rational>| r.map_or_else(|e| e.to_string(), |x| fmt_rational(&x));
    let by_aut = mass_from_aut(g).map(|m| m.value);
    let siegel = siegel_mass(g).map(|m| m.value);
    let ok = matches!((&by_aut, &siegel), (Ok(a), Ok(s)) if *a == g.mass && *s == g.mass);
    if !ok {
        let rec = format!("aut {}; siegel {}", show(by_aut), show(siegel));
        cx.push(None, FindingField::Mass, None, fmt_rational(&g.mass), rec);
    }
}

/// All findings for one genus, in canonical order.
pub fn audit_genus(g: &GenusRecord, opts: &AuditOptions) -> Vec<AuditFinding> {
    let mut cx = Ctx { g, out: Vec::new() };
    let has = |c| opts.checks.contains(&c);
    if has(Check::Membership) {
        check_membership(&mut cx);
    }
    if has(Check::Splittings) || has(Check::Densities) {
        check_appendix(&mut cx, has(Check::Splittings), has(Check::Densities));
    }
    if has(Check::Columns) {
        check_columns(&mut cx, opts.hasse_convention);
    }
    if has(Check::Mass) {
        check_mass(&mut cx);
    }
    cx.out.sort_by_key(|a| a.key());
    cx.out
}

pub fn run_audit(ds: &RawDataset, opts: &AuditOptions) -> Result<AuditReport> {
    let work = || -> Vec<AuditFinding> {
        ds.genera
            .par_iter()
            .map(|g| audit_genus(g, opts))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    let mut findings = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Domain(e.to_string()))?
            .install(work),
        None => work(),
    };
    findings.sort_by(|a, b| a.key().cmp(&b.key()).then_with(|| a.cmp(b)));
    let mut summary = BTreeMap::new();
    for f in &findings {
        *summary.entry(f.field).or_insert(0) += 1;
    }
    let mut report = AuditReport {
        fingerprint: fingerprint(ds),
        checks: opts.checks.iter().copied().collect(),
        hasse_convention: opts.hasse_convention,
        genera: ds.genera.len(),
        findings,
        summary,
        gates: BTreeMap::new(),
    };
    report.gates = gates(&report, ds);
    Ok(report)
}

fn verdict(ran: bool, pass: bool) -> String {
    match (ran, pass) {
        (false, _) => "not-run",
        (true, true) => "pass",
        (true, false) => "fail",
    }
    .to_string()
}

fn gates(report: &AuditReport, ds: &RawDataset) -> BTreeMap<String, String> {
    let ran = |c| report.checks.contains(&c);
    let none_of = |fields: &[FindingField], max_d: u64| {
        !report
            .findings
            .iter()
            .any(|f| fields.contains(&f.field) && f.discriminant <= max_d)
    };
    let appendix_ran = ran(Check::Splittings) && ran(Check::Densities);
    let mut g = BTreeMap::new();
    g.insert(
        "agreement-through-1213".into(),
        verdict(appendix_ran, none_of(&[FindingField::Splitting, FindingField::Density], 1213)),
    );
    let max_d = ds.genera.iter().map(|g| g.discriminant).max().unwrap_or(0);
    g.insert(
        "errata-list".into(),
        verdict(appendix_ran && max_d >= 1732, reproduce_table1(report) == known_errata()),
    );
    g.insert(
        "membership".into(),
        verdict(ran(Check::Membership), none_of(&[FindingField::GenusMembership], u64::MAX)),
    );
    g.insert(
        "columns".into(),
        verdict(
            ran(Check::Columns),
            none_of(&[FindingField::Level, FindingField::Hasse, FindingField::Aut], u64::MAX),
        ),
    );
    g.insert("mass".into(), verdict(ran(Check::Mass), none_of(&[FindingField::Mass], u64::MAX)));
    g
}

/// Genera with at least one splitting or density finding, sorted.
pub fn reproduce_table1(report: &AuditReport) -> Vec<(u64, u32)> {
    let set: BTreeSet<(u64, u32)> = report
        .findings
        .iter()
        .filter(|f| matches!(f.field, FindingField::Splitting | FindingField::Density))
        .map(|f| (f.discriminant, f.genus_id))
        .collect();
    set.into_iter().collect()
}

/// The genera whose appendix entries are known to be wrong, in table order.
pub fn known_errata() -> Vec<(u64, u32)> {
    ERRATA
        .split_whitespace()
        .map(|t| {
            let (d, i) = t.split_once('#').expect("label d#id");
            (d.parse().expect("disc"), i.parse().expect("id"))
        })
        .collect()
}

/// Hasse mismatches over the dataset under each convention.
pub fn calibrate_hasse(ds: &RawDataset) -> BTreeMap<HasseConvention, usize> {
    let mut out = BTreeMap::new();
    for conv in [HasseConvention::StrictPairs, HasseConvention::WithDiagonal] {
        let bad = ds
            .genera
            .par_iter()
            .map(|g| {
                g.forms
                    .iter()
                    .flat_map(|f| f.hasse.iter().map(move |(&p, &s)| (f, p, s)))
                    .filter(|&(f, p, s)| hasse_symbol_of_form(&f.form, p, conv).ok() != Some(s))
                    .count()
            })
            .sum();
        out.insert(conv, bad);
    }
    out
}

/// The convention with fewer mismatches; ties keep the default.
pub fn best_hasse_convention(ds: &RawDataset) -> HasseConvention {
    let counts = calibrate_hasse(ds);
    let strict = counts[&HasseConvention::StrictPairs];
    let diag = counts[&HasseConvention::WithDiagonal];
    if diag < strict {
        HasseConvention::WithDiagonal
    } else {
        HasseConvention::StrictPairs
    }
}
