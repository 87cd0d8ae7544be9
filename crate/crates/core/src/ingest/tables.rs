//! Main-table and appendix parsing, and joining the two.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use regex::Captures;
use serde::{Deserialize, Serialize};

use crate::arith::{bad_primes, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::model::{AppendixEntry, FormRecord, GenusRecord, QuadForm};

use super::descriptor::{FormatDescriptor, HasseFormat};
use super::splitting::parse_splitting_expr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Main,
    Appendix,
}

/// Where a record came from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub discriminant: u64,
    pub genus_id: u32,
    pub table: TableKind,
    pub file: String,
    pub first_line: usize,
    pub last_line: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MainTable {
    pub genera: Vec<GenusRecord>,
    pub spans: Vec<SourceSpan>,
}

pub type AppendixKey = (u64, u32);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AppendixTable {
    pub entries: BTreeMap<AppendixKey, BTreeMap<u64, AppendixEntry>>,
    pub spans: Vec<SourceSpan>,
}

/// Genus records with provenance and the consistency warnings raised while
/// joining the tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawDataset {
    pub genera: Vec<GenusRecord>,
    pub sources: Vec<SourceSpan>,
    pub warnings: Vec<String>,
}

impl RawDataset {
    /// Genera with `lo <= disc <= hi`.
    pub fn restricted(&self, lo: u64, hi: u64) -> RawDataset {
        let keep = |d: u64| lo <= d && d <= hi;
        RawDataset {
            genera: self.genera.iter().filter(|g| keep(g.discriminant)).cloned().collect(),
            sources: self.sources.iter().filter(|s| keep(s.discriminant)).cloned().collect(),
            warnings: self.warnings.clone(),
        }
    }
}

fn parse_err(file: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        file: file.to_string(),
        line,
        message: message.into(),
    }
}

fn field<'t>(caps: &Captures<'t>, name: &str) -> &'t str {
    caps.name(name).map_or("", |m| m.as_str())
}

fn number<T: std::str::FromStr>(caps: &Captures, name: &str, file: &str, line: usize) -> Result<T> {
    let s = field(caps, name);
    s.trim()
        .parse()
        .map_err(|_| parse_err(file, line, format!("bad {name} {s:?}")))
}

fn rational(s: &str, what: &str, file: &str, line: usize) -> Result<Rational> {
    match parse_rational(s.trim()) {
        Some(x) if x.is_positive() => Ok(x),
        _ => Err(parse_err(file, line, format!("bad {what} {s:?}"))),
    }
}

fn parse_hasse(s: &str, format: HasseFormat, disc: u64, file: &str, line: usize) -> Result<BTreeMap<u64, i8>> {
    let sign = |t: &str| match t {
        "+" | "+1" | "1" => Some(1i8),
        "-" | "-1" => Some(-1i8),
        _ => None,
    };
    let bad = || parse_err(file, line, format!("bad hasse field {s:?}"));
    match format {
        HasseFormat::Pairs => s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                let (p, v) = t.split_once(':').ok_or_else(bad)?;
                let p: u64 = p.trim().parse().map_err(|_| bad())?;
                Ok((p, sign(v.trim()).ok_or_else(bad)?))
            })
            .collect(),
        HasseFormat::Signs => {
            let primes = bad_primes(disc);
            let signs: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
            if signs.len() != primes.len() {
                return Err(parse_err(
                    file,
                    line,
                    format!("{} hasse signs for {} primes", signs.len(), primes.len()),
                ));
            }
            primes
                .into_iter()
                .zip(signs)
                .map(|(p, c)| Ok((p, sign(&c.to_string()).ok_or_else(bad)?)))
                .collect()
        }
    }
}

fn parse_coeffs(s: &str, sep: &str, file: &str, line: usize) -> Result<[i64; 10]> {
    let parts: Vec<&str> = if sep.trim().is_empty() {
        s.split_whitespace().collect()
    } else {
        s.split(sep).collect()
    };
    let values: Vec<i64> = parts
        .iter()
        .map(|t| t.trim().parse().map_err(|_| parse_err(file, line, format!("bad coefficient {t:?}"))))
        .collect::<Result<_>>()?;
    values
        .try_into()
        .map_err(|v: Vec<i64>| parse_err(file, line, format!("{} coefficients, expected 10", v.len())))
}

/// Ordinals must run 1, 2, ... within each discriminant. The first header of
/// a file may continue a discriminant begun elsewhere.
fn check_ordinal(prev: Option<(u64, u32)>, disc: u64, id: u32, file: &str, line: usize) -> Result<()> {
    let expected = match prev {
        None => id,
        Some((d, i)) if d == disc => i + 1,
        _ => 1,
    };
    if id != expected {
        return Err(Error::Structural(format!(
            "{file}:{line}: genus {disc}#{id} where {disc}#{expected} was expected"
        )));
    }
    Ok(())
}

pub fn parse_main_table(text: &str, file: &str, desc: &FormatDescriptor) -> Result<MainTable> {
    let mut out = MainTable::default();
    let mut prev: Option<(u64, u32)> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        if let Some(c) = desc.main_genus.captures(raw) {
            if let Some(g) = out.genera.last() {
                if g.forms.is_empty() {
                    return Err(Error::Structural(format!("{file}: genus {} lists no forms", g.label())));
                }
            }
            let disc: u64 = number(&c, "disc", file, line)?;
            let id: u32 = number(&c, "id", file, line)?;
            check_ordinal(prev, disc, id, file, line)?;
            prev = Some((disc, id));
            out.genera.push(GenusRecord {
                discriminant: disc,
                genus_id: id,
                forms: Vec::new(),
                mass: rational(field(&c, "mass"), "mass", file, line)?,
                appendix: BTreeMap::new(),
            });
            out.spans.push(SourceSpan {
                discriminant: disc,
                genus_id: id,
                table: TableKind::Main,
                file: file.to_string(),
                first_line: line,
                last_line: line,
            });
        } else if let Some(c) = desc.main_form.captures(raw) {
            let genus = out
                .genera
                .last_mut()
                .ok_or_else(|| parse_err(file, line, "form line before any genus header"))?;
            let coeffs = parse_coeffs(field(&c, "coeffs"), &desc.coeff_separator, file, line)?;
            genus.forms.push(FormRecord {
                form: QuadForm::new(coeffs),
                level: number(&c, "level", file, line)?,
                hasse: parse_hasse(field(&c, "hasse"), desc.hasse_format, genus.discriminant, file, line)?,
                aut_count: number(&c, "aut", file, line)?,
            });
            out.spans.last_mut().expect("span per genus").last_line = line;
        } else if !desc.comment.is_match(raw) {
            return Err(parse_err(file, line, format!("unrecognised line {raw:?}")));
        }
    }
    if let Some(g) = out.genera.last() {
        if g.forms.is_empty() {
            return Err(Error::Structural(format!("{file}: genus {} lists no forms", g.label())));
        }
    }
    Ok(out)
}

pub fn parse_appendix(text: &str, file: &str, desc: &FormatDescriptor) -> Result<AppendixTable> {
    let mut out = AppendixTable::default();
    let mut current: Option<AppendixKey> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        if let Some(c) = desc.appendix_genus.captures(raw) {
            let key = (number(&c, "disc", file, line)?, number(&c, "id", file, line)?);
            if out.entries.insert(key, BTreeMap::new()).is_some() {
                return Err(Error::Structural(format!(
                    "{file}:{line}: appendix lists {}#{} twice",
                    key.0, key.1
                )));
            }
            current = Some(key);
            out.spans.push(SourceSpan {
                discriminant: key.0,
                genus_id: key.1,
                table: TableKind::Appendix,
                file: file.to_string(),
                first_line: line,
                last_line: line,
            });
        } else if let Some(c) = desc.appendix_entry.captures(raw) {
            let key = current.ok_or_else(|| parse_err(file, line, "appendix entry before any genus header"))?;
            let p: u64 = number(&c, "p", file, line)?;
            let density = rational(field(&c, "density"), "density", file, line)?;
            let splitting = parse_splitting_expr(field(&c, "splitting"), p).map_err(|e| parse_err(file, line, e.to_string()))?;
            let slot = out.entries.get_mut(&key).expect("header inserted");
            if slot.insert(p, AppendixEntry { density, splitting }).is_some() {
                return Err(Error::Structural(format!(
                    "{file}:{line}: p = {p} listed twice for {}#{}",
                    key.0, key.1
                )));
            }
            out.spans.last_mut().expect("span per genus").last_line = line;
        } else if !desc.comment.is_match(raw) {
            return Err(parse_err(file, line, format!("unrecognised line {raw:?}")));
        }
    }
    Ok(out)
}

/// Merge main tables and appendices into one dataset sorted by
/// (discriminant, genus id).
pub fn join_tables(mains: Vec<MainTable>, appendices: Vec<AppendixTable>) -> Result<RawDataset> {
    let mut genera: BTreeMap<AppendixKey, GenusRecord> = BTreeMap::new();
    let mut sources = Vec::new();
    for t in mains {
        for g in t.genera {
            let key = (g.discriminant, g.genus_id);
            if genera.insert(key, g).is_some() {
                return Err(Error::Structural(format!("genus {}#{} appears twice", key.0, key.1)));
            }
        }
        sources.extend(t.spans);
    }
    let mut last: Option<AppendixKey> = None;
    for &(d, id) in genera.keys() {
        let expected = match last {
            Some((ld, li)) if ld == d => li + 1,
            _ => 1,
        };
        if id != expected {
            return Err(Error::Structural(format!("genus {d}#{id} follows a gap in the ordinals")));
        }
        last = Some((d, id));
    }

    let mut warnings = Vec::new();
    let have_appendix = !appendices.is_empty();
    let mut annotations: BTreeMap<AppendixKey, BTreeMap<u64, AppendixEntry>> = BTreeMap::new();
    for t in appendices {
        for (key, entries) in t.entries {
            if annotations.insert(key, entries).is_some() {
                return Err(Error::Structural(format!("appendix lists {}#{} twice", key.0, key.1)));
            }
        }
        sources.extend(t.spans);
    }
    for (key, entries) in annotations {
        match genera.get_mut(&key) {
            Some(g) => g.appendix = entries,
            None => warnings.push(format!("appendix record {}#{} has no main-table genus", key.0, key.1)),
        }
    }
    if have_appendix {
        for g in genera.values() {
            let want: BTreeSet<u64> = bad_primes(g.discriminant).into_iter().collect();
            let got: BTreeSet<u64> = g.appendix.keys().copied().collect();
            if got.is_empty() {
                warnings.push(format!("{}: no appendix record", g.label()));
            } else if got != want {
                warnings.push(format!("{}: appendix primes {got:?}, expected {want:?}", g.label()));
            }
        }
    }
    sources.sort();
    Ok(RawDataset {
        genera: genera.into_values().collect(),
        sources,
        warnings,
    })
}
