//! The normalized dataset: deterministic JSON consumed by the audit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{fmt_rational, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::model::{AppendixEntry, FormRecord, GenusRecord, QuadForm};

use super::splitting::parse_splitting_expr;
use super::tables::{RawDataset, SourceSpan};

pub const FORMAT_TAG: &str = "nippaudit-dataset/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalDto {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalDto {
    fn from(x: &Rational) -> Self {
        RationalDto {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
    }
}

impl RationalDto {
    pub fn to_rational(&self) -> Result<Rational> {
        parse_rational(&format!("{}/{}", self.num, self.den))
            .ok_or_else(|| Error::Structural(format!("bad rational {}/{}", self.num, self.den)))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct FormDto {
    coeffs: [i64; 10],
    level: u64,
    hasse: BTreeMap<u64, i8>,
    aut: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct AppendixDto {
    density: RationalDto,
    splitting: String,
    blocks: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GenusDto {
    discriminant: u64,
    genus_id: u32,
    mass: RationalDto,
    forms: Vec<FormDto>,
    appendix: BTreeMap<u64, AppendixDto>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DatasetDto {
    format: String,
    genera: Vec<GenusDto>,
    sources: Vec<SourceSpan>,
    warnings: Vec<String>,
}

fn genus_dto(g: &GenusRecord) -> GenusDto {
    GenusDto {
        discriminant: g.discriminant,
        genus_id: g.genus_id,
        mass: (&g.mass).into(),
        forms: g
            .forms
            .iter()
            .map(|f| FormDto {
                coeffs: f.form.coeffs,
                level: f.level,
                hasse: f.hasse.clone(),
                aut: f.aut_count,
            })
            .collect(),
        appendix: g
            .appendix
            .iter()
            .map(|(&p, e)| {
                let blocks = e
                    .splitting
                    .blocks()
                    .iter()
                    .map(|b| b.rows().iter().map(|r| r.iter().map(fmt_rational).collect()).collect())
                    .collect();
                (
                    p,
                    AppendixDto {
                        density: (&e.density).into(),
                        splitting: e.splitting.to_string(),
                        blocks,
                    },
                )
            })
            .collect(),
    }
}

/// Serialize with genera sorted by (discriminant, genus id). Equal datasets
/// give byte-identical output.
pub fn emit_normalized(ds: &RawDataset) -> String {
    let mut genera: Vec<&GenusRecord> = ds.genera.iter().collect();
    genera.sort_by_key(|g| (g.discriminant, g.genus_id));
    let mut sources = ds.sources.clone();
    sources.sort();
    let dto = DatasetDto {
        format: FORMAT_TAG.to_string(),
        genera: genera.into_iter().map(genus_dto).collect(),
        sources,
        warnings: ds.warnings.clone(),
    };
    let mut s = serde_json::to_string_pretty(&dto).expect("dataset serializes");
    s.push('\n');
    s
}

pub fn read_normalized(text: &str) -> Result<RawDataset> {
    let dto: DatasetDto = serde_json::from_str(text)?;
    if dto.format != FORMAT_TAG {
        return Err(Error::Structural(format!("unknown dataset format {:?}", dto.format)));
    }
    let genera = dto
        .genera
        .into_iter()
        .map(|g| {
            let appendix = g
                .appendix
                .into_iter()
                .map(|(p, a)| {
                    Ok((
                        p,
                        AppendixEntry {
                            density: a.density.to_rational()?,
                            splitting: parse_splitting_expr(&a.splitting, p)?,
                        },
                    ))
                })
                .collect::<Result<_>>()?;
            Ok(GenusRecord {
                discriminant: g.discriminant,
                genus_id: g.genus_id,
                mass: g.mass.to_rational()?,
                forms: g
                    .forms
                    .into_iter()
                    .map(|f| FormRecord {
                        form: QuadForm::new(f.coeffs),
                        level: f.level,
                        hasse: f.hasse,
                        aut_count: f.aut,
                    })
                    .collect(),
                appendix,
            })
        })
        .collect::<Result<_>>()?;
    Ok(RawDataset {
        genera,
        sources: dto.sources,
        warnings: dto.warnings,
    })
}

/// SHA-256 of the normalized serialization, hex encoded.
pub fn fingerprint(ds: &RawDataset) -> String {
    Sha256::digest(emit_normalized(ds).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
