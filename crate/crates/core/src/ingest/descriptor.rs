//! Line layouts of the raw table files.

use regex::Regex;
use serde::Deserialize;

use crate::error::{Error, Result};

const PLAIN: &str = include_str!("../../data/plain.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HasseFormat {
    Pairs,
    Signs,
}

#[derive(Debug, Deserialize)]
struct RawDescriptor {
    name: String,
    comment: String,
    main: RawMain,
    appendix: RawAppendix,
}

#[derive(Debug, Deserialize)]
struct RawMain {
    genus: String,
    form: String,
    coeff_separator: String,
    hasse_format: HasseFormat,
}

#[derive(Debug, Deserialize)]
struct RawAppendix {
    genus: String,
    entry: String,
}

#[derive(Clone, Debug)]
pub struct FormatDescriptor {
    pub name: String,
    pub comment: Regex,
    pub main_genus: Regex,
    pub main_form: Regex,
    pub coeff_separator: String,
    pub hasse_format: HasseFormat,
    pub appendix_genus: Regex,
    pub appendix_entry: Regex,
}

fn compile(what: &str, pattern: &str, groups: &[&str]) -> Result<Regex> {
    let re = Regex::new(pattern).map_err(|e| Error::Descriptor(format!("{what}: {e}")))?;
    for g in groups {
        if !re.capture_names().flatten().any(|n| n == *g) {
            return Err(Error::Descriptor(format!("{what}: missing group `{g}`")));
        }
    }
    Ok(re)
}

impl FormatDescriptor {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawDescriptor = toml::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))?;
        Ok(FormatDescriptor {
            name: raw.name,
            comment: compile("comment", &raw.comment, &[])?,
            main_genus: compile("main.genus", &raw.main.genus, &["disc", "id", "mass"])?,
            main_form: compile("main.form", &raw.main.form, &["coeffs", "level", "hasse", "aut"])?,
            coeff_separator: raw.main.coeff_separator,
            hasse_format: raw.main.hasse_format,
            appendix_genus: compile("appendix.genus", &raw.appendix.genus, &["disc", "id"])?,
            appendix_entry: compile("appendix.entry", &raw.appendix.entry, &["p", "density", "splitting"])?,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// The layout shipped with the crate.
    pub fn plain() -> Self {
        Self::from_toml(PLAIN).expect("bundled descriptor is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_layout_loads() {
        let d = FormatDescriptor::plain();
        assert_eq!(d.name, "plain");
        assert_eq!(d.hasse_format, HasseFormat::Pairs);
        assert!(d.main_genus.is_match("disc 1216 genus 15 mass 19/3"));
    }

    #[test]
    fn missing_group_is_reported() {
        let text = PLAIN.replace("(?P<aut>", "(");
        let err = FormatDescriptor::from_toml(&text).unwrap_err();
        assert!(err.to_string().contains("aut"), "{err}");
    }
}
