//! Whole-lexicon save and restore in LDIF-style and XML documents.
//!
//! Both encoders are byte-deterministic: types are written parents first
//! (ties broken by name), entries in `(lemma, sense)` order, attributes in a
//! fixed order and predicates in canonical form. Imports are all-or-nothing.

mod ldif;
mod xml;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entry::LexicalEntry;
use crate::lexicon::Lexicon;
use crate::types::{TypeHierarchy, TypeName};
use crate::validate::{ContainmentSet, ValidationReport};

pub use ldif::{export_ldif, import_ldif, import_ldif_with};
pub use xml::{export_xml, import_xml, import_xml_with};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PersistError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("validation failed: {0}")]
    ValidationFailed(ValidationReport),
    #[error("duplicate record `{0}`")]
    DuplicateKey(String),
}

impl PersistError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        PersistError::Parse {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Ldif,
    Xml,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Ldif => "ldif",
            Format::Xml => "xml",
        }
    }

    pub fn export(self, lex: &Lexicon) -> String {
        match self {
            Format::Ldif => export_ldif(lex),
            Format::Xml => export_xml(lex),
        }
    }

    pub fn import(self, text: &str, containment: &ContainmentSet) -> Result<Lexicon, PersistError> {
        match self {
            Format::Ldif => import_ldif_with(text, containment),
            Format::Xml => import_xml_with(text, containment),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ldif" => Ok(Format::Ldif),
            "xml" => Ok(Format::Xml),
            other => Err(format!(
                "unsupported format `{other}` (expected ldif or xml)"
            )),
        }
    }
}

/// Shared tail of both importers: build the hierarchy, then validate entries.
pub(crate) fn assemble(
    types: BTreeMap<TypeName, BTreeSet<TypeName>>,
    entries: Vec<LexicalEntry>,
    containment: &ContainmentSet,
) -> Result<Lexicon, PersistError> {
    let hierarchy = TypeHierarchy::from_parent_map(types).map_err(|e| {
        let mut report = ValidationReport::default();
        report.push("types", "types", e.to_string());
        PersistError::ValidationFailed(report)
    })?;
    Lexicon::from_entries(hierarchy, entries, containment).map_err(PersistError::ValidationFailed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    #[test]
    fn seed_file_is_canonical() {
        let lex = seed::lexicon();
        assert_eq!(export_ldif(&lex), seed::SEED_LDIF);
    }

    #[test]
    fn seed_counts() {
        let lex = seed::lexicon();
        assert!(lex.hierarchy().len() <= 30);
        assert!(lex.len() >= 10);
    }

    #[test]
    fn codec_commutation() {
        let lex = seed::lexicon();
        let via_xml = import_xml(&export_xml(&lex)).unwrap();
        assert_eq!(via_xml, lex);
        assert_eq!(export_ldif(&via_xml), export_ldif(&lex));
    }

    #[test]
    fn format_names() {
        assert_eq!("ldif".parse::<Format>(), Ok(Format::Ldif));
        assert_eq!("xml".parse::<Format>(), Ok(Format::Xml));
        assert!("yaml".parse::<Format>().is_err());
    }
}
