//! Licensing of anaphoric reference to the modifier of French endocentric
//! compounds (`N2 à N1`, `N2 de N1`).
//!
//! The head's qualia structure determines how the modifier relates to it
//! ([`detect_relation`]); the relation fixes which determiners can pick the
//! modifier up again ([`licensing`]); [`generate_variants`] fills a sentence
//! template with the definite, possessive and demonstrative readings and stars
//! the unlicensed ones.

mod determiner;
mod relation;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entry::LexicalEntry;
use crate::lexicon::Lexicon;
use crate::types::HierarchyError;
use crate::validate::ContainmentSet;

pub use determiner::{
    licensing, realize_determiner, AgreementFeatures, DeterminerKind, Licensing, Number,
};
pub use relation::{detect_relation, detect_relations, RelationCategory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnaphoraError {
    #[error("unknown word `{surface}` (tried {tried:?})")]
    UnknownWord { surface: String, tried: Vec<String> },
    #[error("no relation detected between `{head}` and `{modifier}`")]
    NoRelation {
        head: String,
        modifier: String,
        reasons: Vec<String>,
    },
    #[error("bad template: expected 3 `%s` placeholders, found {0}")]
    BadTemplate(usize),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnaphoraOptions {
    #[serde(default)]
    pub possessor_number: Number,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variant {
    pub kind: DeterminerKind,
    pub sentence: String,
    pub valid: bool,
}

impl Variant {
    /// The sentence, starred when the reading is not licensed.
    pub fn rendered(&self) -> String {
        if self.valid {
            self.sentence.clone()
        } else {
            format!("* {}", self.sentence)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnaphoraVerdict {
    pub category: RelationCategory,
    pub licensing: Licensing,
    /// Definite, possessive, demonstrative, in that order.
    pub variants: Vec<Variant>,
    /// Notes such as other categories that also matched.
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

impl AnaphoraVerdict {
    pub fn lines(&self) -> Vec<String> {
        self.variants.iter().map(Variant::rendered).collect()
    }
}

/// Resolves a surface form to an entry: exact lemma first (singular), then
/// with one trailing `s` or `x` removed (plural).
pub fn analyze_surface<'a>(
    surface: &str,
    lex: &'a Lexicon,
) -> Result<(&'a LexicalEntry, Number), AnaphoraError> {
    let mut tried = vec![surface.to_string()];
    if !surface.is_empty() {
        if let Some(e) = lex.get_lemma(surface) {
            return Ok((e, Number::Sg));
        }
        if let Some(stem) = surface.strip_suffix(['s', 'x']).filter(|s| !s.is_empty()) {
            if let Some(e) = lex.get_lemma(stem) {
                return Ok((e, Number::Pl));
            }
            tried.push(stem.to_string());
        }
    }
    Err(AnaphoraError::UnknownWord {
        surface: surface.to_string(),
        tried,
    })
}

const PLACEHOLDER: &str = "%s";

pub fn generate_variants(
    head_surface: &str,
    modifier_surface: &str,
    template: &str,
    options: AnaphoraOptions,
    lex: &Lexicon,
    containment: &ContainmentSet,
) -> Result<AnaphoraVerdict, AnaphoraError> {
    let parts: Vec<&str> = template.split(PLACEHOLDER).collect();
    if parts.len() != 4 {
        return Err(AnaphoraError::BadTemplate(parts.len() - 1));
    }
    let (head, _) = analyze_surface(head_surface, lex)?;
    let (modifier, number) = analyze_surface(modifier_surface, lex)?;
    let matched = detect_relations(head, modifier, lex.hierarchy(), containment)?;
    let category = matched[0];
    let licensed = licensing(category);
    let features = AgreementFeatures {
        gender: modifier.gender,
        number,
        elision: modifier.elision,
        possessor_number: options.possessor_number,
    };

    let before_det = format!("{}{}{}", parts[0], head_surface, parts[1]);
    let sentence_initial = before_det
        .trim_end()
        .chars()
        .last()
        .is_none_or(|c| matches!(c, '.' | '!' | '?'));

    let variants = DeterminerKind::ALL
        .into_iter()
        .map(|kind| {
            let det = realize_determiner(kind, features);
            let det = if sentence_initial {
                capitalize(det)
            } else {
                det.to_string()
            };
            let after_det = if det.ends_with('\'') {
                parts[2].strip_prefix(' ').unwrap_or(parts[2])
            } else {
                parts[2]
            };
            Variant {
                kind,
                sentence: format!("{before_det}{det}{after_det}{modifier_surface}{}", parts[3]),
                valid: licensed.get(kind),
            }
        })
        .collect();

    let diagnostics = if matched.len() > 1 {
        vec![format!(
            "ambiguous relation: {} also matched; using {category}",
            matched[1..]
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )]
    } else {
        Vec::new()
    };

    Ok(AnaphoraVerdict {
        category,
        licensing: licensed,
        variants,
        diagnostics,
    })
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}
