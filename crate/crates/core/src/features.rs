//! Feature retrieval by attribute path.
//!
//! Paths use the dotted form (`qualia.telic.trigger`) or the flat persistence
//! attribute names (`telicTrigger`, `arg1`). An absent role yields an empty
//! list; an unknown attribute is an error.

use thiserror::Error;

use crate::entry::{LexicalEntry, ENTRY_CLASS};
use crate::predicate::{Predicate, TypedArg};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown attribute path `{0}`")]
pub struct BadPath(pub String);

/// A resolved attribute path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feature {
    EntryClass,
    Lemma,
    Sense,
    Cat,
    Gender,
    Elision,
    LexicalType,
    Args,
    Arg(usize),
    Events,
    Event(usize),
    Formal,
    Const,
    TelicState,
    TelicTrigger,
    TelicResult,
    Agentive,
}

impl Feature {
    pub fn parse(path: &str) -> Result<Feature, BadPath> {
        let f = match path {
            "entryClass" => Feature::EntryClass,
            "lemma" => Feature::Lemma,
            "sense" => Feature::Sense,
            "cat" => Feature::Cat,
            "gender" => Feature::Gender,
            "elision" => Feature::Elision,
            "lexicalType" | "lexical_type" => Feature::LexicalType,
            "args" => Feature::Args,
            "events" => Feature::Events,
            "qualia.formal" | "formal" => Feature::Formal,
            "qualia.const" | "const" => Feature::Const,
            "qualia.telic.state" | "telicState" => Feature::TelicState,
            "qualia.telic.trigger" | "telicTrigger" => Feature::TelicTrigger,
            "qualia.telic.result" | "telicResult" => Feature::TelicResult,
            "qualia.agentive" | "agentive" => Feature::Agentive,
            _ => {
                return index(path, "arg")
                    .map(Feature::Arg)
                    .or_else(|| index(path, "event").map(Feature::Event))
                    .ok_or_else(|| BadPath(path.to_string()))
            }
        };
        Ok(f)
    }

    pub fn is_predicate(self) -> bool {
        matches!(
            self,
            Feature::Formal
                | Feature::Const
                | Feature::TelicState
                | Feature::TelicTrigger
                | Feature::TelicResult
                | Feature::Agentive
        )
    }

    /// Rendered values of this feature on `e`.
    pub fn values(self, e: &LexicalEntry) -> Vec<String> {
        fn one<T: ToString>(v: T) -> Vec<String> {
            vec![v.to_string()]
        }
        fn preds<'a>(ps: impl IntoIterator<Item = &'a Predicate>) -> Vec<String> {
            ps.into_iter().map(Predicate::to_string).collect()
        }
        fn args<'a>(ps: impl IntoIterator<Item = &'a TypedArg>) -> Vec<String> {
            ps.into_iter().map(TypedArg::to_string).collect()
        }
        let q = &e.qualia;
        match self {
            Feature::EntryClass => one(ENTRY_CLASS),
            Feature::Lemma => one(&e.lemma),
            Feature::Sense => one(e.sense),
            Feature::Cat => one(&e.cat),
            Feature::Gender => one(e.gender),
            Feature::Elision => one(e.elision),
            Feature::LexicalType => one(&e.lexical_type),
            Feature::Args => args(&e.args),
            Feature::Arg(i) => args(e.args.get(i - 1)),
            Feature::Events => args(&e.events),
            Feature::Event(i) => args(e.events.get(i - 1)),
            Feature::Formal => preds(&q.formal),
            Feature::Const => preds(&q.constitutive),
            Feature::TelicState => preds(&q.telic_state),
            Feature::TelicTrigger => preds(&q.telic_trigger),
            Feature::TelicResult => preds(&q.telic_result),
            Feature::Agentive => preds(&q.agentive),
        }
    }
}

/// `argN` / `eventN` with N ≥ 1 and no leading zero.
fn index(path: &str, prefix: &str) -> Option<usize> {
    let digits = path.strip_prefix(prefix)?;
    if digits.starts_with('0') || digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

pub fn feature_at_path(e: &LexicalEntry, path: &str) -> Result<Vec<String>, BadPath> {
    Ok(Feature::parse(path)?.values(e))
}
