use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::predicate::{Predicate, TypedArg};
use crate::types::TypeName;

/// Fixed object class written on every persisted entry.
pub const ENTRY_CLASS: &str = "glEntry";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gender {
    #[serde(rename = "m")]
    Masculine,
    #[serde(rename = "f")]
    Feminine,
}

impl Gender {
    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Masculine => "m",
            Gender::Feminine => "f",
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Gender {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "m" => Ok(Gender::Masculine),
            "f" => Ok(Gender::Feminine),
            _ => Err(format!("gender must be `m` or `f`, got `{s}`")),
        }
    }
}

/// Unique key of an entry: lemma plus homonym sense number.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntryKey {
    pub lemma: String,
    pub sense: u32,
}

impl EntryKey {
    pub fn new(lemma: impl Into<String>, sense: u32) -> Self {
        EntryKey {
            lemma: lemma.into(),
            sense,
        }
    }
}

impl fmt::Display for EntryKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.lemma, self.sense)
    }
}

/// The four qualia roles, with the telic split into a containment state and
/// the embedded trigger (agentive of the telic) and result (formal of the telic).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QualiaStructure {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formal: Option<Predicate>,
    #[serde(rename = "const", default, skip_serializing_if = "Vec::is_empty")]
    pub constitutive: Vec<Predicate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub telic_state: Option<Predicate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub telic_trigger: Option<Predicate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub telic_result: Option<Predicate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agentive: Option<Predicate>,
}

impl QualiaStructure {
    pub fn is_empty(&self) -> bool {
        self == &QualiaStructure::default()
    }

    pub fn has_telic(&self) -> bool {
        self.telic_state.is_some() || self.telic_trigger.is_some() || self.telic_result.is_some()
    }

    /// Every predicate with the attribute path it lives at.
    pub fn predicates(&self) -> Vec<(String, &Predicate)> {
        let mut out = Vec::new();
        if let Some(p) = &self.formal {
            out.push(("qualia.formal".to_string(), p));
        }
        for (i, p) in self.constitutive.iter().enumerate() {
            out.push((format!("qualia.const[{i}]"), p));
        }
        let roles = [
            ("qualia.telic.state", &self.telic_state),
            ("qualia.telic.trigger", &self.telic_trigger),
            ("qualia.telic.result", &self.telic_result),
            ("qualia.agentive", &self.agentive),
        ];
        for (path, p) in roles {
            if let Some(p) = p {
                out.push((path.to_string(), p));
            }
        }
        out
    }
}

/// One word sense of the lexicon.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LexicalEntry {
    pub lemma: String,
    #[serde(default = "default_sense")]
    pub sense: u32,
    pub cat: String,
    pub gender: Gender,
    #[serde(default)]
    pub elision: bool,
    pub lexical_type: TypeName,
    /// Argument structure; the first argument is the variable the word denotes.
    #[serde(default)]
    pub args: Vec<TypedArg>,
    #[serde(default)]
    pub events: Vec<TypedArg>,
    #[serde(default, skip_serializing_if = "QualiaStructure::is_empty")]
    pub qualia: QualiaStructure,
}

fn default_sense() -> u32 {
    1
}

impl LexicalEntry {
    /// A bare entry with no argument, event or qualia structure.
    pub fn new(
        lemma: impl Into<String>,
        cat: impl Into<String>,
        gender: Gender,
        lexical_type: TypeName,
    ) -> Self {
        LexicalEntry {
            lemma: lemma.into(),
            sense: 1,
            cat: cat.into(),
            gender,
            elision: false,
            lexical_type,
            args: Vec::new(),
            events: Vec::new(),
            qualia: QualiaStructure::default(),
        }
    }

    pub fn key(&self) -> EntryKey {
        EntryKey::new(self.lemma.clone(), self.sense)
    }

    /// The variable the entry denotes, if any argument structure is given.
    pub fn distinguished_var(&self) -> Option<&str> {
        self.args.first().map(|a| a.var())
    }
}
