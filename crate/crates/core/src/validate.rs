//! Coherence checks for lexical entries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::entry::LexicalEntry;
use crate::predicate::{Sort, TypedArg};
use crate::types::TypeHierarchy;

/// Predicate names accepted as the telic containment state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContainmentSet(BTreeSet<String>);

impl Default for ContainmentSet {
    fn default() -> Self {
        ContainmentSet(BTreeSet::from(["contain".to_string()]))
    }
}

impl ContainmentSet {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ContainmentSet(names.into_iter().map(Into::into).collect())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub key: String,
    pub path: String,
    pub message: String,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.key, self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub problems: Vec<Problem>,
}

impl Default for ValidationReport {
    fn default() -> Self {
        ValidationReport {
            ok: true,
            problems: Vec::new(),
        }
    }
}

impl ValidationReport {
    pub fn push(
        &mut self,
        key: impl fmt::Display,
        path: impl Into<String>,
        message: impl Into<String>,
    ) {
        self.problems.push(Problem {
            key: key.to_string(),
            path: path.into(),
            message: message.into(),
        });
        self.ok = false;
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.ok &= other.ok;
        self.problems.extend(other.problems);
    }

    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.problems.iter().map(|p| p.path.as_str())
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return f.write_str("ok");
        }
        for (i, p) in self.problems.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

pub fn validate_entry(e: &LexicalEntry, h: &TypeHierarchy) -> ValidationReport {
    validate_entry_with(e, h, &ContainmentSet::default())
}

pub fn validate_entry_with(
    e: &LexicalEntry,
    h: &TypeHierarchy,
    containment: &ContainmentSet,
) -> ValidationReport {
    let key = e.key();
    let mut report = ValidationReport::default();
    let mut problem = |path: &str, msg: String| report.push(&key, path, msg);

    if !is_valid_lemma(&e.lemma) {
        problem("lemma", format!("malformed lemma {:?}", e.lemma));
    }
    if e.sense == 0 {
        problem("sense", "sense numbers start at 1".into());
    }
    if e.cat.is_empty() || !e.cat.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        problem("cat", format!("malformed category {:?}", e.cat));
    }
    if !h.contains(e.lexical_type.as_str()) {
        problem("lexical_type", format!("unknown type `{}`", e.lexical_type));
    }

    // Variables declared by the argument and event structures.
    let mut declared: BTreeMap<&str, &TypedArg> = BTreeMap::new();
    let structures = [("args", &e.args), ("events", &e.events)];
    for (section, list) in structures {
        for (i, a) in list.iter().enumerate() {
            let path = format!("{section}[{i}]");
            if !h.contains(a.ty().as_str()) {
                problem(&path, format!("unknown type `{}`", a.ty()));
            }
            if section == "events" && a.sort() != Sort::Event {
                problem(&path, format!("`{}` is not an event variable", a.var()));
            }
            if declared.insert(a.var(), a).is_some() {
                problem(&path, format!("variable `{}` declared twice", a.var()));
            }
        }
    }

    for (path, p) in e.qualia.predicates() {
        for a in p.args() {
            if !h.contains(a.ty().as_str()) {
                problem(
                    &path,
                    format!("unknown type `{}` for `{}`", a.ty(), a.var()),
                );
                continue;
            }
            if let Some(decl) = declared.get(a.var()) {
                if h.contains(decl.ty().as_str())
                    && h.unify(decl.ty().as_str(), a.ty().as_str())
                        .ok()
                        .flatten()
                        .is_none()
                {
                    problem(
                        &path,
                        format!(
                            "`{}` is declared `{}` but used as `{}`",
                            a.var(),
                            decl.ty(),
                            a.ty()
                        ),
                    );
                }
            }
        }
    }
    for (i, p) in e.qualia.constitutive.iter().enumerate() {
        if p.name() != "part_of" {
            problem(
                &format!("qualia.const[{i}]"),
                format!(
                    "constitutive predicates must be `part_of`, found `{}`",
                    p.name()
                ),
            );
        }
    }
    if let Some(p) = &e.qualia.telic_state {
        if !containment.contains(p.name()) {
            problem(
                "qualia.telic.state",
                format!("`{}` is not a containment predicate", p.name()),
            );
        }
    }
    report
}

/// Lemmas are single-line, non-empty and carry no surrounding whitespace.
pub fn is_valid_lemma(lemma: &str) -> bool {
    !lemma.is_empty() && lemma.trim() == lemma && !lemma.chars().any(char::is_control)
}
