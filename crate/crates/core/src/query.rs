//! Search filters over a lexicon.
//!
//! A filter is one of:
//! - an exact lemma (`pressoir`), answered from the lemma hash index;
//! - a lemma prefix (`pre*`);
//! - an attribute equality (`gender=f`). `lexicalType=T` matches every entry
//!   whose type is subsumed by `T`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::entry::EntryKey;
use crate::features::Feature;
use crate::lexicon::Lexicon;
use crate::predicate::Predicate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad filter: {0}")]
pub struct BadFilter(pub String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Filter {
    Exact(String),
    Prefix(String),
    Attr { path: String, value: String },
}

impl FromStr for Filter {
    type Err = BadFilter;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(BadFilter("empty filter".into()));
        }
        if let Some((path, value)) = s.split_once('=') {
            if path.is_empty() || value.is_empty() {
                return Err(BadFilter(format!(
                    "`{s}` needs both an attribute and a value"
                )));
            }
            Feature::parse(path).map_err(|e| BadFilter(e.to_string()))?;
            return Ok(Filter::Attr {
                path: path.to_string(),
                value: value.to_string(),
            });
        }
        match s.strip_suffix('*') {
            Some(prefix) if prefix.contains('*') => Err(BadFilter(format!(
                "only a single trailing `*` is supported in `{s}`"
            ))),
            Some(prefix) => Ok(Filter::Prefix(prefix.to_string())),
            None if s.contains('*') => Err(BadFilter(format!("misplaced `*` in `{s}`"))),
            None => Ok(Filter::Exact(s.to_string())),
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filter::Exact(l) => f.write_str(l),
            Filter::Prefix(p) => write!(f, "{p}*"),
            Filter::Attr { path, value } => write!(f, "{path}={value}"),
        }
    }
}

/// Matching keys in `(lemma, sense)` order.
pub fn search(lex: &Lexicon, filter: &Filter) -> Vec<EntryKey> {
    match filter {
        Filter::Exact(lemma) => lex
            .senses(lemma)
            .into_iter()
            .flatten()
            .map(|&s| EntryKey::new(lemma.clone(), s))
            .collect(),
        Filter::Prefix(prefix) => lex.keys_with_prefix(prefix).cloned().collect(),
        Filter::Attr { path, value } => {
            let feature = Feature::parse(path).expect("validated when parsed");
            if feature == Feature::LexicalType {
                if !lex.hierarchy().contains(value) {
                    return Vec::new();
                }
                return lex
                    .entries()
                    .filter(|e| {
                        lex.hierarchy()
                            .subtype(e.lexical_type.as_str(), value)
                            .unwrap_or(false)
                    })
                    .map(|e| e.key())
                    .collect();
            }
            // Predicate values compare in canonical form.
            let wanted = if feature.is_predicate() {
                value
                    .parse::<Predicate>()
                    .map(|p| p.to_string())
                    .unwrap_or_else(|_| value.clone())
            } else {
                value.clone()
            };
            lex.entries()
                .filter(|e| feature.values(e).contains(&wanted))
                .map(|e| e.key())
                .collect()
        }
    }
}

/// Parses and runs a filter string.
pub fn search_str(lex: &Lexicon, filter: &str) -> Result<Vec<EntryKey>, BadFilter> {
    Ok(search(lex, &filter.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn lemmas(keys: &[EntryKey]) -> Vec<&str> {
        keys.iter().map(|k| k.lemma.as_str()).collect()
    }

    #[test]
    fn exact_lookup() {
        let lex = seed::lexicon();
        assert_eq!(
            search_str(&lex, "pressoir").unwrap(),
            [EntryKey::new("pressoir", 1)]
        );
        assert!(search_str(&lex, "zzz").unwrap().is_empty());
    }

    #[test]
    fn accent_sensitive() {
        let mut lex = seed::lexicon();
        let mut e = lex.get_lemma("verre").unwrap().clone();
        e.lemma = "défectueux".into();
        lex.upsert(e, &Default::default()).unwrap();
        assert_eq!(search_str(&lex, "défectueux").unwrap().len(), 1);
        assert!(search_str(&lex, "defectueux").unwrap().is_empty());
    }

    #[test]
    fn lexical_type_uses_subsumption() {
        let lex = seed::lexicon();
        // Brute-force oracle: walk the parent edges from each entry type.
        let expected: Vec<EntryKey> = lex
            .entries()
            .filter(|e| {
                let mut frontier = vec![e.lexical_type.clone()];
                while let Some(t) = frontier.pop() {
                    if t.as_str() == "liquid" {
                        return true;
                    }
                    frontier.extend(lex.hierarchy().parents(t.as_str()).unwrap().iter().cloned());
                }
                false
            })
            .map(|e| e.key())
            .collect();
        let got = search_str(&lex, "lexicalType=liquid").unwrap();
        assert_eq!(got, expected);
        for l in ["vin", "cidre", "jus"] {
            assert!(lemmas(&got).contains(&l), "{l}");
        }
        assert!(search_str(&lex, "lexicalType=nothing").unwrap().is_empty());
    }

    #[test]
    fn prefix_and_attribute() {
        let lex = seed::lexicon();
        assert_eq!(lemmas(&search_str(&lex, "pr*").unwrap()), ["pressoir"]);
        assert_eq!(search_str(&lex, "*").unwrap().len(), lex.len());
        let feminine = search_str(&lex, "gender=f").unwrap();
        assert!(lemmas(&feminine).contains(&"olive"));
        assert!(!lemmas(&feminine).contains(&"vin"));
        assert_eq!(
            lemmas(
                &search_str(&lex, "telicTrigger=press( e1:process, x:human, y:fruit )").unwrap()
            ),
            ["pressoir"]
        );
    }

    #[test]
    fn bad_filters() {
        for f in ["", "=x", "gender=", "colour=red", "a*b", "**"] {
            assert!(f.parse::<Filter>().is_err(), "{f:?}");
        }
    }
}
