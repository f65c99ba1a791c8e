use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::entry::{EntryKey, LexicalEntry};
use crate::types::TypeHierarchy;
use crate::validate::{validate_entry_with, ContainmentSet, ValidationReport};

/// Entries plus the hierarchy their types live in. Entries are kept sorted by
/// key, with a hash index on lemmas for constant-time exact lookup.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    hierarchy: TypeHierarchy,
    entries: BTreeMap<EntryKey, LexicalEntry>,
    by_lemma: HashMap<String, BTreeSet<u32>>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.hierarchy == other.hierarchy && self.entries == other.entries
    }
}

impl Eq for Lexicon {}

impl Lexicon {
    pub fn new(hierarchy: TypeHierarchy) -> Self {
        Lexicon {
            hierarchy,
            ..Default::default()
        }
    }

    /// Assembles a lexicon, validating every entry; nothing is kept unless all pass.
    pub fn from_entries<I>(
        hierarchy: TypeHierarchy,
        entries: I,
        containment: &ContainmentSet,
    ) -> Result<Self, ValidationReport>
    where
        I: IntoIterator<Item = LexicalEntry>,
    {
        let mut lex = Lexicon::new(hierarchy);
        let mut report = ValidationReport::default();
        for e in entries {
            report.merge(validate_entry_with(&e, &lex.hierarchy, containment));
            lex.insert_unchecked(e);
        }
        if report.ok {
            Ok(lex)
        } else {
            Err(report)
        }
    }

    pub fn hierarchy(&self) -> &TypeHierarchy {
        &self.hierarchy
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in key order.
    pub fn entries(&self) -> impl Iterator<Item = &LexicalEntry> {
        self.entries.values()
    }

    pub fn keys(&self) -> impl Iterator<Item = &EntryKey> {
        self.entries.keys()
    }

    pub fn get(&self, key: &EntryKey) -> Option<&LexicalEntry> {
        self.entries.get(key)
    }

    pub fn contains_key(&self, key: &EntryKey) -> bool {
        self.entries.contains_key(key)
    }

    /// Sense numbers recorded for an exact lemma.
    pub fn senses(&self, lemma: &str) -> Option<&BTreeSet<u32>> {
        self.by_lemma.get(lemma)
    }

    /// Lowest-numbered sense of a lemma.
    pub fn get_lemma(&self, lemma: &str) -> Option<&LexicalEntry> {
        let sense = *self.by_lemma.get(lemma)?.first()?;
        self.entries.get(&EntryKey::new(lemma, sense))
    }

    /// Keys whose lemma starts with `prefix`, in order.
    pub fn keys_with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a EntryKey> {
        self.entries
            .range(EntryKey::new(prefix, 0)..)
            .map(|(k, _)| k)
            .take_while(move |k| k.lemma.starts_with(prefix))
    }

    /// Inserts or replaces an entry after validating it against this lexicon's hierarchy.
    pub fn upsert(
        &mut self,
        entry: LexicalEntry,
        containment: &ContainmentSet,
    ) -> Result<Option<LexicalEntry>, ValidationReport> {
        let report = validate_entry_with(&entry, &self.hierarchy, containment);
        if !report.ok {
            return Err(report);
        }
        Ok(self.insert_unchecked(entry))
    }

    pub fn remove(&mut self, key: &EntryKey) -> Option<LexicalEntry> {
        let removed = self.entries.remove(key)?;
        if let Some(senses) = self.by_lemma.get_mut(&key.lemma) {
            senses.remove(&key.sense);
            if senses.is_empty() {
                self.by_lemma.remove(&key.lemma);
            }
        }
        Some(removed)
    }

    /// Validates every entry against the hierarchy.
    pub fn validate(&self, containment: &ContainmentSet) -> ValidationReport {
        let mut report = ValidationReport::default();
        for e in self.entries.values() {
            report.merge(validate_entry_with(e, &self.hierarchy, containment));
        }
        report
    }

    fn insert_unchecked(&mut self, entry: LexicalEntry) -> Option<LexicalEntry> {
        self.by_lemma
            .entry(entry.lemma.clone())
            .or_default()
            .insert(entry.sense);
        self.entries.insert(entry.key(), entry)
    }
}
