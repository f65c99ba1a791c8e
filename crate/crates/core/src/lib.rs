//! Generative Lexicon toolkit: typed lexical entries with qualia structure,
//! a type hierarchy controlling unification, LDIF/XML persistence, search,
//! pretty printing, and the compound anaphora licensing rules.

pub mod anaphora;
pub mod entry;
pub mod features;
pub mod lexicon;
pub mod persistence;
pub mod predicate;
pub mod pretty;
pub mod query;
pub mod seed;
pub mod types;
pub mod validate;

pub use anaphora::{
    analyze_surface, detect_relation, generate_variants, licensing, realize_determiner,
    AgreementFeatures, AnaphoraError, AnaphoraOptions, AnaphoraVerdict, DeterminerKind, Licensing,
    Number, RelationCategory, Variant,
};
pub use entry::{EntryKey, Gender, LexicalEntry, QualiaStructure, ENTRY_CLASS};
pub use features::{feature_at_path, BadPath, Feature};
pub use lexicon::Lexicon;
pub use persistence::{export_ldif, export_xml, import_ldif, import_xml, Format, PersistError};
pub use predicate::{parse_predicate, render_predicate, Predicate, PredicateError, Sort, TypedArg};
pub use pretty::pretty_print;
pub use query::{search, search_str, BadFilter, Filter};
pub use types::{HierarchyError, TypeHierarchy, TypeName};
pub use validate::{
    validate_entry, validate_entry_with, ContainmentSet, Problem, ValidationReport,
};

#[cfg(feature = "proptest")]
pub mod strategies;
