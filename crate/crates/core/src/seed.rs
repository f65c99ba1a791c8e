//! The shipped seed lexicon, one exemplar per relation category and a few extras.

use crate::lexicon::Lexicon;
use crate::persistence::import_ldif;

/// Byte-for-byte copy of `data/seed.ldif`.
pub const SEED_LDIF: &str = include_str!("../../../data/seed.ldif");

pub fn lexicon() -> Lexicon {
    import_ldif(SEED_LDIF).expect("seed lexicon is valid")
}
