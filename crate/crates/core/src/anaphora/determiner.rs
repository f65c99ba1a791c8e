use serde::{Deserialize, Serialize};

use crate::entry::Gender;

use super::relation::RelationCategory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DeterminerKind {
    Definite,
    Possessive,
    Demonstrative,
}

impl DeterminerKind {
    pub const ALL: [DeterminerKind; 3] = [
        DeterminerKind::Definite,
        DeterminerKind::Possessive,
        DeterminerKind::Demonstrative,
    ];
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    #[default]
    Sg,
    Pl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AgreementFeatures {
    pub gender: Gender,
    pub number: Number,
    pub elision: bool,
    pub possessor_number: Number,
}

/// Which anaphoric determiners may pick up the modifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Licensing {
    pub definite: bool,
    pub possessive: bool,
    pub demonstrative: bool,
}

impl Licensing {
    pub fn get(&self, kind: DeterminerKind) -> bool {
        match kind {
            DeterminerKind::Definite => self.definite,
            DeterminerKind::Possessive => self.possessive,
            DeterminerKind::Demonstrative => self.demonstrative,
        }
    }
}

/// The licensing table: definite always, possessive only for part-of and
/// telic-result modifiers, demonstrative never.
pub fn licensing(cat: RelationCategory) -> Licensing {
    use RelationCategory::*;
    let possessive = match cat {
        PartOf | TelicResult => true,
        ContainState | TelicTrigger | Agentive => false,
    };
    Licensing {
        definite: true,
        possessive,
        demonstrative: false,
    }
}

pub fn realize_determiner(kind: DeterminerKind, f: AgreementFeatures) -> &'static str {
    use Gender::*;
    use Number::*;
    match (kind, f.number) {
        (DeterminerKind::Definite, Pl) => "les",
        (DeterminerKind::Definite, Sg) if f.elision => "l'",
        (DeterminerKind::Definite, Sg) => match f.gender {
            Masculine => "le",
            Feminine => "la",
        },
        (DeterminerKind::Possessive, n) => match (f.possessor_number, n) {
            (Pl, Sg) => "leur",
            (Pl, Pl) => "leurs",
            (Sg, Pl) => "ses",
            // son before a vowel even for feminine nouns: son olive
            (Sg, Sg) if f.gender == Masculine || f.elision => "son",
            (Sg, Sg) => "sa",
        },
        (DeterminerKind::Demonstrative, Pl) => "ces",
        (DeterminerKind::Demonstrative, Sg) => match f.gender {
            Masculine if f.elision => "cet",
            Masculine => "ce",
            Feminine => "cette",
        },
    }
}
