use std::fmt;

use serde::{Deserialize, Serialize};

use crate::entry::LexicalEntry;
use crate::predicate::TypedArg;
use crate::types::{HierarchyError, TypeHierarchy};
use crate::validate::ContainmentSet;

use super::AnaphoraError;

/// How the modifier of a compound relates to its head, read off the head's qualia.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationCategory {
    /// Telic state is a containment of the modifier (`verre à vin`).
    ContainState,
    /// Modifier is a constitutive part (`patin à roulettes`).
    PartOf,
    /// Modifier saturates the 2nd argument of the telic trigger (`pressoir à olives`).
    TelicTrigger,
    /// Modifier saturates the 1st argument of the telic result (`pressoir à cidre`).
    TelicResult,
    /// Modifier takes part in the agentive (`jus de citron`).
    Agentive,
}

impl RelationCategory {
    /// Probe order; the first match wins.
    pub const PROBE_ORDER: [RelationCategory; 5] = [
        RelationCategory::ContainState,
        RelationCategory::PartOf,
        RelationCategory::TelicTrigger,
        RelationCategory::TelicResult,
        RelationCategory::Agentive,
    ];
}

impl fmt::Display for RelationCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Outcome of one probe: matched, or the reason it did not.
type Probe = Result<(), String>;

fn slot_matches(
    h: &TypeHierarchy,
    slot: &TypedArg,
    modifier: &LexicalEntry,
) -> Result<bool, HierarchyError> {
    Ok(h.unify(slot.ty().as_str(), modifier.lexical_type.as_str())?
        .is_some())
}

fn probe(
    cat: RelationCategory,
    head: &LexicalEntry,
    modifier: &LexicalEntry,
    h: &TypeHierarchy,
    containment: &ContainmentSet,
) -> Result<Probe, HierarchyError> {
    let q = &head.qualia;
    let ty = &modifier.lexical_type;
    let miss = |s: String| -> Result<Probe, HierarchyError> { Ok(Err(s)) };
    match cat {
        RelationCategory::ContainState => {
            let Some(p) = q
                .telic_state
                .as_ref()
                .filter(|p| containment.contains(p.name()))
            else {
                return miss("no containment telic state".into());
            };
            match p.individual_args().last() {
                Some(slot) if slot_matches(h, slot, modifier)? => Ok(Ok(())),
                Some(slot) => miss(format!(
                    "contained `{}` does not unify with `{ty}`",
                    slot.ty()
                )),
                None => miss(format!("`{p}` has no individual argument")),
            }
        }
        RelationCategory::PartOf => {
            let mut tried = Vec::new();
            for p in q.constitutive.iter().filter(|p| p.name() == "part_of") {
                if let Some(slot) = p.individual_arg(0) {
                    if slot_matches(h, slot, modifier)? {
                        return Ok(Ok(()));
                    }
                    tried.push(slot.ty().to_string());
                }
            }
            if tried.is_empty() {
                miss("no part_of constitutive".into())
            } else {
                miss(format!("parts {tried:?} do not unify with `{ty}`"))
            }
        }
        RelationCategory::TelicTrigger | RelationCategory::TelicResult => {
            let (pred, index, role) = if cat == RelationCategory::TelicTrigger {
                (&q.telic_trigger, 1, "trigger")
            } else {
                (&q.telic_result, 0, "result")
            };
            let Some(p) = pred else {
                return miss(format!("no telic {role}"));
            };
            match p.individual_arg(index) {
                Some(slot) if slot_matches(h, slot, modifier)? => Ok(Ok(())),
                Some(slot) => miss(format!(
                    "{role} argument {} `{}` does not unify with `{ty}`",
                    index + 1,
                    slot.ty()
                )),
                None => miss(format!("{role} `{p}` has no argument {}", index + 1)),
            }
        }
        RelationCategory::Agentive => {
            let Some(p) = &q.agentive else {
                return miss("no agentive".into());
            };
            let own = head.distinguished_var();
            for slot in p.individual_args().filter(|a| Some(a.var()) != own) {
                if slot_matches(h, slot, modifier)? {
                    return Ok(Ok(()));
                }
            }
            miss(format!("no agentive argument of `{p}` unifies with `{ty}`"))
        }
    }
}

/// Every category whose probe succeeds, in probe order.
pub fn detect_relations(
    head: &LexicalEntry,
    modifier: &LexicalEntry,
    h: &TypeHierarchy,
    containment: &ContainmentSet,
) -> Result<Vec<RelationCategory>, AnaphoraError> {
    let mut matched = Vec::new();
    let mut reasons = Vec::new();
    for cat in RelationCategory::PROBE_ORDER {
        match probe(cat, head, modifier, h, containment)? {
            Ok(()) => matched.push(cat),
            Err(why) => reasons.push(format!("{cat}: {why}")),
        }
    }
    if matched.is_empty() {
        return Err(AnaphoraError::NoRelation {
            head: head.lemma.clone(),
            modifier: modifier.lemma.clone(),
            reasons,
        });
    }
    Ok(matched)
}

/// The head/modifier relation, first match in [`RelationCategory::PROBE_ORDER`].
pub fn detect_relation(
    head: &LexicalEntry,
    modifier: &LexicalEntry,
    h: &TypeHierarchy,
    containment: &ContainmentSet,
) -> Result<RelationCategory, AnaphoraError> {
    detect_relations(head, modifier, h, containment).map(|m| m[0])
}
