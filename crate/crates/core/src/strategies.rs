//! Proptest strategies producing valid lexicons over the seed hierarchy.

use std::collections::BTreeMap;

use proptest::prelude::*;

use crate::entry::{EntryKey, Gender, LexicalEntry, QualiaStructure};
use crate::lexicon::Lexicon;
use crate::predicate::{Predicate, TypedArg};
use crate::seed;
use crate::types::{TypeHierarchy, TypeName};
use crate::validate::ContainmentSet;

/// The seed hierarchy extended with up to three fresh types.
pub fn hierarchy() -> impl Strategy<Value = TypeHierarchy> {
    let base = seed::lexicon().hierarchy().clone();
    prop::collection::vec(any::<prop::sample::Index>(), 0..=3).prop_map(move |picks| {
        let mut h = base.clone();
        for (i, pick) in picks.into_iter().enumerate() {
            let nodes: Vec<TypeName> = h.nodes().cloned().collect();
            let parent = pick.get(&nodes).clone();
            let name = TypeName::new(format!("extra-{i}")).unwrap();
            h = h.add_type(name, &[parent]).unwrap();
        }
        h
    })
}

fn type_in(h: &TypeHierarchy) -> impl Strategy<Value = TypeName> {
    let nodes: Vec<TypeName> = h.nodes().cloned().collect();
    prop::sample::select(nodes)
}

fn lemma() -> impl Strategy<Value = String> {
    "[a-zàâçéèêëîïôûù]{1,8}( [a-zé'-]{1,5})?"
}

/// A predicate over local variables `a`, `b`, `c` with an optional leading event.
fn predicate(h: &TypeHierarchy, name: &'static str) -> impl Strategy<Value = Predicate> {
    let ty = type_in(h);
    (any::<bool>(), prop::collection::vec(ty, 1..=3)).prop_map(move |(event, types)| {
        let mut args = Vec::new();
        if event {
            args.push(TypedArg::new("e9", TypeName::new("event").unwrap()).unwrap());
        }
        for (var, t) in ["a", "b", "c"].iter().zip(types) {
            args.push(TypedArg::new(*var, t).unwrap());
        }
        Predicate::new(name, args).unwrap()
    })
}

fn qualia(h: &TypeHierarchy) -> impl Strategy<Value = QualiaStructure> {
    (
        prop::option::of(predicate(h, "formal_role")),
        prop::collection::vec(predicate(h, "part_of"), 0..=2),
        prop::option::of(predicate(h, "contain")),
        prop::option::of(predicate(h, "trigger_pred")),
        prop::option::of(predicate(h, "result_pred")),
        prop::option::of(predicate(h, "agentive_pred")),
    )
        .prop_map(
            |(formal, constitutive, telic_state, telic_trigger, telic_result, agentive)| {
                QualiaStructure {
                    formal,
                    constitutive,
                    telic_state,
                    telic_trigger,
                    telic_result,
                    agentive,
                }
            },
        )
}

pub fn entry(h: &TypeHierarchy) -> impl Strategy<Value = LexicalEntry> {
    let events = prop::sample::select(vec!["event", "process", "state"]);
    (
        lemma(),
        1u32..=3,
        prop::sample::select(vec!["N", "V", "A"]),
        prop::bool::ANY.prop_map(|f| {
            if f {
                Gender::Feminine
            } else {
                Gender::Masculine
            }
        }),
        any::<bool>(),
        type_in(h),
        prop::collection::vec(type_in(h), 0..=3),
        prop::collection::vec(events, 0..=2),
        qualia(h),
    )
        .prop_map(
            |(lemma, sense, cat, gender, elision, lexical_type, arg_types, event_types, qualia)| {
                LexicalEntry {
                    lemma,
                    sense,
                    cat: cat.to_string(),
                    gender,
                    elision,
                    lexical_type,
                    args: ["x", "y", "z"]
                        .iter()
                        .zip(arg_types)
                        .map(|(v, t)| TypedArg::new(*v, t).unwrap())
                        .collect(),
                    events: ["e1", "s1"]
                        .iter()
                        .zip(event_types)
                        .map(|(v, t)| TypedArg::new(*v, TypeName::new(t).unwrap()).unwrap())
                        .collect(),
                    qualia,
                }
            },
        )
}

/// A valid lexicon with up to `max_entries` entries.
pub fn lexicon(max_entries: usize) -> impl Strategy<Value = Lexicon> {
    hierarchy().prop_flat_map(move |h| {
        prop::collection::vec(entry(&h), 0..=max_entries).prop_map(move |entries| {
            let unique: BTreeMap<EntryKey, LexicalEntry> =
                entries.into_iter().map(|e| (e.key(), e)).collect();
            Lexicon::from_entries(h.clone(), unique.into_values(), &ContainmentSet::default())
                .expect("generated entries are valid")
        })
    })
}
