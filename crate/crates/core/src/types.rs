//! Type names and the partial order used to control variable unification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name of the conventional root type.
pub const TOP: &str = "top";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("type `{0}` already exists")]
    DuplicateType(String),
    #[error("type `{0}` needs at least one parent")]
    NoParents(String),
    #[error("invalid type name `{0}`")]
    InvalidName(String),
    #[error("type graph contains a cycle through `{0}`")]
    Cycle(String),
    #[error("expected exactly one root type, found {0:?}")]
    RootCount(Vec<String>),
}

/// A node label of the type hierarchy: `[a-z][a-z0-9-]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TypeName(String);

impl TypeName {
    pub fn new(name: impl Into<String>) -> Result<Self, HierarchyError> {
        let name = name.into();
        if Self::is_valid(&name) {
            Ok(TypeName(name))
        } else {
            Err(HierarchyError::InvalidName(name))
        }
    }

    pub fn top() -> Self {
        TypeName(TOP.to_string())
    }

    pub fn is_valid(s: &str) -> bool {
        let mut chars = s.chars();
        matches!(chars.next(), Some('a'..='z'))
            && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '-'))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for TypeName {
    type Err = HierarchyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TypeName::new(s)
    }
}

impl TryFrom<String> for TypeName {
    type Error = HierarchyError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        TypeName::new(s)
    }
}

impl From<TypeName> for String {
    fn from(t: TypeName) -> String {
        t.0
    }
}

impl std::borrow::Borrow<str> for TypeName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Single-rooted DAG of types; edges point from a type to its immediate supertypes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeHierarchy {
    root: TypeName,
    parents: BTreeMap<TypeName, BTreeSet<TypeName>>,
}

impl Default for TypeHierarchy {
    fn default() -> Self {
        TypeHierarchy::new(TypeName::top())
    }
}

impl TypeHierarchy {
    /// A hierarchy holding only its root.
    pub fn new(root: TypeName) -> Self {
        let mut parents = BTreeMap::new();
        parents.insert(root.clone(), BTreeSet::new());
        TypeHierarchy { root, parents }
    }

    /// Builds a hierarchy from a complete node → parents map, checking every
    /// structural invariant (single root, known parents, no cycles).
    pub fn from_parent_map(
        map: BTreeMap<TypeName, BTreeSet<TypeName>>,
    ) -> Result<Self, HierarchyError> {
        let roots: Vec<&TypeName> = map
            .iter()
            .filter(|(_, ps)| ps.is_empty())
            .map(|(n, _)| n)
            .collect();
        if roots.len() != 1 {
            return Err(HierarchyError::RootCount(
                roots.iter().map(|r| r.to_string()).collect(),
            ));
        }
        let root = roots[0].clone();
        for parent in map.values().flatten() {
            if !map.contains_key(parent) {
                return Err(HierarchyError::UnknownType(parent.to_string()));
            }
        }
        let h = TypeHierarchy { root, parents: map };
        let order = h.topological_order();
        if order.len() != h.parents.len() {
            let placed: BTreeSet<&TypeName> = order.into_iter().collect();
            let stuck = h.parents.keys().find(|n| !placed.contains(n)).unwrap();
            return Err(HierarchyError::Cycle(stuck.to_string()));
        }
        Ok(h)
    }

    pub fn root(&self) -> &TypeName {
        &self.root
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.parents.contains_key(name)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &TypeName> {
        self.parents.keys()
    }

    /// Immediate supertypes, sorted.
    pub fn parents(&self, name: &str) -> Result<&BTreeSet<TypeName>, HierarchyError> {
        self.parents
            .get(name)
            .ok_or_else(|| HierarchyError::UnknownType(name.to_string()))
    }

    /// Returns a new hierarchy extended with `name` below `parents`.
    pub fn add_type(&self, name: TypeName, parents: &[TypeName]) -> Result<Self, HierarchyError> {
        if self.contains(name.as_str()) {
            return Err(HierarchyError::DuplicateType(name.to_string()));
        }
        if parents.is_empty() {
            return Err(HierarchyError::NoParents(name.to_string()));
        }
        if let Some(p) = parents.iter().find(|p| !self.contains(p.as_str())) {
            return Err(HierarchyError::UnknownType(p.to_string()));
        }
        let mut next = self.clone();
        next.parents.insert(name, parents.iter().cloned().collect());
        Ok(next)
    }

    /// Reflexive-transitive closure of the parent relation: is `a` ⊑ `b`?
    pub fn subtype(&self, a: &str, b: &str) -> Result<bool, HierarchyError> {
        self.parents(a)?;
        self.parents(b)?;
        if a == b {
            return Ok(true);
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([a]);
        while let Some(node) = queue.pop_front() {
            for p in &self.parents[node] {
                if p.as_str() == b {
                    return Ok(true);
                }
                if seen.insert(p.as_str()) {
                    queue.push_back(p.as_str());
                }
            }
        }
        Ok(false)
    }

    /// The more specific of two comparable types, `None` when incomparable.
    pub fn unify(&self, a: &str, b: &str) -> Result<Option<TypeName>, HierarchyError> {
        if self.subtype(a, b)? {
            Ok(Some(self.node(a)))
        } else if self.subtype(b, a)? {
            Ok(Some(self.node(b)))
        } else {
            Ok(None)
        }
    }

    /// All nodes, parents before children, ties broken lexicographically.
    /// Nodes on a cycle are left out.
    pub fn topological_order(&self) -> Vec<&TypeName> {
        let mut remaining: BTreeMap<&TypeName, usize> =
            self.parents.iter().map(|(n, ps)| (n, ps.len())).collect();
        let mut children: BTreeMap<&TypeName, Vec<&TypeName>> = BTreeMap::new();
        for (n, ps) in &self.parents {
            for p in ps {
                children.entry(p).or_default().push(n);
            }
        }
        let mut ready: BTreeSet<&TypeName> = remaining
            .iter()
            .filter(|(_, &c)| c == 0)
            .map(|(n, _)| *n)
            .collect();
        let mut out = Vec::with_capacity(self.parents.len());
        while let Some(n) = ready.pop_first() {
            out.push(n);
            for c in children.get(n).into_iter().flatten() {
                if let Some(count) = remaining.get_mut(c) {
                    *count -= 1;
                    if *count == 0 {
                        ready.insert(c);
                    }
                }
            }
        }
        out
    }

    fn node(&self, name: &str) -> TypeName {
        self.parents.get_key_value(name).unwrap().0.clone()
    }
}

#[derive(Serialize, Deserialize)]
struct TypeRecord {
    name: TypeName,
    parents: BTreeSet<TypeName>,
}

impl Serialize for TypeHierarchy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let order = self.topological_order();
        let mut seq = s.serialize_seq(Some(order.len()))?;
        for name in order {
            seq.serialize_element(&TypeRecord {
                name: name.clone(),
                parents: self.parents[name].clone(),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for TypeHierarchy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let records = Vec::<TypeRecord>::deserialize(d)?;
        let map = records.into_iter().map(|r| (r.name, r.parents)).collect();
        TypeHierarchy::from_parent_map(map).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TypeName {
        TypeName::new(s).unwrap()
    }

    fn small() -> TypeHierarchy {
        TypeHierarchy::default()
            .add_type(t("physical"), &[t("top")])
            .unwrap()
            .add_type(t("liquid"), &[t("physical")])
            .unwrap()
            .add_type(t("fruit"), &[t("physical")])
            .unwrap()
            .add_type(t("cider"), &[t("liquid")])
            .unwrap()
    }

    #[test]
    fn type_name_syntax() {
        assert!(TypeName::new("cider").is_ok());
        assert!(TypeName::new("x2-b").is_ok());
        assert!(TypeName::new("").is_err());
        assert!(TypeName::new("Cider").is_err());
        assert!(TypeName::new("2x").is_err());
        assert!(TypeName::new("part_of").is_err());
    }

    #[test]
    fn subsumption() {
        let h = small();
        assert!(h.subtype("cider", "liquid").unwrap());
        assert!(h.subtype("cider", "top").unwrap());
        assert!(!h.subtype("liquid", "cider").unwrap());
        assert!(!h.subtype("fruit", "liquid").unwrap());
        assert_eq!(
            h.subtype("cider", "nope"),
            Err(HierarchyError::UnknownType("nope".into()))
        );
    }

    #[test]
    fn unification() {
        let h = small();
        assert_eq!(h.unify("liquid", "cider").unwrap(), Some(t("cider")));
        assert_eq!(h.unify("cider", "liquid").unwrap(), Some(t("cider")));
        assert_eq!(h.unify("fruit", "fruit").unwrap(), Some(t("fruit")));
        assert_eq!(h.unify("fruit", "liquid").unwrap(), None);
    }

    #[test]
    fn add_type_errors() {
        let h = small();
        let perry = h.add_type(t("perry"), &[t("liquid")]).unwrap();
        assert!(perry.subtype("perry", "top").unwrap());
        assert!(!h.contains("perry"));
        assert_eq!(
            h.add_type(t("liquid"), &[t("top")]),
            Err(HierarchyError::DuplicateType("liquid".into()))
        );
        assert_eq!(
            h.add_type(t("x"), &[]),
            Err(HierarchyError::NoParents("x".into()))
        );
        assert_eq!(
            h.add_type(t("x"), &[t("ghost")]),
            Err(HierarchyError::UnknownType("ghost".into()))
        );
    }

    #[test]
    fn from_parent_map_rejects_cycles_and_roots() {
        let mut map = BTreeMap::new();
        map.insert(t("top"), BTreeSet::new());
        map.insert(t("a"), BTreeSet::from([t("b")]));
        map.insert(t("b"), BTreeSet::from([t("a")]));
        assert!(matches!(
            TypeHierarchy::from_parent_map(map.clone()),
            Err(HierarchyError::Cycle(_))
        ));
        map.insert(t("a"), BTreeSet::new());
        map.insert(t("b"), BTreeSet::from([t("a")]));
        assert!(matches!(
            TypeHierarchy::from_parent_map(map),
            Err(HierarchyError::RootCount(_))
        ));
    }

    #[test]
    fn topological_order_breaks_ties_by_name() {
        let h = small();
        let names: Vec<&str> = h
            .topological_order()
            .into_iter()
            .map(|n| n.as_str())
            .collect();
        assert_eq!(names, ["top", "physical", "fruit", "liquid", "cider"]);
    }
}
