use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use crate::entry::{Gender, LexicalEntry, QualiaStructure, ENTRY_CLASS};
use crate::lexicon::Lexicon;
use crate::predicate::{Predicate, TypedArg};
use crate::types::TypeName;
use crate::validate::ContainmentSet;

use super::{assemble, PersistError};

pub fn export_ldif(lex: &Lexicon) -> String {
    let mut records = Vec::new();
    let h = lex.hierarchy();
    for name in h.topological_order() {
        let mut rec = format!("dn: type={name}\n");
        for p in h.parents(name.as_str()).expect("node of its own hierarchy") {
            let _ = writeln!(rec, "parent: {p}");
        }
        records.push(rec);
    }
    for e in lex.entries() {
        records.push(entry_record(e));
    }
    records.join("\n")
}

fn entry_record(e: &LexicalEntry) -> String {
    let mut out = String::new();
    let mut line = |attr: &str, value: &dyn std::fmt::Display| {
        let _ = writeln!(out, "{attr}: {value}");
    };
    line("dn", &format_args!("lemma={},sense={}", e.lemma, e.sense));
    line("entryClass", &ENTRY_CLASS);
    line("lemma", &e.lemma);
    line("sense", &e.sense);
    line("cat", &e.cat);
    line("gender", &e.gender);
    line("elision", &e.elision);
    line("lexicalType", &e.lexical_type);
    for (i, a) in e.args.iter().enumerate() {
        line(&format!("arg{}", i + 1), a);
    }
    for (i, a) in e.events.iter().enumerate() {
        line(&format!("event{}", i + 1), a);
    }
    let q = &e.qualia;
    if let Some(p) = &q.formal {
        line("formal", p);
    }
    for p in &q.constitutive {
        line("const", p);
    }
    if let Some(p) = &q.telic_state {
        line("telicState", p);
    }
    if let Some(p) = &q.telic_trigger {
        line("telicTrigger", p);
    }
    if let Some(p) = &q.telic_result {
        line("telicResult", p);
    }
    if let Some(p) = &q.agentive {
        line("agentive", p);
    }
    out
}

pub fn import_ldif(text: &str) -> Result<Lexicon, PersistError> {
    import_ldif_with(text, &ContainmentSet::default())
}

pub fn import_ldif_with(text: &str, containment: &ContainmentSet) -> Result<Lexicon, PersistError> {
    let mut types: BTreeMap<TypeName, BTreeSet<TypeName>> = BTreeMap::new();
    let mut entries: Vec<LexicalEntry> = Vec::new();
    let mut seen_keys = BTreeSet::new();

    for record in records(text) {
        let (dn_line, dn) = parse_line(record[0])?;
        if dn.0 != "dn" {
            return Err(PersistError::parse(dn_line, "record must start with `dn:`"));
        }
        if let Some(name) = dn.1.strip_prefix("type=") {
            let name =
                TypeName::new(name).map_err(|e| PersistError::parse(dn_line, e.to_string()))?;
            if types.contains_key(&name) {
                return Err(PersistError::DuplicateKey(format!("type={name}")));
            }
            let mut parents = BTreeSet::new();
            for &raw in &record[1..] {
                let (n, (attr, value)) = parse_line(raw)?;
                if attr != "parent" {
                    return Err(PersistError::parse(
                        n,
                        format!("unknown type attribute `{attr}`"),
                    ));
                }
                let p = TypeName::new(value).map_err(|e| PersistError::parse(n, e.to_string()))?;
                parents.insert(p);
            }
            types.insert(name, parents);
        } else if dn.1.starts_with("lemma=") {
            let entry = parse_entry(dn_line, dn.1, &record[1..])?;
            if !seen_keys.insert(entry.key()) {
                return Err(PersistError::DuplicateKey(dn.1.to_string()));
            }
            entries.push(entry);
        } else {
            return Err(PersistError::parse(
                dn_line,
                format!("unrecognised dn `{}`", dn.1),
            ));
        }
    }
    assemble(types, entries, containment)
}

type Line<'a> = (usize, &'a str);

/// Splits the document into blank-line separated records, dropping comments.
fn records(text: &str) -> Vec<Vec<Line<'_>>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            if !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
        } else if !line.starts_with('#') {
            current.push((i + 1, line));
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

fn parse_line<'a>((n, line): Line<'a>) -> Result<(usize, (&'a str, &'a str)), PersistError> {
    let (attr, rest) = line
        .split_once(':')
        .ok_or_else(|| PersistError::parse(n, "expected `attribute: value`"))?;
    Ok((n, (attr, rest.strip_prefix(' ').unwrap_or(rest))))
}

fn field<T: FromStr>(n: usize, attr: &str, value: &str) -> Result<T, PersistError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| PersistError::parse(n, format!("bad `{attr}` value: {e}")))
}

fn set_once<T>(slot: &mut Option<T>, n: usize, attr: &str, value: T) -> Result<(), PersistError> {
    if slot.replace(value).is_some() {
        return Err(PersistError::parse(
            n,
            format!("attribute `{attr}` repeated"),
        ));
    }
    Ok(())
}

fn numbered(n: usize, attr: &str, prefix: &str) -> Result<Option<usize>, PersistError> {
    let Some(digits) = attr.strip_prefix(prefix) else {
        return Ok(None);
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Ok(None);
    }
    match digits.parse::<usize>() {
        Ok(i) if i >= 1 && !digits.starts_with('0') => Ok(Some(i)),
        _ => Err(PersistError::parse(
            n,
            format!("bad attribute index in `{attr}`"),
        )),
    }
}

fn contiguous(
    n: usize,
    what: &str,
    map: BTreeMap<usize, TypedArg>,
) -> Result<Vec<TypedArg>, PersistError> {
    if map.keys().copied().ne(1..=map.len()) {
        return Err(PersistError::parse(
            n,
            format!("`{what}` attributes are not numbered 1..N"),
        ));
    }
    Ok(map.into_values().collect())
}

fn parse_entry(dn_line: usize, dn: &str, lines: &[Line<'_>]) -> Result<LexicalEntry, PersistError> {
    let (dn_lemma, dn_sense) = dn
        .strip_prefix("lemma=")
        .and_then(|rest| rest.rsplit_once(",sense="))
        .ok_or_else(|| PersistError::parse(dn_line, "dn must be `lemma=<lemma>,sense=<n>`"))?;
    let dn_sense: u32 = field(dn_line, "dn", dn_sense)?;

    let mut class = None;
    let mut lemma: Option<String> = None;
    let mut sense: Option<u32> = None;
    let mut cat: Option<String> = None;
    let mut gender: Option<Gender> = None;
    let mut elision: Option<bool> = None;
    let mut lexical_type: Option<TypeName> = None;
    let mut args = BTreeMap::new();
    let mut events = BTreeMap::new();
    let mut qualia = QualiaStructure::default();

    for &raw in lines {
        let (n, (attr, value)) = parse_line(raw)?;
        let pred = || field::<Predicate>(n, attr, value);
        match attr {
            "entryClass" => set_once(&mut class, n, attr, value.to_string())?,
            "lemma" => set_once(&mut lemma, n, attr, value.to_string())?,
            "sense" => set_once(&mut sense, n, attr, field(n, attr, value)?)?,
            "cat" => set_once(&mut cat, n, attr, value.to_string())?,
            "gender" => set_once(&mut gender, n, attr, field(n, attr, value)?)?,
            "elision" => set_once(&mut elision, n, attr, field(n, attr, value)?)?,
            "lexicalType" => set_once(&mut lexical_type, n, attr, field(n, attr, value)?)?,
            "formal" => set_once(&mut qualia.formal, n, attr, pred()?)?,
            "const" => qualia.constitutive.push(pred()?),
            "telicState" => set_once(&mut qualia.telic_state, n, attr, pred()?)?,
            "telicTrigger" => set_once(&mut qualia.telic_trigger, n, attr, pred()?)?,
            "telicResult" => set_once(&mut qualia.telic_result, n, attr, pred()?)?,
            "agentive" => set_once(&mut qualia.agentive, n, attr, pred()?)?,
            _ => {
                let slot = if let Some(i) = numbered(n, attr, "arg")? {
                    args.insert(i, field(n, attr, value)?)
                } else if let Some(i) = numbered(n, attr, "event")? {
                    events.insert(i, field(n, attr, value)?)
                } else {
                    return Err(PersistError::parse(
                        n,
                        format!("unknown attribute `{attr}`"),
                    ));
                };
                if slot.is_some() {
                    return Err(PersistError::parse(
                        n,
                        format!("attribute `{attr}` repeated"),
                    ));
                }
            }
        }
    }

    let missing = |attr: &str| PersistError::parse(dn_line, format!("missing `{attr}` attribute"));
    match class.as_deref() {
        Some(ENTRY_CLASS) => {}
        Some(other) => {
            return Err(PersistError::parse(
                dn_line,
                format!("unsupported entryClass `{other}`"),
            ))
        }
        None => return Err(missing("entryClass")),
    }
    let lemma = lemma.ok_or_else(|| missing("lemma"))?;
    let sense = sense.unwrap_or(1);
    if lemma != dn_lemma || sense != dn_sense {
        return Err(PersistError::parse(
            dn_line,
            "dn disagrees with lemma/sense attributes",
        ));
    }
    Ok(LexicalEntry {
        lemma,
        sense,
        cat: cat.ok_or_else(|| missing("cat"))?,
        gender: gender.ok_or_else(|| missing("gender"))?,
        elision: elision.unwrap_or(false),
        lexical_type: lexical_type.ok_or_else(|| missing("lexicalType"))?,
        args: contiguous(dn_line, "arg", args)?,
        events: contiguous(dn_line, "event", events)?,
        qualia,
    })
}
