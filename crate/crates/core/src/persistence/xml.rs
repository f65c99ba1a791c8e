use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::entry::{LexicalEntry, QualiaStructure};
use crate::lexicon::Lexicon;
use crate::predicate::Predicate;
use crate::types::TypeName;
use crate::validate::ContainmentSet;

use super::{assemble, PersistError};

pub fn export_xml(lex: &Lexicon) -> String {
    let mut out =
        String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<lexicon>\n  <types>\n");
    let h = lex.hierarchy();
    for name in h.topological_order() {
        let parents = h.parents(name.as_str()).expect("node of its own hierarchy");
        if parents.is_empty() {
            let _ = writeln!(out, "    <type name=\"{name}\"/>");
        } else {
            let _ = writeln!(out, "    <type name=\"{name}\">");
            for p in parents {
                let _ = writeln!(out, "      <parent>{p}</parent>");
            }
            out.push_str("    </type>\n");
        }
    }
    out.push_str("  </types>\n  <entries>\n");
    for e in lex.entries() {
        write_entry(&mut out, e);
    }
    out.push_str("  </entries>\n</lexicon>\n");
    out
}

fn write_entry(out: &mut String, e: &LexicalEntry) {
    let _ = writeln!(
        out,
        "    <entry lemma=\"{}\" sense=\"{}\">",
        escape(e.lemma.as_str()),
        e.sense
    );
    let mut leaf = |indent: usize, tag: &str, value: &dyn std::fmt::Display| {
        let value = value.to_string();
        let _ = writeln!(
            out,
            "{:indent$}<{tag}>{}</{tag}>",
            "",
            escape(value.as_str())
        );
    };
    leaf(6, "cat", &e.cat);
    leaf(6, "gender", &e.gender);
    leaf(6, "elision", &e.elision);
    leaf(6, "lexicalType", &e.lexical_type);
    for a in &e.args {
        leaf(6, "arg", a);
    }
    for a in &e.events {
        leaf(6, "event", a);
    }
    let q = &e.qualia;
    if !q.is_empty() {
        out.push_str("      <qualia>\n");
        let mut leaf = |indent: usize, tag: &str, p: &Predicate| {
            let _ = writeln!(out, "{:indent$}<{tag}>{p}</{tag}>", "");
        };
        if let Some(p) = &q.formal {
            leaf(8, "formal", p);
        }
        for p in &q.constitutive {
            leaf(8, "const", p);
        }
        if q.has_telic() {
            out.push_str("        <telic>\n");
            let mut leaf = |tag: &str, p: &Predicate| {
                let _ = writeln!(out, "          <{tag}>{p}</{tag}>");
            };
            if let Some(p) = &q.telic_state {
                leaf("state", p);
            }
            if let Some(p) = &q.telic_trigger {
                leaf("trigger", p);
            }
            if let Some(p) = &q.telic_result {
                leaf("result", p);
            }
            out.push_str("        </telic>\n");
        }
        if let Some(p) = &q.agentive {
            let _ = writeln!(out, "        <agentive>{p}</agentive>");
        }
        out.push_str("      </qualia>\n");
    }
    out.push_str("    </entry>\n");
}

/// Minimal element tree; mixed content is not part of the format.
#[derive(Debug)]
struct Element {
    name: String,
    line: usize,
    attrs: Vec<(String, String)>,
    children: Vec<Element>,
    text: String,
}

impl Element {
    fn attr(&self, name: &str) -> Result<&str, PersistError> {
        self.attrs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| {
                PersistError::parse(
                    self.line,
                    format!("<{}> lacks attribute `{name}`", self.name),
                )
            })
    }

    fn expect_name(&self, name: &str) -> Result<(), PersistError> {
        if self.name == name {
            Ok(())
        } else {
            Err(PersistError::parse(
                self.line,
                format!("expected <{name}>, found <{}>", self.name),
            ))
        }
    }

    fn leaf<T: FromStr>(&self) -> Result<T, PersistError>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(c) = self.children.first() {
            return Err(PersistError::parse(
                c.line,
                format!("unexpected <{}> inside <{}>", c.name, self.name),
            ));
        }
        self.text
            .parse()
            .map_err(|e| PersistError::parse(self.line, format!("bad <{}> value: {e}", self.name)))
    }
}

fn line_at(text: &str, offset: usize) -> usize {
    let end = offset.min(text.len());
    text.as_bytes()[..end]
        .iter()
        .filter(|&&b| b == b'\n')
        .count()
        + 1
}

fn open(start: &BytesStart<'_>, line: usize) -> Result<Element, PersistError> {
    let name = String::from_utf8_lossy(start.name().as_ref()).into_owned();
    let mut attrs = Vec::new();
    for attr in start.attributes() {
        let attr = attr.map_err(|e| PersistError::parse(line, e.to_string()))?;
        let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
        let value = attr
            .unescape_value()
            .map_err(|e| PersistError::parse(line, e.to_string()))?
            .into_owned();
        attrs.push((key, value));
    }
    Ok(Element {
        name,
        line,
        attrs,
        children: Vec::new(),
        text: String::new(),
    })
}

fn parse_tree(text: &str) -> Result<Element, PersistError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);
    let mut stack: Vec<Element> = Vec::new();
    let mut root: Option<Element> = None;
    loop {
        let pos = reader.buffer_position() as usize;
        let event = reader.read_event().map_err(|e| {
            PersistError::parse(
                line_at(text, reader.buffer_position() as usize),
                e.to_string(),
            )
        })?;
        let line = line_at(text, pos + leading_ws(&text[pos.min(text.len())..]));
        match event {
            Event::Start(start) => stack.push(open(&start, line)?),
            Event::Empty(start) => {
                let el = open(&start, line)?;
                attach(&mut stack, &mut root, el, line)?;
            }
            Event::End(_) => {
                let el = stack
                    .pop()
                    .ok_or_else(|| PersistError::parse(line, "unbalanced end tag"))?;
                attach(&mut stack, &mut root, el, line)?;
            }
            Event::Text(t) => {
                let s = t
                    .unescape()
                    .map_err(|e| PersistError::parse(line, e.to_string()))?;
                match stack.last_mut() {
                    Some(el) => el.text.push_str(&s),
                    None => return Err(PersistError::parse(line, "text outside the root element")),
                }
            }
            Event::CData(t) => match stack.last_mut() {
                Some(el) => el.text.push_str(&String::from_utf8_lossy(&t)),
                None => return Err(PersistError::parse(line, "text outside the root element")),
            },
            Event::Eof => break,
            _ => {}
        }
    }
    if let Some(open) = stack.last() {
        return Err(PersistError::parse(
            open.line,
            format!("<{}> is never closed", open.name),
        ));
    }
    root.ok_or_else(|| PersistError::parse(1, "document has no root element"))
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

fn attach(
    stack: &mut [Element],
    root: &mut Option<Element>,
    el: Element,
    line: usize,
) -> Result<(), PersistError> {
    match stack.last_mut() {
        Some(parent) => parent.children.push(el),
        None if root.is_none() => *root = Some(el),
        None => return Err(PersistError::parse(line, "more than one root element")),
    }
    Ok(())
}

pub fn import_xml(text: &str) -> Result<Lexicon, PersistError> {
    import_xml_with(text, &ContainmentSet::default())
}

pub fn import_xml_with(text: &str, containment: &ContainmentSet) -> Result<Lexicon, PersistError> {
    let root = parse_tree(text)?;
    root.expect_name("lexicon")?;
    let mut types: BTreeMap<TypeName, BTreeSet<TypeName>> = BTreeMap::new();
    let mut entries = Vec::new();
    let mut keys = BTreeSet::new();
    let mut sections = root.children.iter();
    let types_el = sections
        .next()
        .ok_or_else(|| PersistError::parse(root.line, "missing <types>"))?;
    types_el.expect_name("types")?;
    if let Some(entries_el) = sections.next() {
        entries_el.expect_name("entries")?;
        for el in &entries_el.children {
            let e = parse_entry(el)?;
            if !keys.insert(e.key()) {
                return Err(PersistError::DuplicateKey(format!(
                    "lemma={},sense={}",
                    e.lemma, e.sense
                )));
            }
            entries.push(e);
        }
    }
    if let Some(extra) = sections.next() {
        return Err(PersistError::parse(
            extra.line,
            format!("unexpected <{}>", extra.name),
        ));
    }
    for el in &types_el.children {
        el.expect_name("type")?;
        let name: TypeName = TypeName::new(el.attr("name")?)
            .map_err(|e| PersistError::parse(el.line, e.to_string()))?;
        let mut parents = BTreeSet::new();
        for p in &el.children {
            p.expect_name("parent")?;
            parents.insert(p.leaf::<TypeName>()?);
        }
        if types.insert(name.clone(), parents).is_some() {
            return Err(PersistError::DuplicateKey(format!("type={name}")));
        }
    }
    assemble(types, entries, containment)
}

fn parse_entry(el: &Element) -> Result<LexicalEntry, PersistError> {
    el.expect_name("entry")?;
    let lemma = el.attr("lemma")?.to_string();
    let sense: u32 = el
        .attr("sense")?
        .parse()
        .map_err(|e| PersistError::parse(el.line, format!("bad sense: {e}")))?;
    let mut fields: BTreeMap<&str, &Element> = BTreeMap::new();
    let mut args = Vec::new();
    let mut events = Vec::new();
    let mut qualia = QualiaStructure::default();
    for child in &el.children {
        match child.name.as_str() {
            "arg" => args.push(child.leaf()?),
            "event" => events.push(child.leaf()?),
            "qualia" => qualia = parse_qualia(child)?,
            name @ ("cat" | "gender" | "elision" | "lexicalType") => {
                if fields.insert(name, child).is_some() {
                    return Err(PersistError::parse(
                        child.line,
                        format!("<{name}> repeated"),
                    ));
                }
            }
            other => {
                return Err(PersistError::parse(
                    child.line,
                    format!("unknown element <{other}>"),
                ))
            }
        }
    }
    let get = |name: &str| {
        fields
            .get(name)
            .ok_or_else(|| PersistError::parse(el.line, format!("entry lacks <{name}>")))
    };
    Ok(LexicalEntry {
        lemma,
        sense,
        cat: get("cat")?.leaf()?,
        gender: get("gender")?.leaf()?,
        elision: match fields.get("elision") {
            Some(e) => e.leaf()?,
            None => false,
        },
        lexical_type: get("lexicalType")?.leaf()?,
        args,
        events,
        qualia,
    })
}

fn parse_qualia(el: &Element) -> Result<QualiaStructure, PersistError> {
    let mut q = QualiaStructure::default();
    for child in &el.children {
        match child.name.as_str() {
            "formal" => set(&mut q.formal, child)?,
            "const" => q.constitutive.push(child.leaf()?),
            "agentive" => set(&mut q.agentive, child)?,
            "telic" => {
                for t in &child.children {
                    match t.name.as_str() {
                        "state" => set(&mut q.telic_state, t)?,
                        "trigger" => set(&mut q.telic_trigger, t)?,
                        "result" => set(&mut q.telic_result, t)?,
                        other => {
                            return Err(PersistError::parse(
                                t.line,
                                format!("unknown telic role <{other}>"),
                            ))
                        }
                    }
                }
            }
            other => {
                return Err(PersistError::parse(
                    child.line,
                    format!("unknown qualia role <{other}>"),
                ))
            }
        }
    }
    Ok(q)
}

fn set(slot: &mut Option<Predicate>, el: &Element) -> Result<(), PersistError> {
    if slot.replace(el.leaf()?).is_some() {
        return Err(PersistError::parse(
            el.line,
            format!("<{}> repeated", el.name),
        ));
    }
    Ok(())
}
