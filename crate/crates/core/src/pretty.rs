//! Attribute-value matrix style rendering of an entry.
//!
//! ```text
//! pressoir (N, m) : press
//! ARGSTR
//!   ARG1 = w:press
//! EVENTSTR
//!   E1 = e1:process
//! QUALIA
//!   FORMAL = tool(w:press)
//!   TELIC
//!     TRIGGER = press(e1:process,x:human,y:fruit)
//! ```
//!
//! Sections and roles that are empty are left out. Senses other than 1 are
//! shown as `lemma#n`.

use std::fmt::Write as _;

use crate::entry::LexicalEntry;

pub fn pretty_print(e: &LexicalEntry) -> String {
    let mut out = String::new();
    let _ = write!(out, "{}", e.lemma);
    if e.sense != 1 {
        let _ = write!(out, "#{}", e.sense);
    }
    let _ = write!(out, " ({}, {}", e.cat, e.gender);
    if e.elision {
        out.push_str(", +elision");
    }
    let _ = writeln!(out, ") : {}", e.lexical_type);

    if !e.args.is_empty() {
        out.push_str("ARGSTR\n");
        for (i, a) in e.args.iter().enumerate() {
            let _ = writeln!(out, "  ARG{} = {a}", i + 1);
        }
    }
    if !e.events.is_empty() {
        out.push_str("EVENTSTR\n");
        for (i, a) in e.events.iter().enumerate() {
            let _ = writeln!(out, "  E{} = {a}", i + 1);
        }
    }
    let q = &e.qualia;
    if !q.is_empty() {
        out.push_str("QUALIA\n");
        if let Some(p) = &q.formal {
            let _ = writeln!(out, "  FORMAL = {p}");
        }
        for p in &q.constitutive {
            let _ = writeln!(out, "  CONST = {p}");
        }
        if q.has_telic() {
            out.push_str("  TELIC\n");
            let telic = [
                ("STATE", &q.telic_state),
                ("TRIGGER", &q.telic_trigger),
                ("RESULT", &q.telic_result),
            ];
            for (label, p) in telic {
                if let Some(p) = p {
                    let _ = writeln!(out, "    {label} = {p}");
                }
            }
        }
        if let Some(p) = &q.agentive {
            let _ = writeln!(out, "  AGENTIVE = {p}");
        }
    }
    out
}
