//! Typed predicates and their concrete text syntax:
//!
//! ```text
//! predicate := name '(' arg (',' arg)* ')'
//! arg       := var (':' type)?
//! ```
//!
//! Untyped variables default to `top`. Rendering is canonical: no spaces and
//! every type printed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::TypeName;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredicateError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("variable `{0}` occurs twice")]
    DuplicateVariable(String),
}

fn syntax(offset: usize, message: impl Into<String>) -> PredicateError {
    PredicateError::Syntax {
        offset,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sort {
    Individual,
    Event,
}

impl Sort {
    /// `e`, `s` optionally followed by digits name events and states.
    pub fn of_var(var: &str) -> Sort {
        let mut chars = var.chars();
        match chars.next() {
            Some('e' | 's') if chars.all(|c| c.is_ascii_digit()) => Sort::Event,
            _ => Sort::Individual,
        }
    }
}

/// A variable together with its type; the sort follows from the variable name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TypedArg {
    var: String,
    ty: TypeName,
}

impl TypedArg {
    pub fn new(var: impl Into<String>, ty: TypeName) -> Result<Self, PredicateError> {
        let var = var.into();
        if !is_ident(&var) {
            return Err(syntax(0, format!("invalid variable `{var}`")));
        }
        Ok(TypedArg { var, ty })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn ty(&self) -> &TypeName {
        &self.ty
    }

    pub fn sort(&self) -> Sort {
        Sort::of_var(&self.var)
    }

    pub fn is_individual(&self) -> bool {
        self.sort() == Sort::Individual
    }
}

impl fmt::Display for TypedArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.var, self.ty)
    }
}

impl FromStr for TypedArg {
    type Err = PredicateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let arg = p.arg()?;
        p.end()?;
        Ok(arg)
    }
}

impl TryFrom<String> for TypedArg {
    type Error = PredicateError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<TypedArg> for String {
    fn from(a: TypedArg) -> String {
        a.to_string()
    }
}

/// A named relation over typed arguments, e.g. `press(e1:process,x:human,y:fruit)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Predicate {
    name: String,
    args: Vec<TypedArg>,
}

impl Predicate {
    pub fn new(name: impl Into<String>, args: Vec<TypedArg>) -> Result<Self, PredicateError> {
        let name = name.into();
        if !is_ident(&name) {
            return Err(syntax(0, format!("invalid predicate name `{name}`")));
        }
        if args.is_empty() {
            return Err(syntax(name.len(), "predicate needs at least one argument"));
        }
        for (i, a) in args.iter().enumerate() {
            if args[..i].iter().any(|b| b.var == a.var) {
                return Err(PredicateError::DuplicateVariable(a.var.clone()));
            }
        }
        Ok(Predicate { name, args })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn args(&self) -> &[TypedArg] {
        &self.args
    }

    /// Arguments of sort individual, in order. Positional references such as
    /// "second argument" index into this list.
    pub fn individual_args(&self) -> impl Iterator<Item = &TypedArg> {
        self.args.iter().filter(|a| a.is_individual())
    }

    pub fn individual_arg(&self, index: usize) -> Option<&TypedArg> {
        self.individual_args().nth(index)
    }

    pub fn arg(&self, var: &str) -> Option<&TypedArg> {
        self.args.iter().find(|a| a.var == var)
    }
}

pub fn parse_predicate(text: &str) -> Result<Predicate, PredicateError> {
    text.parse()
}

pub fn render_predicate(p: &Predicate) -> String {
    p.to_string()
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Predicate {
    type Err = PredicateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let pred = p.predicate()?;
        p.end()?;
        Ok(pred)
    }
}

impl TryFrom<String> for Predicate {
    type Error = PredicateError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Predicate> for String {
    fn from(p: Predicate) -> String {
        p.to_string()
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_ident_start) && chars.all(is_ident_char)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn expect(&mut self, want: char) -> Result<(), PredicateError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(syntax(self.pos, format!("expected `{want}`, found `{c}`"))),
            None => Err(syntax(
                self.pos,
                format!("expected `{want}`, found end of input"),
            )),
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek().filter(|&c| f(c)) {
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn ident(&mut self, what: &str) -> Result<&'a str, PredicateError> {
        self.skip_ws();
        if !self.peek().is_some_and(is_ident_start) {
            return Err(syntax(self.pos, format!("expected {what}")));
        }
        Ok(self.take_while(is_ident_char))
    }

    fn arg(&mut self) -> Result<TypedArg, PredicateError> {
        let var = self.ident("variable")?.to_string();
        self.skip_ws();
        let ty = if self.peek() == Some(':') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let raw = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
            TypeName::new(raw).map_err(|_| {
                if raw.is_empty() {
                    syntax(start, "expected type name")
                } else {
                    syntax(start, format!("invalid type name `{raw}`"))
                }
            })?
        } else {
            TypeName::top()
        };
        Ok(TypedArg { var, ty })
    }

    fn predicate(&mut self) -> Result<Predicate, PredicateError> {
        let name = self.ident("predicate name")?.to_string();
        self.expect('(')?;
        let mut args: Vec<TypedArg> = Vec::new();
        loop {
            let a = self.arg()?;
            if args.iter().any(|b| b.var == a.var) {
                return Err(PredicateError::DuplicateVariable(a.var));
            }
            args.push(a);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                Some(c) => {
                    return Err(syntax(
                        self.pos,
                        format!("expected `,` or `)`, found `{c}`"),
                    ))
                }
                None => return Err(syntax(self.pos, "unterminated argument list")),
            }
        }
        Ok(Predicate { name, args })
    }

    fn end(&mut self) -> Result<(), PredicateError> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(syntax(self.pos, format!("unexpected `{c}` after end"))),
        }
    }
}
