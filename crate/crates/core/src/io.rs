//! Text formats: network documents, event streams and Graphviz output.
//!
//! A network document lists machines in blocks:
//!
//! ```text
//! # fixture
//! fsm A
//! states p q
//! initial p
//! alphabet a b
//! critical q
//! trans p a q
//! trans q b p
//! end
//! ```
//!
//! Keywords may repeat inside a block and their arguments accumulate.
//! `#` starts a comment that runs to the end of the line.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::composition::Network;
use crate::error::{Error, Result};
use crate::fsm::{Fsm, Label, Word};
use crate::observer::ObserverFsm;

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns, up to
/// the first comment.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &code[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &code[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (code[..byte].chars().count() + 1, tok))
        .collect()
}

struct Block {
    name: String,
    line: usize,
    states: Vec<String>,
    initial: Vec<String>,
    alphabet: Vec<String>,
    critical: Vec<String>,
    transitions: Vec<(String, String, String)>,
    seen: BTreeSet<(String, String, String)>,
}

impl Block {
    fn build(self) -> Result<(String, Fsm)> {
        let fsm = self
            .transitions
            .into_iter()
            .fold(
                Fsm::builder()
                    .name(self.name.clone())
                    .states(&self.states)
                    .initial(&self.initial)
                    .alphabet(&self.alphabet)
                    .critical(&self.critical),
                |b, (f, l, t)| b.transition(f, l, t),
            )
            .build()?;
        Ok((self.name, fsm))
    }
}

pub fn parse_network(text: &str) -> Result<Network> {
    let mut members = Vec::new();
    let mut current: Option<Block> = None;
    let mut last_line = 0;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        last_line = line;
        let toks = tokens(raw);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        let args: Vec<String> = toks[1..].iter().map(|(_, t)| t.to_string()).collect();
        match (&mut current, keyword) {
            (None, "fsm") => {
                if args.len() != 1 {
                    return Err(parse_error(line, col, "expected `fsm <name>`"));
                }
                current = Some(Block {
                    name: args[0].clone(),
                    line,
                    states: Vec::new(),
                    initial: Vec::new(),
                    alphabet: Vec::new(),
                    critical: Vec::new(),
                    transitions: Vec::new(),
                    seen: BTreeSet::new(),
                });
            }
            (None, other) => {
                return Err(parse_error(line, col, format!("expected `fsm`, found `{other}`")));
            }
            (Some(_), "fsm") => {
                return Err(parse_error(line, col, "missing `end` before next `fsm`"));
            }
            (Some(_), "end") => {
                if !args.is_empty() {
                    return Err(parse_error(line, toks[1].0, "unexpected token after `end`"));
                }
                let block = current.take().expect("inside a block");
                members.push(block.build()?);
            }
            (Some(b), "states") => b.states.extend(args),
            (Some(b), "initial") => b.initial.extend(args),
            (Some(b), "alphabet") => b.alphabet.extend(args),
            (Some(b), "critical") => b.critical.extend(args),
            (Some(b), "trans") => {
                let [from, label, to]: [String; 3] = args
                    .try_into()
                    .map_err(|_| parse_error(line, col, "expected `trans <from> <label> <to>`"))?;
                let triple = (from, label, to);
                if !b.seen.insert(triple.clone()) {
                    return Err(parse_error(line, col, "duplicate transition"));
                }
                b.transitions.push(triple);
            }
            (Some(_), other) => {
                return Err(parse_error(line, col, format!("unknown keyword `{other}`")));
            }
        }
    }
    if let Some(b) = current {
        return Err(parse_error(
            last_line.max(1),
            1,
            format!("fsm `{}` opened on line {} is missing `end`", b.name, b.line),
        ));
    }
    if members.is_empty() {
        return Err(parse_error(1, 1, "document contains no fsm"));
    }
    Network::new(members).map_err(|e| match e {
        Error::InvalidInput(message) => parse_error(1, 1, message),
        other => other,
    })
}

fn write_fsm(out: &mut String, name: &str, m: &Fsm) {
    fn list<'a>(out: &mut String, keyword: &str, items: impl Iterator<Item = &'a str>) {
        out.push_str(keyword);
        for item in items {
            out.push(' ');
            out.push_str(item);
        }
        out.push('\n');
    }
    let _ = writeln!(out, "fsm {name}");
    list(out, "states", m.states().iter().map(|s| s.as_str()));
    list(out, "initial", m.initial().iter().map(|&s| m.state_name(s).as_str()));
    list(out, "alphabet", m.alphabet().iter().map(Label::as_str));
    list(
        out,
        "critical",
        (0..m.state_count())
            .filter(|&s| m.is_critical(s))
            .map(|s| m.state_name(s).as_str()),
    );
    for (f, l, t) in m.transitions() {
        let _ = writeln!(
            out,
            "trans {} {} {}",
            m.state_name(f),
            m.alphabet()[l],
            m.state_name(t)
        );
    }
    out.push_str("end\n");
}

/// Canonical document: members in network order, every list sorted.
pub fn serialize_network(n: &Network) -> String {
    let mut out = String::new();
    for (i, (name, m)) in n.members().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_fsm(&mut out, name, m);
    }
    out
}

/// Observers as a network document of deterministic machines whose
/// critical states are the flagged estimates.
pub fn serialize_observers(locals: &[(String, ObserverFsm)]) -> String {
    let mut out = String::new();
    for (i, (name, o)) in locals.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_fsm(&mut out, name, &o.to_fsm());
    }
    out
}

/// Reads a document written by [`serialize_observers`]. Every machine must
/// be deterministic.
pub fn parse_observers(text: &str) -> Result<Vec<(String, ObserverFsm)>> {
    parse_network(text)?
        .members()
        .iter()
        .map(|(name, m)| {
            if !m.is_deterministic() {
                return Err(Error::Semantic {
                    fsm: name.clone(),
                    rule: "observer must be deterministic".into(),
                });
            }
            Ok((name.clone(), crate::observer::build_observer(m)))
        })
        .collect()
}

/// Labels separated by whitespace or newlines; `#` comments are skipped.
pub fn parse_events(text: &str) -> Result<Word> {
    let mut labels = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        for (col, tok) in tokens(raw) {
            let label =
                Label::new(tok).map_err(|_| parse_error(n + 1, col, format!("bad label `{tok}`")))?;
            labels.push(label);
        }
    }
    Ok(Word::new(labels))
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Graphviz rendering. Critical states are double circles; each initial
/// state gets an arrow from an invisible point node.
pub fn export_dot(name: &str, m: &Fsm) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    for (i, _) in m.initial().iter().enumerate() {
        let _ = writeln!(out, "  __init{i} [shape=point, label=\"\"];");
    }
    for (s, id) in m.states().iter().enumerate() {
        if m.is_critical(s) {
            let _ = writeln!(out, "  {} [shape=doublecircle];", quote(id.as_str()));
        } else {
            let _ = writeln!(out, "  {};", quote(id.as_str()));
        }
    }
    for (i, &s) in m.initial().iter().enumerate() {
        let _ = writeln!(out, "  __init{i} -> {};", quote(m.state_name(s).as_str()));
    }
    for (f, l, t) in m.transitions() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(m.state_name(f).as_str()),
            quote(m.state_name(t).as_str()),
            quote(m.alphabet()[l].as_str())
        );
    }
    out.push_str("}\n");
    out
}

/// Graphviz rendering of an observer; flagged estimates are double circles.
pub fn export_observer_dot(name: &str, o: &ObserverFsm) -> String {
    export_dot(name, &o.to_fsm())
}
