//! ASPARTIX-style `arg(x).` / `att(x,y).` documents.
//!
//! Comments run from `%` to the end of the line. Statements may share a line
//! and attacks may precede the declarations they mention.

use std::collections::HashMap;
use std::fmt::Write as _;

use finitary_af::FiniteAF;

use crate::error::{CliError, Result};

/// A parsed document: the framework plus names in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApxDocument {
    pub af: FiniteAF,
    pub names: Vec<String>,
}

impl ApxDocument {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn emit(&self) -> String {
        emit_apx(&self.af, &self.names)
    }
}

pub fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
}

impl Lexer<'_> {
    /// Skip whitespace and comments; returns the next character without consuming it.
    fn peek(&mut self) -> Option<char> {
        loop {
            match self.chars.peek().copied() {
                Some('\n') => {
                    self.line += 1;
                    self.chars.next();
                }
                Some(c) if c.is_whitespace() => {
                    self.chars.next();
                }
                Some('%') => {
                    while self.chars.peek().is_some_and(|&c| c != '\n') {
                        self.chars.next();
                    }
                }
                other => return other,
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.chars.next();
                Ok(())
            }
            Some(c) => Err(self.syntax(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.syntax(format!("expected `{want}`, found end of input"))),
        }
    }

    fn word(&mut self) -> Result<String> {
        self.peek();
        let mut w = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                w.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        if w.is_empty() {
            let found = self.chars.peek().map_or("end of input".to_string(), |c| format!("`{c}`"));
            return Err(self.syntax(format!("expected a name, found {found}")));
        }
        Ok(w)
    }

    fn syntax(&self, msg: String) -> CliError {
        CliError::Syntax { line: self.line, msg }
    }
}

pub fn parse_apx(text: &str) -> Result<ApxDocument> {
    let mut lx = Lexer { chars: text.chars().peekable(), line: 1 };
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut pending: Vec<(usize, String, String)> = Vec::new();
    while lx.peek().is_some() {
        let line = lx.line;
        let head = lx.word()?;
        lx.expect('(')?;
        match head.as_str() {
            "arg" => {
                let name = lx.word()?;
                if index.contains_key(&name) {
                    return Err(CliError::Duplicate { line, name });
                }
                index.insert(name.clone(), names.len());
                names.push(name);
            }
            "att" => {
                let x = lx.word()?;
                lx.expect(',')?;
                let y = lx.word()?;
                pending.push((line, x, y));
            }
            other => return Err(CliError::Syntax { line, msg: format!("unknown statement `{other}`") }),
        }
        lx.expect(')')?;
        lx.expect('.')?;
    }
    let mut attacks = Vec::with_capacity(pending.len());
    for (line, x, y) in pending {
        let look = |n: &String| {
            index.get(n).copied().ok_or_else(|| CliError::Undeclared { line, name: n.clone() })
        };
        attacks.push((look(&x)?, look(&y)?));
    }
    Ok(ApxDocument { af: FiniteAF::new(names.len(), attacks)?, names })
}

/// Canonical form: declarations in index order, then attacks sorted by
/// (attacker, target) index.
pub fn emit_apx(af: &FiniteAF, names: &[String]) -> String {
    let mut out = String::new();
    for n in names.iter().take(af.n_args()) {
        let _ = writeln!(out, "arg({n}).");
    }
    for &(x, y) in af.attacks() {
        let _ = writeln!(out, "att({},{}).", names[x], names[y]);
    }
    out
}
