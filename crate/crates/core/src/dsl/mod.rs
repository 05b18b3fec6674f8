//! A small declarative language for graded contexts and expressions.
//!
//! ```text
//! script   = { item } ;
//! item     = context | "let" IDENT "=" expr ";" | "constraint" expr ";"
//!          | "split" IDENT { "," IDENT } ";" | "check" expr "==" expr ";" | "show" expr ";" ;
//! context  = "context" "{" { decl } "}" ;
//! decl     = IDENT ":" "deg" int ";" | "param" IDENT [ "trunc" INT ] ";"
//!          | "shift" int ";" ;
//! int      = [ "-" ] INT ;
//! expr     = term { ( "+" | "-" ) term } ;
//! term     = unary { "*" unary } ;
//! unary    = "-" unary | power ;
//! power    = atom [ "^" INT ] ;
//! atom     = INT [ "/" INT ] | "(" expr ")" | IDENT [ "(" args ")" ] ;
//! args     = expr [ ";" ] expr { "," expr } ;
//! ```
//!
//! A call is an identifier followed by `(`, so generator names such as `b` or
//! `d` stay usable as variables. The calls are
//!
//! ```text
//! d(x; f)          partial derivative
//! lam(F; a1, ..)   derived bracket
//! apply(c; f, ..)  evaluate a cochain
//! sch(a, b)        Schouten bracket, or Gerstenhaber bracket of cochains
//! star(f, g)       Moyal product built from the binding `pi`
//! hkr(a)  b(c)  delta(a)
//! ```
//!
//! Identifiers may end in primes; `x'` is the antifield of `x`. Comments run
//! from `#` to the end of the line.

mod ast;
mod eval;
mod lexer;
mod parser;
mod printer;

pub use ast::{Decl, Expr, ExprKind, Func, Ident, Item, Script};
pub use eval::{check, evaluate, CheckOutcome, Env, EvalOptions, Kind, Type, Value};
pub use lexer::{lex, Token, TokenKind};
pub use parser::{parse, parse_expr};
pub use printer::{print_expr, print_script};

use std::fmt;

use serde::Serialize;

/// Byte offset plus 1-based line and column of a source region.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Span {
    pub offset: usize,
    pub len: usize,
    pub line: usize,
    pub col: usize,
}

/// Spans never take part in comparisons, so reparsed scripts compare equal.
impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub line: usize,
    pub col: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            line: span.line,
            col: span.col,
            witness: None,
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    /// `file:line:col: error: message`
    pub fn render(&self, file: &str) -> String {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        let mut s = format!("{file}:{}:{}: {sev}: {}", self.line, self.col, self.message);
        if let Some(w) = &self.witness {
            s.push_str(&format!(" [{w}]"));
        }
        s
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("<input>"))
    }
}
