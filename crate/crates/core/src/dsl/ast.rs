use num_rational::BigRational;

use super::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Var { name: Ident, degree: i64 },
    Param { name: Ident, trunc: Option<u32> },
    Shift { value: i64, span: Span },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    D,
    Lam,
    Apply,
    Sch,
    Star,
    Hkr,
    B,
    Delta,
}

impl Func {
    pub fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "d" => Func::D,
            "lam" => Func::Lam,
            "apply" => Func::Apply,
            "sch" => Func::Sch,
            "star" => Func::Star,
            "hkr" => Func::Hkr,
            "b" => Func::B,
            "delta" => Func::Delta,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::D => "d",
            Func::Lam => "lam",
            Func::Apply => "apply",
            Func::Sch => "sch",
            Func::Star => "star",
            Func::Hkr => "hkr",
            Func::B => "b",
            Func::Delta => "delta",
        }
    }

    /// Calls whose first argument is separated by `;`.
    pub fn is_headed(self) -> bool {
        matches!(self, Func::D | Func::Lam | Func::Apply)
    }

    pub fn is_binary(self) -> bool {
        matches!(self, Func::Sch | Func::Star)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Num(BigRational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Context { decls: Vec<Decl>, span: Span },
    Let { name: Ident, expr: Expr },
    Constraint(Expr),
    Split(Vec<Ident>),
    Check { lhs: Expr, rhs: Expr, span: Span },
    Show(Expr),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub items: Vec<Item>,
}

pub const KEYWORDS: &[&str] = &[
    "context", "let", "constraint", "split", "check", "show", "param", "trunc", "deg", "shift",
];
