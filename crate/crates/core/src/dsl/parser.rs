use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::ast::{Decl, Expr, ExprKind, Func, Ident, Item, Script, KEYWORDS};
use super::lexer::{lex, Token, TokenKind};
use super::{Diagnostic, Span};

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Declared generators and their degrees, for the odd-square rule.
    degrees: BTreeMap<String, i64>,
    shift: i64,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, k: &TokenKind) -> bool {
        &self.peek().kind == k
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(s) if s == w)
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error(t.span, format!("expected {wanted}, found {}", t.kind.describe()))
    }

    fn expect(&mut self, k: TokenKind) -> PResult<Token> {
        if self.at(&k) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&k.describe()))
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<Span> {
        if self.at_word(w) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("'{w}'")))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().kind.clone() {
            TokenKind::Ident(name) => {
                let span = self.bump().span;
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(Diagnostic::error(span, format!("'{name}' is a reserved word")));
                }
                Ok(Ident { name, span })
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn uint(&mut self) -> PResult<(BigInt, Span)> {
        match self.peek().kind.clone() {
            TokenKind::Int(s) => {
                let span = self.bump().span;
                Ok((s.parse().expect("digits"), span))
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn small<T: TryFrom<BigInt>>(&self, v: BigInt, span: Span) -> PResult<T> {
        T::try_from(v).map_err(|_| Diagnostic::error(span, "integer out of range"))
    }

    fn int(&mut self) -> PResult<(i64, Span)> {
        let neg = self.at(&TokenKind::Minus);
        let start = self.peek().span;
        if neg {
            self.bump();
        }
        let (v, span) = self.uint()?;
        let v = if neg { -v } else { v };
        Ok((self.small(v, span)?, start))
    }

    fn script(&mut self) -> PResult<Script> {
        let mut items = Vec::new();
        while !self.at(&TokenKind::Eof) {
            items.push(self.item()?);
        }
        Ok(Script { items })
    }

    fn item(&mut self) -> PResult<Item> {
        let span = self.peek().span;
        let word = match &self.peek().kind {
            TokenKind::Ident(s) => s.clone(),
            _ => return Err(self.unexpected("a declaration or statement")),
        };
        let item = match word.as_str() {
            "context" => {
                self.bump();
                self.expect(TokenKind::LBrace)?;
                let mut decls = Vec::new();
                while !self.at(&TokenKind::RBrace) {
                    decls.push(self.decl()?);
                }
                self.bump();
                return Ok(Item::Context { decls, span });
            }
            "let" => {
                self.bump();
                let name = self.ident()?;
                self.expect(TokenKind::Assign)?;
                Item::Let { name, expr: self.expr()? }
            }
            "constraint" => {
                self.bump();
                Item::Constraint(self.expr()?)
            }
            "split" => {
                self.bump();
                Item::Split(self.ident_list()?)
            }
            "check" => {
                self.bump();
                let lhs = self.expr()?;
                self.expect(TokenKind::EqEq)?;
                Item::Check { lhs, rhs: self.expr()?, span }
            }
            "show" => {
                self.bump();
                Item::Show(self.expr()?)
            }
            _ => return Err(self.unexpected("a declaration or statement")),
        };
        self.expect(TokenKind::Semi)?;
        Ok(item)
    }

    fn ident_list(&mut self) -> PResult<Vec<Ident>> {
        let mut out = vec![self.ident()?];
        while self.at(&TokenKind::Comma) {
            self.bump();
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn decl(&mut self) -> PResult<Decl> {
        let d = if self.at_word("param") {
            self.bump();
            let name = self.ident()?;
            let trunc = if self.at_word("trunc") {
                self.bump();
                let (v, span) = self.uint()?;
                Some(self.small(v, span)?)
            } else {
                None
            };
            self.degrees.insert(name.name.clone(), 0);
            Decl::Param { name, trunc }
        } else if self.at_word("shift") {
            let span = self.bump().span;
            let (value, _) = self.int()?;
            self.shift = value;
            Decl::Shift { value, span }
        } else {
            let name = self.ident()?;
            if name.name.ends_with('\'') {
                return Err(Diagnostic::error(name.span, "declared names cannot end in a prime"));
            }
            self.expect(TokenKind::Colon)?;
            self.expect_word("deg")?;
            let (degree, _) = self.int()?;
            self.degrees.insert(name.name.clone(), degree);
            Decl::Var { name, degree }
        };
        self.expect(TokenKind::Semi)?;
        Ok(d)
    }

    fn is_odd_generator(&self, name: &str) -> bool {
        if let Some(d) = self.degrees.get(name) {
            return d.rem_euclid(2) == 1;
        }
        match name.strip_suffix('\'') {
            Some(base) => self.degrees.get(base).is_some_and(|d| (self.shift - d).rem_euclid(2) == 1),
            None => false,
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let plus = self.at(&TokenKind::Plus);
            if !plus && !self.at(&TokenKind::Minus) {
                return Ok(lhs);
            }
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span;
            let kind = if plus {
                ExprKind::Add(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Expr { kind, span };
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while self.at(&TokenKind::Star) {
            self.bump();
            let rhs = self.unary()?;
            let span = lhs.span;
            lhs = Expr { kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.at(&TokenKind::Minus) {
            let span = self.bump().span;
            let inner = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), span });
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if !self.at(&TokenKind::Caret) {
            return Ok(base);
        }
        self.bump();
        let (v, span) = self.uint()?;
        let k: u32 = self.small(v, span)?;
        if let ExprKind::Var(name) = &base.kind {
            if k >= 2 && self.is_odd_generator(name) {
                return Err(Diagnostic::error(base.span, "odd variable squared").with_witness(format!("{name}^{k}")));
            }
        }
        let span = base.span;
        Ok(Expr { kind: ExprKind::Pow(Box::new(base), k), span })
    }

    fn atom(&mut self) -> PResult<Expr> {
        let span = self.peek().span;
        match self.peek().kind.clone() {
            TokenKind::Int(_) => {
                let (n, _) = self.uint()?;
                let d = if self.at(&TokenKind::Slash) {
                    self.bump();
                    let (d, dspan) = self.uint()?;
                    if d.is_zero() {
                        return Err(Diagnostic::error(dspan, "division by zero"));
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(Expr { kind: ExprKind::Num(BigRational::new(n, d)), span })
            }
            TokenKind::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Ident(name) => {
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(self.unexpected("an expression"));
                }
                self.bump();
                if !self.at(&TokenKind::LParen) {
                    return Ok(Expr { kind: ExprKind::Var(name), span });
                }
                let func = Func::from_name(&name)
                    .ok_or_else(|| Diagnostic::error(span, format!("unknown function '{name}'")))?;
                self.bump();
                let args = self.call_args(func, span)?;
                self.expect(TokenKind::RParen)?;
                Ok(Expr { kind: ExprKind::Call(func, args), span })
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn call_args(&mut self, func: Func, span: Span) -> PResult<Vec<Expr>> {
        let mut args = vec![self.expr()?];
        if func.is_headed() {
            self.expect(TokenKind::Semi)?;
            args.push(self.expr()?);
            while self.at(&TokenKind::Comma) {
                self.bump();
                args.push(self.expr()?);
            }
            if func == Func::D && args.len() != 2 {
                return Err(Diagnostic::error(span, "d takes one variable and one expression"));
            }
        } else if func.is_binary() {
            self.expect(TokenKind::Comma)?;
            args.push(self.expr()?);
        }
        if func == Func::D && !matches!(args[0].kind, ExprKind::Var(_)) {
            return Err(Diagnostic::error(args[0].span, "d differentiates with respect to a variable"));
        }
        Ok(args)
    }
}

fn parser(src: &str) -> PResult<Parser> {
    Ok(Parser {
        tokens: lex(src)?,
        pos: 0,
        degrees: BTreeMap::new(),
        shift: 1,
    })
}

pub fn parse(src: &str) -> Result<Script, Vec<Diagnostic>> {
    let mut p = parser(src).map_err(|d| vec![d])?;
    p.script().map_err(|d| vec![d])
}

/// Parses a single expression against already-declared generator degrees.
pub fn parse_expr(src: &str, degrees: &BTreeMap<String, i64>, shift: i64) -> Result<Expr, Diagnostic> {
    let mut p = parser(src)?;
    p.degrees = degrees.clone();
    p.shift = shift;
    let e = p.expr()?;
    p.expect(TokenKind::Eof)?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_let() {
        let s = parse("context { x: deg 0; } let f = x^2;").unwrap();
        assert_eq!(s.items.len(), 2);
        assert!(matches!(&s.items[1], Item::Let { name, .. } if name.name == "f"));
    }

    #[test]
    fn odd_square_is_reported() {
        let e = parse("context { th: deg 1; }\nlet g = th^2;").unwrap_err();
        assert_eq!(e[0].message, "odd variable squared");
        assert_eq!((e[0].line, e[0].col), (2, 9));
        // x' is odd for an even x at shift 1
        let e = parse("context { x: deg 0; } let g = x'^3;").unwrap_err();
        assert_eq!(e[0].message, "odd variable squared");
        assert!(parse("context { x: deg 0; shift 2; } let g = x'^3;").is_ok());
    }

    #[test]
    fn precedence() {
        let s = parse("let f = -a*b^2 + c - d;").unwrap();
        let Item::Let { expr, .. } = &s.items[0] else { panic!() };
        let ExprKind::Sub(l, _) = &expr.kind else { panic!("{expr:?}") };
        let ExprKind::Add(m, _) = &l.kind else { panic!() };
        let ExprKind::Mul(n, p) = &m.kind else { panic!() };
        assert!(matches!(n.kind, ExprKind::Neg(_)));
        assert!(matches!(p.kind, ExprKind::Pow(_, 2)));
    }

    #[test]
    fn calls_and_errors() {
        assert!(parse("let f = lam(F; x, y) + d(x; x^2) + sch(a, b) + hkr(p);").is_ok());
        let e = parse("let f = foo(x);").unwrap_err();
        assert_eq!(e[0].message, "unknown function 'foo'");
        let e = parse("let f = 1/0;").unwrap_err();
        assert_eq!(e[0].message, "division by zero");
        let e = parse("let f = x +;").unwrap_err();
        assert_eq!((e[0].line, e[0].col), (1, 12));
        assert!(parse("let let = 1;").is_err());
        assert!(parse("let f = d(x^2; x);").is_err());
    }
}
