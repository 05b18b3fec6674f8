use std::collections::BTreeMap;

use crate::bv::BvSpace;
use crate::context::{Ctx, GradedContext, Variable};
use crate::error::Error;
use crate::hochschild::{gerst_bracket, hkr, hochschild_b, Cochain};
use crate::homotopy::DerivedBrackets;
use crate::multivector::{derived_poisson, schouten, MultiVector, SCtx, ShiftedContext};
use crate::poly::Poly;
use crate::quantize::{ConstantPoisson, StarProduct};
use crate::scalar::Scalar;

use super::ast::{Decl, Expr, ExprKind, Func, Ident, Item, Script};
use super::printer::print_expr;
use super::{Diagnostic, Span};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Function,
    Cochain,
}

/// Static type: what an expression denotes and its degree when homogeneous.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Type {
    pub kind: Kind,
    pub degree: Option<i64>,
}

impl Type {
    fn function(d: Option<i64>) -> Self {
        Type { kind: Kind::Function, degree: d }
    }

    fn cochain() -> Self {
        Type { kind: Kind::Cochain, degree: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Function(MultiVector),
    Cochain(Cochain),
}

impl Value {
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Function(f) => f.is_zero(),
            Value::Cochain(c) => c.is_zero(),
        }
    }

    pub fn json(&self) -> serde_json::Value {
        match self {
            Value::Function(f) => serde_json::to_value(f.value().to_json_struct()).expect("serializable"),
            Value::Cochain(c) => serde_json::to_value(c.to_json_struct()).expect("serializable"),
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Function(v) => write!(f, "{}", v.value()),
            Value::Cochain(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub line: usize,
    pub col: usize,
    pub statement: String,
    pub residual: Value,
    pub pass: bool,
}

/// The result of evaluating a script.
#[derive(Clone, Debug)]
pub struct Env {
    pub sctx: SCtx,
    pub bindings: BTreeMap<String, Value>,
    pub constraints: Vec<Poly>,
    pub split: Vec<String>,
    pub checks: Vec<CheckOutcome>,
    pub shows: Vec<(String, Value)>,
}

impl Env {
    pub fn base(&self) -> &Ctx {
        self.sctx.base()
    }

    pub fn function(&self, name: &str) -> Option<&MultiVector> {
        match self.bindings.get(name) {
            Some(Value::Function(f)) => Some(f),
            _ => None,
        }
    }

    /// The declared parameter used by `star`: `eps` if present, else the only one.
    pub fn deformation_parameter(&self) -> Option<String> {
        let base = self.base();
        let params = base.params();
        if base.get("eps").is_some_and(|i| base.is_param(i)) {
            return Some("eps".into());
        }
        match params.as_slice() {
            [p] => Some(base.var(*p).name.clone()),
            _ => None,
        }
    }

    /// The constant matrix of a bivector, read off from derived brackets of coordinates.
    pub fn constant_poisson(&self, pi: &MultiVector) -> crate::Result<ConstantPoisson> {
        let base = self.base();
        let coords = base.coordinates();
        let names: Vec<&str> = coords.iter().map(|&i| base.var(i).name.as_str()).collect();
        let mut m = vec![vec![Scalar::zero(); coords.len()]; coords.len()];
        for (a, &i) in coords.iter().enumerate() {
            for (b, &j) in coords.iter().enumerate() {
                let xi = MultiVector::var(&self.sctx, &base.var(i).name)?;
                let xj = MultiVector::var(&self.sctx, &base.var(j).name)?;
                let v = derived_poisson(pi, &xi, &xj)?.to_base()?;
                m[a][b] = v
                    .as_constant()
                    .ok_or_else(|| Error::Invalid("the bivector is not constant".into()))?;
            }
        }
        ConstantPoisson::new(base, &names, m)
    }
}

/// Options applied while building the context.
#[derive(Clone, Copy, Debug, Default)]
pub struct EvalOptions {
    /// Overrides the truncation order of every parameter.
    pub order: Option<u32>,
}

struct Scope {
    sctx: SCtx,
    types: BTreeMap<String, Type>,
}

fn build_context(script: &Script, opts: EvalOptions, diags: &mut Vec<Diagnostic>) -> Option<SCtx> {
    let mut vars = Vec::new();
    let mut shift: Option<(i64, Span)> = None;
    let mut seen_context = false;
    let mut seen_other = false;
    let mut names: BTreeMap<String, Span> = BTreeMap::new();
    for item in &script.items {
        let Item::Context { decls, span } = item else {
            seen_other = true;
            continue;
        };
        if seen_context {
            diags.push(Diagnostic::error(*span, "only one context block is allowed"));
            continue;
        }
        if seen_other {
            diags.push(Diagnostic::error(*span, "the context block must come first"));
        }
        seen_context = true;
        for d in decls {
            let mut declare = |id: &Ident, v: Variable| {
                if names.insert(id.name.clone(), id.span).is_some() {
                    diags.push(Diagnostic::error(id.span, format!("'{}' is declared twice", id.name)));
                } else {
                    vars.push(v);
                }
            };
            match d {
                Decl::Var { name, degree } => declare(name, Variable::new(name.name.clone(), *degree)),
                Decl::Param { name, trunc } => {
                    declare(name, Variable::param(name.name.clone(), opts.order.or(*trunc)))
                }
                Decl::Shift { value, span } => {
                    if shift.is_some() {
                        diags.push(Diagnostic::error(*span, "shift is declared twice"));
                    }
                    shift = Some((*value, *span));
                }
            }
        }
    }
    let (n, span) = shift.unwrap_or((1, Span::default()));
    let base = match GradedContext::new(vars) {
        Ok(b) => b,
        Err(e) => {
            diags.push(Diagnostic::error(span, e.to_string()));
            return None;
        }
    };
    match ShiftedContext::new(&base, n) {
        Ok(s) => Some(s),
        Err(e) => {
            diags.push(Diagnostic::error(span, e.to_string()));
            None
        }
    }
}

fn sum_degrees(ds: impl IntoIterator<Item = Option<i64>>) -> Option<i64> {
    ds.into_iter().sum()
}

impl Scope {
    fn infer(&self, e: &Expr, diags: &mut Vec<Diagnostic>) -> Option<Type> {
        let ext = self.sctx.ext();
        let n = self.sctx.shift();
        let err = |diags: &mut Vec<Diagnostic>, msg: String| {
            diags.push(Diagnostic::error(e.span, msg));
            None
        };
        match &e.kind {
            ExprKind::Num(_) => Some(Type::function(Some(0))),
            ExprKind::Var(v) => {
                if let Some(t) = self.types.get(v) {
                    Some(*t)
                } else if let Some(i) = ext.get(v) {
                    Some(Type::function(Some(ext.degree(i))))
                } else {
                    err(diags, format!("unknown identifier '{v}'"))
                }
            }
            ExprKind::Neg(a) => self.infer(a, diags),
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
                let (ta, tb) = (self.infer(a, diags)?, self.infer(b, diags)?);
                if ta.kind != tb.kind {
                    return err(diags, "cannot add a function and a cochain".into());
                }
                let d = if ta.degree == tb.degree { ta.degree } else { None };
                Some(Type { kind: ta.kind, degree: d })
            }
            ExprKind::Mul(a, b) => {
                let (ta, tb) = (self.infer(a, diags)?, self.infer(b, diags)?);
                match (ta.kind, tb.kind) {
                    (Kind::Function, Kind::Function) => Some(Type::function(sum_degrees([ta.degree, tb.degree]))),
                    (Kind::Function, Kind::Cochain) => Some(Type::cochain()),
                    _ => err(diags, "cochains can only be multiplied by functions on the left".into()),
                }
            }
            ExprKind::Pow(a, k) => {
                let t = self.infer(a, diags)?;
                if t.kind == Kind::Cochain {
                    return err(diags, "cannot raise a cochain to a power".into());
                }
                Some(Type::function(t.degree.map(|d| d * *k as i64)))
            }
            ExprKind::Call(f, args) => {
                let ts: Vec<Option<Type>> = args.iter().map(|a| self.infer(a, diags)).collect();
                let ts: Vec<Type> = ts.into_iter().collect::<Option<_>>()?;
                let want = |diags: &mut Vec<Diagnostic>, i: usize, k: Kind| {
                    if ts[i].kind != k {
                        let what = if k == Kind::Function { "a function" } else { "a cochain" };
                        diags.push(Diagnostic::error(
                            args[i].span,
                            format!("argument {} of {} must be {what}", i + 1, f.name()),
                        ));
                        false
                    } else {
                        true
                    }
                };
                match f {
                    Func::D => {
                        let ExprKind::Var(x) = &args[0].kind else { unreachable!("checked by the parser") };
                        let Some(i) = ext.get(x) else {
                            return err(diags, format!("'{x}' is not a generator"));
                        };
                        want(diags, 1, Kind::Function)
                            .then(|| Type::function(ts[1].degree.map(|d| d - ext.degree(i))))
                    }
                    Func::Lam => {
                        let ok = (0..ts.len()).all(|i| want(diags, i, Kind::Function));
                        let k = (ts.len() - 1) as i64;
                        ok.then(|| Type::function(sum_degrees(ts.iter().map(|t| t.degree)).map(|d| d - k * n)))
                    }
                    Func::Apply => {
                        let ok = want(diags, 0, Kind::Cochain) & (1..ts.len()).all(|i| want(diags, i, Kind::Function));
                        ok.then(|| Type::function(None))
                    }
                    Func::Sch => {
                        if ts[0].kind != ts[1].kind {
                            return err(diags, "sch needs two functions or two cochains".into());
                        }
                        Some(match ts[0].kind {
                            Kind::Function => Type::function(sum_degrees([ts[0].degree, ts[1].degree]).map(|d| d - n)),
                            Kind::Cochain => Type::cochain(),
                        })
                    }
                    Func::Star => {
                        let ok = want(diags, 0, Kind::Function) & want(diags, 1, Kind::Function);
                        if !self.types.contains_key("pi") {
                            return err(diags, "star needs a binding named 'pi'".into());
                        }
                        ok.then(|| Type::function(sum_degrees([ts[0].degree, ts[1].degree])))
                    }
                    Func::Hkr => want(diags, 0, Kind::Function).then(Type::cochain),
                    Func::B => want(diags, 0, Kind::Cochain).then(Type::cochain),
                    Func::Delta => want(diags, 0, Kind::Function).then(|| Type::function(ts[0].degree.map(|d| d - n))),
                }
            }
        }
    }
}

/// Resolves names and infers types without evaluating anything.
pub fn check(script: &Script) -> Result<BTreeMap<String, Type>, Vec<Diagnostic>> {
    check_with(script, EvalOptions::default()).map(|(_, t)| t)
}

fn check_with(script: &Script, opts: EvalOptions) -> Result<(SCtx, BTreeMap<String, Type>), Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let sctx = build_context(script, opts, &mut diags);
    let Some(sctx) = sctx else { return Err(diags) };
    let mut scope = Scope { sctx: sctx.clone(), types: BTreeMap::new() };
    let mut split_seen = false;
    for item in &script.items {
        match item {
            Item::Context { .. } => {}
            Item::Let { name, expr } => {
                if sctx.ext().get(&name.name).is_some() {
                    diags.push(Diagnostic::error(name.span, format!("'{}' is already a generator", name.name)));
                } else if scope.types.contains_key(&name.name) {
                    diags.push(Diagnostic::error(name.span, format!("'{}' is bound twice", name.name)));
                }
                if let Some(t) = scope.infer(expr, &mut diags) {
                    scope.types.insert(name.name.clone(), t);
                }
            }
            Item::Constraint(e) => {
                if let Some(t) = scope.infer(e, &mut diags) {
                    if t.kind != Kind::Function {
                        diags.push(Diagnostic::error(e.span, "a constraint must be a function"));
                    }
                }
            }
            Item::Split(names) => {
                if split_seen {
                    diags.push(Diagnostic::error(names[0].span, "split is declared twice"));
                }
                split_seen = true;
                let base = sctx.base();
                for n in names {
                    if !base.get(&n.name).is_some_and(|i| !base.is_param(i)) {
                        diags.push(Diagnostic::error(n.span, format!("'{}' is not a coordinate", n.name)));
                    }
                }
            }
            Item::Check { lhs, rhs, .. } => {
                let a = scope.infer(lhs, &mut diags);
                let b = scope.infer(rhs, &mut diags);
                if let (Some(a), Some(b)) = (a, b) {
                    if a.kind != b.kind {
                        diags.push(Diagnostic::error(lhs.span, "both sides of a check must have the same kind"));
                    }
                }
            }
            Item::Show(e) => {
                scope.infer(e, &mut diags);
            }
        }
    }
    if diags.is_empty() {
        Ok((sctx, scope.types))
    } else {
        Err(diags)
    }
}

struct Evaluator<'a> {
    sctx: SCtx,
    bindings: &'a BTreeMap<String, Value>,
}

type EResult<T> = Result<T, Diagnostic>;

impl Evaluator<'_> {
    fn fail(&self, span: Span, e: Error) -> Diagnostic {
        Diagnostic::error(span, e.to_string())
    }

    fn function(&self, e: &Expr) -> EResult<MultiVector> {
        match self.eval(e)? {
            Value::Function(f) => Ok(f),
            Value::Cochain(_) => Err(Diagnostic::error(e.span, "expected a function")),
        }
    }

    fn cochain(&self, e: &Expr) -> EResult<Cochain> {
        match self.eval(e)? {
            Value::Cochain(c) => Ok(c),
            Value::Function(_) => Err(Diagnostic::error(e.span, "expected a cochain")),
        }
    }

    fn base_poly(&self, e: &Expr) -> EResult<Poly> {
        self.function(e)?.to_base().map_err(|x| self.fail(e.span, x))
    }

    fn eval(&self, e: &Expr) -> EResult<Value> {
        let s = &self.sctx;
        let lift = |r: crate::Result<MultiVector>| r.map(Value::Function).map_err(|x| self.fail(e.span, x));
        let lift_c = |r: crate::Result<Cochain>| r.map(Value::Cochain).map_err(|x| self.fail(e.span, x));
        match &e.kind {
            ExprKind::Num(q) => {
                let c = Poly::constant(s.base(), Scalar::from(q.clone()));
                lift(MultiVector::from_base(s, &c))
            }
            ExprKind::Var(v) => match self.bindings.get(v) {
                Some(val) => Ok(val.clone()),
                None => lift(MultiVector::var(s, v)),
            },
            ExprKind::Neg(a) => Ok(match self.eval(a)? {
                Value::Function(f) => Value::Function(-&f),
                Value::Cochain(c) => Value::Cochain(-&c),
            }),
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
                let sub = matches!(e.kind, ExprKind::Sub(..));
                Ok(match (self.eval(a)?, self.eval(b)?) {
                    (Value::Function(x), Value::Function(y)) => Value::Function(if sub { &x - &y } else { &x + &y }),
                    (Value::Cochain(x), Value::Cochain(y)) => Value::Cochain(if sub { &x - &y } else { &x + &y }),
                    _ => return Err(Diagnostic::error(e.span, "cannot add a function and a cochain")),
                })
            }
            ExprKind::Mul(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Value::Function(x), Value::Function(y)) => Ok(Value::Function(&x * &y)),
                (Value::Function(x), Value::Cochain(c)) => {
                    let f = x.to_base().map_err(|err| self.fail(a.span, err))?;
                    lift_c(c.mul_coeff(&f))
                }
                _ => Err(Diagnostic::error(e.span, "cochains can only be multiplied by functions on the left")),
            },
            ExprKind::Pow(a, k) => {
                let f = self.function(a)?;
                let mut out = MultiVector::from_base(s, &Poly::one(s.base())).map_err(|x| self.fail(e.span, x))?;
                for _ in 0..*k {
                    out = &out * &f;
                }
                Ok(Value::Function(out))
            }
            ExprKind::Call(func, args) => self.call(*func, args, e.span),
        }
    }

    fn call(&self, func: Func, args: &[Expr], span: Span) -> EResult<Value> {
        let s = &self.sctx;
        let fail = |x: Error| self.fail(span, x);
        match func {
            Func::D => {
                let ExprKind::Var(x) = &args[0].kind else { unreachable!("checked by the parser") };
                let f = self.function(&args[1])?;
                let d = f.value().partial(x).map_err(fail)?;
                MultiVector::new(s, d).map(Value::Function).map_err(fail)
            }
            Func::Lam => {
                let f = self.function(&args[0])?;
                let rest = args[1..].iter().map(|a| self.function(a)).collect::<EResult<Vec<_>>>()?;
                let lam = DerivedBrackets::new(&f, rest.len().max(1));
                lam.lambda(&rest).map(Value::Function).map_err(fail)
            }
            Func::Apply => {
                let c = self.cochain(&args[0])?;
                let rest = args[1..].iter().map(|a| self.base_poly(a)).collect::<EResult<Vec<_>>>()?;
                let v = c.eval(&rest).map_err(fail)?;
                MultiVector::from_base(s, &v).map(Value::Function).map_err(fail)
            }
            Func::Sch => match (self.eval(&args[0])?, self.eval(&args[1])?) {
                (Value::Function(a), Value::Function(b)) => schouten(&a, &b).map(Value::Function).map_err(fail),
                (Value::Cochain(a), Value::Cochain(b)) => gerst_bracket(&a, &b).map(Value::Cochain).map_err(fail),
                _ => Err(Diagnostic::error(span, "sch needs two functions or two cochains")),
            },
            Func::Star => {
                let Some(Value::Function(pi)) = self.bindings.get("pi") else {
                    return Err(Diagnostic::error(span, "star needs a function bound to 'pi'"));
                };
                let env = Env {
                    sctx: s.clone(),
                    bindings: BTreeMap::new(),
                    constraints: vec![],
                    split: vec![],
                    checks: vec![],
                    shows: vec![],
                };
                let eps = env
                    .deformation_parameter()
                    .ok_or_else(|| Diagnostic::error(span, "star needs a parameter named 'eps'"))?;
                let p = env.constant_poisson(pi).map_err(fail)?;
                let star = StarProduct::new(&p, &eps).map_err(fail)?;
                let f = self.base_poly(&args[0])?;
                let g = self.base_poly(&args[1])?;
                let v = star.star(&f, &g).map_err(fail)?;
                MultiVector::from_base(s, &v).map(Value::Function).map_err(fail)
            }
            Func::Hkr => hkr(&self.function(&args[0])?).map(Value::Cochain).map_err(fail),
            Func::B => hochschild_b(&self.cochain(&args[0])?).map(Value::Cochain).map_err(fail),
            Func::Delta => {
                let f = self.function(&args[0])?;
                let bv = BvSpace::new(s, None).map_err(fail)?;
                let v = bv.laplacian0(f.value()).map_err(fail)?;
                MultiVector::new(s, v).map(Value::Function).map_err(fail)
            }
        }
    }
}

/// Type-checks and evaluates every statement in order.
pub fn evaluate(script: &Script, opts: EvalOptions) -> Result<Env, Vec<Diagnostic>> {
    let (sctx, _) = check_with(script, opts)?;
    let mut bindings = BTreeMap::new();
    let mut env_constraints = Vec::new();
    let mut split = Vec::new();
    let mut checks = Vec::new();
    let mut shows = Vec::new();
    for item in &script.items {
        let ev = Evaluator { sctx: sctx.clone(), bindings: &bindings };
        match item {
            Item::Context { .. } => {}
            Item::Let { name, expr } => {
                let v = ev.eval(expr).map_err(|d| vec![d])?;
                bindings.insert(name.name.clone(), v);
            }
            Item::Constraint(e) => env_constraints.push(ev.base_poly(e).map_err(|d| vec![d])?),
            Item::Split(names) => split = names.iter().map(|n| n.name.clone()).collect(),
            Item::Check { lhs, rhs, span } => {
                let l = ev.eval(lhs).map_err(|d| vec![d])?;
                let r = ev.eval(rhs).map_err(|d| vec![d])?;
                let residual = match (l, r) {
                    (Value::Function(a), Value::Function(b)) => Value::Function(&a - &b),
                    (Value::Cochain(a), Value::Cochain(b)) => Value::Cochain(&a - &b),
                    _ => return Err(vec![Diagnostic::error(*span, "both sides of a check must have the same kind")]),
                };
                checks.push(CheckOutcome {
                    line: span.line,
                    col: span.col,
                    statement: format!("{} == {}", print_expr(lhs), print_expr(rhs)),
                    pass: residual.is_zero(),
                    residual,
                });
            }
            Item::Show(e) => shows.push((print_expr(e), ev.eval(e).map_err(|d| vec![d])?)),
        }
    }
    Ok(Env {
        sctx,
        bindings,
        constraints: env_constraints,
        split,
        checks,
        shows,
    })
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn run(src: &str) -> Result<Env, Vec<Diagnostic>> {
        evaluate(&parse(src)?, EvalOptions::default())
    }

    #[test]
    fn evaluates_lets_and_checks() {
        let env = run("context { x: deg 0; y: deg 0; }
            let pi = x'*y';
            check sch(sch(x, pi), y) == -1;
            check d(x; x^3) == 3*x^2;
            check apply(hkr(x'); x^2) == 2*x;
            check b(hkr(x'*y')) == 0*hkr(x');
            show lam(pi; x, y);")
        .unwrap();
        assert!(env.checks.iter().all(|c| c.pass), "{:?}", env.checks);
        assert_eq!(env.shows[0].1.to_string(), "-1");
    }

    #[test]
    fn star_uses_pi() {
        let env = run("context { x: deg 0; y: deg 0; param eps trunc 3; }
            let pi = -x'*y';
            check star(x, y) - star(y, x) == eps;")
        .unwrap();
        assert!(env.checks[0].pass, "{}", env.checks[0].residual);
    }

    #[test]
    fn type_errors_have_positions() {
        let e = run("context { x: deg 0; }\nlet f = y + 1;").unwrap_err();
        assert_eq!(e[0].message, "unknown identifier 'y'");
        assert_eq!((e[0].line, e[0].col), (2, 9));
        let e = run("context { x: deg 0; }\nlet f = hkr(x') + x;").unwrap_err();
        assert_eq!(e[0].message, "cannot add a function and a cochain");
        let e = run("let f = 1; context { x: deg 0; }").unwrap_err();
        assert_eq!(e[0].message, "the context block must come first");
        let e = run("context { x: deg 0; x: deg 1; }").unwrap_err();
        assert_eq!(e[0].message, "'x' is declared twice");
        let e = run("context { x: deg 0; } let x = 1;").unwrap_err();
        assert_eq!(e[0].message, "'x' is already a generator");
    }

    #[test]
    fn order_override() {
        let s = parse("context { x: deg 0; param eps trunc 1; } let f = eps^2;").unwrap();
        assert!(evaluate(&s, EvalOptions::default()).unwrap().bindings["f"].is_zero());
        assert!(!evaluate(&s, EvalOptions { order: Some(2) }).unwrap().bindings["f"].is_zero());
    }
}
