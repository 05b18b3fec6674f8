use num_traits::One;

use super::ast::{Decl, Expr, ExprKind, Item, Script};

fn level(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Add(..) | ExprKind::Sub(..) => 1,
        ExprKind::Mul(..) => 2,
        ExprKind::Neg(_) => 3,
        ExprKind::Pow(..) => 4,
        ExprKind::Num(q) if !q.denom().is_one() => 4,
        _ => 5,
    }
}

fn wrap(e: &Expr, min: u8) -> String {
    let s = print_expr(e);
    if level(e) < min {
        format!("({s})")
    } else {
        s
    }
}

pub fn print_expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Num(q) => {
            if q.denom().is_one() {
                q.numer().to_string()
            } else {
                format!("{}/{}", q.numer(), q.denom())
            }
        }
        ExprKind::Var(v) => v.clone(),
        ExprKind::Neg(a) => format!("-{}", wrap(a, 3)),
        ExprKind::Add(a, b) => format!("{} + {}", wrap(a, 1), wrap(b, 2)),
        ExprKind::Sub(a, b) => format!("{} - {}", wrap(a, 1), wrap(b, 2)),
        ExprKind::Mul(a, b) => format!("{}*{}", wrap(a, 2), wrap(b, 3)),
        ExprKind::Pow(a, k) => format!("{}^{k}", wrap(a, 5)),
        ExprKind::Call(f, args) => {
            let parts: Vec<String> = args.iter().map(print_expr).collect();
            if f.is_headed() {
                format!("{}({}; {})", f.name(), parts[0], parts[1..].join(", "))
            } else {
                format!("{}({})", f.name(), parts.join(", "))
            }
        }
    }
}

fn print_decl(d: &Decl) -> String {
    match d {
        Decl::Var { name, degree } => format!("{}: deg {degree};", name.name),
        Decl::Param { name, trunc: Some(t) } => format!("param {} trunc {t};", name.name),
        Decl::Param { name, trunc: None } => format!("param {};", name.name),
        Decl::Shift { value, .. } => format!("shift {value};"),
    }
}

/// Canonical layout: one statement per line, a four-space indented context block.
pub fn print_script(s: &Script) -> String {
    let mut out = String::new();
    for item in &s.items {
        match item {
            Item::Context { decls, .. } => {
                out.push_str("context {\n");
                for d in decls {
                    out.push_str("    ");
                    out.push_str(&print_decl(d));
                    out.push('\n');
                }
                out.push_str("}\n");
            }
            Item::Let { name, expr } => out.push_str(&format!("let {} = {};\n", name.name, print_expr(expr))),
            Item::Constraint(e) => out.push_str(&format!("constraint {};\n", print_expr(e))),
            Item::Split(names) => out.push_str(&format!(
                "split {};\n",
                names.iter().map(|n| n.name.as_str()).collect::<Vec<_>>().join(", ")
            )),
            Item::Check { lhs, rhs, .. } => {
                out.push_str(&format!("check {} == {};\n", print_expr(lhs), print_expr(rhs)))
            }
            Item::Show(e) => out.push_str(&format!("show {};\n", print_expr(e))),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn round_trip_keeps_structure() {
        let src = "context { x: deg 0; t: deg -1; param eps trunc 3; shift -1; }
            let f = (a + b)*(c - (d - e)) - -x^2 + (3/2)^2 + 3/2*x;
            let g = d(x; f*f) + lam(f; x, y) + sch(f, g)^2;
            check f == g; show -(f*g); constraint x; split x, t;";
        let s = parse(src).unwrap();
        let printed = print_script(&s);
        let again = parse(&printed).unwrap();
        assert_eq!(again, s);
        assert_eq!(print_script(&again), printed);
    }
}
