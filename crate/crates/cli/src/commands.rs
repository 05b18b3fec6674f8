use bvkit::bv::BvSpace;
use bvkit::dsl::Env;
use bvkit::homotopy::{derived_brackets, linf_probe, mc_residual, IdentityReport, McElement};
use bvkit::multivector::jacobiator;
use bvkit::quantize::{conormal_build, koszul_build, StarProduct};
use bvkit::random::{monomials_up_to, PolySampler};
use bvkit::{MultiVector, Poly, Scalar};
use serde_json::{json, Value};

use crate::config::Config;

/// What a command found: a verdict, a human-readable text and a JSON report.
pub struct Outcome {
    pub pass: bool,
    pub text: String,
    pub json: Value,
}

/// Errors that are the caller's fault rather than a failed check.
pub type CmdResult = Result<Outcome, String>;

fn kernel<T>(r: bvkit::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn poly_json(p: &Poly) -> Value {
    serde_json::to_value(p.to_json_struct()).expect("serializable")
}

fn mv_json(m: &MultiVector) -> Value {
    poly_json(m.value())
}

fn binding<'a>(env: &'a Env, names: &[&'static str]) -> Result<(&'static str, &'a MultiVector), String> {
    for n in names {
        if let Some(f) = env.function(n) {
            return Ok((n, f));
        }
    }
    Err(format!("the script must bind a function named '{}'", names.join("' or '")))
}

pub fn eval(env: &Env) -> CmdResult {
    let mut text = String::new();
    for (name, v) in &env.bindings {
        text.push_str(&format!("{name} = {v}\n"));
    }
    for (e, v) in &env.shows {
        text.push_str(&format!("show {e} = {v}\n"));
    }
    for c in &env.checks {
        text.push_str(&format!("check {}:{} {}: {}", c.line, c.col, c.statement, verdict(c.pass)));
        if !c.pass {
            text.push_str(&format!(" (residual {})", c.residual));
        }
        text.push('\n');
    }
    let pass = env.checks.iter().all(|c| c.pass);
    let json = json!({
        "command": "eval",
        "bindings": env.bindings.iter().map(|(k, v)| (k.clone(), json!(v.to_string()))).collect::<serde_json::Map<_, _>>(),
        "shows": env.shows.iter().map(|(e, v)| json!({"expr": e, "value": v.to_string()})).collect::<Vec<_>>(),
        "checks": env.checks.iter().map(|c| json!({
            "statement": c.statement,
            "line": c.line,
            "col": c.col,
            "residual": c.residual.json(),
            "pass": c.pass,
        })).collect::<Vec<_>>(),
        "pass": pass,
    });
    Ok(Outcome { pass, text, json })
}

/// First coordinate triple with a nonzero Jacobiator, if any.
fn jacobi_witness(pi: &MultiVector, env: &Env) -> Result<Option<(Vec<String>, MultiVector)>, String> {
    let base = env.base();
    let coords: Vec<String> = base.coordinates().iter().map(|&i| base.var(i).name.clone()).collect();
    let vars: Vec<MultiVector> = coords
        .iter()
        .map(|c| kernel(MultiVector::var(&env.sctx, c)))
        .collect::<Result<_, _>>()?;
    for i in 0..vars.len() {
        for j in i..vars.len() {
            for k in j..vars.len() {
                let r = kernel(jacobiator(pi, &vars[i], &vars[j], &vars[k]))?;
                if !r.is_zero() {
                    return Ok(Some((vec![coords[i].clone(), coords[j].clone(), coords[k].clone()], r)));
                }
            }
        }
    }
    Ok(None)
}

pub fn jacobi(env: &Env) -> CmdResult {
    let (_, pi) = binding(env, &["pi"])?;
    let witness = jacobi_witness(pi, env)?;
    let square = kernel(bvkit::multivector::schouten(pi, pi))?;
    let pass = witness.is_none();
    let agree = pass == square.is_zero();
    let (w, r) = match &witness {
        Some((w, r)) => (w.clone(), mv_json(r)),
        None => (vec![], mv_json(&MultiVector::zero(&env.sctx))),
    };
    let mut text = format!("Jacobi: {}", verdict(pass));
    if let Some((w, r)) = &witness {
        text.push_str(&format!(" at ({}): {}", w.join(", "), r.value()));
    }
    text.push_str(&format!("\n[pi, pi] = {}\n", square.value()));
    if !agree {
        text.push_str("coordinate Jacobiators and [pi, pi] disagree\n");
    }
    let json = json!({
        "identity": "Jacobi",
        "witness": w,
        "residual": r,
        "schouten_square_zero": square.is_zero(),
        "pass": pass && agree,
    });
    Ok(Outcome { pass: pass && agree, text, json })
}

pub fn mc(env: &Env) -> CmdResult {
    let (name, f) = binding(env, &["F", "pi"])?;
    let r = kernel(mc_residual(&McElement::MultiVector(f.clone())))?;
    let pass = r.is_zero();
    let McElement::MultiVector(rv) = &r else { unreachable!("same host") };
    let witness = if pass {
        vec![]
    } else if f.arity_decompose().iter().all(|(k, _)| *k == 2) {
        jacobi_witness(f, env)?.map(|(w, _)| w).unwrap_or_default()
    } else {
        vec![format!("[{name}, {name}]")]
    };
    let mut text = format!("MC [{name}, {name}] = 0: {}\n", verdict(pass));
    if !pass {
        text.push_str(&format!("residual {}\n", rv.value()));
        if !witness.is_empty() {
            text.push_str(&format!("witness {}\n", witness.join(", ")));
        }
    }
    let json = json!({"identity": "MC", "witness": witness, "residual": mv_json(rv), "pass": pass});
    Ok(Outcome { pass, text, json })
}

fn action(env: &Env) -> Result<&MultiVector, String> {
    binding(env, &["S"]).map(|(_, s)| s)
}

fn hbar_name(env: &Env) -> Option<String> {
    let base = env.base();
    if base.get("hbar").is_some_and(|i| base.is_param(i)) {
        return Some("hbar".into());
    }
    match base.params().as_slice() {
        [p] => Some(base.var(*p).name.clone()),
        _ => None,
    }
}

fn master(identity: &str, residual: Poly) -> Outcome {
    let pass = residual.is_zero();
    Outcome {
        pass,
        text: format!("{identity}: {}\nresidual {residual}\n", verdict(pass)),
        json: json!({"identity": identity, "witness": ["S"], "residual": poly_json(&residual), "pass": pass}),
    }
}

pub fn cme(env: &Env) -> CmdResult {
    let s = action(env)?;
    let bv = kernel(BvSpace::new(&env.sctx, None))?;
    Ok(master("CME", kernel(bv.cme_residual(s.value()))?))
}

pub fn qme(env: &Env) -> CmdResult {
    let s = action(env)?;
    let h = hbar_name(env).ok_or("qme needs a parameter named 'hbar'")?;
    let mut bv = kernel(BvSpace::new(&env.sctx, Some(&h)))?;
    if let Some(phi) = env.function("phi") {
        bv = kernel(bv.with_volume(&kernel(phi.to_base())?))?;
    }
    Ok(master("QME", kernel(bv.qme_residual(s.value()))?))
}

fn report_lines(reports: &[IdentityReport]) -> String {
    let mut text = String::new();
    for r in reports {
        text.push_str(&format!("{} (n = {}): {}", r.identity, r.n, verdict(r.pass)));
        if !r.pass {
            text.push_str(&format!(" at ({})", r.witness.join(", ")));
        }
        text.push('\n');
    }
    text
}

pub fn linf(env: &Env, cfg: &Config) -> CmdResult {
    let (_, f) = binding(env, &["F", "pi"])?;
    let lam = derived_brackets(f, cfg.cap);
    let enc = |m: &MultiVector| mv_json(m);
    let mut reports = Vec::new();
    for n in 1..=cfg.cap {
        let probes = if n <= 2 { lam.monomial_probes(cfg.probe_degree) } else { lam.coordinate_probes() };
        reports.push(kernel(linf_probe(&lam, n, &probes, enc))?);
    }
    let pass = reports.iter().all(|r| r.pass);
    let text = report_lines(&reports);
    Ok(Outcome { pass, text, json: json!(reports) })
}

pub fn derived(env: &Env, cfg: &Config) -> CmdResult {
    let (_, f) = binding(env, &["F", "pi"])?;
    let lam = derived_brackets(f, cfg.cap.max(2));
    let probes = lam.coordinate_probes();
    let l0 = lam.curvature();
    let mut text = format!("lambda0 = {}\n", l0.value());
    let mut l1 = Vec::new();
    for (n, a) in &probes {
        let v = kernel(lam.lambda(std::slice::from_ref(a)))?;
        text.push_str(&format!("lambda1({n}) = {}\n", v.value()));
        l1.push(json!({"arg": n, "value": v.value().to_string()}));
    }
    let mut l2 = Vec::new();
    for i in 0..probes.len() {
        for j in i..probes.len() {
            let v = kernel(lam.lambda(&[probes[i].1.clone(), probes[j].1.clone()]))?;
            if v.is_zero() {
                continue;
            }
            text.push_str(&format!("lambda2({}, {}) = {}\n", probes[i].0, probes[j].0, v.value()));
            l2.push(json!({"args": [probes[i].0, probes[j].0], "value": v.value().to_string()}));
        }
    }
    let json = json!({
        "identity": "derived",
        "lambda0": l0.value().to_string(),
        "flat": l0.is_zero(),
        "lambda1": l1,
        "lambda2": l2,
        "pass": true,
    });
    Ok(Outcome { pass: true, text, json })
}

pub fn star_assoc(env: &Env, cfg: &Config) -> CmdResult {
    let (_, pi) = binding(env, &["pi"])?;
    let eps = env.deformation_parameter().ok_or("star-assoc needs a parameter named 'eps'")?;
    let p = kernel(env.constant_poisson(pi))?;
    let star = kernel(StarProduct::new(&p, &eps))?;
    let base = env.base();
    let coords = base.coordinates();
    let mono: Vec<Poly> = monomials_up_to(base, &coords, 2)
        .into_iter()
        .map(|m| Poly::term(base, m, Scalar::one()))
        .collect();
    let mut triples = Vec::new();
    for f in &mono {
        for g in &mono {
            for h in &mono {
                triples.push((f.clone(), g.clone(), h.clone()));
            }
        }
    }
    let mut sampler = PolySampler::new(cfg.seed);
    for _ in 0..cfg.probes {
        let mut draw = || sampler.poly(base, &coords, 3, None, 3);
        triples.push((draw(), draw(), draw()));
    }
    let total = triples.len();
    let mut failure = None;
    for (f, g, h) in triples {
        let r = kernel(star.associator(&f, &g, &h))?;
        if !r.is_zero() {
            failure = Some((vec![f.to_string(), g.to_string(), h.to_string()], r));
            break;
        }
    }
    let pass = failure.is_none();
    let order = star.order();
    let mut text = format!("star associativity mod {eps}^{}: {} ({total} triples)\n", order + 1, verdict(pass));
    let (w, r) = match failure {
        Some((w, r)) => {
            text.push_str(&format!("witness ({}): {r}\n", w.join(", ")));
            (w, poly_json(&r))
        }
        None => (vec![], poly_json(&Poly::zero(base))),
    };
    let json = json!({"identity": "star_assoc", "order": order, "n": total, "witness": w, "residual": r, "pass": pass});
    Ok(Outcome { pass, text, json })
}

pub fn koszul(env: &Env) -> CmdResult {
    let pi = match env.function("pi") {
        Some(p) => p.clone(),
        None => MultiVector::zero(&env.sctx),
    };
    let model = kernel(koszul_build(&pi, &env.constraints))?;
    let json = kernel(model.report())?;
    let pass = json["pass"].as_bool().unwrap_or(false);
    let central = json["central"].as_bool().unwrap_or(false);
    let mut text = format!(
        "Koszul MC [F, F] = 0: {} ({} constraint{})\ncentral: {}\n",
        verdict(pass),
        env.constraints.len(),
        if env.constraints.len() == 1 { "" } else { "s" },
        if central { "yes" } else { "no" },
    );
    if !pass {
        text.push_str(&format!("residual {}\n", kernel(model.mc_residual())?.value()));
    }
    if let Some(w) = json["witness"].as_array().filter(|w| !w.is_empty()) {
        let w: Vec<&str> = w.iter().filter_map(Value::as_str).collect();
        text.push_str(&format!("noncentral: {}\n", w.join(", ")));
    }
    Ok(Outcome { pass, text, json })
}

pub fn conormal(env: &Env, cfg: &Config, taylor: u32) -> CmdResult {
    let (_, pi) = binding(env, &["pi"])?;
    if env.split.is_empty() {
        return Err("conormal needs a 'split' statement naming the defining coordinates".into());
    }
    let split: Vec<&str> = env.split.iter().map(String::as_str).collect();
    let model = kernel(conormal_build(pi, &split, taylor))?;
    let report = kernel(model.report(cfg.cap))?;
    let pass = report.pass();
    let mut text = format!(
        "conormal of {{{} = 0}} (Taylor order {taylor}): {}\nlambda0 = {}\ncoisotropic: {}\n[F, F] = 0: {}\n",
        split.join(" = "),
        verdict(pass),
        report.lambda0.value(),
        if report.flat { "yes" } else { "no" },
        if report.mc { "yes" } else { "no" },
    );
    for (a, v) in &report.lambda1 {
        text.push_str(&format!("lambda1({a}) = {}\n", v.value()));
    }
    for (a, b, v) in &report.lambda2 {
        if !v.is_zero() {
            text.push_str(&format!("lambda2({a}, {b}) = {}\n", v.value()));
        }
    }
    text.push_str(&report_lines(&report.linf));
    Ok(Outcome { pass, text, json: report.to_json() })
}
