use bvkit::hochschild::{word, Cochain};
use bvkit::homotopy::{ainf_from_mc, mc_residual, McElement};
use bvkit::multivector::{bivector_from_matrix, derived_poisson};
use bvkit::quantize::{
    conormal_build, conormal_linfty, koszul_build, koszul_mc_residual, ConstantPoisson, StarProduct,
};
use bvkit::random::PolySampler;
use bvkit::{Ctx, GradedContext, MultiVector, Poly, Scalar, ShiftedContext, Variable};

fn phase_space(pairs: usize, order: u32) -> (Ctx, ConstantPoisson) {
    let mut vars = Vec::new();
    for k in 1..=pairs {
        vars.push(Variable::new(format!("x{k}"), 0));
        vars.push(Variable::new(format!("y{k}"), 0));
    }
    vars.push(Variable::param("eps", Some(order)));
    let c = GradedContext::new(vars).unwrap();
    let names: Vec<(String, String)> = (1..=pairs).map(|k| (format!("x{k}"), format!("y{k}"))).collect();
    let refs: Vec<(&str, &str)> = names.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let p = ConstantPoisson::standard(&c, &refs).unwrap();
    (c, p)
}

/// Direct expansion Σ_k (ε/2)^k/k! π^{i1j1}…π^{ikjk} ∂_{i1..ik} f ∂_{j1..jk} g.
fn direct_moyal(f: &Poly, g: &Poly, p: &ConstantPoisson, order: u32) -> Poly {
    let c = p.context();
    let names: Vec<String> = p.coords().iter().map(|&i| c.var(i).name.clone()).collect();
    let n = names.len();
    let eps = Poly::var(c, "eps").unwrap();
    let mut out = f * g;
    // partial results indexed by multi-index sequences
    let mut layer: Vec<(Scalar, Poly, Poly)> = vec![(Scalar::one(), f.clone(), g.clone())];
    let mut factor = Poly::one(c);
    for k in 1..=order {
        let mut next = Vec::new();
        for (w, a, b) in &layer {
            for i in 0..n {
                for j in 0..n {
                    let m = &p.matrix()[i][j];
                    if m.is_zero() {
                        continue;
                    }
                    let da = a.partial(&names[i]).unwrap();
                    let db = b.partial(&names[j]).unwrap();
                    if da.is_zero() || db.is_zero() {
                        continue;
                    }
                    next.push((w * m, da, db));
                }
            }
        }
        layer = next;
        factor = (&factor * &eps).scale(&Scalar::ratio(1, 2 * k as i64));
        for (w, a, b) in &layer {
            out = &out + &(&factor * &(a * b)).scale(w);
        }
    }
    out
}

#[test]
fn moyal_matches_direct_expansion() {
    let mut s = PolySampler::new(41);
    for pairs in 1..=3 {
        let (c, p) = phase_space(pairs, 4);
        let star = StarProduct::new(&p, "eps").unwrap();
        let coords = p.coords().to_vec();
        for _ in 0..20 {
            let f = s.poly(&c, &coords, 3, None, 4);
            let g = s.poly(&c, &coords, 3, None, 4);
            assert_eq!(star.star(&f, &g).unwrap(), direct_moyal(&f, &g, &p, 4));
        }
    }
}

#[test]
fn moyal_is_associative_modulo_order() {
    let mut s = PolySampler::new(42);
    for pairs in 1..=3 {
        for order in 1..=4 {
            let (c, p) = phase_space(pairs, order);
            let star = StarProduct::new(&p, "eps").unwrap();
            let coords = p.coords().to_vec();
            for _ in 0..6 {
                let f = s.poly(&c, &coords, 3, None, 3);
                let g = s.poly(&c, &coords, 3, None, 3);
                let h = s.poly(&c, &coords, 3, None, 3);
                assert!(star.associator(&f, &g, &h).unwrap().is_zero(), "pairs={pairs} N={order}");
            }
        }
    }
}

#[test]
fn associativity_example() {
    let (c, p) = phase_space(1, 4);
    let star = StarProduct::new(&p, "eps").unwrap();
    let x = Poly::var(&c, "x1").unwrap();
    let y = Poly::var(&c, "y1").unwrap();
    assert!(star.associator(&x, &y, &(&x * &x)).unwrap().is_zero());
    assert_eq!(star.star(&Poly::one(&c), &y).unwrap(), y);
}

#[test]
fn commutator_is_the_derived_bracket() {
    let mut s = PolySampler::new(43);
    for pairs in 1..=2 {
        let (c, p) = phase_space(pairs, 3);
        let star = StarProduct::new(&p, "eps").unwrap();
        let sc = ShiftedContext::new(&c, 1).unwrap();
        let pi = p.bivector(&sc).unwrap();
        let eps = Poly::var(&c, "eps").unwrap();
        let coords = p.coords().to_vec();
        for _ in 0..30 {
            let f = s.poly(&c, &coords, 3, None, 3);
            let g = s.poly(&c, &coords, 3, None, 3);
            let comm = &star.star(&f, &g).unwrap() - &star.star(&g, &f).unwrap();
            let first = comm.filter_terms(|m| m.exp(c.index_of("eps").unwrap()) == 1);
            let fm = MultiVector::from_base(&sc, &f).unwrap();
            let gm = MultiVector::from_base(&sc, &g).unwrap();
            let pb = derived_poisson(&pi, &fm, &gm).unwrap().to_base().unwrap();
            assert_eq!(first, &eps * &pb);
        }
    }
}

#[test]
fn moyal_tail_is_maurer_cartan() {
    for pairs in 1..=2 {
        let (_, p) = phase_space(pairs, 4);
        let star = StarProduct::new(&p, "eps").unwrap();
        assert!(mc_residual(&star.as_mc()).unwrap().is_zero());
        let rep = ainf_from_mc(star.tail()).unwrap();
        assert!(rep.is_ainf() && rep.flat);
        assert_eq!(rep.components.iter().map(|(k, _)| *k).collect::<Vec<_>>(), vec![2]);
        assert!(rep.relation(3).is_zero());
    }
}

#[test]
fn corrupted_tail_is_caught() {
    let (c, p) = phase_space(1, 4);
    let star = StarProduct::new(&p, "eps").unwrap();
    let eps2 = &Poly::var(&c, "eps").unwrap() * &Poly::var(&c, "eps").unwrap();
    let dx2 = word(&c, &[("x1", 2)]).unwrap();
    let dy2 = word(&c, &[("y1", 2)]).unwrap();
    let bump = Cochain::term(&c, eps2, vec![dx2, dy2]);
    let bad = star.tail() + &bump;
    assert!(!mc_residual(&McElement::Cochain(bad.clone())).unwrap().is_zero());
    assert!(matches!(ainf_from_mc(&bad), Err(bvkit::Error::NotMaurerCartan { .. })));
}

fn so3() -> (bvkit::SCtx, MultiVector) {
    let c = GradedContext::from_pairs(&[("x1", 0), ("x2", 0), ("x3", 0)]).unwrap();
    let sc = ShiftedContext::new(&c, 1).unwrap();
    let v = |n: &str| Poly::var(&c, n).unwrap();
    let z = Poly::zero(&c);
    let m = vec![
        vec![z.clone(), v("x3"), -&v("x2")],
        vec![-&v("x3"), z.clone(), v("x1")],
        vec![v("x2"), -&v("x1"), z],
    ];
    let pi = bivector_from_matrix(&sc, &["x1", "x2", "x3"], &m).unwrap();
    (sc, pi)
}

#[test]
fn koszul_residual_matches_centrality() {
    let (sc, pi) = so3();
    let c = sc.base().clone();
    let v = |n: &str| Poly::var(&c, n).unwrap();
    let casimir = &(&(&v("x1") * &v("x1")) + &(&v("x2") * &v("x2"))) + &(&v("x3") * &v("x3"));
    let zero = MultiVector::zero(&sc);
    let cases = vec![
        (pi.clone(), vec![casimir.clone()], true),
        (pi.clone(), vec![v("x1")], false),
        (pi.clone(), vec![casimir.clone(), v("x2")], false),
        (pi.clone(), vec![], true),
        (zero.clone(), vec![v("x1"), &v("x2") * &v("x3")], true),
        (zero, vec![casimir], true),
    ];
    for (p, phis, central) in cases {
        let m = koszul_build(&p, &phis).unwrap();
        let r = koszul_mc_residual(&m).unwrap();
        assert_eq!(r.is_zero(), central, "{phis:?}");
        assert_eq!(m.centrality_defects().unwrap().is_empty(), central);
        assert_eq!(m.f().degree(), if m.f().is_zero() { None } else { Some(2) });
    }
    let odd = GradedContext::from_pairs(&[("x", 0), ("t", 1)]).unwrap();
    let so = ShiftedContext::new(&odd, 1).unwrap();
    let t = Poly::var(&odd, "t").unwrap();
    assert!(koszul_build(&MultiVector::zero(&so), &[t]).is_err());
}

fn r4() -> (bvkit::SCtx, MultiVector) {
    let c = GradedContext::from_pairs(&[("x1", 0), ("x2", 0), ("y1", 0), ("y2", 0)]).unwrap();
    let p = ConstantPoisson::standard(&c, &[("x1", "y1"), ("x2", "y2")]).unwrap();
    let sc = ShiftedContext::new(&c, 1).unwrap();
    let pi = p.bivector(&sc).unwrap();
    (sc, pi)
}

#[test]
fn conormal_lagrangian_and_non_coisotropic() {
    let (_, pi) = r4();
    let lag = conormal_linfty(&pi, &["y1", "y2"], 3, 3).unwrap();
    assert!(lag.flat && lag.mc && lag.pass(), "{}", lag.to_json());
    let bad = conormal_build(&pi, &["x1", "y1"], 3).unwrap();
    assert!(!bad.is_coisotropic());
    assert!(!bad.report(2).unwrap().pass());
}

#[test]
fn conormal_of_zero_is_trivial() {
    let (sc, _) = r4();
    let r = conormal_linfty(&MultiVector::zero(&sc), &["y1"], 3, 3).unwrap();
    assert!(r.lambda0.is_zero());
    assert!(r.lambda1.iter().all(|(_, v)| v.is_zero()));
    assert!(r.lambda2.iter().all(|(_, _, v)| v.is_zero()));
}

#[test]
fn conormal_of_nonlinear_coisotropic() {
    // π = z·x'y' on ℝ³; C = {y = 0} is coisotropic, C = {x = y = 0} is not
    let c = GradedContext::from_pairs(&[("x", 0), ("y", 0), ("z", 0)]).unwrap();
    let sc = ShiftedContext::new(&c, 1).unwrap();
    let v = |n: &str| Poly::var(sc.ext(), n).unwrap();
    let pi = MultiVector::new(&sc, &v("z") * &(&v("x'") * &v("y'"))).unwrap();
    let good = conormal_linfty(&pi, &["y"], 3, 3).unwrap();
    assert!(good.flat && good.pass());
    let bad = conormal_build(&pi, &["x", "y"], 3).unwrap();
    assert!(!bad.is_coisotropic());
}
