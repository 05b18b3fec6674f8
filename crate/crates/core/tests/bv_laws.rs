use bvkit::berezin::{
    apply_vector_field, berezin_decompose, berezin_integral, divergence, exp_nilpotent, BerezinForm,
    OddSpace,
};
use bvkit::bv::BvSpace;
use bvkit::random::{monomials_up_to, PolySampler};
use bvkit::{GradedContext, MultiVector, Poly, Scalar, ShiftedContext, Variable};

fn bv_space(k: i64) -> BvSpace {
    let c = GradedContext::new(vec![
        Variable::new("x", 0),
        Variable::new("y", 0),
        Variable::new("c", 1),
        Variable::param("hbar", Some(3)),
    ])
    .unwrap();
    BvSpace::new(&ShiftedContext::new(&c, k).unwrap(), Some("hbar")).unwrap()
}

fn coords(b: &BvSpace) -> Vec<usize> {
    let ext = b.context().ext();
    (0..ext.len()).filter(|&i| !ext.is_param(i)).collect()
}

#[test]
fn laplacian_squares_to_zero_with_volume() {
    let mut s = PolySampler::new(21);
    for k in [-1, 1] {
        let b0 = bv_space(k);
        let ext = b0.context().ext().clone();
        for _ in 0..40 {
            let phi = s.poly(b0.context().base(), &[0, 1], 3, Some(0), 3);
            let b = bv_space(k).with_volume(&phi).unwrap();
            let f = s.poly(&ext, &coords(&b), 4, None, 5);
            let dd = b.bv_laplacian(&b.bv_laplacian(&f).unwrap()).unwrap();
            assert!(dd.is_zero(), "k={k} phi={phi} f={f}");
        }
    }
}

#[test]
fn laplacian_of_products() {
    let mut s = PolySampler::new(22);
    for k in [-1, 1] {
        let b = bv_space(k);
        let ext = b.context().ext().clone();
        for _ in 0..80 {
            let x = s.homogeneous(&ext, &coords(&b), 3, 3);
            let y = s.poly(&ext, &coords(&b), 3, None, 3);
            assert!(b.delta_xy_residual(&x, &y).unwrap().is_zero(), "k={k} X={x} Y={y}");
        }
    }
}

#[test]
fn omega_square_is_half_bracket_with_qme() {
    let mut s = PolySampler::new(23);
    let b = bv_space(-1);
    let ext = b.context().ext().clone();
    let all: Vec<usize> = (0..ext.len()).collect();
    for _ in 0..40 {
        let act = s.poly(&ext, &all, 4, Some(0), 4);
        let x = s.poly(&ext, &coords(&b), 3, None, 3);
        let q = b.qme_residual(&act).unwrap();
        let expect = b.context().bracket(&q, &x).scale(&Scalar::ratio(1, 2));
        assert_eq!(b.omega_square_residual(&act, &x).unwrap(), expect, "S={act}");
    }
}

#[test]
fn quantum_master_solutions_give_square_zero_omega() {
    let b = bv_space(-1);
    let ext = b.context().ext().clone();
    let v = |n: &str| Poly::var(&ext, n).unwrap();
    // infinitesimal rotation with a ghost, and a translation
    let rot = &v("c") * &(&(&v("y") * &v("x'")) - &(&v("x") * &v("y'")));
    let tr = &v("c") * &v("x'");
    let probes = monomials_up_to(&ext, &coords(&b), 3);
    for s in [rot, tr] {
        assert!(b.qme_residual(&s).unwrap().is_zero());
        for m in &probes {
            let x = Poly::term(&ext, m.clone(), Scalar::one());
            assert!(b.omega_square_residual(&s, &x).unwrap().is_zero());
        }
    }
}

fn random_form(s: &mut PolySampler, space: &bvkit::berezin::OddCtx) -> BerezinForm {
    let dual = space.dual().clone();
    let all: Vec<usize> = (0..dual.len()).collect();
    let mut value = s.poly(&dual, &all, dual.len() as u32, None, 4);
    let top = Poly::term(&dual, space.top(), s.coeff());
    value = &value.filter_terms(|m| m != &space.top()) + &top;
    BerezinForm::new(space, value).unwrap()
}

#[test]
fn divergence_adjoint_identity_exhaustive() {
    let mut s = PolySampler::new(24);
    for n in 1..=4 {
        let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let space = OddSpace::from_names(&refs).unwrap();
        let sc = ShiftedContext::new(space.context(), -1).unwrap();
        let all: Vec<usize> = (0..sc.ext().len()).collect();
        let basis = space.basis_polys();
        for _ in 0..10 {
            let mu = random_form(&mut s, &space);
            let x = MultiVector::new(&sc, s.poly(sc.ext(), &all, n as u32 + 1, None, 4))
                .unwrap()
                .arity_component(1);
            let div = divergence(&x, &mu).unwrap();
            for f in &basis {
                let lhs = berezin_integral(&apply_vector_field(&x, f).unwrap(), &mu).unwrap();
                let rhs = berezin_integral(&(f * &div), &mu).unwrap();
                assert_eq!(lhs, -&rhs, "n={n} X={} f={f}", x.value());
            }
            let scaled = divergence(&x, &mu.scale(&Scalar::from_int(5))).unwrap();
            assert_eq!(scaled, div);
        }
    }
}

#[test]
fn divergence_of_rescaled_field() {
    let mut s = PolySampler::new(25);
    let space = OddSpace::from_names(&["a", "b", "c"]).unwrap();
    let sc = ShiftedContext::new(space.context(), -1).unwrap();
    let rho = space.canonical();
    let ext = sc.ext().clone();
    let all: Vec<usize> = (0..ext.len()).collect();
    for _ in 0..30 {
        let g = s.poly(space.context(), &[0, 1, 2], 3, Some(2), 3);
        let g = &g + &Poly::from_int(space.context(), 1);
        let x = MultiVector::new(&sc, s.poly(&ext, &all, 3, Some(0), 3))
            .unwrap()
            .arity_component(1);
        let gx = &MultiVector::from_base(&sc, &g).unwrap() * &x;
        // even g, even X: div(gX) = g div X + X(g)
        let lhs = divergence(&gx, &rho).unwrap();
        let rhs = &(&g * &divergence(&x, &rho).unwrap()) + &apply_vector_field(&x, &g).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn decomposition_round_trips() {
    let mut s = PolySampler::new(26);
    let space = OddSpace::from_names(&["a", "b", "c", "d"]).unwrap();
    let rho = space.canonical();
    for _ in 0..30 {
        let mu = random_form(&mut s, &space);
        let (c, sigma) = berezin_decompose(&mu, &rho).unwrap();
        assert!(sigma.constant_term().is_zero());
        assert_eq!(rho.act(&exp_nilpotent(&sigma).scale(&c)).unwrap(), mu);
    }
}
