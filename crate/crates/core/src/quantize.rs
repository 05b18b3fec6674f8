//! Moyal quantization of constant Poisson structures, the Koszul model for
//! central constraints, and the conormal derived-bracket model of a coisotropic
//! submanifold.

use std::collections::BTreeMap;

use serde_json::json;

use crate::context::{Ctx, GradedContext, Variable};
use crate::error::{Error, Result};
use crate::hochschild::{Cochain, Word};
use crate::homotopy::{linf_probe, DerivedBrackets, IdentityReport, McElement};
use crate::multivector::{
    bivector_from_matrix, derived_poisson, legendre, schouten, MultiVector, SCtx, ShiftedContext,
};
use crate::poly::{Monomial, Poly};
use crate::scalar::Scalar;

/// A constant antisymmetric matrix on degree-0 coordinates.
#[derive(Clone, Debug)]
pub struct ConstantPoisson {
    ctx: Ctx,
    coords: Vec<usize>,
    matrix: Vec<Vec<Scalar>>,
}

impl ConstantPoisson {
    pub fn new(ctx: &Ctx, coords: &[&str], matrix: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = coords.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("matrix shape does not match coordinates".into()));
        }
        let mut idx = Vec::with_capacity(n);
        for c in coords {
            let i = ctx.index_of(c)?;
            if ctx.is_param(i) {
                return Err(Error::InvalidParameter(format!("'{c}' is a parameter")));
            }
            if ctx.is_odd(i) {
                return Err(Error::OddVariable(c.to_string()));
            }
            if ctx.degree(i) != 0 {
                return Err(Error::DegreeMismatch(format!("'{c}' must have degree 0")));
            }
            idx.push(i);
        }
        for i in 0..n {
            for j in 0..n {
                if matrix[i][j] != -matrix[j][i].clone() {
                    return Err(Error::NotAntisymmetric);
                }
            }
        }
        Ok(ConstantPoisson {
            ctx: ctx.clone(),
            coords: idx,
            matrix,
        })
    }

    /// The standard symplectic matrix on pairs `(x_i, y_i)`.
    pub fn standard(ctx: &Ctx, pairs: &[(&str, &str)]) -> Result<Self> {
        let coords: Vec<&str> = pairs.iter().flat_map(|(x, y)| [*x, *y]).collect();
        let n = coords.len();
        let mut m = vec![vec![Scalar::zero(); n]; n];
        for k in 0..pairs.len() {
            m[2 * k][2 * k + 1] = Scalar::one();
            m[2 * k + 1][2 * k] = Scalar::from_int(-1);
        }
        Self::new(ctx, &coords, m)
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Scalar::is_zero)
    }

    /// The bivector over `sctx` (base = this context) whose derived bracket reproduces the matrix.
    pub fn bivector(&self, sctx: &SCtx) -> Result<MultiVector> {
        let names: Vec<&str> = self.coords.iter().map(|&i| self.ctx.var(i).name.as_str()).collect();
        let m: Vec<Vec<Poly>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|c| Poly::constant(sctx.base(), c.clone())).collect())
            .collect();
        bivector_from_matrix(sctx, &names, &m)
    }
}

/// The Moyal product `m = μ + B` with `B = Σ_{k≥1} (ε/2)^k/k! P^k`,
/// `P = Σ π^{ij} ∂_i ⊗ ∂_j`, truncated at the order declared for `ε`.
#[derive(Clone, Debug)]
pub struct StarProduct {
    poisson: ConstantPoisson,
    eps: usize,
    order: u32,
    tail: Cochain,
}

impl StarProduct {
    pub fn new(poisson: &ConstantPoisson, eps: &str) -> Result<Self> {
        let ctx = poisson.context();
        let e = ctx.index_of(eps)?;
        if !ctx.is_param(e) {
            return Err(Error::InvalidParameter(format!("'{eps}' is not a parameter")));
        }
        let order = ctx
            .var(e)
            .truncation
            .ok_or_else(|| Error::InvalidParameter(format!("'{eps}' needs a truncation order")))?;
        let tail = moyal_tail(poisson, e, order);
        Ok(StarProduct {
            poisson: poisson.clone(),
            eps: e,
            order,
            tail,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn eps(&self) -> usize {
        self.eps
    }

    pub fn poisson(&self) -> &ConstantPoisson {
        &self.poisson
    }

    /// `B`, the part of the product of positive order in `ε`.
    pub fn tail(&self) -> &Cochain {
        &self.tail
    }

    /// `μ + B`.
    pub fn cochain(&self) -> Cochain {
        &Cochain::product(self.poisson.context()) + &self.tail
    }

    pub fn star(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        let ctx = self.poisson.context();
        for p in [f, g] {
            if !GradedContext::same(p.context(), ctx) {
                return Err(Error::ContextMismatch);
            }
            if let Some(i) = (0..ctx.len()).find(|&i| ctx.is_odd(i) && p.uses_var(i)) {
                return Err(Error::OddVariable(ctx.var(i).name.clone()));
            }
        }
        self.cochain().eval(&[f.clone(), g.clone()])
    }

    /// `B` as a Maurer–Cartan element of the multidifferential DGLA.
    pub fn as_mc(&self) -> McElement {
        McElement::Cochain(self.tail.clone())
    }

    /// `(f⋆g)⋆h - f⋆(g⋆h)`.
    pub fn associator(&self, f: &Poly, g: &Poly, h: &Poly) -> Result<Poly> {
        let l = self.star(&self.star(f, g)?, h)?;
        let r = self.star(f, &self.star(g, h)?)?;
        Ok(&l - &r)
    }
}

fn moyal_tail(p: &ConstantPoisson, eps: usize, order: u32) -> Cochain {
    let ctx = p.context();
    let len = ctx.len();
    let single = |i: usize| {
        let mut w = Monomial::one(len);
        w.0[i] = 1;
        w
    };
    let mut gen: BTreeMap<(Word, Word), Scalar> = BTreeMap::new();
    for (a, &i) in p.coords.iter().enumerate() {
        for (b, &j) in p.coords.iter().enumerate() {
            if !p.matrix[a][b].is_zero() {
                gen.insert((single(i), single(j)), p.matrix[a][b].clone());
            }
        }
    }
    let mut out = Cochain::zero(ctx);
    let mut power: BTreeMap<(Word, Word), Scalar> = BTreeMap::new();
    power.insert((Monomial::one(len), Monomial::one(len)), Scalar::one());
    let mut weight = Scalar::one();
    for k in 1..=order {
        let mut next: BTreeMap<(Word, Word), Scalar> = BTreeMap::new();
        for ((u, v), c) in &power {
            for ((a, b), d) in &gen {
                let (ua, _) = u.mul(a, ctx).expect("even words");
                let (vb, _) = v.mul(b, ctx).expect("even words");
                let e = next.entry((ua, vb)).or_insert_with(Scalar::zero);
                *e += &(c * d);
            }
        }
        next.retain(|_, c| !c.is_zero());
        power = next;
        weight = &weight * &Scalar::ratio(1, 2 * k as i64);
        let mut eps_k = Monomial::one(len);
        eps_k.0[eps] = k;
        for ((u, v), c) in &power {
            let coeff = Poly::term(ctx, eps_k.clone(), c * &weight);
            out = &out + &Cochain::term(ctx, coeff, vec![u.clone(), v.clone()]);
        }
    }
    out
}

pub fn moyal_star(f: &Poly, g: &Poly, poisson: &ConstantPoisson, eps: &str) -> Result<Poly> {
    StarProduct::new(poisson, eps)?.star(f, g)
}

pub fn star_as_mc(poisson: &ConstantPoisson, eps: &str) -> Result<McElement> {
    Ok(StarProduct::new(poisson, eps)?.as_mc())
}

pub fn koszul_mc_residual(model: &KoszulModel) -> Result<Poly> {
    Ok(model.mc_residual()?.into_value())
}

pub fn ghost_name(i: usize) -> String {
    format!("mu{}", i + 1)
}

/// `F = Q + π` on `M × ℝ^k[-1]` with `Q = Σ φ^i μ_i'`, i.e. `δμ^i = φ^i`.
#[derive(Clone, Debug)]
pub struct KoszulModel {
    pi_base: MultiVector,
    constraints: Vec<Poly>,
    sctx: SCtx,
    ghosts: Vec<usize>,
    q: MultiVector,
    pi: MultiVector,
}

impl KoszulModel {
    pub fn context(&self) -> &SCtx {
        &self.sctx
    }

    pub fn ghosts(&self) -> &[usize] {
        &self.ghosts
    }

    pub fn q(&self) -> &MultiVector {
        &self.q
    }

    pub fn pi(&self) -> &MultiVector {
        &self.pi
    }

    pub fn f(&self) -> MultiVector {
        &self.q + &self.pi
    }

    /// `[F, F]`.
    pub fn mc_residual(&self) -> Result<MultiVector> {
        let f = self.f();
        schouten(&f, &f)
    }

    /// Nonzero `{φ^i, x_j}` as `(i, coordinate name, value)`.
    pub fn centrality_defects(&self) -> Result<Vec<(usize, String, MultiVector)>> {
        let sb = self.pi_base.context();
        let mut out = Vec::new();
        for (i, phi) in self.constraints.iter().enumerate() {
            let phi = MultiVector::from_base(sb, phi)?;
            for j in sb.coordinates() {
                let name = sb.ext().var(j).name.clone();
                let x = MultiVector::var(sb, &name)?;
                let v = derived_poisson(&self.pi_base, &phi, &x)?;
                if !v.is_zero() {
                    out.push((i, name, v));
                }
            }
        }
        Ok(out)
    }

    pub fn report(&self) -> Result<serde_json::Value> {
        let r = self.mc_residual()?;
        let defects = self.centrality_defects()?;
        Ok(json!({
            "identity": "MC",
            "residual": r.to_json_struct(),
            "pass": r.is_zero(),
            "central": defects.is_empty(),
            "witness": defects.iter().map(|(i, x, _)| format!("{{phi{}, {x}}}", i + 1)).collect::<Vec<_>>(),
        }))
    }
}

pub fn koszul_build(pi: &MultiVector, constraints: &[Poly]) -> Result<KoszulModel> {
    let sb = pi.context();
    if sb.shift() != 1 {
        return Err(Error::Invalid("the Koszul model uses shift 1".into()));
    }
    let base = sb.base();
    for phi in constraints {
        if !GradedContext::same(phi.context(), base) {
            return Err(Error::ContextMismatch);
        }
        if phi.parity() != Some(false) {
            return Err(Error::ParityMismatch("constraint".into()));
        }
        for (d, _) in phi.degree_decompose() {
            if d != 0 {
                return Err(Error::DegreeMismatch(format!("constraint of degree {d}")));
            }
        }
    }
    let mut vars = base.vars().to_vec();
    let first = vars.len();
    for i in 0..constraints.len() {
        vars.push(Variable::new(ghost_name(i), -1));
    }
    let combined = GradedContext::new(vars)?;
    let sctx = ShiftedContext::new(&combined, 1)?;
    let ext = sctx.ext();
    let ghosts: Vec<usize> = (first..first + constraints.len()).collect();
    let mut q = Poly::zero(ext);
    for (k, phi) in constraints.iter().enumerate() {
        let anti = sctx.antifield_of(ghosts[k]).expect("ghost coordinate");
        q = &q + &(&phi.embed(ext)? * &Poly::var_index(ext, anti));
    }
    Ok(KoszulModel {
        pi_base: pi.clone(),
        constraints: constraints.to_vec(),
        q: MultiVector::new(&sctx, q)?,
        pi: MultiVector::new(&sctx, pi.value().embed(ext)?)?,
        ghosts,
        sctx,
    })
}

/// `π` Taylor-truncated in the defining coordinates and transported to `N*[1]C`.
#[derive(Clone, Debug)]
pub struct ConormalModel {
    ambient: MultiVector,
    f: MultiVector,
    defining: Vec<String>,
}

impl ConormalModel {
    /// The Taylor-truncated bivector on the ambient space.
    pub fn ambient(&self) -> &MultiVector {
        &self.ambient
    }

    /// The image on `T*[1](N*[1]C)`.
    pub fn f(&self) -> &MultiVector {
        &self.f
    }

    pub fn defining(&self) -> &[String] {
        &self.defining
    }

    pub fn brackets(&self, cap: usize) -> DerivedBrackets {
        DerivedBrackets::new(&self.f, cap)
    }

    pub fn lambda0(&self) -> MultiVector {
        self.f.project()
    }

    pub fn is_coisotropic(&self) -> bool {
        self.lambda0().is_zero()
    }

    pub fn report(&self, cap: usize) -> Result<ConormalReport> {
        let lam = self.brackets(cap);
        let probes = lam.coordinate_probes();
        let lambda1 = probes
            .iter()
            .map(|(n, a)| Ok((n.clone(), lam.lambda(std::slice::from_ref(a))?)))
            .collect::<Result<Vec<_>>>()?;
        let mut lambda2 = Vec::new();
        for i in 0..probes.len() {
            for j in i..probes.len() {
                let v = lam.lambda(&[probes[i].1.clone(), probes[j].1.clone()])?;
                lambda2.push((probes[i].0.clone(), probes[j].0.clone(), v));
            }
        }
        let mc = schouten(&self.f, &self.f)?.is_zero();
        let enc = |m: &MultiVector| serde_json::to_value(m.to_json_struct()).expect("serializable");
        let linf = (1..=cap)
            .map(|n| linf_probe(&lam, n, &probes, enc))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConormalReport {
            lambda0: self.lambda0(),
            flat: self.is_coisotropic(),
            mc,
            lambda1,
            lambda2,
            linf,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConormalReport {
    pub lambda0: MultiVector,
    pub flat: bool,
    pub mc: bool,
    pub lambda1: Vec<(String, MultiVector)>,
    pub lambda2: Vec<(String, String, MultiVector)>,
    pub linf: Vec<IdentityReport>,
}

impl ConormalReport {
    pub fn pass(&self) -> bool {
        self.flat && self.mc && self.linf.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let show = |m: &MultiVector| m.value().to_string();
        json!({
            "identity": "conormal",
            "lambda0": show(&self.lambda0),
            "flat": self.flat,
            "mc": self.mc,
            "lambda1": self.lambda1.iter().map(|(a, v)| json!({"arg": a, "value": show(v)})).collect::<Vec<_>>(),
            "lambda2": self.lambda2.iter().map(|(a, b, v)| json!({"args": [a, b], "value": show(v)})).collect::<Vec<_>>(),
            "linf": self.linf,
            "pass": self.pass(),
        })
    }
}

/// Builds the conormal model of `C = {y = 0}` for the given defining coordinates.
pub fn conormal_build(pi: &MultiVector, defining: &[&str], taylor_order: u32) -> Result<ConormalModel> {
    let sb = pi.context();
    if sb.shift() != 1 {
        return Err(Error::Invalid("the conormal model uses shift 1".into()));
    }
    let base = sb.base();
    let ys: Vec<usize> = defining.iter().map(|n| base.index_of(n)).collect::<Result<_>>()?;
    for &y in &ys {
        if base.degree(y) != 0 || base.is_param(y) {
            return Err(Error::DegreeMismatch(format!("'{}' must be a degree-0 coordinate", base.var(y).name)));
        }
    }
    let fibered = ShiftedContext::with_fibers(base, 1, defining)?;
    let truncated = pi
        .value()
        .embed(fibered.ext())?
        .filter_terms(|m| ys.iter().map(|&y| m.exp(y)).sum::<u32>() <= taylor_order);
    let ambient = MultiVector::new(&fibered, truncated)?;
    let f = legendre(&ambient)?;
    Ok(ConormalModel {
        ambient,
        f,
        defining: defining.iter().map(|s| s.to_string()).collect(),
    })
}

/// Wraps [`conormal_build`] and [`ConormalModel::report`].
pub fn conormal_linfty(pi: &MultiVector, defining: &[&str], taylor_order: u32, cap: usize) -> Result<ConormalReport> {
    conormal_build(pi, defining, taylor_order)?.report(cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> (Ctx, ConstantPoisson) {
        let c = GradedContext::new(vec![
            Variable::new("x", 0),
            Variable::new("y", 0),
            Variable::param("eps", Some(4)),
        ])
        .unwrap();
        let p = ConstantPoisson::standard(&c, &[("x", "y")]).unwrap();
        (c, p)
    }

    #[test]
    fn moyal_on_coordinates() {
        let (c, p) = plane();
        let s = StarProduct::new(&p, "eps").unwrap();
        let (x, y) = (Poly::var(&c, "x").unwrap(), Poly::var(&c, "y").unwrap());
        let half_eps = Poly::var(&c, "eps").unwrap().scale(&Scalar::ratio(1, 2));
        assert_eq!(s.star(&x, &y).unwrap(), &(&x * &y) + &half_eps);
        assert_eq!(s.star(&y, &x).unwrap(), &(&x * &y) - &half_eps);
        assert_eq!(s.star(&x, &Poly::one(&c)).unwrap(), x);
    }

    #[test]
    fn moyal_is_associative_on_example() {
        let (c, p) = plane();
        let s = StarProduct::new(&p, "eps").unwrap();
        let (x, y) = (Poly::var(&c, "x").unwrap(), Poly::var(&c, "y").unwrap());
        assert!(s.associator(&x, &y, &(&x * &x)).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_input() {
        let (c, _) = plane();
        let m = vec![vec![Scalar::zero(), Scalar::one()], vec![Scalar::one(), Scalar::zero()]];
        assert!(matches!(ConstantPoisson::new(&c, &["x", "y"], m), Err(Error::NotAntisymmetric)));
        let c2 = GradedContext::from_pairs(&[("x", 0), ("y", 0)]).unwrap();
        let p2 = ConstantPoisson::standard(&c2, &[("x", "y")]).unwrap();
        assert!(StarProduct::new(&p2, "x").is_err());
    }

    #[test]
    fn zero_poisson_has_zero_tail() {
        let (c, _) = plane();
        let z = ConstantPoisson::new(&c, &["x", "y"], vec![vec![Scalar::zero(); 2]; 2]).unwrap();
        assert!(StarProduct::new(&z, "eps").unwrap().tail().is_zero());
    }
}
