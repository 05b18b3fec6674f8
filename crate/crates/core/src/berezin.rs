//! Berezin integration on purely odd spaces.
//!
//! Functions are polynomials in the odd coordinates `θ_i`; forms are
//! polynomials in dual symbols `θ_i*` with the pairing `⟨θ_I, θ*_J⟩ = δ_IJ` on
//! canonically ordered monomials. Functions act on forms by `⟨f, gμ⟩ = ⟨fg, μ⟩`.

use std::sync::Arc;

use crate::context::{Ctx, GradedContext, Variable};
use crate::error::{Error, Result};
use crate::multivector::MultiVector;
use crate::poly::{Monomial, Poly};
use crate::scalar::Scalar;

pub fn dual_name(name: &str) -> String {
    format!("{name}*")
}

/// A purely odd context together with its dual.
#[derive(Debug)]
pub struct OddSpace {
    ctx: Ctx,
    dual: Ctx,
    odd: Vec<usize>,
}

pub type OddCtx = Arc<OddSpace>;

impl OddSpace {
    pub fn new(ctx: &Ctx) -> Result<OddCtx> {
        let mut odd = Vec::new();
        let mut dual_vars = Vec::new();
        for (i, v) in ctx.vars().iter().enumerate() {
            if v.param {
                dual_vars.push(v.clone());
            } else if v.is_odd() {
                odd.push(i);
                dual_vars.push(Variable::new(dual_name(&v.name), -v.degree));
            } else {
                return Err(Error::EvenVariable(v.name.clone()));
            }
        }
        Ok(Arc::new(OddSpace {
            ctx: ctx.clone(),
            dual: GradedContext::new(dual_vars)?,
            odd,
        }))
    }

    pub fn from_names(names: &[&str]) -> Result<OddCtx> {
        let pairs: Vec<(&str, i64)> = names.iter().map(|n| (*n, 1)).collect();
        Self::new(&GradedContext::from_pairs(&pairs)?)
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn dual(&self) -> &Ctx {
        &self.dual
    }

    pub fn dim(&self) -> usize {
        self.odd.len()
    }

    pub fn top(&self) -> Monomial {
        let mut m = Monomial::one(self.ctx.len());
        for &i in &self.odd {
            m.0[i] = 1;
        }
        m
    }

    /// All `2^N` odd basis monomials `θ_I`.
    pub fn basis(&self) -> Vec<Monomial> {
        let n = self.odd.len();
        (0..1usize << n)
            .map(|mask| {
                let mut m = Monomial::one(self.ctx.len());
                for (b, &i) in self.odd.iter().enumerate() {
                    m.0[i] = ((mask >> b) & 1) as u32;
                }
                m
            })
            .collect()
    }

    pub fn basis_polys(&self) -> Vec<Poly> {
        self.basis()
            .into_iter()
            .map(|m| Poly::term(&self.ctx, m, Scalar::one()))
            .collect()
    }

    fn is_param(&self, i: usize) -> bool {
        self.ctx.is_param(i)
    }

    fn check_fn(&self, f: &Poly) -> Result<()> {
        if GradedContext::same(f.context(), &self.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// The pure form `θ_1* ⋯ θ_N*` normalized so that `∫ θ_1⋯θ_N = 1`.
    pub fn canonical(self: &OddCtx) -> BerezinForm {
        BerezinForm {
            space: self.clone(),
            value: Poly::term(&self.dual, self.top(), Scalar::one()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BerezinForm {
    space: OddCtx,
    value: Poly,
}

impl PartialEq for OddSpace {
    fn eq(&self, other: &Self) -> bool {
        GradedContext::same(&self.ctx, &other.ctx)
    }
}

impl BerezinForm {
    pub fn new(space: &OddCtx, value: Poly) -> Result<Self> {
        if !GradedContext::same(value.context(), &space.dual) {
            return Err(Error::ContextMismatch);
        }
        Ok(BerezinForm {
            space: space.clone(),
            value,
        })
    }

    pub fn value(&self) -> &Poly {
        &self.value
    }

    pub fn space(&self) -> &OddCtx {
        &self.space
    }

    fn top_part(&self) -> Poly {
        let top = self.space.top();
        let odd = &self.space.odd;
        self.value
            .filter_terms(|m| odd.iter().all(|&i| m.exp(i) == top.exp(i)))
    }

    pub fn is_berezinian(&self) -> bool {
        !self.top_part().is_zero()
    }

    pub fn is_pure(&self) -> bool {
        self.is_berezinian() && self.top_part() == self.value
    }

    pub fn scale(&self, c: &Scalar) -> BerezinForm {
        BerezinForm {
            space: self.space.clone(),
            value: self.value.scale(c),
        }
    }

    /// The module action `g · μ`.
    pub fn act(&self, g: &Poly) -> Result<BerezinForm> {
        self.space.check_fn(g)?;
        let mut value = Poly::zero(&self.space.dual);
        for b in self.space.basis() {
            let theta = Poly::term(&self.space.ctx, b.clone(), Scalar::one());
            let c = berezin_integral(&(&theta * g), self)?;
            value = &value + &params_times_dual(&self.space, &c, &b);
        }
        Ok(BerezinForm {
            space: self.space.clone(),
            value,
        })
    }
}

/// Lifts a parameter-only polynomial in the function context times `θ*_b` into the dual context.
fn params_times_dual(space: &OddSpace, c: &Poly, b: &Monomial) -> Poly {
    let terms = c.terms().map(|(m, s)| {
        let mut out = b.clone();
        for i in 0..m.exps().len() {
            if space.is_param(i) {
                out.0[i] = m.exp(i);
            }
        }
        (out, s.clone())
    });
    Poly::from_terms(&space.dual, terms).expect("within dual context")
}

fn split_params(space: &OddSpace, m: &Monomial) -> (Monomial, Monomial) {
    let mut odd = Monomial::one(m.exps().len());
    let mut par = Monomial::one(m.exps().len());
    for i in 0..m.exps().len() {
        if space.is_param(i) {
            par.0[i] = m.exp(i);
        } else {
            odd.0[i] = m.exp(i);
        }
    }
    (odd, par)
}

/// The pairing `∫_V f μ = ⟨f, μ⟩`, a polynomial in parameters only.
pub fn berezin_integral(f: &Poly, mu: &BerezinForm) -> Result<Poly> {
    let space = &mu.space;
    space.check_fn(f)?;
    let mut out = Poly::zero(&space.ctx);
    for (m, c) in f.terms() {
        let (mo, mp) = split_params(space, m);
        for (n, d) in mu.value.terms() {
            let (no, np) = split_params(space, n);
            if mo != no {
                continue;
            }
            let mut p = mp.clone();
            for i in 0..p.0.len() {
                p.0[i] += np.0[i];
            }
            out = &out + &Poly::term(&space.ctx, p, c * d);
        }
    }
    Ok(out)
}

/// Solves `μ = g ρ` for `g`, with `ρ` pure.
pub fn density(mu: &BerezinForm, rho: &BerezinForm) -> Result<Poly> {
    if !rho.is_pure() {
        return Err(Error::NotPure);
    }
    let space = &mu.space;
    let top = space.top();
    let r = match rho.value.terms().collect::<Vec<_>>()[..] {
        [(m, c)] if *m == top => c.clone(),
        _ => return Err(Error::NotPure),
    };
    let rinv = r.inv()?;
    let mut g = Poly::zero(&space.ctx);
    for i_mono in space.basis() {
        let mut comp = Monomial::one(top.exps().len());
        for k in 0..comp.0.len() {
            comp.0[k] = top.exp(k) - i_mono.exp(k);
        }
        let (_, neg) = i_mono.mul(&comp, &space.ctx).expect("disjoint supports");
        // coefficient of θ*_I in μ (with parameters)
        let mu_i = mu
            .value
            .filter_terms(|n| split_params(space, n).0 == i_mono);
        for (n, c) in mu_i.terms() {
            let (_, np) = split_params(space, n);
            let mut m = comp.clone();
            for k in 0..m.0.len() {
                m.0[k] += np.0[k];
            }
            g = &g + &Poly::term(&space.ctx, m, (c * &rinv).signed(neg));
        }
    }
    Ok(g)
}

fn nilpotent_series(h: &Poly, coeff: impl Fn(u32) -> Scalar) -> Poly {
    let mut out = Poly::zero(h.context());
    let mut power = Poly::one(h.context());
    let mut k = 0;
    loop {
        let c = coeff(k);
        if !c.is_zero() {
            out = &out + &power.scale(&c);
        }
        k += 1;
        power = &power * h;
        if power.is_zero() {
            return out;
        }
    }
}

/// `e^σ` for nilpotent `σ`.
pub fn exp_nilpotent(sigma: &Poly) -> Poly {
    let mut fact = Scalar::one();
    let facts: Vec<Scalar> = (0..64)
        .map(|k| {
            if k > 0 {
                fact = &fact * &Scalar::from_int(k);
            }
            fact.inv().expect("nonzero")
        })
        .collect();
    nilpotent_series(sigma, |k| facts[k as usize].clone())
}

/// `log(1 + h)` for nilpotent `h`.
pub fn log_one_plus(h: &Poly) -> Poly {
    nilpotent_series(h, |k| {
        if k == 0 {
            Scalar::zero()
        } else {
            Scalar::ratio(if k % 2 == 1 { 1 } else { -1 }, k as i64)
        }
    })
}

/// Inverse of `g` with invertible constant term.
fn invert(g: &Poly) -> Result<Poly> {
    let c = g.constant_term();
    let cinv = c.inv()?;
    let h = &g.scale(&cinv) - &Poly::one(g.context());
    let inv = nilpotent_series(&h, |k| Scalar::from_int(if k % 2 == 0 { 1 } else { -1 }));
    Ok(inv.scale(&cinv))
}

/// The unique `(c, σ)` with `μ = c·e^σ·ρ` and `σ` of positive exterior degree.
pub fn berezin_decompose(mu: &BerezinForm, rho: &BerezinForm) -> Result<(Scalar, Poly)> {
    if !mu.is_berezinian() {
        return Err(Error::NotBerezinian);
    }
    let g = density(mu, rho)?;
    let c = g.constant_term();
    if c.is_zero() {
        return Err(Error::NotBerezinian);
    }
    let h = &g.scale(&c.inv()?) - &Poly::one(g.context());
    Ok((c, log_one_plus(&h)))
}

/// `X(f) = Σ X^i ∂f/∂θ_i` for a vector field `X = Σ X^i θ_i'` over the odd space.
pub fn apply_vector_field(x: &MultiVector, f: &Poly) -> Result<Poly> {
    let sctx = x.context();
    if !GradedContext::same(sctx.base(), f.context()) {
        return Err(Error::ContextMismatch);
    }
    let mut out = Poly::zero(f.context());
    for &(xi, xa) in sctx.pairs() {
        let comp = x.value().right_partial_index(xa);
        if comp.is_zero() {
            continue;
        }
        if comp.terms().any(|(m, _)| sctx.antifields().iter().any(|&a| m.exp(a) > 0)) {
            return Err(Error::ArityMismatch { expected: 1, got: 2 });
        }
        let coeff = MultiVector::new(sctx, comp)?.to_base()?;
        out = &out + &(&coeff * &f.partial_index(xi));
    }
    Ok(out)
}

/// The divergence: the unique `D` with `∫ X(f) μ = -∫ f D μ` for all `f`.
pub fn divergence(x: &MultiVector, mu: &BerezinForm) -> Result<Poly> {
    if !mu.is_berezinian() {
        return Err(Error::NotBerezinian);
    }
    let space = &mu.space;
    let rho = space.canonical();
    // ν(f) = ∫ X(f) μ, encoded as a form
    let mut nu = Poly::zero(&space.dual);
    for b in space.basis() {
        let theta = Poly::term(&space.ctx, b.clone(), Scalar::one());
        let c = berezin_integral(&apply_vector_field(x, &theta)?, mu)?;
        nu = &nu + &params_times_dual(space, &c, &b);
    }
    let h_nu = density(&BerezinForm::new(space, nu)?, &rho)?;
    let g = density(mu, &rho)?;
    Ok(-&(&h_nu * &invert(&g)?))
}
