//! Sparse graded-commutative polynomials with exact Gaussian-rational coefficients.
//!
//! A monomial is stored as a dense exponent vector over its context, implicitly
//! ordered by declaration order. Odd variables carry exponent 0 or 1; putting a
//! product of variables into this order multiplies the coefficient by the Koszul
//! sign of the reordering.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::context::{Ctx, GradedContext};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub(crate) Vec<u32>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len])
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn degree(&self, ctx: &GradedContext) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e as i64 * ctx.degree(i))
            .sum()
    }

    /// Number of odd factors, i.e. the parity of the monomial.
    pub fn odd_count(&self, ctx: &GradedContext) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|&(i, &e)| e > 0 && ctx.is_odd(i))
            .count()
    }

    pub fn is_odd(&self, ctx: &GradedContext) -> bool {
        self.odd_count(ctx) % 2 == 1
    }

    /// Canonical product `self · other`; `None` when an odd variable repeats.
    /// The flag reports whether the Koszul sign is negative.
    pub fn mul(&self, other: &Monomial, ctx: &GradedContext) -> Option<(Monomial, bool)> {
        let mut sign = false;
        // odd factors of `self` lying to the right of an odd factor of `other`
        let mut odd_after = 0usize;
        for i in (0..self.0.len()).rev() {
            if ctx.is_odd(i) {
                if self.0[i] > 0 && other.0[i] > 0 {
                    return None;
                }
                if other.0[i] > 0 && odd_after % 2 == 1 {
                    sign = !sign;
                }
                if self.0[i] > 0 {
                    odd_after += 1;
                }
            }
        }
        let exps = self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect();
        Some((Monomial(exps), sign))
    }

    pub(crate) fn within_truncation(&self, ctx: &GradedContext) -> bool {
        ctx.vars()
            .iter()
            .zip(&self.0)
            .all(|(v, &e)| v.truncation.is_none_or(|t| e <= t))
    }

    fn odd_before(&self, i: usize, ctx: &GradedContext) -> usize {
        (0..i).filter(|&j| self.0[j] > 0 && ctx.is_odd(j)).count()
    }

    fn odd_after(&self, i: usize, ctx: &GradedContext) -> usize {
        (i + 1..self.0.len())
            .filter(|&j| self.0[j] > 0 && ctx.is_odd(j))
            .count()
    }

    pub fn fmt_with(&self, ctx: &GradedContext) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = &ctx.var(i).name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Term order: by total exponent, then lexicographically descending, so that
/// `1 < x < y < x^2 < x*y < y^2`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone)]
pub struct Poly {
    ctx: Ctx,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(ctx: &Ctx) -> Self {
        Poly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Ctx, c: Scalar) -> Self {
        Self::term(ctx, Monomial::one(ctx.len()), c)
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(ctx, Scalar::one())
    }

    pub fn from_int(ctx: &Ctx, n: i64) -> Self {
        Self::constant(ctx, Scalar::from_int(n))
    }

    /// A single canonical term; dropped if it vanishes or exceeds truncation.
    pub fn term(ctx: &Ctx, m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(ctx);
        p.add_term(m, c);
        p
    }

    pub fn var_index(ctx: &Ctx, i: usize) -> Self {
        let mut m = Monomial::one(ctx.len());
        m.0[i] = 1;
        Self::term(ctx, m, Scalar::one())
    }

    pub fn var(ctx: &Ctx, name: &str) -> Result<Self> {
        Ok(Self::var_index(ctx, ctx.index_of(name)?))
    }

    /// Builds a monomial from factors given in any order, applying the Koszul sign.
    pub fn product_of_vars(ctx: &Ctx, factors: &[usize]) -> Self {
        let mut acc = Self::one(ctx);
        for &i in factors {
            acc = &acc * &Self::var_index(ctx, i);
        }
        acc
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.ctx.len()))
    }

    /// Returns the scalar if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() || !m.within_truncation(&self.ctx) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn from_terms(ctx: &Ctx, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Result<Self> {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            if m.0.len() != ctx.len() {
                return Err(Error::ContextMismatch);
            }
            if m.0.iter().enumerate().any(|(i, &e)| e > 1 && ctx.is_odd(i)) {
                continue;
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if GradedContext::same(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.try_add(&-other)
    }

    /// Graded-commutative product in canonical form.
    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = Poly::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, neg)) = ma.mul(mb, &self.ctx) {
                    out.add_term(m, (ca * cb).signed(neg));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut out = Poly::zero(&self.ctx);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), a * c);
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Poly {
        self.scale(&Scalar::from_int(n))
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(&self.ctx);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The homogeneous degree, if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.degree(&self.ctx));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// `Some(true)` for odd, `Some(false)` for even, `None` for mixed parity.
    /// Zero counts as even.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| m.is_odd(&self.ctx));
        match it.next() {
            None => Some(false),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    /// Homogeneous components sorted by degree; zero decomposes into nothing.
    pub fn degree_decompose(&self) -> Vec<(i64, Poly)> {
        let mut parts: BTreeMap<i64, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.degree(&self.ctx))
                .or_insert_with(|| Poly::zero(&self.ctx))
                .terms
                .insert(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// Terms satisfying a monomial predicate.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Left graded derivative: commute the variable to the far left, then strike it.
    pub fn partial_index(&self, i: usize) -> Poly {
        let odd = self.ctx.is_odd(i);
        let mut out = Poly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let neg = odd && m.odd_before(i, &self.ctx) % 2 == 1;
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c.scale_int(e as i64).signed(neg));
        }
        out
    }

    pub fn partial(&self, name: &str) -> Result<Poly> {
        Ok(self.partial_index(self.ctx.index_of(name)?))
    }

    /// Right graded derivative: commute the variable to the far right, then strike it.
    pub fn right_partial_index(&self, i: usize) -> Poly {
        let odd = self.ctx.is_odd(i);
        let mut out = Poly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let neg = odd && m.odd_after(i, &self.ctx) % 2 == 1;
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c.scale_int(e as i64).signed(neg));
        }
        out
    }

    /// Algebra morphism into `target` sending generator `i` to `images[i]`.
    /// No grading checks are made here.
    pub fn map_generators(&self, target: &Ctx, images: &[Poly]) -> Poly {
        debug_assert_eq!(images.len(), self.ctx.len());
        let mut out = Poly::zero(target);
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(target)]; images.len()];
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                acc = &acc * &powers[i][e as usize];
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        out
    }

    /// Substitutes generators within the same context. Each image must have the
    /// parity of its variable and, except for parameters, the same degree.
    pub fn substitute(&self, bindings: &[(usize, Poly)]) -> Result<Poly> {
        let mut images: Vec<Poly> = (0..self.ctx.len())
            .map(|i| Poly::var_index(&self.ctx, i))
            .collect();
        for (i, p) in bindings {
            self.check(p)?;
            let v = self.ctx.var(*i);
            if p.parity() != Some(v.is_odd()) {
                return Err(Error::ParityMismatch(v.name.clone()));
            }
            if !v.param && !p.is_zero() && p.homogeneous_degree() != Some(v.degree) {
                return Err(Error::DegreeMismatch(format!(
                    "image of '{}' must have degree {}",
                    v.name, v.degree
                )));
            }
            images[*i] = p.clone();
        }
        Ok(self.map_generators(&self.ctx, &images))
    }

    pub fn substitute_named(&self, bindings: &[(&str, Poly)]) -> Result<Poly> {
        let idx = bindings
            .iter()
            .map(|(n, p)| Ok((self.ctx.index_of(n)?, p.clone())))
            .collect::<Result<Vec<_>>>()?;
        self.substitute(&idx)
    }

    /// Re-expresses the polynomial in a context containing every variable it uses
    /// (matched by name, with equal degrees).
    pub fn embed(&self, target: &Ctx) -> Result<Poly> {
        let mut images = Vec::with_capacity(self.ctx.len());
        for (i, v) in self.ctx.vars().iter().enumerate() {
            match target.get(&v.name) {
                Some(j) if target.degree(j) == v.degree => images.push(Poly::var_index(target, j)),
                Some(_) if self.uses_var(i) => {
                    return Err(Error::DegreeMismatch(format!(
                        "'{}' has a different degree in the target",
                        v.name
                    )))
                }
                None if self.uses_var(i) => return Err(Error::UnknownVariable(v.name.clone())),
                _ => images.push(Poly::zero(target)),
            }
        }
        Ok(self.map_generators(target, &images))
    }

    /// Drops all terms involving any of the given variables.
    pub fn set_zero(&self, vars: &[usize]) -> Poly {
        self.filter_terms(|m| vars.iter().all(|&i| m.0[i] == 0))
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        GradedContext::same(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Poly {}

fn leading_negative(c: &Scalar) -> bool {
    use num_traits::{Signed, Zero};
    if c.re.is_zero() {
        c.im.is_negative()
    } else {
        c.re.is_negative()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = leading_negative(c);
            let c = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", m.fmt_with(&self.ctx))?;
            } else {
                write!(f, "{c}*{}", m.fmt_with(&self.ctx))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Panics on context mismatch; use [`Poly::try_add`] for a fallible version.
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("context mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("context mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("context mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Variable;

    fn ctx() -> Ctx {
        GradedContext::from_pairs(&[("x", 0), ("y", 0), ("th1", 1), ("th2", 1)]).unwrap()
    }

    fn v(c: &Ctx, n: &str) -> Poly {
        Poly::var(c, n).unwrap()
    }

    #[test]
    fn even_odd_products() {
        let c = ctx();
        let (x, t1, t2) = (v(&c, "x"), v(&c, "th1"), v(&c, "th2"));
        assert_eq!(&x * &t1, &t1 * &x);
        assert_eq!((&t2 * &t1), -(&t1 * &t2));
        assert!((&t1 * &t1).is_zero());
        assert_eq!((&t1 * &t2).to_string(), "th1*th2");
        assert_eq!((&t2 * &t1).to_string(), "-th1*th2");
    }

    #[test]
    fn square_of_even_plus_nilpotent() {
        let c = ctx();
        let (x, t1, t2) = (v(&c, "x"), v(&c, "th1"), v(&c, "th2"));
        let a = &x + &(&t1 * &t2);
        let expect = &(&x * &x) + &(&(&x * &t1) * &t2).scale_int(2);
        assert_eq!(&a * &a, expect);
    }

    #[test]
    fn left_partials() {
        let c = ctx();
        let (x, t1, t2) = (v(&c, "x"), v(&c, "th1"), v(&c, "th2"));
        let f = &(&x * &x) * &t1;
        assert_eq!(f.partial("x").unwrap(), (&x * &t1).scale_int(2));
        assert_eq!((&t1 * &t2).partial("th2").unwrap(), -&t1);
        assert!(x.partial("th1").unwrap().is_zero());
        assert!(x.partial("nope").is_err());
    }

    #[test]
    fn right_partial_matches_sign_rule() {
        let c = ctx();
        let (t1, t2) = (v(&c, "th1"), v(&c, "th2"));
        // th1*th2: right derivative by th1 moves th1 past th2
        assert_eq!((&t1 * &t2).right_partial_index(2), -&t2);
        assert_eq!((&t1 * &t2).right_partial_index(3), t1);
    }

    #[test]
    fn decomposition() {
        let c = ctx();
        let (x, t1, t2) = (v(&c, "x"), v(&c, "th1"), v(&c, "th2"));
        let parts = (&x + &t1).degree_decompose();
        assert_eq!(parts, vec![(0, x.clone()), (1, t1.clone())]);
        assert!(Poly::zero(&c).degree_decompose().is_empty());
        let p = &(&x * &t1) * &t2;
        assert_eq!(p.degree_decompose(), vec![(2, p.clone())]);
    }

    #[test]
    fn substitution() {
        let c = ctx();
        let (x, t1, t2) = (v(&c, "x"), v(&c, "th1"), v(&c, "th2"));
        let one = Poly::one(&c);
        let f = &x * &x;
        let g = f.substitute_named(&[("x", &x + &one)]).unwrap();
        assert_eq!(g, &(&(&x * &x) + &x.scale_int(2)) + &one);
        let h = (&t1 * &t2).substitute_named(&[("th1", t2.clone())]).unwrap();
        assert!(h.is_zero());
        let k = (&x * &t1).substitute_named(&[("x", &x * &x), ("th1", t1.clone())]).unwrap();
        assert_eq!(k, &(&x * &x) * &t1);
        assert!(matches!(
            f.substitute_named(&[("x", t1.clone())]),
            Err(Error::ParityMismatch(_))
        ));
    }

    #[test]
    fn truncation_drops_high_orders() {
        let c = GradedContext::new(vec![Variable::new("x", 0), Variable::param("eps", Some(2))]).unwrap();
        let e = v(&c, "eps");
        let x = v(&c, "x");
        let p = &(&e + &x).pow(3);
        // eps^3 dropped
        assert!(p.terms().all(|(m, _)| m.exp(1) <= 2));
        assert_eq!(p.num_terms(), 3);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = Poly::one(&ctx());
        let b = Poly::one(&GradedContext::from_pairs(&[("z", 0)]).unwrap());
        assert!(matches!(a.try_mul(&b), Err(Error::ContextMismatch)));
    }
}
