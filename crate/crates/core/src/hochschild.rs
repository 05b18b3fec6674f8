//! Multidifferential Hochschild cochains on a graded polynomial algebra.
//!
//! A cochain is stored in expanded normal form: a sum of terms
//! `c · (w_1 ⊗ … ⊗ w_m)` where `c` is a polynomial and each `w_k` is a word of
//! left partial derivatives (a monomial in the derivative symbols `∂_v`, which
//! graded-commute with parity of `v`). Evaluation follows the Koszul rule:
//!
//! ```text
//! (c · w_1 ⊗ … ⊗ w_m)(a_1, …, a_m) = (-1)^{Σ_{p<q} |w_q||a_p|} c · w_1(a_1) ⋯ w_m(a_m)
//! ```
//!
//! With this convention every tensor product of derivations is a Hochschild
//! cocycle and compositions close on normal forms with argument-independent
//! signs, so `b² = 0` and the graded Jacobi identity hold exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::context::{Ctx, GradedContext};
use crate::error::{Error, Result};
use crate::json::PolyJson;
use crate::multivector::MultiVector;
use crate::poly::{Monomial, Poly};
use crate::scalar::Scalar;

/// A word of derivatives; exponents index the base context.
pub type Word = Monomial;

#[derive(Clone)]
pub struct Cochain {
    ctx: Ctx,
    terms: BTreeMap<Vec<Word>, Poly>,
}

/// A homogeneous piece: fixed words, coefficient of a single degree.
#[derive(Clone, Debug)]
struct Piece {
    words: Vec<Word>,
    coeff: Poly,
    /// internal degree `j`
    degree: i64,
}

fn odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

fn word_parity(w: &Word, ctx: &GradedContext) -> bool {
    w.is_odd(ctx)
}

/// Degree of the derivative word: minus the degrees of the differentiated variables.
pub fn word_degree(w: &Word, ctx: &GradedContext) -> i64 {
    -w.degree(ctx)
}

/// Applies `∂_{v_1}^{a_1} ∘ … ∘ ∂_{v_N}^{a_N}` (rightmost first).
pub fn apply_word(w: &Word, f: &Poly) -> Poly {
    let mut out = f.clone();
    for i in (0..w.exps().len()).rev() {
        for _ in 0..w.exp(i) {
            if out.is_zero() {
                return out;
            }
            out = out.partial_index(i);
        }
    }
    out
}

/// Builds a word from `(variable, exponent)` pairs.
pub fn word(ctx: &Ctx, factors: &[(&str, u32)]) -> Result<Word> {
    let mut w = Monomial::one(ctx.len());
    for (name, e) in factors {
        let i = ctx.index_of(name)?;
        if ctx.is_param(i) {
            return Err(Error::InvalidParameter(format!("cannot differentiate by '{name}'")));
        }
        if ctx.is_odd(i) && w.0[i] + e > 1 {
            return Err(Error::Invalid(format!("odd derivative '{name}' squared")));
        }
        w.0[i] += e;
    }
    Ok(w)
}

fn single(ctx: &GradedContext, i: usize) -> Word {
    let mut w = Monomial::one(ctx.len());
    w.0[i] = 1;
    w
}

impl Cochain {
    pub fn zero(ctx: &Ctx) -> Self {
        Cochain {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// The product `μ(a, b) = ab`.
    pub fn product(ctx: &Ctx) -> Self {
        let e = Monomial::one(ctx.len());
        Self::term(ctx, Poly::one(ctx), vec![e.clone(), e])
    }

    /// An arity-0 cochain (an element of the algebra).
    pub fn element(f: &Poly) -> Self {
        Self::term(f.context(), f.clone(), vec![])
    }

    /// Single-slot differential operator `f ↦ c · w(f)`.
    pub fn operator(coeff: &Poly, w: Word) -> Self {
        Self::term(coeff.context(), coeff.clone(), vec![w])
    }

    pub fn term(ctx: &Ctx, coeff: Poly, words: Vec<Word>) -> Self {
        let mut c = Self::zero(ctx);
        c.add_term(words, coeff);
        c
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, words: Vec<Word>, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(words) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let s = &*e.get() + &coeff;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Arity if all terms share one; `None` for zero or mixed arity.
    pub fn arity(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Vec::len);
        let a = it.next()?;
        it.all(|b| b == a).then_some(a)
    }

    pub fn arities(&self) -> Vec<usize> {
        let mut a: Vec<usize> = self.terms.keys().map(Vec::len).collect();
        a.dedup();
        a.sort();
        a.dedup();
        a
    }

    pub fn arity_component(&self, m: usize) -> Cochain {
        Cochain {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == m)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    fn pieces(&self) -> Vec<Piece> {
        let mut out = Vec::new();
        for (words, coeff) in &self.terms {
            let wdeg: i64 = words.iter().map(|w| word_degree(w, &self.ctx)).sum();
            for (d, part) in coeff.degree_decompose() {
                out.push(Piece {
                    words: words.clone(),
                    coeff: part,
                    degree: d + wdeg,
                });
            }
        }
        out
    }

    /// Internal degree `j` if homogeneous.
    pub fn internal_degree(&self) -> Option<i64> {
        let ps = self.pieces();
        let d = ps.first()?.degree;
        ps.iter().all(|p| p.degree == d).then_some(d)
    }

    /// Degree `j + m - 1` in `Hoch(A)[1]`, if homogeneous.
    pub fn shifted_degree(&self) -> Option<i64> {
        let ps = self.pieces();
        let first = ps.first()?;
        let d = first.degree + first.words.len() as i64 - 1;
        ps.iter()
            .all(|p| p.degree + p.words.len() as i64 - 1 == d)
            .then_some(d)
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        let mut out = Cochain::zero(&self.ctx);
        for (w, p) in &self.terms {
            out.add_term(w.clone(), p.scale(c));
        }
        out
    }

    /// Multiplies every coefficient by a polynomial (from the left).
    pub fn mul_coeff(&self, f: &Poly) -> Result<Cochain> {
        let mut out = Cochain::zero(&self.ctx);
        for (w, p) in &self.terms {
            out.add_term(w.clone(), f.try_mul(p)?);
        }
        Ok(out)
    }

    fn check(&self, other: &Cochain) -> Result<()> {
        if GradedContext::same(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Cochain) -> Result<Cochain> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    /// Evaluates on `args` (multilinear, Koszul signs from words passing arguments).
    pub fn eval(&self, args: &[Poly]) -> Result<Poly> {
        for a in args {
            if !GradedContext::same(a.context(), &self.ctx) {
                return Err(Error::ContextMismatch);
            }
        }
        let mut out = Poly::zero(&self.ctx);
        if self.is_zero() {
            return Ok(out);
        }
        let m = args.len();
        if let Some(bad) = self.terms.keys().map(Vec::len).find(|&a| a != m) {
            return Err(Error::ArityMismatch { expected: bad, got: m });
        }
        // split each argument into even and odd parts
        let parts: Vec<[Poly; 2]> = args
            .iter()
            .map(|a| {
                [
                    a.filter_terms(|mo| !mo.is_odd(&self.ctx)),
                    a.filter_terms(|mo| mo.is_odd(&self.ctx)),
                ]
            })
            .collect();
        for (words, coeff) in &self.terms {
            for mask in 0..(1usize << m) {
                let pick = |k: usize| (mask >> k) & 1;
                if (0..m).any(|k| parts[k][pick(k)].is_zero()) {
                    continue;
                }
                let mut neg = false;
                for q in 0..m {
                    if word_parity(&words[q], &self.ctx) {
                        let before = (0..q).filter(|&p| pick(p) == 1).count();
                        neg ^= before % 2 == 1;
                    }
                }
                let mut acc = coeff.clone();
                for k in 0..m {
                    acc = &acc * &apply_word(&words[k], &parts[k][pick(k)]);
                    if acc.is_zero() {
                        break;
                    }
                }
                out = if neg { &out - &acc } else { &out + &acc };
            }
        }
        Ok(out)
    }

    pub fn to_json_struct(&self) -> CochainJson {
        CochainJson {
            arity: self.arity().unwrap_or(0),
            terms: self
                .terms
                .iter()
                .map(|(ws, c)| CochainTermJson {
                    coeff: c.to_json_struct(),
                    words: ws
                        .iter()
                        .map(|w| {
                            w.exps()
                                .iter()
                                .enumerate()
                                .flat_map(|(i, &e)| {
                                    std::iter::repeat_n(self.ctx.var(i).name.clone(), e as usize)
                                })
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_struct()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Cochain> {
        let j: CochainJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out: Option<Cochain> = None;
        for t in &j.terms {
            let coeff = Poly::from_json_struct(&t.coeff)?;
            let ctx = coeff.context().clone();
            let words = t
                .words
                .iter()
                .map(|w| {
                    let factors: Vec<(&str, u32)> = w.iter().map(|n| (n.as_str(), 1)).collect();
                    word(&ctx, &factors)
                })
                .collect::<Result<Vec<_>>>()?;
            if words.len() != j.arity {
                return Err(Error::ArityMismatch {
                    expected: j.arity,
                    got: words.len(),
                });
            }
            let c = Cochain::term(&ctx, coeff, words);
            out = Some(match out {
                None => c,
                Some(acc) => acc.try_add(&c)?,
            });
        }
        out.ok_or_else(|| Error::Parse("empty cochain has no context".into()))
    }

    fn fmt_word(&self, w: &Word) -> String {
        if w.is_one() {
            "1".into()
        } else {
            format!("d[{}]", w.fmt_with(&self.ctx))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CochainTermJson {
    pub coeff: PolyJson,
    pub words: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CochainJson {
    pub arity: usize,
    pub terms: Vec<CochainTermJson>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        GradedContext::same(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(ws, c)| {
                let words: Vec<String> = ws.iter().map(|w| self.fmt_word(w)).collect();
                format!("({c})*<{}>", words.join(" ⊗ "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain({self})")
    }
}

impl Add for &Cochain {
    type Output = Cochain;
    fn add(self, rhs: &Cochain) -> Cochain {
        self.try_add(rhs).expect("context mismatch")
    }
}

impl Neg for &Cochain {
    type Output = Cochain;
    fn neg(self) -> Cochain {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Sub for &Cochain {
    type Output = Cochain;
    fn sub(self, rhs: &Cochain) -> Cochain {
        self + &-rhs
    }
}

/// Expands `u(c · w_1(a_1) ⋯ w_m(a_m))` by the graded Leibniz rule, on formal
/// arguments of even parity.
fn leibniz(ctx: &GradedContext, u: &Word, coeff: &Poly, words: &[Word]) -> Vec<(Poly, Vec<Word>)> {
    let mut state = vec![(coeff.clone(), words.to_vec())];
    for v in (0..u.exps().len()).rev() {
        for _ in 0..u.exp(v) {
            let delta = ctx.is_odd(v);
            let dv = single(ctx, v);
            let mut next = Vec::with_capacity(state.len() * (words.len() + 1));
            for (c, ws) in state {
                let dc = c.partial_index(v);
                if !dc.is_zero() {
                    next.push((dc, ws.clone()));
                }
                let mut passed = c.parity().unwrap_or(false);
                for k in 0..ws.len() {
                    if let Some((nw, neg)) = dv.mul(&ws[k], ctx) {
                        let mut ws2 = ws.clone();
                        ws2[k] = nw;
                        let c2 = if neg ^ (delta && passed) { -&c } else { c.clone() };
                        next.push((c2, ws2));
                    }
                    passed ^= word_parity(&ws[k], ctx);
                }
            }
            state = next;
        }
    }
    state
}

/// `φ ∘ (1^{⊗i} ⊗ ψ ⊗ 1^{⊗(m₁-1-i)})` on homogeneous pieces.
fn insert_piece(ctx: &GradedContext, phi: &Piece, psi: &Piece, i: usize, out: &mut Cochain, negate: bool) {
    let u = &phi.words;
    let before: bool = u[..i].iter().fold(false, |a, w| a ^ word_parity(w, ctx));
    let after: bool = u[i + 1..].iter().fold(false, |a, w| a ^ word_parity(w, ctx));
    let x_odd = odd(psi.degree);
    for (c2, ws) in leibniz(ctx, &u[i], &psi.coeff, &psi.words) {
        let c2_odd = c2.parity().unwrap_or(false);
        let neg = negate ^ (c2_odd && before) ^ (x_odd && after);
        let coeff = &phi.coeff * &c2;
        let coeff = if neg { -&coeff } else { coeff };
        let mut words = Vec::with_capacity(u.len() + ws.len() - 1);
        words.extend_from_slice(&u[..i]);
        words.extend(ws);
        words.extend_from_slice(&u[i + 1..]);
        out.add_term(words, coeff);
    }
}

/// Single insertion `φ ∘ (1^{⊗i} ⊗ ψ ⊗ 1)` without the external Gerstenhaber signs.
pub fn insert(phi: &Cochain, psi: &Cochain, i: usize) -> Result<Cochain> {
    phi.check(psi)?;
    let mut out = Cochain::zero(&phi.ctx);
    for p in phi.pieces() {
        if i >= p.words.len() {
            return Err(Error::ArityMismatch {
                expected: i + 1,
                got: p.words.len(),
            });
        }
        for q in psi.pieces() {
            insert_piece(&phi.ctx, &p, &q, i, &mut out, false);
        }
    }
    Ok(out)
}

/// The Gerstenhaber composition product `φ • ψ`.
pub fn gerst_compose(phi: &Cochain, psi: &Cochain) -> Result<Cochain> {
    phi.check(psi)?;
    let mut out = Cochain::zero(&phi.ctx);
    let psi_pieces = psi.pieces();
    for p in phi.pieces() {
        let m1 = p.words.len() as i64;
        for q in &psi_pieces {
            let m2 = q.words.len() as i64;
            let ext = odd((q.degree + m2 - 1) * (m1 - 1));
            for i in 0..p.words.len() {
                let neg = ext ^ odd(i as i64 * (m2 - 1));
                insert_piece(&phi.ctx, &p, q, i, &mut out, neg);
            }
        }
    }
    Ok(out)
}

/// `[φ, ψ] = φ•ψ - (-1)^{(j₁+m₁-1)(j₂+m₂-1)} ψ•φ`.
pub fn gerst_bracket(phi: &Cochain, psi: &Cochain) -> Result<Cochain> {
    phi.check(psi)?;
    let mut out = Cochain::zero(&phi.ctx);
    let ps = phi.pieces();
    let qs = psi.pieces();
    for p in &ps {
        let m1 = p.words.len() as i64;
        let s1 = p.degree + m1 - 1;
        for q in &qs {
            let m2 = q.words.len() as i64;
            let s2 = q.degree + m2 - 1;
            let ext = odd((q.degree + m2 - 1) * (m1 - 1));
            for i in 0..p.words.len() {
                insert_piece(&phi.ctx, p, q, i, &mut out, ext ^ odd(i as i64 * (m2 - 1)));
            }
            // - (-1)^{s1 s2} ψ•φ
            let swap = !odd(s1 * s2);
            let ext2 = odd((p.degree + m1 - 1) * (m2 - 1));
            for i in 0..q.words.len() {
                insert_piece(&phi.ctx, q, p, i, &mut out, swap ^ ext2 ^ odd(i as i64 * (m1 - 1)));
            }
        }
    }
    Ok(out)
}

/// The Hochschild differential `b = [μ, ·]`.
pub fn hochschild_b(d: &Cochain) -> Result<Cochain> {
    gerst_bracket(&Cochain::product(&d.ctx), d)
}

/// Koszul sign of listing `items` in the order `perm` (given item parities).
pub(crate) fn permutation_sign(parities: &[bool], perm: &[usize]) -> bool {
    let mut neg = false;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] && parities[perm[a]] && parities[perm[b]] {
                neg = !neg;
            }
        }
    }
    neg
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// The HKR map from multivector fields (shift 1) to multidifferential operators:
/// `c·φ₁⋯φ_k ↦ Σ_σ sign(σ) c · φ_{σ(1)} ⊗ … ⊗ φ_{σ(k)}`, with `sign(σ)` the
/// Koszul sign of the permutation in the multivector algebra.
pub fn hkr(f: &MultiVector) -> Result<Cochain> {
    let sctx = f.context();
    if sctx.shift() != 1 {
        return Err(Error::Invalid("HKR is defined on shift-1 multivector fields".into()));
    }
    let base = sctx.base().clone();
    let ext = sctx.ext();
    let pairs = sctx.pairs();
    let mut out = Cochain::zero(&base);
    for (m, c) in f.value().terms() {
        // split into coefficient (base part) and derivation factors (antifield part)
        let mut cm = Monomial::one(base.len());
        cm.0.copy_from_slice(&m.exps()[..base.len()]);
        let coeff = Poly::term(&base, cm, c.clone());
        let mut factors = Vec::new();
        let mut parities = Vec::new();
        for &(x, xa) in pairs {
            for _ in 0..m.exp(xa) {
                factors.push(x);
                parities.push(ext.is_odd(xa));
            }
        }
        for perm in permutations(factors.len()) {
            let neg = permutation_sign(&parities, &perm);
            let words = perm.iter().map(|&k| single(&base, factors[k])).collect();
            out.add_term(words, if neg { -&coeff } else { coeff.clone() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::GradedContext;
    use crate::multivector::ShiftedContext;

    fn ctx1() -> Ctx {
        GradedContext::from_pairs(&[("x", 0)]).unwrap()
    }

    fn ctx2() -> Ctx {
        GradedContext::from_pairs(&[("x", 0), ("y", 0)]).unwrap()
    }

    fn v(c: &Ctx, n: &str) -> Poly {
        Poly::var(c, n).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let c = ctx2();
        let (x, y) = (v(&c, "x"), v(&c, "y"));
        let dx = Cochain::operator(&Poly::one(&c), word(&c, &[("x", 1)]).unwrap());
        assert_eq!(dx.eval(&[&x * &x]).unwrap(), x.scale_int(2));
        assert_eq!(Cochain::product(&c).eval(&[x.clone(), y.clone()]).unwrap(), &x * &y);
        let d = Cochain::term(
            &c,
            Poly::one(&c),
            vec![word(&c, &[("x", 1)]).unwrap(), word(&c, &[("y", 1)]).unwrap()],
        );
        assert_eq!(d.eval(&[&x * &y, y.clone()]).unwrap(), y);
        assert!(matches!(d.eval(&[x.clone()]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn product_is_associative_cocycle() {
        let c = ctx2();
        let mu = Cochain::product(&c);
        assert!(gerst_bracket(&mu, &mu).unwrap().is_zero());
        assert!(hochschild_b(&mu).unwrap().is_zero());
    }

    #[test]
    fn compose_with_product_differentiates_product() {
        let c = ctx2();
        let (x, y) = (v(&c, "x"), v(&c, "y"));
        let dx = Cochain::operator(&Poly::one(&c), word(&c, &[("x", 1)]).unwrap());
        let comp = gerst_compose(&dx, &Cochain::product(&c)).unwrap();
        let f = &x * &x;
        let g = &x * &y;
        assert_eq!(comp.eval(&[f.clone(), g.clone()]).unwrap(), (&f * &g).partial("x").unwrap());
    }

    #[test]
    fn derivations_are_cocycles() {
        let c = ctx2();
        let d = Cochain::operator(&v(&c, "y"), word(&c, &[("x", 1)]).unwrap());
        assert!(hochschild_b(&d).unwrap().is_zero());
    }

    #[test]
    fn second_derivative_coboundary() {
        let c = ctx1();
        let d2 = Cochain::operator(&Poly::one(&c), word(&c, &[("x", 2)]).unwrap());
        let bd = hochschild_b(&d2).unwrap();
        let dx = word(&c, &[("x", 1)]).unwrap();
        let expect = Cochain::term(&c, Poly::from_int(&c, -2), vec![dx.clone(), dx]);
        assert_eq!(bd, expect);
    }

    #[test]
    fn bracket_of_odd_cochain_with_itself_can_be_nonzero() {
        let c = ctx1();
        let dx = word(&c, &[("x", 1)]).unwrap();
        let phi = Cochain::term(&c, Poly::one(&c), vec![dx.clone(), dx]);
        assert_eq!(phi.shifted_degree(), Some(1));
        let br = gerst_bracket(&phi, &phi).unwrap();
        assert!(!br.is_zero());
        let x = v(&c, "x");
        // evaluate on (x^2, x, x)
        assert!(!br.eval(&[&x * &x, x.clone(), x.clone()]).unwrap().is_zero());
    }

    #[test]
    fn hkr_examples() {
        let c = ctx2();
        let s = ShiftedContext::new(&c, 1).unwrap();
        let xa = MultiVector::var(&s, "x'").unwrap();
        let ya = MultiVector::var(&s, "y'").unwrap();
        let (x, y) = (v(&c, "x"), v(&c, "y"));
        let h1 = hkr(&xa).unwrap();
        assert_eq!(h1.eval(&[&x * &x]).unwrap(), x.scale_int(2));
        let h2 = hkr(&(&xa * &ya)).unwrap();
        assert_eq!(h2.eval(&[x.clone(), y.clone()]).unwrap(), Poly::one(&c));
        assert_eq!(h2.eval(&[y.clone(), x.clone()]).unwrap(), -&Poly::one(&c));
        let f = MultiVector::from_base(&s, &(&x * &y)).unwrap();
        let h0 = hkr(&f).unwrap();
        assert_eq!(h0.arity(), Some(0));
        assert_eq!(h0.eval(&[]).unwrap(), &x * &y);
    }

    #[test]
    fn json_round_trip() {
        let c = ctx2();
        let d = Cochain::term(
            &c,
            v(&c, "y").scale(&Scalar::ratio(1, 2)),
            vec![word(&c, &[("x", 2)]).unwrap(), word(&c, &[]).unwrap()],
        );
        let s = d.to_json();
        assert!(s.starts_with("{\"arity\":2"));
        assert!(s.contains("[\"x\",\"x\"]"));
        let back = Cochain::from_json(&s).unwrap();
        assert_eq!(back, d);
    }
}
