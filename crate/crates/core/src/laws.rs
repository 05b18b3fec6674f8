//! Residuals of the basic graded identities. Each returns zero exactly when the
//! identity holds on the given homogeneous arguments.

use crate::error::{Error, Result};
use crate::multivector::ShiftedContext;
use crate::poly::Poly;

fn degree(p: &Poly) -> Result<i64> {
    if p.is_zero() {
        return Ok(0);
    }
    p.homogeneous_degree()
        .ok_or_else(|| Error::DegreeMismatch("argument is not homogeneous".into()))
}

fn signed(p: Poly, odd: bool) -> Poly {
    if odd {
        -&p
    } else {
        p
    }
}

/// `fg - (-1)^{|f||g|} gf`
pub fn commutativity(f: &Poly, g: &Poly) -> Result<Poly> {
    let s = (degree(f)? * degree(g)?).rem_euclid(2) == 1;
    f.try_mul(g)?.try_sub(&signed(g.try_mul(f)?, s))
}

/// `(fg)h - f(gh)`
pub fn associativity(f: &Poly, g: &Poly, h: &Poly) -> Result<Poly> {
    f.try_mul(g)?.try_mul(h)?.try_sub(&f.try_mul(&g.try_mul(h)?)?)
}

/// `∂_i(fg) - (∂_i f)g - (-1)^{|x_i||f|} f ∂_i g` for the left derivative.
pub fn leibniz(i: usize, f: &Poly, g: &Poly) -> Result<Poly> {
    let ctx = f.context();
    let s = (ctx.degree(i) * degree(f)?).rem_euclid(2) == 1;
    let lhs = f.try_mul(g)?.partial_index(i);
    let a = f.partial_index(i).try_mul(g)?;
    let b = signed(f.try_mul(&g.partial_index(i))?, s);
    lhs.try_sub(&a)?.try_sub(&b)
}

fn shifted(s: &ShiftedContext, p: &Poly) -> Result<i64> {
    Ok(degree(p)? - s.shift())
}

/// `[F,G] + (-1)^{(|F|-n)(|G|-n)} [G,F]`
pub fn bracket_symmetry(s: &ShiftedContext, f: &Poly, g: &Poly) -> Result<Poly> {
    let e = (shifted(s, f)? * shifted(s, g)?).rem_euclid(2) == 1;
    s.bracket(f, g).try_add(&signed(s.bracket(g, f), e))
}

/// `[F,[G,H]] - [[F,G],H] - (-1)^{(|F|-n)(|G|-n)} [G,[F,H]]`
pub fn bracket_jacobi(s: &ShiftedContext, f: &Poly, g: &Poly, h: &Poly) -> Result<Poly> {
    let e = (shifted(s, f)? * shifted(s, g)?).rem_euclid(2) == 1;
    let lhs = s.bracket(f, &s.bracket(g, h));
    let a = s.bracket(&s.bracket(f, g), h);
    let b = signed(s.bracket(g, &s.bracket(f, h)), e);
    lhs.try_sub(&a)?.try_sub(&b)
}

/// `[F,GH] - [F,G]H - (-1)^{(|F|-n)|G|} G[F,H]`
pub fn bracket_leibniz(s: &ShiftedContext, f: &Poly, g: &Poly, h: &Poly) -> Result<Poly> {
    let e = (shifted(s, f)? * degree(g)?).rem_euclid(2) == 1;
    let lhs = s.bracket(f, &g.try_mul(h)?);
    let a = s.bracket(f, g).try_mul(h)?;
    let b = signed(g.try_mul(&s.bracket(f, h))?, e);
    lhs.try_sub(&a)?.try_sub(&b)
}
