//! Seeded generators for randomized identity checks and CLI probe sets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::Ctx;
use crate::poly::{Monomial, Poly};
use crate::scalar::Scalar;

/// All monomials in the listed variables with total exponent at most `max_total`.
pub fn monomials_up_to(ctx: &Ctx, vars: &[usize], max_total: u32) -> Vec<Monomial> {
    fn rec(ctx: &Ctx, vars: &[usize], k: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if k == vars.len() {
            out.push(cur.clone());
            return;
        }
        let i = vars[k];
        let cap = if ctx.is_odd(i) { left.min(1) } else { left };
        for e in 0..=cap {
            cur.0[i] = e;
            rec(ctx, vars, k + 1, left - e, cur, out);
        }
        cur.0[i] = 0;
    }
    let mut out = Vec::new();
    rec(ctx, vars, 0, max_total, &mut Monomial::one(ctx.len()), &mut out);
    out.sort();
    out
}

pub struct PolySampler {
    rng: ChaCha8Rng,
}

impl PolySampler {
    pub fn new(seed: u64) -> Self {
        PolySampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coeff(&mut self) -> Scalar {
        let n: i64 = self.rng.gen_range(-3..=3);
        let n = if n == 0 { 1 } else { n };
        if self.rng.gen_bool(0.2) {
            Scalar::ratio(n, 2)
        } else {
            Scalar::from_int(n)
        }
    }

    /// Random polynomial in `vars` with up to `terms` terms, total exponent at most
    /// `max_total`; restricted to degree `degree` when given. May be zero if no
    /// monomial of that degree exists.
    pub fn poly(
        &mut self,
        ctx: &Ctx,
        vars: &[usize],
        max_total: u32,
        degree: Option<i64>,
        terms: usize,
    ) -> Poly {
        let pool: Vec<Monomial> = monomials_up_to(ctx, vars, max_total)
            .into_iter()
            .filter(|m| degree.is_none_or(|d| m.degree(ctx) == d))
            .collect();
        let mut p = Poly::zero(ctx);
        if pool.is_empty() {
            return p;
        }
        let n = self.rng.gen_range(1..=terms.max(1));
        for m in pool.choose_multiple(&mut self.rng, n) {
            let c = self.coeff();
            p = &p + &Poly::term(ctx, m.clone(), c);
        }
        p
    }

    /// A random homogeneous element whose degree is drawn from the degrees
    /// actually available among small monomials.
    pub fn homogeneous(&mut self, ctx: &Ctx, vars: &[usize], max_total: u32, terms: usize) -> Poly {
        let mut degrees: Vec<i64> = monomials_up_to(ctx, vars, max_total)
            .iter()
            .map(|m| m.degree(ctx))
            .collect();
        degrees.sort();
        degrees.dedup();
        let d = *degrees.choose(&mut self.rng).expect("nonempty");
        self.poly(ctx, vars, max_total, Some(d), terms)
    }
}
