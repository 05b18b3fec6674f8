//! Shifted multivector fields as functions on `T*[n]V`.
//!
//! Every base coordinate `x` of degree `d` gets an antifield `x'` of degree
//! `n - d`, appended after the base variables. The bracket is the canonical
//! one on `T*[n]V`, normalized by `[x', x] = 1`:
//!
//! ```text
//! [F, G] = Σ_i  F∂⃖/∂x'_i · ∂/∂x_i G  +  s_i · F∂⃖/∂x_i · ∂/∂x'_i G,
//! s_i = -(-1)^{d_i (n+1)}
//! ```
//!
//! with right derivatives on the left factor and left derivatives on the right.
//! `s_i` is the unique choice making the bracket shifted skew-symmetric.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::context::{Ctx, GradedContext, Variable};
use crate::error::{Error, Result};
use crate::json::{context_from_json, context_to_json, terms_from_json, terms_to_json, TermJson, VarJson};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Sign of the derived bracket `[[x_i, x'_i x'_j], x_j]` for degree-0 coordinates
/// and `n = 1`. Matrices of Poisson tensors are converted with this sign so that
/// `derived_poisson(bivector_from_matrix(P), x_i, x_j) = P[i][j]`.
pub const DERIVED_SIGN: i64 = -1;

pub fn antifield_name(name: &str) -> String {
    format!("{name}'")
}

pub struct ShiftedContext {
    base: Ctx,
    shift: i64,
    ext: Ctx,
    /// base coordinate index paired with its antifield index (both in `ext`)
    pairs: Vec<(usize, usize)>,
    partner: Vec<Option<usize>>,
    fibers: Vec<usize>,
}

pub type SCtx = Arc<ShiftedContext>;

impl ShiftedContext {
    pub fn new(base: &Ctx, shift: i64) -> Result<SCtx> {
        Self::with_fibers(base, shift, &[])
    }

    pub fn with_fibers(base: &Ctx, shift: i64, fibers: &[&str]) -> Result<SCtx> {
        let coords = base.coordinates();
        let extra = coords
            .iter()
            .map(|&i| {
                let v = base.var(i);
                Variable::new(antifield_name(&v.name), shift - v.degree)
            })
            .collect();
        let ext = base.extended(extra)?;
        let pairs: Vec<(usize, usize)> = coords
            .iter()
            .enumerate()
            .map(|(k, &i)| (i, base.len() + k))
            .collect();
        let mut partner = vec![None; ext.len()];
        for &(a, b) in &pairs {
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        let fibers = fibers
            .iter()
            .map(|f| {
                let i = base.index_of(f)?;
                if base.is_param(i) {
                    return Err(Error::InvalidParameter(format!("'{f}' cannot be a fiber")));
                }
                Ok(i)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(ShiftedContext {
            base: base.clone(),
            shift,
            ext,
            pairs,
            partner,
            fibers,
        }))
    }

    pub fn base(&self) -> &Ctx {
        &self.base
    }

    pub fn ext(&self) -> &Ctx {
        &self.ext
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// `(coordinate, antifield)` index pairs in the extended context.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn fibers(&self) -> &[usize] {
        &self.fibers
    }

    pub fn is_antifield(&self, i: usize) -> bool {
        i >= self.base.len()
    }

    pub fn antifield_of(&self, coord: usize) -> Option<usize> {
        (coord < self.base.len()).then(|| self.partner[coord]).flatten()
    }

    pub fn antifields(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(_, a)| a).collect()
    }

    pub fn coordinates(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(c, _)| c).collect()
    }

    fn pair_sign(&self, coord: usize) -> bool {
        // s_i = -(-1)^{d (n+1)}; true means negative
        let d = self.ext.degree(coord);
        (d * (self.shift + 1)).rem_euclid(2) == 0
    }

    pub fn same(a: &SCtx, b: &SCtx) -> bool {
        Arc::ptr_eq(a, b)
            || (a.shift == b.shift && GradedContext::same(&a.ext, &b.ext) && a.fibers == b.fibers)
    }

    /// Canonical bracket of two functions on the extended context.
    pub fn bracket(&self, f: &Poly, g: &Poly) -> Poly {
        let mut out = Poly::zero(&self.ext);
        if f.is_zero() || g.is_zero() {
            return out;
        }
        for &(x, xa) in &self.pairs {
            let fa = f.right_partial_index(xa);
            if !fa.is_zero() {
                let gx = g.partial_index(x);
                if !gx.is_zero() {
                    out = &out + &(&fa * &gx);
                }
            }
            let fx = f.right_partial_index(x);
            if !fx.is_zero() {
                let ga = g.partial_index(xa);
                if !ga.is_zero() {
                    let t = &fx * &ga;
                    out = if self.pair_sign(x) { &out - &t } else { &out + &t };
                }
            }
        }
        out
    }
}

impl fmt::Debug for ShiftedContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T*[{}]{:?}", self.shift, self.base)
    }
}

#[derive(Clone)]
pub struct MultiVector {
    sctx: SCtx,
    value: Poly,
}

impl MultiVector {
    pub fn new(sctx: &SCtx, value: Poly) -> Result<Self> {
        if !GradedContext::same(value.context(), &sctx.ext) {
            return Err(Error::ContextMismatch);
        }
        Ok(MultiVector {
            sctx: sctx.clone(),
            value,
        })
    }

    pub fn zero(sctx: &SCtx) -> Self {
        MultiVector {
            sctx: sctx.clone(),
            value: Poly::zero(&sctx.ext),
        }
    }

    /// Lifts a function on the base (a 0-vector field).
    pub fn from_base(sctx: &SCtx, f: &Poly) -> Result<Self> {
        Self::new(sctx, f.embed(&sctx.ext)?)
    }

    pub fn var(sctx: &SCtx, name: &str) -> Result<Self> {
        Ok(MultiVector {
            sctx: sctx.clone(),
            value: Poly::var(&sctx.ext, name)?,
        })
    }

    pub fn context(&self) -> &SCtx {
        &self.sctx
    }

    pub fn value(&self) -> &Poly {
        &self.value
    }

    pub fn into_value(self) -> Poly {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn shift(&self) -> i64 {
        self.sctx.shift
    }

    pub fn degree(&self) -> Option<i64> {
        self.value.homogeneous_degree()
    }

    fn wrap(&self, value: Poly) -> MultiVector {
        MultiVector {
            sctx: self.sctx.clone(),
            value,
        }
    }

    fn check(&self, other: &MultiVector) -> Result<()> {
        if ShiftedContext::same(&self.sctx, &other.sctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// Total antifield exponent of each term.
    fn arity_of(&self, m: &crate::poly::Monomial) -> usize {
        self.sctx.antifields().iter().map(|&a| m.exp(a) as usize).sum()
    }

    /// Components by number of antifield factors (j-derivations), ascending.
    pub fn arity_decompose(&self) -> Vec<(usize, MultiVector)> {
        let mut arities: Vec<usize> = self.value.terms().map(|(m, _)| self.arity_of(m)).collect();
        arities.sort();
        arities.dedup();
        arities
            .into_iter()
            .map(|j| (j, self.arity_component(j)))
            .collect()
    }

    pub fn arity_component(&self, j: usize) -> MultiVector {
        let anti = self.sctx.antifields();
        self.wrap(
            self.value
                .filter_terms(|m| anti.iter().map(|&a| m.exp(a) as usize).sum::<usize>() == j),
        )
    }

    pub fn degree_decompose(&self) -> Vec<(i64, MultiVector)> {
        self.value
            .degree_decompose()
            .into_iter()
            .map(|(d, p)| (d, self.wrap(p)))
            .collect()
    }

    pub fn is_antifield_free(&self) -> bool {
        self.sctx.antifields().iter().all(|&a| !self.value.uses_var(a))
    }

    /// Sets all antifields to zero (restriction to the zero section).
    pub fn project(&self) -> MultiVector {
        self.wrap(self.value.set_zero(&self.sctx.antifields()))
    }

    /// The function on the base, if there are no antifields.
    pub fn to_base(&self) -> Result<Poly> {
        if !self.is_antifield_free() {
            return Err(Error::ContainsAntifields);
        }
        self.value.embed(&self.sctx.base)
    }

    pub fn scale(&self, c: &Scalar) -> MultiVector {
        self.wrap(self.value.scale(c))
    }

    pub fn to_json_struct(&self) -> MultiVectorJson {
        MultiVectorJson {
            context: context_to_json(&self.sctx.base),
            shift: self.sctx.shift,
            fibers: self
                .sctx
                .fibers
                .iter()
                .map(|&i| self.sctx.base.var(i).name.clone())
                .collect(),
            terms: terms_to_json(&self.value),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_struct()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: MultiVectorJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let base = context_from_json(&j.context)?;
        let fibers: Vec<&str> = j.fibers.iter().map(String::as_str).collect();
        let sctx = ShiftedContext::with_fibers(&base, j.shift, &fibers)?;
        let value = terms_from_json(&sctx.ext, &j.terms)?;
        MultiVector::new(&sctx, value)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiVectorJson {
    pub context: Vec<VarJson>,
    pub shift: i64,
    pub fibers: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl PartialEq for MultiVector {
    fn eq(&self, other: &Self) -> bool {
        ShiftedContext::same(&self.sctx, &other.sctx) && self.value == other.value
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Debug for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiVector({})", self.value)
    }
}

impl Add for &MultiVector {
    type Output = MultiVector;
    fn add(self, rhs: &MultiVector) -> MultiVector {
        self.check(rhs).expect("context mismatch");
        self.wrap(&self.value + &rhs.value)
    }
}

impl Sub for &MultiVector {
    type Output = MultiVector;
    fn sub(self, rhs: &MultiVector) -> MultiVector {
        self.check(rhs).expect("context mismatch");
        self.wrap(&self.value - &rhs.value)
    }
}

impl Mul for &MultiVector {
    type Output = MultiVector;
    fn mul(self, rhs: &MultiVector) -> MultiVector {
        self.check(rhs).expect("context mismatch");
        self.wrap(&self.value * &rhs.value)
    }
}

impl Neg for &MultiVector {
    type Output = MultiVector;
    fn neg(self) -> MultiVector {
        self.wrap(-&self.value)
    }
}

/// The n-shifted Schouten bracket.
pub fn schouten(f: &MultiVector, g: &MultiVector) -> Result<MultiVector> {
    f.check(g)?;
    Ok(f.wrap(f.sctx.bracket(&f.value, &g.value)))
}

/// Evaluator for `ad_F = [F, ·]`.
pub struct HamiltonianVf {
    generator: MultiVector,
}

impl HamiltonianVf {
    pub fn apply(&self, g: &MultiVector) -> Result<MultiVector> {
        schouten(&self.generator, g)
    }

    pub fn generator(&self) -> &MultiVector {
        &self.generator
    }
}

pub fn hamiltonian_vf(f: &MultiVector) -> HamiltonianVf {
    HamiltonianVf {
        generator: f.clone(),
    }
}

/// `{f, g} = [[f, π], g]`.
pub fn derived_poisson(pi: &MultiVector, f: &MultiVector, g: &MultiVector) -> Result<MultiVector> {
    if !f.is_antifield_free() || !g.is_antifield_free() {
        return Err(Error::ContainsAntifields);
    }
    schouten(&schouten(f, pi)?, g)
}

fn require_bivector(pi: &MultiVector) -> Result<()> {
    for (j, _) in pi.arity_decompose() {
        if j != 2 {
            return Err(Error::ArityMismatch { expected: 2, got: j });
        }
    }
    Ok(())
}

/// `{f,{g,h}} - {{f,g},h} - ±{g,{f,h}}` for the derived bracket of a bivector.
/// The sign is the Koszul sign of the bracket's own shift `2n - |π|`, which is
/// `(-1)^{|f||g|}` for an ordinary bivector of degree `2n`.
pub fn jacobiator(pi: &MultiVector, f: &MultiVector, g: &MultiVector, h: &MultiVector) -> Result<MultiVector> {
    require_bivector(pi)?;
    if pi.is_zero() {
        return Ok(MultiVector::zero(&pi.sctx));
    }
    let pdeg = pi
        .degree()
        .ok_or_else(|| Error::DegreeMismatch("bivector must be homogeneous".into()))?;
    let bshift = 2 * pi.shift() - pdeg;
    let deg = |a: &MultiVector| a.degree().unwrap_or(0);
    let br = |a: &MultiVector, b: &MultiVector| derived_poisson(pi, a, b);
    let t1 = br(f, &br(g, h)?)?;
    let t2 = br(&br(f, g)?, h)?;
    let t3 = br(g, &br(f, h)?)?;
    let neg = ((deg(f) + bshift) * (deg(g) + bshift)).rem_euclid(2) == 1;
    let t3 = if neg { -&t3 } else { t3 };
    Ok(&(&t1 - &t2) - &t3)
}

/// Bivector `Σ_{i<j} σ·P[i][j]·x'_i x'_j` on degree-0 coordinates, with
/// `σ = DERIVED_SIGN`, so that the derived bracket of coordinates reproduces `P`.
/// Entries may be polynomials in the base variables.
pub fn bivector_from_matrix(sctx: &SCtx, coords: &[&str], matrix: &[Vec<Poly>]) -> Result<MultiVector> {
    let n = coords.len();
    if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("matrix shape does not match coordinates".into()));
    }
    let ext = &sctx.ext;
    let mut idx = Vec::with_capacity(n);
    for c in coords {
        let i = sctx.base.index_of(c)?;
        if sctx.base.degree(i) != 0 || sctx.base.is_param(i) {
            return Err(Error::DegreeMismatch(format!("'{c}' must be a degree-0 coordinate")));
        }
        if sctx.shift.rem_euclid(2) != 1 {
            return Err(Error::Invalid("bivector matrices need an odd shift".into()));
        }
        idx.push(sctx.antifield_of(i).expect("coordinate"));
    }
    let mut out = Poly::zero(ext);
    for i in 0..n {
        for j in 0..n {
            let a = matrix[i][j].embed(ext)?;
            let b = matrix[j][i].embed(ext)?;
            if a != -&b {
                return Err(Error::NotAntisymmetric);
            }
            if i < j && !a.is_zero() {
                let mono = Poly::product_of_vars(ext, &[idx[i], idx[j]]);
                out = &out + &(&a * &mono).scale_int(DERIVED_SIGN);
            }
        }
    }
    MultiVector::new(sctx, out)
}

/// Naming rule for the dual fiber coordinate produced by [`legendre`].
pub fn dual_fiber_name(name: &str) -> String {
    format!("p_{name}")
}

/// Legendre map `T*[n]E → T*[n](E*[n])` on the declared fibers, using default
/// dual names.
pub fn legendre(f: &MultiVector) -> Result<MultiVector> {
    let names: Vec<String> = f
        .sctx
        .fibers
        .iter()
        .map(|&i| dual_fiber_name(&f.sctx.base.var(i).name))
        .collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    legendre_with_names(f, &names)
}

/// Legendre map with explicit names for the new fiber coordinates.
///
/// On generators: `x ↦ x`, `x' ↦ -x'`, `e ↦ (-1)^{d_e(n+1)} p'`, `e' ↦ p`,
/// where `p` has degree `n - d_e`. This is an algebra isomorphism with
/// `[L F, L G] = -L [F, G]`.
pub fn legendre_with_names(f: &MultiVector, names: &[&str]) -> Result<MultiVector> {
    let sctx = &f.sctx;
    if sctx.fibers.is_empty() {
        return Err(Error::NoFibers);
    }
    if names.len() != sctx.fibers.len() {
        return Err(Error::Invalid("one dual name per fiber is required".into()));
    }
    let n = sctx.shift;
    let base = &sctx.base;
    let mut new_vars = Vec::with_capacity(base.len());
    for (i, v) in base.vars().iter().enumerate() {
        match sctx.fibers.iter().position(|&k| k == i) {
            Some(k) => new_vars.push(Variable::new(names[k], n - v.degree)),
            None => new_vars.push(v.clone()),
        }
    }
    let new_base = GradedContext::new(new_vars)?;
    let new_fibers: Vec<&str> = names.to_vec();
    let target = ShiftedContext::with_fibers(&new_base, n, &new_fibers)?;
    let text = &target.ext;

    let mut images = Vec::with_capacity(sctx.ext.len());
    for i in 0..sctx.ext.len() {
        let img = if i < base.len() {
            if sctx.fibers.contains(&i) {
                let anti = target.antifield_of(i).expect("fiber coordinate");
                let p = Poly::var_index(text, anti);
                let neg = (base.degree(i) * (n + 1)).rem_euclid(2) == 1;
                if neg {
                    -&p
                } else {
                    p
                }
            } else {
                Poly::var_index(text, i)
            }
        } else {
            let coord = sctx.partner[i].expect("antifield");
            if sctx.fibers.contains(&coord) {
                Poly::var_index(text, coord)
            } else {
                -&Poly::var_index(text, target.antifield_of(coord).expect("coordinate"))
            }
        };
        images.push(img);
    }
    MultiVector::new(&target, f.value.map_generators(text, &images))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(n: i64) -> SCtx {
        let base = GradedContext::from_pairs(&[("x", 0), ("y", 0)]).unwrap();
        ShiftedContext::new(&base, n).unwrap()
    }

    fn mv(s: &SCtx, name: &str) -> MultiVector {
        MultiVector::var(s, name).unwrap()
    }

    #[test]
    fn antifield_degrees() {
        let base = GradedContext::from_pairs(&[("x", 0), ("c", 1)]).unwrap();
        let s = ShiftedContext::new(&base, -1).unwrap();
        assert_eq!(s.ext().degree(s.ext().index_of("x'").unwrap()), -1);
        assert_eq!(s.ext().degree(s.ext().index_of("c'").unwrap()), -2);
    }

    #[test]
    fn canonical_pairing() {
        let s = plane(1);
        let (x, xa) = (mv(&s, "x"), mv(&s, "x'"));
        let one = MultiVector::from_base(&s, &Poly::one(s.base())).unwrap();
        assert_eq!(hamiltonian_vf(&xa).apply(&x).unwrap(), one);
        assert_eq!(schouten(&x, &xa).unwrap(), -&one);
        assert!(hamiltonian_vf(&x).apply(&mv(&s, "y")).unwrap().is_zero());
    }

    #[test]
    fn constant_and_planar_bivectors_are_poisson() {
        let s = plane(1);
        let pi = &mv(&s, "x'") * &mv(&s, "y'");
        assert!(schouten(&pi, &pi).unwrap().is_zero());
        let pi2 = &mv(&s, "x") * &pi;
        assert!(schouten(&pi2, &pi2).unwrap().is_zero());
        assert!(schouten(&mv(&s, "x"), &mv(&s, "y")).unwrap().is_zero());
    }

    #[test]
    fn derived_bracket_values() {
        let s = plane(1);
        let (x, y) = (mv(&s, "x"), mv(&s, "y"));
        let pi = &mv(&s, "x'") * &mv(&s, "y'");
        let one = MultiVector::from_base(&s, &Poly::one(s.base())).unwrap();
        assert_eq!(derived_poisson(&pi, &x, &y).unwrap(), one.scale(&DERIVED_SIGN.into()));
        assert_eq!(
            derived_poisson(&pi, &(&x * &x), &y).unwrap(),
            x.scale(&(2 * DERIVED_SIGN).into())
        );
        assert!(derived_poisson(&pi, &x, &x).unwrap().is_zero());
        assert!(matches!(
            derived_poisson(&pi, &mv(&s, "x'"), &y),
            Err(Error::ContainsAntifields)
        ));
    }

    #[test]
    fn matrix_conversion_reproduces_entries() {
        let s = plane(1);
        let base = s.base().clone();
        let one = Poly::one(&base);
        let m = vec![vec![Poly::zero(&base), one.clone()], vec![-&one, Poly::zero(&base)]];
        let pi = bivector_from_matrix(&s, &["x", "y"], &m).unwrap();
        let b = derived_poisson(&pi, &mv(&s, "x"), &mv(&s, "y")).unwrap();
        assert_eq!(b.to_base().unwrap(), one);
        let bad = vec![vec![Poly::zero(&base), one.clone()], vec![one.clone(), Poly::zero(&base)]];
        assert!(matches!(
            bivector_from_matrix(&s, &["x", "y"], &bad),
            Err(Error::NotAntisymmetric)
        ));
    }

    #[test]
    fn jacobiator_vanishes_for_constant_and_zero() {
        let s = plane(1);
        let (x, y) = (mv(&s, "x"), mv(&s, "y"));
        let pi = &mv(&s, "x'") * &mv(&s, "y'");
        assert!(jacobiator(&pi, &x, &y, &x).unwrap().is_zero());
        assert!(jacobiator(&MultiVector::zero(&s), &x, &y, &x).unwrap().is_zero());
        assert!(matches!(
            jacobiator(&mv(&s, "x'"), &x, &y, &x),
            Err(Error::ArityMismatch { .. })
        ));
    }

    fn any_coordinate_jacobiator(pi: &MultiVector, coords: &[MultiVector]) -> bool {
        coords.iter().any(|a| {
            coords.iter().any(|b| {
                coords
                    .iter()
                    .any(|c| !jacobiator(pi, a, b, c).unwrap().is_zero())
            })
        })
    }

    #[test]
    fn jacobi_equivalence_in_three_variables() {
        let base = GradedContext::from_pairs(&[("x", 0), ("y", 0), ("z", 0)]).unwrap();
        let s = ShiftedContext::new(&base, 1).unwrap();
        let v = |n| mv(&s, n);
        let coords = [v("x"), v("y"), v("z")];
        // x'y' + x·y'z': {x,y} and {y,z} = ±x satisfy Jacobi
        let pi = &(&v("x'") * &v("y'")) + &(&v("x") * &(&v("y'") * &v("z'")));
        assert!(schouten(&pi, &pi).unwrap().is_zero());
        assert!(!any_coordinate_jacobiator(&pi, &coords));
        // x·x'y' + y·y'z': {x,y} = ±x, {y,z} = ±y, Jacobiator on (x,y,z) is ±x
        let bad = &(&v("x") * &(&v("x'") * &v("y'"))) + &(&v("y") * &(&v("y'") * &v("z'")));
        assert!(!schouten(&bad, &bad).unwrap().is_zero());
        assert!(any_coordinate_jacobiator(&bad, &coords));
    }

    #[test]
    fn legendre_on_generators() {
        let base = GradedContext::from_pairs(&[("x", 0), ("e", 0)]).unwrap();
        let s = ShiftedContext::with_fibers(&base, 1, &["e"]).unwrap();
        let x = mv(&s, "x");
        let lx = legendre(&x).unwrap();
        assert_eq!(lx.to_string(), "x");
        let e = mv(&s, "e");
        let le = legendre(&e).unwrap();
        // e is sent to the antifield of its dual, which has degree 1
        assert_eq!(le.degree(), Some(0));
        assert_eq!(le.to_string(), "p_e'");
        let ea = mv(&s, "e'");
        let lea = legendre(&ea).unwrap();
        assert_eq!(lea.degree(), Some(1));
        let lhs = schouten(&le, &lea).unwrap();
        let rhs = legendre(&schouten(&e, &ea).unwrap()).unwrap();
        assert_eq!(lhs, -&rhs);
        assert!(matches!(legendre(&mv(&plane(1), "x")), Err(Error::NoFibers)));
    }

    #[test]
    fn legendre_twice_is_signed_identity() {
        let base = GradedContext::from_pairs(&[("x", 0), ("e", 1)]).unwrap();
        for n in [-1i64, 0, 1, 2] {
            let s = ShiftedContext::with_fibers(&base, n, &["e"]).unwrap();
            for g in ["x", "x'", "e", "e'"] {
                let once = legendre(&mv(&s, g)).unwrap();
                let twice = legendre_with_names(&once, &["e"]).unwrap();
                let orig = mv(&s, g);
                assert!(
                    twice.value().to_string() == orig.value().to_string()
                        || twice.value().to_string() == (-orig.value()).to_string(),
                    "n={n} g={g}: {twice}"
                );
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let base = GradedContext::from_pairs(&[("x", 0), ("e", 0)]).unwrap();
        let s = ShiftedContext::with_fibers(&base, 1, &["e"]).unwrap();
        let f = &mv(&s, "x") * &mv(&s, "e'");
        let j = f.to_json();
        assert!(j.contains("\"shift\":1"));
        let back = MultiVector::from_json(&j).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), j);
    }
}
