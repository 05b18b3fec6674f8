//! L∞ structures, Maurer–Cartan elements, derived brackets and A∞ structures.
//!
//! L∞ conventions are the symmetric ones: brackets `L_k : S^k V → V` of degree
//! `+1`, and the identity at arity `n` is
//!
//! ```text
//! Σ_{k+l=n} Σ_{(k,l)-shuffles σ} ε(σ) L_{l+1}(L_k(v_σ(1),…,v_σ(k)), v_σ(k+1),…,v_σ(n)) = 0
//! ```
//!
//! with `ε(σ)` the Koszul sign of the permutation in `S(V)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::context::{Ctx, GradedContext};
use crate::error::{Error, Result};
use crate::hochschild::{gerst_bracket, hochschild_b, permutation_sign, Cochain};
use crate::multivector::{schouten, MultiVector, SCtx};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// All `(k, l)`-shuffles as permutations of `0..k+l`.
pub fn shuffles(k: usize, l: usize) -> Vec<Vec<usize>> {
    let n = k + l;
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let first = (0..n).filter(|&i| (mask >> i) & 1 == 1);
        let second = (0..n).filter(|&i| (mask >> i) & 1 == 0);
        out.push(first.chain(second).collect());
    }
    out
}

/// A family of graded-symmetric degree-1 multibrackets.
pub trait Multibrackets {
    type Elem: Clone;

    fn cap(&self) -> usize;
    /// Degree in `V` of a homogeneous element.
    fn degree(&self, e: &Self::Elem) -> Result<i64>;
    fn bracket(&self, args: &[Self::Elem]) -> Result<Self::Elem>;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem, negate: bool) -> Self::Elem;
    fn is_zero(&self, e: &Self::Elem) -> bool;
}

/// The shuffle sum at arity `n = args.len()` on homogeneous arguments.
pub fn linf_residual<T: Multibrackets>(t: &T, args: &[T::Elem]) -> Result<T::Elem> {
    let n = args.len();
    if n > 2 * t.cap() {
        return Err(Error::ArityExceedsCap { arity: n, cap: t.cap() });
    }
    let parities: Vec<bool> = args
        .iter()
        .map(|a| t.degree(a).map(|d| d.rem_euclid(2) == 1))
        .collect::<Result<_>>()?;
    let mut out = t.zero();
    for k in 0..=n {
        let l = n - k;
        if k > t.cap() || l + 1 > t.cap() {
            continue;
        }
        for sigma in shuffles(k, l) {
            let neg = permutation_sign(&parities, &sigma);
            let inner_args: Vec<T::Elem> = sigma[..k].iter().map(|&i| args[i].clone()).collect();
            let inner = t.bracket(&inner_args)?;
            if t.is_zero(&inner) {
                continue;
            }
            let mut outer = vec![inner];
            outer.extend(sigma[k..].iter().map(|&i| args[i].clone()));
            out = t.add(&out, &t.bracket(&outer)?, neg);
        }
    }
    Ok(out)
}

/// All multisets of size `n` drawn from `0..len`, as nondecreasing index lists.
pub fn multisets(len: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(len: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(len, n, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Report for an identity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub n: usize,
    pub witness: Vec<String>,
    pub residual: serde_json::Value,
    pub pass: bool,
}

/// Checks the arity-`n` identity on all multisets of the labelled probes,
/// stopping at the first failure.
pub fn linf_probe<T: Multibrackets>(
    t: &T,
    n: usize,
    probes: &[(String, T::Elem)],
    encode: impl Fn(&T::Elem) -> serde_json::Value,
) -> Result<IdentityReport> {
    for idx in multisets(probes.len(), n) {
        let args: Vec<T::Elem> = idx.iter().map(|&i| probes[i].1.clone()).collect();
        let r = linf_residual(t, &args)?;
        if !t.is_zero(&r) {
            return Ok(IdentityReport {
                identity: format!("Linf_{n}"),
                n,
                witness: idx.iter().map(|&i| probes[i].0.clone()).collect(),
                residual: encode(&r),
                pass: false,
            });
        }
    }
    Ok(IdentityReport {
        identity: format!("Linf_{n}"),
        n,
        witness: vec![],
        residual: encode(&t.zero()),
        pass: true,
    })
}

pub type Vector = Vec<Scalar>;

pub fn vector_json(v: &Vector) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(|c| serde_json::Value::String(c.to_string())).collect())
}

/// Multibrackets on a finite-dimensional graded space, stored on sorted basis tuples.
#[derive(Clone, Debug)]
pub struct MultibracketTable {
    space: Ctx,
    cap: usize,
    entries: BTreeMap<Vec<usize>, Vector>,
}

impl MultibracketTable {
    /// `space` lists the basis labels with their degrees in `V`.
    pub fn new(space: &Ctx, cap: usize) -> Self {
        MultibracketTable {
            space: space.clone(),
            cap,
            entries: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &Ctx {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.len()
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = Scalar::one();
        v
    }

    /// Sorts basis indices, returning the Koszul sign relating the two orders.
    fn canonical(&self, idx: &[usize]) -> (Vec<usize>, bool) {
        let mut perm: Vec<usize> = (0..idx.len()).collect();
        perm.sort_by_key(|&p| idx[p]);
        let parities: Vec<bool> = idx.iter().map(|&i| self.space.is_odd(i)).collect();
        (perm.iter().map(|&p| idx[p]).collect(), permutation_sign(&parities, &perm))
    }

    /// Sets `L_k(e_{i_1}, …, e_{i_k}) = value`, extended by graded symmetry.
    pub fn set(&mut self, idx: &[usize], value: Vector) -> Result<()> {
        if idx.len() > self.cap {
            return Err(Error::ArityExceedsCap { arity: idx.len(), cap: self.cap });
        }
        if value.len() != self.dim() {
            return Err(Error::Invalid("vector length does not match dimension".into()));
        }
        let deg: i64 = idx.iter().map(|&i| self.space.degree(i)).sum::<i64>() + 1;
        for (j, c) in value.iter().enumerate() {
            if !c.is_zero() && self.space.degree(j) != deg {
                return Err(Error::DegreeMismatch(format!(
                    "bracket output {} has degree {}, expected {deg}",
                    self.space.var(j).name,
                    self.space.degree(j)
                )));
            }
        }
        let (sorted, neg) = self.canonical(idx);
        let repeats_odd = sorted.windows(2).any(|w| w[0] == w[1] && self.space.is_odd(w[0]));
        if value.iter().all(Scalar::is_zero) {
            self.entries.remove(&sorted);
            return Ok(());
        }
        if repeats_odd {
            return Err(Error::Invalid("graded symmetry forces repeated odd entries to vanish".into()));
        }
        let value = if neg { value.iter().map(|c| -c.clone()).collect() } else { value };
        self.entries.insert(sorted, value);
        Ok(())
    }

    fn lookup(&self, idx: &[usize]) -> Option<(Vector, bool)> {
        let (sorted, neg) = self.canonical(idx);
        self.entries.get(&sorted).map(|v| (v.clone(), neg))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.entries.iter()
    }

    pub fn probes(&self) -> Vec<(String, Vector)> {
        (0..self.dim())
            .map(|i| (self.space.var(i).name.clone(), self.basis_vector(i)))
            .collect()
    }
}

impl Multibrackets for MultibracketTable {
    type Elem = Vector;

    fn cap(&self) -> usize {
        self.cap
    }

    fn degree(&self, e: &Vector) -> Result<i64> {
        let mut d = None;
        for (i, c) in e.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let di = self.space.degree(i);
            if d.is_some_and(|d| d != di) {
                return Err(Error::DegreeMismatch("inhomogeneous vector".into()));
            }
            d = Some(di);
        }
        Ok(d.unwrap_or(0))
    }

    fn bracket(&self, args: &[Vector]) -> Result<Vector> {
        let mut out = self.zero();
        if args.len() > self.cap {
            return Ok(out);
        }
        // expand multilinearly over nonzero coordinates
        let supports: Vec<Vec<usize>> = args
            .iter()
            .map(|a| (0..a.len()).filter(|&i| !a[i].is_zero()).collect())
            .collect();
        let mut idx = vec![0usize; args.len()];
        fn rec(
            t: &MultibracketTable,
            args: &[Vector],
            supports: &[Vec<usize>],
            k: usize,
            idx: &mut Vec<usize>,
            coeff: Scalar,
            out: &mut Vector,
        ) {
            if k == args.len() {
                if let Some((v, neg)) = t.lookup(idx) {
                    let c = coeff.signed(neg);
                    for (o, x) in out.iter_mut().zip(v.iter()) {
                        *o += &(&c * x);
                    }
                }
                return;
            }
            for &i in &supports[k] {
                idx[k] = i;
                rec(t, args, supports, k + 1, idx, &coeff * &args[k][i], out);
            }
        }
        rec(self, args, &supports, 0, &mut idx, Scalar::one(), &mut out);
        Ok(out)
    }

    fn zero(&self) -> Vector {
        vec![Scalar::zero(); self.dim()]
    }

    fn add(&self, a: &Vector, b: &Vector, negate: bool) -> Vector {
        a.iter()
            .zip(b)
            .map(|(x, y)| if negate { x - y } else { x + y })
            .collect()
    }

    fn is_zero(&self, e: &Vector) -> bool {
        e.iter().all(Scalar::is_zero)
    }
}

/// A finite-dimensional DGLA given by structure constants.
#[derive(Clone, Debug)]
pub struct Dgla {
    space: Ctx,
    /// `d(e_i)`
    differential: Vec<Vector>,
    /// `[e_i, e_j]`
    bracket: Vec<Vec<Vector>>,
}

impl Dgla {
    /// Validates degrees, graded antisymmetry, `d² = 0`, the Leibniz rule and graded Jacobi.
    pub fn new(space: &Ctx, differential: Vec<Vector>, bracket: Vec<Vec<Vector>>) -> Result<Self> {
        let g = Self::new_unchecked(space, differential, bracket)?;
        g.validate()?;
        Ok(g)
    }

    /// Only checks shapes; used to exhibit failures of the identities.
    pub fn new_unchecked(space: &Ctx, differential: Vec<Vector>, bracket: Vec<Vec<Vector>>) -> Result<Self> {
        let n = space.len();
        let bad_shape = differential.len() != n
            || differential.iter().any(|v| v.len() != n)
            || bracket.len() != n
            || bracket.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n));
        if bad_shape {
            return Err(Error::Invalid("structure constants do not match the dimension".into()));
        }
        Ok(Dgla {
            space: space.clone(),
            differential,
            bracket,
        })
    }

    /// Abelian Lie algebra with zero differential.
    pub fn abelian(space: &Ctx) -> Self {
        let n = space.len();
        let z = vec![Scalar::zero(); n];
        Dgla {
            space: space.clone(),
            differential: vec![z.clone(); n],
            bracket: vec![vec![z; n]; n],
        }
    }

    pub fn space(&self) -> &Ctx {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.len()
    }

    fn zero(&self) -> Vector {
        vec![Scalar::zero(); self.dim()]
    }

    fn axpy(out: &mut Vector, c: &Scalar, v: &Vector) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += &(c * x);
        }
    }

    pub fn d(&self, v: &Vector) -> Vector {
        let mut out = self.zero();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                Self::axpy(&mut out, c, &self.differential[i]);
            }
        }
        out
    }

    pub fn br(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    Self::axpy(&mut out, &(x * y), &self.bracket[i][j]);
                }
            }
        }
        out
    }

    fn deg(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    fn basis(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v[i] = Scalar::one();
        v
    }

    fn is_zero(v: &Vector) -> bool {
        v.iter().all(Scalar::is_zero)
    }

    fn sub(a: &Vector, b: &Vector) -> Vector {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    fn add(a: &Vector, b: &Vector) -> Vector {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn neg_if(v: Vector, neg: bool) -> Vector {
        if neg {
            v.into_iter().map(|c| -c).collect()
        } else {
            v
        }
    }

    /// `[[a,b],c] + (-1)^{|a||b|}[b,[a,c]] - [a,[b,c]]` on basis elements; this
    /// orientation equals the arity-3 residual of the induced L∞ table.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vector {
        let (a, b, c) = (self.basis(i), self.basis(j), self.basis(k));
        let t1 = self.br(&a, &self.br(&b, &c));
        let t2 = self.br(&self.br(&a, &b), &c);
        let t3 = self.br(&b, &self.br(&a, &c));
        let t3 = Self::neg_if(t3, (self.deg(i) * self.deg(j)).rem_euclid(2) == 1);
        Self::sub(&Self::add(&t2, &t3), &t1)
    }

    /// The Jacobiator transported to `g[1]`: `(-1)^{|b|} s J(a, b, c)`, which is
    /// exactly the arity-3 residual of the induced table on `(sa, sb, sc)`.
    pub fn suspended_jacobiator(&self, i: usize, j: usize, k: usize) -> Vector {
        Self::neg_if(self.jacobiator(i, j, k), self.deg(j).rem_euclid(2) == 1)
    }

    fn names(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.space.var(i).name.clone()).collect()
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for (j, c) in self.differential[i].iter().enumerate() {
                if !c.is_zero() && self.deg(j) != self.deg(i) + 1 {
                    return Err(Error::DegreeMismatch(format!("d({}) has wrong degree", self.space.var(i).name)));
                }
            }
            if !Self::is_zero(&self.d(&self.d(&self.basis(i)))) {
                return Err(Error::Invalid(format!("d² ≠ 0 on {}", self.space.var(i).name)));
            }
            for j in 0..n {
                for (k, c) in self.bracket[i][j].iter().enumerate() {
                    if !c.is_zero() && self.deg(k) != self.deg(i) + self.deg(j) {
                        return Err(Error::DegreeMismatch(format!("[{}, {}] has wrong degree", self.space.var(i).name, self.space.var(j).name)));
                    }
                }
                let sym = (self.deg(i) * self.deg(j)).rem_euclid(2) == 1;
                let swapped = Self::neg_if(self.bracket[j][i].clone(), !sym);
                if self.bracket[i][j] != swapped {
                    return Err(Error::NotAntisymmetric);
                }
                // d[a,b] = [da,b] + (-1)^{|a|}[a,db]
                let (a, b) = (self.basis(i), self.basis(j));
                let lhs = self.d(&self.br(&a, &b));
                let r2 = Self::neg_if(self.br(&a, &self.d(&b)), self.deg(i).rem_euclid(2) == 1);
                let rhs = Self::add(&self.br(&self.d(&a), &b), &r2);
                if lhs != rhs {
                    return Err(Error::Invalid(format!(
                        "d is not a derivation on ({})",
                        self.names(&[i, j]).join(", ")
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !Self::is_zero(&self.jacobiator(i, j, k)) {
                        return Err(Error::JacobiFails { witness: self.names(&[i, j, k]) });
                    }
                }
            }
        }
        Ok(())
    }

    /// Name of the suspended basis element.
    pub fn suspended_name(name: &str) -> String {
        format!("s{name}")
    }

    /// `V = g[1]`, `L₁(sx) = -s dx`, `L₂(sx, sy) = (-1)^{|x|} s[x, y]`.
    pub fn to_linf(&self) -> Result<MultibracketTable> {
        let pairs: Vec<(String, i64)> = (0..self.dim())
            .map(|i| (Self::suspended_name(&self.space.var(i).name), self.deg(i) - 1))
            .collect();
        let refs: Vec<(&str, i64)> = pairs.iter().map(|(n, d)| (n.as_str(), *d)).collect();
        let v = GradedContext::from_pairs(&refs)?;
        let mut t = MultibracketTable::new(&v, 2);
        for i in 0..self.dim() {
            let d = self.differential[i].iter().map(|c| -c.clone()).collect();
            t.set(&[i], d)?;
            for j in i..self.dim() {
                let val = Self::neg_if(self.bracket[i][j].clone(), self.deg(i).rem_euclid(2) == 1);
                t.set(&[i, j], val)?;
            }
        }
        Ok(t)
    }
}

/// Validated conversion; a bracket failing Jacobi is rejected with a witness triple.
pub fn dgla_to_linf(g: &Dgla) -> Result<MultibracketTable> {
    g.validate()?;
    g.to_linf()
}

/// A degree-1 element of one of the supported DGLAs.
#[derive(Clone, Debug)]
pub enum McElement {
    /// Multivector fields `X[n]` with the Schouten bracket and `d = 0`.
    MultiVector(MultiVector),
    /// Multidifferential operators with `b` and the Gerstenhaber bracket.
    Cochain(Cochain),
    /// A finite-dimensional DGLA.
    Finite(Arc<Dgla>, Vector),
}

impl McElement {
    pub fn is_zero(&self) -> bool {
        match self {
            McElement::MultiVector(m) => m.is_zero(),
            McElement::Cochain(c) => c.is_zero(),
            McElement::Finite(_, v) => v.iter().all(Scalar::is_zero),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            McElement::MultiVector(m) => serde_json::to_value(m.to_json_struct()).expect("serializable"),
            McElement::Cochain(c) => serde_json::to_value(c.to_json_struct()).expect("serializable"),
            McElement::Finite(_, v) => vector_json(v),
        }
    }
}

impl std::fmt::Display for McElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            McElement::MultiVector(m) => write!(f, "{}", m.value()),
            McElement::Cochain(c) => write!(f, "{c}"),
            McElement::Finite(_, v) => {
                let s: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "[{}]", s.join(", "))
            }
        }
    }
}

/// `dx + ½[x, x]`.
pub fn mc_residual(x: &McElement) -> Result<McElement> {
    let half = Scalar::ratio(1, 2);
    match x {
        McElement::MultiVector(m) => {
            if !m.is_zero() {
                let want = m.shift() + 1;
                for (d, _) in m.degree_decompose() {
                    if d != want {
                        return Err(Error::DegreeMismatch(format!("expected degree {want}, found {d}")));
                    }
                }
            }
            Ok(McElement::MultiVector(schouten(m, m)?.scale(&half)))
        }
        McElement::Cochain(c) => {
            if !c.is_zero() && c.shifted_degree() != Some(1) {
                return Err(Error::DegreeMismatch("cochain must have shifted degree 1".into()));
            }
            let r = hochschild_b(c)?.try_add(&gerst_bracket(c, c)?.scale(&half))?;
            Ok(McElement::Cochain(r))
        }
        McElement::Finite(g, v) => {
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() && g.deg(i) != 1 {
                    return Err(Error::DegreeMismatch("element must have degree 1".into()));
                }
            }
            let mut r = g.d(v);
            Dgla::axpy(&mut r, &half, &g.br(v, v));
            Ok(McElement::Finite(g.clone(), r))
        }
    }
}

/// The derived brackets `λ_i(a_1,…,a_i) = pr[…[[F, a_1], a_2]…, a_i]`.
#[derive(Clone, Debug)]
pub struct DerivedBrackets {
    f: MultiVector,
    cap: usize,
}

impl DerivedBrackets {
    pub fn new(f: &MultiVector, cap: usize) -> Self {
        DerivedBrackets { f: f.clone(), cap }
    }

    pub fn generator(&self) -> &MultiVector {
        &self.f
    }

    pub fn context(&self) -> &SCtx {
        self.f.context()
    }

    /// `λ₀ = pr F`.
    pub fn curvature(&self) -> MultiVector {
        self.f.project()
    }

    pub fn is_flat(&self) -> bool {
        self.curvature().is_zero()
    }

    pub fn lambda(&self, args: &[MultiVector]) -> Result<MultiVector> {
        let mut acc = self.f.clone();
        for a in args {
            if !a.is_antifield_free() {
                return Err(Error::ContainsAntifields);
            }
            acc = schouten(&acc, a)?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc.project())
    }

    /// Coordinates of the base as labelled probes.
    pub fn coordinate_probes(&self) -> Vec<(String, MultiVector)> {
        let sctx = self.context();
        sctx.coordinates()
            .into_iter()
            .map(|i| {
                let name = sctx.ext().var(i).name.clone();
                let v = MultiVector::var(sctx, &name).expect("coordinate");
                (name, v)
            })
            .collect()
    }

    /// Coordinate monomials up to the given total degree, as probes.
    pub fn monomial_probes(&self, max_total: u32) -> Vec<(String, MultiVector)> {
        let sctx = self.context();
        let ext = sctx.ext();
        crate::random::monomials_up_to(ext, &sctx.coordinates(), max_total)
            .into_iter()
            .filter(|m| !m.is_one())
            .map(|m| {
                let p = Poly::term(ext, m.clone(), Scalar::one());
                (m.fmt_with(ext), MultiVector::new(sctx, p).expect("same context"))
            })
            .collect()
    }
}

impl Multibrackets for DerivedBrackets {
    type Elem = MultiVector;

    fn cap(&self) -> usize {
        self.cap
    }

    fn degree(&self, e: &MultiVector) -> Result<i64> {
        if e.is_zero() {
            return Ok(0);
        }
        e.degree()
            .map(|d| d - self.f.shift())
            .ok_or_else(|| Error::DegreeMismatch("inhomogeneous argument".into()))
    }

    fn bracket(&self, args: &[MultiVector]) -> Result<MultiVector> {
        self.lambda(args)
    }

    fn zero(&self) -> MultiVector {
        MultiVector::zero(self.context())
    }

    fn add(&self, a: &MultiVector, b: &MultiVector, negate: bool) -> MultiVector {
        if negate {
            a - b
        } else {
            a + b
        }
    }

    fn is_zero(&self, e: &MultiVector) -> bool {
        e.is_zero()
    }
}

pub fn derived_brackets(f: &MultiVector, cap: usize) -> DerivedBrackets {
    DerivedBrackets::new(f, cap)
}

/// The A∞ structure `m = μ + B` induced by an MC cochain.
#[derive(Clone, Debug)]
pub struct AinfReport {
    pub m: Cochain,
    /// `[m, m]`
    pub square: Cochain,
    /// Arity components `A_k` of `m`.
    pub components: Vec<(usize, Cochain)>,
    /// Arity-`r` parts `Σ_{p+q=r+1} [A_p, A_q]` of `[m, m]`.
    pub relations: Vec<(usize, Cochain)>,
    pub flat: bool,
}

impl AinfReport {
    pub fn is_ainf(&self) -> bool {
        self.square.is_zero()
    }

    pub fn component(&self, k: usize) -> Cochain {
        self.m.arity_component(k)
    }

    pub fn relation(&self, r: usize) -> Cochain {
        self.square.arity_component(r)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "identity": "Ainf",
            "flat": self.flat,
            "pass": self.is_ainf(),
            "arities": self.components.iter().map(|(k, _)| k).collect::<Vec<_>>(),
            "residual": self.square.to_json_struct(),
        })
    }
}

pub fn ainf_from_mc(b: &Cochain) -> Result<AinfReport> {
    let residual = mc_residual(&McElement::Cochain(b.clone()))?;
    if !residual.is_zero() {
        return Err(Error::NotMaurerCartan { residual: residual.to_string() });
    }
    let m = Cochain::product(b.context()).try_add(b)?;
    let square = gerst_bracket(&m, &m)?;
    let components = m.arities().into_iter().map(|k| (k, m.arity_component(k))).collect();
    let relations = square
        .arities()
        .into_iter()
        .map(|r| (r, square.arity_component(r)))
        .collect();
    let flat = m.arity_component(0).is_zero();
    Ok(AinfReport {
        m,
        square,
        components,
        relations,
        flat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn shuffle_counts() {
        for n in 0..=6 {
            for k in 0..=n {
                let s = shuffles(k, n - k);
                assert_eq!(s.len(), binomial(n, k));
                for p in &s {
                    assert!(p[..k].windows(2).all(|w| w[0] < w[1]));
                    assert!(p[k..].windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }

    fn solvable() -> Dgla {
        let c = GradedContext::from_pairs(&[("e1", 0), ("e2", 0)]).unwrap();
        let z = || vec![Scalar::zero(); 2];
        let e2 = vec![Scalar::zero(), Scalar::one()];
        let me2 = vec![Scalar::zero(), Scalar::from_int(-1)];
        Dgla::new(&c, vec![z(), z()], vec![vec![z(), e2], vec![me2, z()]]).unwrap()
    }

    #[test]
    fn abelian_table_has_zero_residuals() {
        let c = GradedContext::from_pairs(&[("a", 0), ("b", 1)]).unwrap();
        let t = dgla_to_linf(&Dgla::abelian(&c)).unwrap();
        assert_eq!(t.entries().count(), 0);
        for n in 1..=4 {
            assert!(linf_probe(&t, n, &t.probes(), vector_json).unwrap().pass);
        }
    }

    #[test]
    fn solvable_algebra_passes() {
        let t = dgla_to_linf(&solvable()).unwrap();
        for n in 1..=4 {
            assert!(linf_probe(&t, n, &t.probes(), vector_json).unwrap().pass);
        }
        assert!(matches!(linf_residual(&t, &vec![t.basis_vector(0); 5]), Err(Error::ArityExceedsCap { .. })));
    }

    #[test]
    fn corrupted_bracket_is_rejected() {
        // [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e3: Jacobiator on (e1,e2,e3) is e1
        let c = GradedContext::from_pairs(&[("e1", 0), ("e2", 0), ("e3", 0)]).unwrap();
        let z = vec![Scalar::zero(); 3];
        let e = |i: usize, s: i64| {
            let mut v = z.clone();
            v[i] = Scalar::from_int(s);
            v
        };
        let mut br = vec![vec![z.clone(); 3]; 3];
        br[0][1] = e(2, 1);
        br[1][0] = e(2, -1);
        br[1][2] = e(0, 1);
        br[2][1] = e(0, -1);
        br[2][0] = e(2, 1);
        br[0][2] = e(2, -1);
        let d = vec![z.clone(); 3];
        let err = Dgla::new(&c, d.clone(), br.clone()).unwrap_err();
        assert!(matches!(err, Error::JacobiFails { .. }));
        let g = Dgla::new_unchecked(&c, d, br).unwrap();
        let t = g.to_linf().unwrap();
        let r = linf_probe(&t, 3, &t.probes(), vector_json).unwrap();
        assert!(!r.pass);
        assert_eq!(r.witness.len(), 3);
    }

    #[test]
    fn finite_mc_elements() {
        let g = Arc::new(solvable());
        let zero = McElement::Finite(g.clone(), vec![Scalar::zero(); 2]);
        assert!(mc_residual(&zero).unwrap().is_zero());
        let bad = McElement::Finite(g, vec![Scalar::one(), Scalar::zero()]);
        assert!(matches!(mc_residual(&bad), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn trivial_ainf() {
        let c = GradedContext::from_pairs(&[("x", 0)]).unwrap();
        let r = ainf_from_mc(&Cochain::zero(&c)).unwrap();
        assert!(r.is_ainf() && r.flat);
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.component(2), Cochain::product(&c));
    }
}
