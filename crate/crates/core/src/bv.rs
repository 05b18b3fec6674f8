//! The BV Laplacian on `T*[k]V` in Darboux coordinates, master equations and `Ω`.
//!
//! `Δ₀ = Σ_i (-1)^{d_i} ∂_{x_i} ∂_{x_i'}` and `Δ_φ = Δ₀ + ½[φ, ·]` for a volume
//! `e^φ · dx`. With these signs `Δ(x x') = 1`, `Δ² = 0` and
//! `Δ(XY) = ΔX·Y + (-1)^{|X|} X·ΔY + (-1)^{|X|+1} [X, Y]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::json::PolyJson;
use crate::multivector::{MultiVector, SCtx, ShiftedContext};
use crate::poly::Poly;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct BvSpace {
    sctx: SCtx,
    volume: Poly,
    hbar: Option<usize>,
}

/// Residual report shared by the checks in this module.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub residual: PolyJson,
    pub is_zero: bool,
}

impl Residual {
    pub fn of(p: &Poly) -> Self {
        Residual {
            residual: p.to_json_struct(),
            is_zero: p.is_zero(),
        }
    }
}

impl BvSpace {
    /// `k` must be odd; `hbar` names a declared parameter when quantum checks are needed.
    pub fn new(sctx: &SCtx, hbar: Option<&str>) -> Result<Self> {
        if sctx.shift().rem_euclid(2) == 0 {
            return Err(Error::EvenShift(sctx.shift()));
        }
        let hbar = match hbar {
            Some(h) => {
                let i = sctx.ext().index_of(h)?;
                if !sctx.ext().is_param(i) {
                    return Err(Error::InvalidParameter(format!("'{h}' is not a parameter")));
                }
                Some(i)
            }
            None => None,
        };
        Ok(BvSpace {
            sctx: sctx.clone(),
            volume: Poly::zero(sctx.ext()),
            hbar,
        })
    }

    /// Sets the volume datum `φ` (a function of the base variables, even).
    pub fn with_volume(mut self, phi: &Poly) -> Result<Self> {
        let phi = if crate::context::GradedContext::same(phi.context(), self.sctx.ext()) {
            phi.clone()
        } else {
            MultiVector::from_base(&self.sctx, phi)?.into_value()
        };
        if phi.parity() != Some(false) {
            return Err(Error::ParityMismatch("volume".into()));
        }
        if !MultiVector::new(&self.sctx, phi.clone())?.is_antifield_free() {
            return Err(Error::ContainsAntifields);
        }
        self.volume = phi;
        Ok(self)
    }

    pub fn context(&self) -> &SCtx {
        &self.sctx
    }

    pub fn volume(&self) -> &Poly {
        &self.volume
    }

    fn check(&self, f: &Poly) -> Result<()> {
        if crate::context::GradedContext::same(f.context(), self.sctx.ext()) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// The flat part `Δ₀`.
    pub fn laplacian0(&self, f: &Poly) -> Result<Poly> {
        self.check(f)?;
        let base = self.sctx.base();
        let mut out = Poly::zero(f.context());
        for &(x, xa) in self.sctx.pairs() {
            let t = f.partial_index(xa).partial_index(x);
            out = if base.degree(x).rem_euclid(2) == 1 { &out - &t } else { &out + &t };
        }
        Ok(out)
    }

    /// `Δ_φ F = Δ₀F + ½[φ, F]`.
    pub fn bv_laplacian(&self, f: &Poly) -> Result<Poly> {
        let d0 = self.laplacian0(f)?;
        if self.volume.is_zero() {
            return Ok(d0);
        }
        let br = self.sctx.bracket(&self.volume, f);
        Ok(&d0 + &br.scale(&Scalar::ratio(1, 2)))
    }

    /// `Δ(XY) - ΔX·Y - (-1)^{|X|}X·ΔY - (-1)^{|X|+1}[X,Y]`, split over the parity of `X`.
    pub fn delta_xy_residual(&self, x: &Poly, y: &Poly) -> Result<Poly> {
        self.check(x)?;
        self.check(y)?;
        let ext = self.sctx.ext();
        let mut out = self.bv_laplacian(&(x * y))?;
        for odd in [false, true] {
            let xp = x.filter_terms(|m| m.is_odd(ext) == odd);
            if xp.is_zero() {
                continue;
            }
            out = &out - &(&self.bv_laplacian(&xp)? * y);
            let t = &xp * &self.bv_laplacian(y)?;
            let b = self.sctx.bracket(&xp, y);
            out = if odd { &(&out + &t) - &b } else { &(&out - &t) + &b };
        }
        Ok(out)
    }

    fn check_action(&self, s: &Poly) -> Result<()> {
        self.check(s)?;
        for (d, _) in s.degree_decompose() {
            if d != 0 {
                return Err(Error::DegreeMismatch(format!("action has a component of degree {d}")));
            }
        }
        Ok(())
    }

    fn i_hbar(&self) -> Result<Poly> {
        let h = self
            .hbar
            .ok_or_else(|| Error::InvalidParameter("no hbar parameter declared".into()))?;
        Ok(Poly::var_index(self.sctx.ext(), h).scale(&Scalar::i()))
    }

    /// `[S, S]`.
    pub fn cme_residual(&self, s: &Poly) -> Result<Poly> {
        self.check_action(s)?;
        Ok(self.sctx.bracket(s, s))
    }

    /// `[S, S] - 2iħ ΔS`.
    pub fn qme_residual(&self, s: &Poly) -> Result<Poly> {
        self.check_action(s)?;
        let ih = self.i_hbar()?;
        Ok(&self.sctx.bracket(s, s) - &(&ih * &self.bv_laplacian(s)?).scale_int(2))
    }

    /// `Ω(X) = [S, X] - iħ ΔX`.
    pub fn omega_apply(&self, s: &Poly, x: &Poly) -> Result<Poly> {
        self.check_action(s)?;
        self.check(x)?;
        let ih = self.i_hbar()?;
        Ok(&self.sctx.bracket(s, x) - &(&ih * &self.bv_laplacian(x)?))
    }

    /// `Ω(Ω(X))`; equals `½[QME(S), X]`.
    pub fn omega_square_residual(&self, s: &Poly, x: &Poly) -> Result<Poly> {
        let once = self.omega_apply(s, x)?;
        self.omega_apply(s, &once)
    }
}

/// Restricts to the conormal bundle of `C = {c = 0}`: sets the defining
/// coordinates to zero and drops terms with antifields of surviving coordinates.
pub fn conormal_restrict(f: &MultiVector, defining: &[&str]) -> Result<MultiVector> {
    let sctx: &ShiftedContext = f.context();
    let base = sctx.base();
    let mut zero = Vec::new();
    for name in defining {
        let i = base.index_of(name)?;
        if base.is_param(i) {
            return Err(Error::InvalidParameter(format!("'{name}' is a parameter")));
        }
        zero.push(i);
    }
    let tangent: Vec<usize> = sctx
        .pairs()
        .iter()
        .filter(|(x, _)| !zero.contains(x))
        .map(|&(_, xa)| xa)
        .collect();
    let v = f
        .value()
        .set_zero(&zero)
        .filter_terms(|m| tangent.iter().all(|&a| m.exp(a) == 0));
    MultiVector::new(f.context(), v)
}
