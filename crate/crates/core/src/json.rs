//! JSON encodings. Rationals are written as `"p/q"` strings; terms follow the
//! canonical monomial order so that encoding is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::context::{Ctx, GradedContext, Variable};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::scalar::{parse_rational, rational_to_string, Scalar};

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarJson {
    pub name: String,
    pub degree: i64,
    #[serde(default, skip_serializing_if = "is_false")]
    pub param: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub mono: BTreeMap<String, u32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub context: Vec<VarJson>,
    pub terms: Vec<TermJson>,
}

pub fn context_to_json(ctx: &GradedContext) -> Vec<VarJson> {
    ctx.vars()
        .iter()
        .map(|v| VarJson {
            name: v.name.clone(),
            degree: v.degree,
            param: v.param,
            trunc: v.truncation,
        })
        .collect()
}

pub fn context_from_json(vars: &[VarJson]) -> Result<Ctx> {
    GradedContext::new(
        vars.iter()
            .map(|v| {
                if v.param {
                    Variable::param(v.name.clone(), v.trunc)
                } else {
                    Variable::new(v.name.clone(), v.degree)
                }
            })
            .collect(),
    )
}

pub(crate) fn terms_to_json(p: &Poly) -> Vec<TermJson> {
    let ctx = p.context();
    p.terms()
        .map(|(m, c)| TermJson {
            mono: m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (ctx.var(i).name.clone(), e))
                .collect(),
            re: rational_to_string(&c.re),
            im: rational_to_string(&c.im),
        })
        .collect()
}

pub(crate) fn terms_from_json(ctx: &Ctx, terms: &[TermJson]) -> Result<Poly> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let mut m = Monomial::one(ctx.len());
        for (name, &e) in &t.mono {
            let i = ctx.index_of(name)?;
            if e > 1 && ctx.is_odd(i) {
                return Err(Error::Parse(format!("odd variable '{name}' squared")));
            }
            m.0[i] = e;
        }
        let c = Scalar::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
        out.push((m, c));
    }
    Poly::from_terms(ctx, out)
}

impl Poly {
    pub fn to_json_struct(&self) -> PolyJson {
        PolyJson {
            context: context_to_json(self.context()),
            terms: terms_to_json(self),
        }
    }

    pub fn from_json_struct(j: &PolyJson) -> Result<Poly> {
        let ctx = context_from_json(&j.context)?;
        terms_from_json(&ctx, &j.terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_struct()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Poly> {
        let j: PolyJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_struct(&j)
    }
}
