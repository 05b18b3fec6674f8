use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A graded generator. Parameters are even, degree-0 and central; they may carry
/// a truncation order (monomials with a higher exponent are dropped).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub degree: i64,
    pub param: bool,
    pub truncation: Option<u32>,
}

impl Variable {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Variable {
            name: name.into(),
            degree,
            param: false,
            truncation: None,
        }
    }

    pub fn param(name: impl Into<String>, truncation: Option<u32>) -> Self {
        Variable {
            name: name.into(),
            degree: 0,
            param: true,
            truncation,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// Ordered alphabet of graded variables. The declaration order is the canonical
/// monomial order.
#[derive(Clone)]
pub struct GradedContext {
    vars: Vec<Variable>,
    index: HashMap<String, usize>,
    odd: Vec<bool>,
}

pub type Ctx = Arc<GradedContext>;

impl GradedContext {
    pub fn new(vars: Vec<Variable>) -> Result<Ctx> {
        let mut index = HashMap::with_capacity(vars.len());
        for (i, v) in vars.iter().enumerate() {
            if v.name.is_empty() {
                return Err(Error::Invalid("empty variable name".into()));
            }
            if v.param && v.degree != 0 {
                return Err(Error::InvalidParameter(format!(
                    "'{}' must have degree 0",
                    v.name
                )));
            }
            if index.insert(v.name.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        let odd = vars.iter().map(Variable::is_odd).collect();
        Ok(Arc::new(GradedContext { vars, index, odd }))
    }

    /// Convenience constructor from `(name, degree)` pairs.
    pub fn from_pairs(pairs: &[(&str, i64)]) -> Result<Ctx> {
        Self::new(pairs.iter().map(|(n, d)| Variable::new(*n, *d)).collect())
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> &Variable {
        &self.vars[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.vars[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.odd[i]
    }

    pub fn is_param(&self, i: usize) -> bool {
        self.vars[i].param
    }

    /// Indices of the non-parameter variables, in order.
    pub fn coordinates(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.vars[i].param).collect()
    }

    pub fn params(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.vars[i].param).collect()
    }

    /// A copy of this context with extra variables appended.
    pub fn extended(&self, extra: Vec<Variable>) -> Result<Ctx> {
        let mut vars = self.vars.clone();
        vars.extend(extra);
        GradedContext::new(vars)
    }

    pub fn same(a: &Ctx, b: &Ctx) -> bool {
        Arc::ptr_eq(a, b) || a.vars == b.vars
    }
}

impl PartialEq for GradedContext {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for GradedContext {}

impl fmt::Debug for GradedContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.vars.iter().map(|v| {
                if v.param {
                    format!("param {} trunc {:?}", v.name, v.truncation)
                } else {
                    format!("{}: deg {}", v.name, v.degree)
                }
            }))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_graded_params() {
        assert!(matches!(
            GradedContext::from_pairs(&[("x", 0), ("x", 1)]),
            Err(Error::DuplicateVariable(_))
        ));
        let bad = Variable {
            degree: 2,
            ..Variable::param("eps", None)
        };
        assert!(GradedContext::new(vec![bad]).is_err());
    }

    #[test]
    fn parity_uses_euclidean_remainder() {
        let c = GradedContext::from_pairs(&[("a", -1), ("b", -2), ("c", 3)]).unwrap();
        assert!(c.is_odd(0));
        assert!(!c.is_odd(1));
        assert!(c.is_odd(2));
    }
}
