//! Python bindings: scripts in the bvkit language are evaluated into a
//! `Session`, whose bindings can be inspected and checked.

use bvkit::bv::BvSpace;
use bvkit::dsl::{evaluate, parse, print_script, Diagnostic, Env, EvalOptions, Value};
use bvkit::homotopy::{mc_residual, McElement};
use bvkit::multivector::schouten;
use bvkit::quantize::{conormal_build, koszul_build};
use bvkit::MultiVector;
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

fn kernel<T>(r: bvkit::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

fn diagnostics_error(diags: &[Diagnostic]) -> PyErr {
    let lines: Vec<String> = diags.iter().map(|d| d.render("<script>")).collect();
    PyValueError::new_err(lines.join("\n"))
}

fn to_python<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn load(source: &str, order: Option<u32>) -> PyResult<Env> {
    let script = parse(source).map_err(|d| diagnostics_error(&d))?;
    evaluate(&script, EvalOptions { order }).map_err(|d| diagnostics_error(&d))
}

/// An evaluated script.
#[pyclass(module = "bvkit_py")]
struct Session {
    source: String,
    order: Option<u32>,
    env: Env,
}

impl Session {
    fn function(&self, name: &str) -> PyResult<&MultiVector> {
        self.env
            .function(name)
            .ok_or_else(|| PyKeyError::new_err(format!("no function named '{name}'")))
    }

    fn bv(&self, hbar: Option<&str>) -> PyResult<BvSpace> {
        let mut bv = kernel(BvSpace::new(&self.env.sctx, hbar))?;
        if hbar.is_some() {
            if let Some(phi) = self.env.function("phi") {
                bv = kernel(bv.with_volume(&kernel(phi.to_base())?))?;
            }
        }
        Ok(bv)
    }
}

#[pymethods]
impl Session {
    #[new]
    #[pyo3(signature = (source, order = None))]
    fn new(source: &str, order: Option<u32>) -> PyResult<Self> {
        let env = load(source, order)?;
        Ok(Session { source: source.to_string(), order, env })
    }

    /// Names bound by `let`.
    fn names(&self) -> Vec<String> {
        self.env.bindings.keys().cloned().collect()
    }

    fn __getitem__(&self, name: &str) -> PyResult<String> {
        self.env
            .bindings
            .get(name)
            .map(Value::to_string)
            .ok_or_else(|| PyKeyError::new_err(name.to_string()))
    }

    fn __contains__(&self, name: &str) -> bool {
        self.env.bindings.contains_key(name)
    }

    /// Evaluates an expression in the scope of the script.
    fn eval(&self, expr: &str) -> PyResult<String> {
        let src = format!("{}\nshow {expr};\n", self.source);
        let env = load(&src, self.order)?;
        let (_, v) = env.shows.last().expect("one show statement");
        Ok(v.to_string())
    }

    /// `(statement, passed, residual)` for every `check`.
    fn checks(&self) -> Vec<(String, bool, String)> {
        self.env
            .checks
            .iter()
            .map(|c| (c.statement.clone(), c.pass, c.residual.to_string()))
            .collect()
    }

    /// The Schouten bracket of two bound functions.
    fn schouten(&self, a: &str, b: &str) -> PyResult<String> {
        let r = kernel(schouten(self.function(a)?, self.function(b)?))?;
        Ok(r.value().to_string())
    }

    #[pyo3(signature = (name = "pi"))]
    fn is_poisson(&self, name: &str) -> PyResult<bool> {
        let pi = self.function(name)?;
        Ok(kernel(schouten(pi, pi))?.is_zero())
    }

    /// `[F, F]` for the bound function `name`.
    #[pyo3(signature = (name = "F"))]
    fn mc_residual(&self, name: &str) -> PyResult<String> {
        let f = self.function(name)?;
        match kernel(mc_residual(&McElement::MultiVector(f.clone())))? {
            McElement::MultiVector(r) => Ok(r.value().to_string()),
            other => Ok(other.to_json().to_string()),
        }
    }

    #[pyo3(signature = (name = "S"))]
    fn cme(&self, name: &str) -> PyResult<String> {
        let s = self.function(name)?;
        Ok(kernel(self.bv(None)?.cme_residual(s.value()))?.to_string())
    }

    /// Quantum master equation; uses the binding `phi` as volume when present.
    #[pyo3(signature = (name = "S", hbar = "hbar"))]
    fn qme(&self, name: &str, hbar: &str) -> PyResult<String> {
        let s = self.function(name)?;
        Ok(kernel(self.bv(Some(hbar))?.qme_residual(s.value()))?.to_string())
    }

    /// Koszul model of `pi` with the declared constraints.
    fn koszul<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let pi = match self.env.function("pi") {
            Some(p) => p.clone(),
            None => MultiVector::zero(&self.env.sctx),
        };
        let model = kernel(koszul_build(&pi, &self.env.constraints))?;
        to_python(py, &kernel(model.report())?)
    }

    /// Derived brackets on the conormal bundle of the `split` coordinates.
    #[pyo3(signature = (taylor = 3, cap = 3))]
    fn conormal<'py>(&self, py: Python<'py>, taylor: u32, cap: usize) -> PyResult<Bound<'py, PyAny>> {
        let pi = self.function("pi")?;
        let split: Vec<&str> = self.env.split.iter().map(String::as_str).collect();
        let model = kernel(conormal_build(pi, &split, taylor))?;
        to_python(py, &kernel(model.report(cap))?.to_json())
    }

    /// JSON form of a bound function.
    fn to_json(&self, name: &str) -> PyResult<String> {
        Ok(self.function(name)?.to_json())
    }

    fn __repr__(&self) -> String {
        format!("Session({} bindings)", self.env.bindings.len())
    }
}

/// Canonical formatting of a script.
#[pyfunction]
fn format_script(source: &str) -> PyResult<String> {
    let script = parse(source).map_err(|d| diagnostics_error(&d))?;
    Ok(print_script(&script))
}

/// Parse and evaluation errors as `(line, col, message)`; empty when the script is valid.
#[pyfunction]
fn diagnose(source: &str) -> Vec<(usize, usize, String)> {
    let diags = match parse(source) {
        Ok(s) => match evaluate(&s, EvalOptions::default()) {
            Ok(_) => vec![],
            Err(d) => d,
        },
        Err(d) => d,
    };
    diags.into_iter().map(|d| (d.line, d.col, d.message)).collect()
}

#[pymodule]
fn bvkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Session>()?;
    m.add_function(wrap_pyfunction!(format_script, m)?)?;
    m.add_function(wrap_pyfunction!(diagnose, m)?)?;
    Ok(())
}
