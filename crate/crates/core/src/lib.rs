//! Exact symbolic kernel for graded algebra and the Batalin–Vilkovisky calculus.

pub mod berezin;
pub mod bv;
pub mod context;
pub mod dsl;
pub mod error;
pub mod hochschild;
pub mod homotopy;
pub mod json;
pub mod laws;
pub mod multivector;
pub mod poly;
pub mod quantize;
pub mod random;
pub mod scalar;

pub use context::{Ctx, GradedContext, Variable};
pub use error::{Error, Result};
pub use multivector::{MultiVector, SCtx, ShiftedContext};
pub use poly::{Monomial, Poly};
pub use scalar::Scalar;
