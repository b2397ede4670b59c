//! Numerical toolkit for generalized weighted composition operators
//! `D^n_{φ,u} f = u · f^(n) ∘ φ` between Zygmund-type spaces on the unit disk.

pub mod characterize;
pub mod error;
pub mod expr;
pub mod function;
pub mod gamma;
pub mod jet;
pub mod operator;
pub mod series;
pub mod spaces;
pub mod testfns;

pub type Complex = num_complex::Complex64;

pub use error::{Error, Result};
pub use expr::{parse_expression, CompiledExpr, Expr};
pub use function::{AnalyticMap, ClosedForm, Kernel, MapDescriptor, ParamValue};
pub use jet::Jet;
pub use series::PowerSeries;
