//! Scalar expression language used by scenario files.

pub mod ast;
pub mod field;
pub mod parse;
pub mod validate;

pub use ast::{BinOp, Env, Expr, Func, Ns, Sym};
pub use field::{eval_jet2, Point, ScalarField};
pub use parse::{parse_expr, ParseError};
pub use validate::{check_field, check_written_antisymmetry, Diagnostic, Dims, Severity};
