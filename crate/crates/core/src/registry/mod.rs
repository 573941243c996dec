//! Typed function interfaces with multiple implementations, an evaluator
//! with memoization, and a test runner that picks implementations.

mod datum;
mod eval;
mod expr;
mod function;
pub mod stdlib;
mod testing;
mod types;

pub use datum::Datum;
pub use eval::{
    BuiltinFn, CacheStats, EvalError, EvalOptions, Evaluator, Registry, RegistryConfig, RegistryError,
};
pub use expr::{parse_expr, Expr, RawExpr};
pub use function::{FunctionDef, FunctionDocument, ImplKind, Implementation, Param, TestCase};
pub use testing::{EvalReport, ImplementationReport, TestResult, TIMING_RUNS};
pub use types::{SemanticType, TypeDef};

#[cfg(test)]
mod tests;
