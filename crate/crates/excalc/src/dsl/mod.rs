//! Expression DSL: lexer, AST, parser, printer, and evaluators.
//!
//! The same grammar serves three purposes: scalar literals in fixture files
//! (polynomials and rational functions over the chart coordinates), form
//! literals, and full operator expressions on the command line. `^` is
//! wedge between forms and exponentiation when the left operand is a
//! scalar and the right operand is a nonnegative integer literal; the
//! distinction is made at evaluation time, not at parse time.

mod ast;
mod eval;
mod lex;

pub use ast::{parse, Ast, BinOp, OpKind};
pub use eval::{eval_expr, eval_scalar, Bindings, Value};
