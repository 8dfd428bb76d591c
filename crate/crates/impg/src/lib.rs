//! IMP(G): a small language of arrows over a declared distributive graph.
//!
//! Programs are parsed ([`syntax`]), checked against flat objects
//! ([`typecheck`]), compiled to forest-machine code ([`compiler`],
//! [`peephole`]) and executed ([`vm`]). [`refeval`] is an independent
//! evaluator on structured values and [`callnf`] rewrites arrows into a
//! single outermost iteration.

pub mod callnf;
pub mod code;
pub mod compiler;
pub mod domcod;
pub mod forest;
pub mod gen;
pub mod objects;
pub mod peephole;
pub mod refeval;
pub mod signature;
pub mod stdlib;
pub mod syntax;
pub mod typecheck;
pub mod vm;

pub use code::{Code, Op};
pub use compiler::{compile_arrow, compile_program, elaborate, CompiledProgram, Mode};
pub use forest::{Datum, Forest, Tree};
pub use objects::{flatten, Flat};
pub use signature::{DiagKind, Diagnostic, Signature};
pub use syntax::{parse_arrow, parse_data, parse_obj, parse_program, Arrow, ObjExpr, Program};
pub use typecheck::tc_program;
pub use vm::{exec, run_arrow, RunError, RuntimeError, DEFAULT_BUDGET};
