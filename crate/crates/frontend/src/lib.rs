//! Surface language for CATT with naturality: lexer, parser, elaborator,
//! printer and the cylinder and cone builtins.
//!
//! A file is a sequence of `coh`, `let` and `check` declarations. An
//! argument written in brackets, as in `assoc [f_arrow] g h`, selects the
//! variable of the head along which the head is lifted.

pub mod ast;
pub mod builtins;
pub mod elab;
pub mod error;
pub mod lexer;
pub mod parser;
pub mod printer;

pub use ast::{Builtin, SourceFile};
pub use builtins::{run_builtin, sizes, SizeKind};
pub use elab::{elaborate, Checked, Definition, Elaborator};
pub use error::{FrontendError, Result, Span};
pub use parser::{parse, parse_expr};
pub use printer::{print_term, print_ty, size, Printer};

/// Parses and elaborates a source text.
pub fn check_source(src: &str) -> Result<Elaborator> {
    elaborate(&parse(src)?)
}
