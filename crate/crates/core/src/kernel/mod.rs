//! Syntax, substitution, matching and the type checker.

mod check;
mod matching;
mod syntax;
mod var;

pub use check::{
    check_context, check_head, check_sub, check_term, check_type, infer, Fullness,
};
pub use matching::{match_term, match_ty, Bindings};
pub use syntax::{Ctx, CtxBuilder, Head, Sub, Term, TermKind, Ty, TyKind, TypeEnv};
pub use var::{Origin, Tag, Var};

/// Alpha-equivalence of two contexts: equal after positional renaming.
pub fn alpha_equiv_ctx(a: &Ctx, b: &Ctx) -> bool {
    a.positional() == b.positional()
}

/// Alpha-equivalence of terms living in two contexts.
pub fn alpha_equiv_term(ga: &Ctx, a: &Term, gb: &Ctx, b: &Term) -> bool {
    ga.len() == gb.len()
        && alpha_equiv_ctx(ga, gb)
        && a.subst(&ga.positional_renaming()) == b.subst(&gb.positional_renaming())
}
