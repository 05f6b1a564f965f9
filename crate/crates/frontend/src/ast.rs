//! Abstract syntax of `.catt` files.

use catt_core::pasting::PsTree;

use crate::error::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceFile {
    pub decls: Vec<Decl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    /// `coh name tel : ty`
    Coh {
        name: Ident,
        tel: Vec<Binder>,
        ty: TyExpr,
        span: Span,
    },
    /// `let name tel (: ty)? = body`
    Let {
        name: Ident,
        tel: Vec<Binder>,
        ty: Option<TyExpr>,
        body: Expr,
        span: Span,
    },
    /// `check tel (: ty)? = body`, or `check body` without a telescope.
    Check {
        tel: Vec<Binder>,
        ty: Option<TyExpr>,
        body: Expr,
        span: Span,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

/// `(x y : ty)`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binder {
    pub names: Vec<Ident>,
    pub ty: TyExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TyExpr {
    Star(Span),
    Arrow(Box<Expr>, Box<Expr>, Span),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    CylComp { m: usize, k: usize, n: usize },
    CylStack { n: usize },
    ConeComp { m: usize, k: usize, n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(Ident),
    Builtin(Builtin, Span),
    /// `comp{...}`: the unbiased composite of a pasting shape.
    Comp(PsTree, Span),
    /// `coh[tel : ty]`: an anonymous coherence.
    Coh {
        tel: Vec<Binder>,
        ty: Box<TyExpr>,
        span: Span,
    },
    App {
        head: Box<Expr>,
        args: Vec<Arg>,
        span: Span,
    },
}

/// An argument; bracketed arguments select the lifted variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arg {
    pub expr: Expr,
    pub bracketed: bool,
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Name(i) => i.span,
            Expr::Builtin(_, s) | Expr::Comp(_, s) | Expr::Coh { span: s, .. } | Expr::App { span: s, .. } => *s,
        }
    }
}

impl TyExpr {
    pub fn span(&self) -> Span {
        match self {
            TyExpr::Star(s) | TyExpr::Arrow(_, _, s) => *s,
        }
    }
}

impl Decl {
    pub fn span(&self) -> Span {
        match self {
            Decl::Coh { span, .. } | Decl::Let { span, .. } | Decl::Check { span, .. } => *span,
        }
    }
}
