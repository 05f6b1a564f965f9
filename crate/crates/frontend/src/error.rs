//! Diagnostics of the front end.

use std::fmt;

use thiserror::Error;

/// A half-open byte range in a source file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    /// One-based line and column of the start of the span.
    pub fn line_col(self, src: &str) -> (usize, usize) {
        let upto = &src[..self.start.min(src.len())];
        let line = upto.matches('\n').count() + 1;
        let col = upto.chars().rev().take_while(|&c| c != '\n').count() + 1;
        (line, col)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Every failure the front end can report. All but `Io` carry a span.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("syntax error: expected {expected}")]
    Syntax { span: Span, expected: String },
    #[error("unknown name `{name}`")]
    UnknownName { span: Span, name: String },
    #[error("`{name}` is already defined")]
    DuplicateName { span: Span, name: String },
    #[error("bracketed variables are not up-closed: `{var}` must be bracketed as well")]
    NotUpClosed { span: Span, var: String },
    #[error("naturality depth {depth} exceeds the supported depth 1")]
    DepthExceeded { span: Span, depth: usize },
    #[error("`{head}` expects {expected} arguments, found {found}")]
    Arity {
        span: Span,
        head: String,
        expected: String,
        found: usize,
    },
    #[error("`{name}` is not a definition and cannot be applied")]
    NotAHead { span: Span, name: String },
    #[error("declared type `{declared}` differs from the elaborated type `{found}`")]
    AnnotationMismatch {
        span: Span,
        declared: String,
        found: String,
    },
    #[error("{source}")]
    Kernel {
        span: Span,
        #[source]
        source: catt_core::Error,
    },
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
}

impl FrontendError {
    pub fn kernel(span: Span, e: catt_core::Error) -> FrontendError {
        match e {
            catt_core::Error::NotUpClosed(var) => FrontendError::NotUpClosed { span, var },
            catt_core::Error::DepthExceeded(depth) => FrontendError::DepthExceeded { span, depth },
            source => FrontendError::Kernel { span, source },
        }
    }

    pub fn span(&self) -> Option<Span> {
        match self {
            FrontendError::Syntax { span, .. }
            | FrontendError::UnknownName { span, .. }
            | FrontendError::DuplicateName { span, .. }
            | FrontendError::NotUpClosed { span, .. }
            | FrontendError::DepthExceeded { span, .. }
            | FrontendError::Arity { span, .. }
            | FrontendError::NotAHead { span, .. }
            | FrontendError::AnnotationMismatch { span, .. }
            | FrontendError::Kernel { span, .. } => Some(*span),
            FrontendError::Io { .. } => None,
        }
    }

    /// A stable machine-readable code.
    pub fn code(&self) -> &'static str {
        use catt_core::Error as E;
        match self {
            FrontendError::Syntax { .. } => "syntax",
            FrontendError::UnknownName { .. } => "unknown-name",
            FrontendError::DuplicateName { .. } => "duplicate-name",
            FrontendError::NotUpClosed { .. } => "not-up-closed",
            FrontendError::DepthExceeded { .. } => "depth-exceeded",
            FrontendError::Arity { .. } => "arity",
            FrontendError::NotAHead { .. } => "not-a-head",
            FrontendError::AnnotationMismatch { .. } => "annotation-mismatch",
            FrontendError::Io { .. } => "io",
            FrontendError::Kernel { source, .. } => match source {
                E::DuplicateVariable(_) => "duplicate-variable",
                E::IllTypedEntry { .. } => "ill-typed-entry",
                E::NotParallel(_) => "not-parallel",
                E::UnboundVariable(_) => "unbound-variable",
                E::NotAPastingContext { .. } => "not-pasting",
                E::NotFull(_) => "not-full",
                E::SubstitutionArity { .. } => "substitution-arity",
                E::SubstitutionOrder { .. } => "substitution-order",
                E::TypeMismatch { .. } => "type-mismatch",
                E::BoundaryMismatch(_) => "boundary-mismatch",
                E::IndexOutOfRange(_) => "index-out-of-range",
                E::NotUpClosed(_) => "not-up-closed",
                E::DepthExceeded(_) => "depth-exceeded",
                E::PhasesNotComposable(_) => "phases-not-composable",
                E::ShapeMismatch(_) => "shape-mismatch",
                E::FacesMismatch(_) => "faces-mismatch",
                E::UnsupportedIndices(_) => "unsupported-indices",
                E::Internal(_) => "internal",
            },
        }
    }

    /// Whether the error signals a broken invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            FrontendError::Kernel {
                source: catt_core::Error::Internal(_),
                ..
            }
        )
    }

    /// `path:line:col: error[code]: message`.
    pub fn render(&self, path: &str, src: &str) -> String {
        match self.span() {
            Some(s) => {
                let (l, c) = s.line_col(src);
                format!("{path}:{l}:{c}: error[{}]: {self}", self.code())
            }
            None => format!("{path}: error[{}]: {self}", self.code()),
        }
    }
}

pub type Result<T, E = FrontendError> = std::result::Result<T, E>;
