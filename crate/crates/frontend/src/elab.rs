//! Elaboration of parsed files into kernel-checked definitions.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use catt_core::kernel::{check_head, check_term, check_type, Ctx, Head, Term, Ty, Var};
use catt_core::naturality::{ctx_up, term_up, up_closure};
use catt_core::pasting::{apply_def, comp_head, reorder};

use crate::ast::*;
use crate::builtins::{run_builtin, validate};
use crate::error::{FrontendError, Result, Span};

/// A checked definition: `ctx ⊢ term : ty`.
#[derive(Clone, Debug)]
pub struct Definition {
    pub name: String,
    pub ctx: Ctx,
    pub ty: Ty,
    pub term: Term,
}

/// The result of a `check` statement.
#[derive(Clone, Debug)]
pub struct Checked {
    pub ctx: Ctx,
    pub ty: Ty,
    pub term: Term,
    pub span: Span,
}

/// Global state of one file: the definitions so far and the checks.
#[derive(Default)]
pub struct Elaborator {
    defs: HashMap<String, Arc<Definition>>,
    order: Vec<String>,
    checks: Vec<Checked>,
}

/// Local variables of a telescope.
struct Scope {
    entries: Vec<(Var, Ty)>,
    names: HashMap<String, Var>,
    ctx: Ctx,
}

impl Scope {
    fn new() -> Scope {
        Scope {
            entries: Vec::new(),
            names: HashMap::new(),
            ctx: Ctx::empty(),
        }
    }

    fn push(&mut self, id: &Ident, ty: Ty) -> Result<()> {
        if self.names.contains_key(&id.name) {
            return Err(FrontendError::DuplicateName {
                span: id.span,
                name: id.name.clone(),
            });
        }
        let v = Var::named(&id.name);
        self.names.insert(id.name.clone(), v);
        self.entries.push((v, ty));
        self.ctx = Ctx::new(self.entries.clone());
        Ok(())
    }
}

fn kernel(span: Span) -> impl Fn(catt_core::Error) -> FrontendError {
    move |e| FrontendError::kernel(span, e)
}

/// Elaborates a whole file.
pub fn elaborate(file: &SourceFile) -> Result<Elaborator> {
    let mut e = Elaborator::new();
    for d in &file.decls {
        e.decl(d)?;
    }
    Ok(e)
}

impl Elaborator {
    pub fn new() -> Elaborator {
        Elaborator::default()
    }

    pub fn get(&self, name: &str) -> Option<&Arc<Definition>> {
        self.defs.get(name)
    }

    /// Definitions in declaration order.
    pub fn definitions(&self) -> impl Iterator<Item = &Arc<Definition>> {
        self.order.iter().map(|n| &self.defs[n])
    }

    pub fn checks(&self) -> &[Checked] {
        &self.checks
    }

    pub fn decl(&mut self, d: &Decl) -> Result<()> {
        match d {
            Decl::Coh { name, tel, ty, span } => {
                self.fresh_name(name)?;
                let def = self.coherence(&name.name, tel, ty, *span)?;
                self.record(def);
            }
            Decl::Let {
                name,
                tel,
                ty,
                body,
                span,
            } => {
                self.fresh_name(name)?;
                let def = self.definition(&name.name, tel, ty.as_ref(), body, *span)?;
                self.record(def);
            }
            Decl::Check { tel, ty, body, span } => {
                let def = self.definition("check", tel, ty.as_ref(), body, *span)?;
                self.checks.push(Checked {
                    ctx: def.ctx.clone(),
                    ty: def.ty.clone(),
                    term: def.term.clone(),
                    span: *span,
                });
            }
        }
        Ok(())
    }

    fn fresh_name(&self, id: &Ident) -> Result<()> {
        if self.defs.contains_key(&id.name) {
            return Err(FrontendError::DuplicateName {
                span: id.span,
                name: id.name.clone(),
            });
        }
        Ok(())
    }

    fn record(&mut self, def: Definition) {
        self.order.push(def.name.clone());
        self.defs.insert(def.name.clone(), Arc::new(def));
    }

    fn telescope(&self, tel: &[Binder]) -> Result<Scope> {
        let mut scope = Scope::new();
        for b in tel {
            let ty = self.ty(&scope, &b.ty)?;
            check_type(&scope.ctx, &ty).map_err(kernel(b.ty.span()))?;
            for id in &b.names {
                scope.push(id, ty.clone())?;
            }
        }
        Ok(scope)
    }

    fn coherence(&self, name: &str, tel: &[Binder], ty: &TyExpr, span: Span) -> Result<Definition> {
        let scope = self.telescope(tel)?;
        let ty = self.ty(&scope, ty)?;
        let ctx = reorder(&scope.entries).map_err(kernel(span))?;
        let head = Head::new(&ctx, &ty);
        check_head(&head).map_err(kernel(span))?;
        Ok(Definition {
            name: name.to_string(),
            term: Term::coh(head, ctx.identity_args()),
            ctx,
            ty,
        })
    }

    fn definition(
        &self,
        name: &str,
        tel: &[Binder],
        ann: Option<&TyExpr>,
        body: &Expr,
        span: Span,
    ) -> Result<Definition> {
        let scope = self.telescope(tel)?;
        let (ctx, term) = match (tel.is_empty(), self.head(body)?) {
            (true, Some(def)) => (def.ctx.clone(), def.term.clone()),
            _ => (scope.ctx.clone(), self.term(&scope, body)?),
        };
        let ty = check_term(&ctx, &term).map_err(kernel(body.span()))?;
        if let Some(a) = ann {
            let declared = self.ty(&scope, a)?;
            if declared != ty {
                return Err(FrontendError::AnnotationMismatch {
                    span: a.span(),
                    declared: declared.to_string(),
                    found: ty.to_string(),
                });
            }
        }
        let _ = span;
        Ok(Definition {
            name: name.to_string(),
            ctx,
            ty,
            term,
        })
    }

    fn ty(&self, scope: &Scope, t: &TyExpr) -> Result<Ty> {
        match t {
            TyExpr::Star(_) => Ok(Ty::obj()),
            TyExpr::Arrow(s, u, span) => {
                let s = self.term(scope, s)?;
                let u = self.term(scope, u)?;
                let a = check_term(&scope.ctx, &s).map_err(kernel(*span))?;
                let b = check_term(&scope.ctx, &u).map_err(kernel(*span))?;
                if a != b {
                    return Err(FrontendError::kernel(
                        *span,
                        catt_core::Error::NotParallel(format!("`{s}` : `{a}` and `{u}` : `{b}`")),
                    ));
                }
                Ok(Ty::arr(a, s, u))
            }
        }
    }

    /// The definition an expression names when used as a head, if any.
    fn head(&self, e: &Expr) -> Result<Option<Arc<Definition>>> {
        match e {
            Expr::Name(id) => Ok(self.defs.get(&id.name).cloned()),
            Expr::Builtin(b, span) => {
                validate(*b).map_err(kernel(*span))?;
                let g = run_builtin(*b).map_err(kernel(*span))?;
                Ok(Some(Arc::new(Definition {
                    name: format!("{b:?}"),
                    ctx: g.ctx.clone(),
                    ty: g.ty.clone(),
                    term: g.term.clone(),
                })))
            }
            Expr::Comp(tree, span) => {
                if tree.is_disc() {
                    return Err(FrontendError::kernel(
                        *span,
                        catt_core::Error::NotFull("the composite of a disc is its top cell".into()),
                    ));
                }
                let h = comp_head(tree);
                Ok(Some(Arc::new(Definition {
                    name: "comp".into(),
                    ctx: h.ctx().clone(),
                    ty: h.ty().clone(),
                    term: h.identity_term(),
                })))
            }
            Expr::Coh { tel, ty, span } => Ok(Some(Arc::new(self.coherence("coh", tel, ty, *span)?))),
            Expr::App { .. } => Ok(None),
        }
    }

    fn term(&self, scope: &Scope, e: &Expr) -> Result<Term> {
        match e {
            Expr::Name(id) => {
                if let Some(v) = scope.names.get(&id.name) {
                    return Ok(Term::var(*v));
                }
                match self.defs.get(&id.name) {
                    Some(d) if d.ctx.is_empty() => Ok(d.term.clone()),
                    Some(d) => Err(FrontendError::Arity {
                        span: id.span,
                        head: id.name.clone(),
                        expected: arity_text(&d.ctx),
                        found: 0,
                    }),
                    None => Err(FrontendError::UnknownName {
                        span: id.span,
                        name: id.name.clone(),
                    }),
                }
            }
            Expr::App { head, args, span } => {
                if let Expr::Name(id) = &**head {
                    if scope.names.contains_key(&id.name) {
                        return Err(FrontendError::NotAHead {
                            span: id.span,
                            name: id.name.clone(),
                        });
                    }
                }
                let def = match self.head(head)? {
                    Some(d) => d,
                    None => {
                        let Expr::Name(id) = &**head else {
                            unreachable!("applications are never heads")
                        };
                        return Err(FrontendError::UnknownName {
                            span: id.span,
                            name: id.name.clone(),
                        });
                    }
                };
                self.apply(scope, &def, args, *span)
            }
            other => {
                let def = self.head(other)?.expect("non-application heads resolve");
                if def.ctx.is_empty() {
                    return Ok(def.term.clone());
                }
                Err(FrontendError::Arity {
                    span: other.span(),
                    head: def.name.clone(),
                    expected: arity_text(&def.ctx),
                    found: 0,
                })
            }
        }
    }

    /// Applies a definition to arguments given either at its locally
    /// maximal variables or at every variable, lifting along the bracketed
    /// ones when there are any.
    fn apply(&self, scope: &Scope, def: &Definition, args: &[Arg], span: Span) -> Result<Term> {
        let gamma = &def.ctx;
        let locmax = gamma.locmax_vars();
        let formals: Vec<Var> = if args.len() == locmax.len() {
            locmax
        } else if args.len() == gamma.len() {
            gamma.vars().collect()
        } else {
            return Err(FrontendError::Arity {
                span,
                head: def.name.clone(),
                expected: arity_text(gamma),
                found: args.len(),
            });
        };
        let actuals = args
            .iter()
            .map(|a| self.term(scope, &a.expr))
            .collect::<Result<Vec<_>>>()?;
        let chosen: BTreeSet<Var> = formals
            .iter()
            .zip(args)
            .filter(|(_, a)| a.bracketed)
            .map(|(x, _)| *x)
            .collect();
        if chosen.is_empty() {
            let given: Vec<(Var, Term)> = formals.into_iter().zip(actuals).collect();
            let sub = apply_def(&scope.ctx, gamma, &given).map_err(kernel(span))?;
            return Ok(def.term.subst(&sub));
        }
        let xs = up_closure(gamma, &chosen);
        for (x, a) in formals.iter().zip(args) {
            if xs.contains(x) && !a.bracketed {
                return Err(FrontendError::NotUpClosed {
                    span: a.expr.span(),
                    var: x.name().to_string(),
                });
            }
        }
        let up = ctx_up(gamma, &xs).map_err(kernel(span))?;
        let lifted = term_up(gamma, &def.term, &xs).map_err(kernel(span))?;
        let given: Vec<(Var, Term)> = formals
            .iter()
            .zip(args)
            .zip(actuals)
            .map(|((x, a), t)| (if a.bracketed { x.bar() } else { *x }, t))
            .collect();
        let sub = apply_def(&scope.ctx, &up.ctx_up, &given).map_err(kernel(span))?;
        Ok(lifted.subst(&sub))
    }
}

fn arity_text(ctx: &Ctx) -> String {
    let l = ctx.locmax_vars().len();
    if l == ctx.len() {
        l.to_string()
    } else {
        format!("{l} or {}", ctx.len())
    }
}
