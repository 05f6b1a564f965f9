//! The type checker.
//!
//! Head validity and term types are cached globally: a head is checked
//! once, and a term is typed once per context.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, LazyLock, Mutex};

use super::syntax::{Applier, Ctx, CtxBuilder, Head, Sub, Term, TermKind, Ty, TyKind, TypeEnv};
use crate::error::{Error, Result};
use crate::pasting;

/// The two flavours of full coherence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fullness {
    /// Source and target each cover one boundary of the pasting context.
    Comp,
    /// Source and target each cover the whole pasting context.
    Inv,
}

type Memo = Arc<Mutex<HashMap<u32, Ty>>>;

static HEADS: LazyLock<Mutex<HashMap<u32, Result<Fullness>>>> = LazyLock::new(Default::default);
static CTX_MEMO: LazyLock<Mutex<HashMap<u32, Memo>>> = LazyLock::new(Default::default);
static GOOD_CTX: LazyLock<Mutex<HashSet<u32>>> = LazyLock::new(Default::default);

struct Checker<'a> {
    env: &'a dyn TypeEnv,
    memo: &'a mut HashMap<u32, Ty>,
}

impl Checker<'_> {
    fn term(&mut self, t: &Term) -> Result<Ty> {
        if let Some(ty) = self.memo.get(&t.id()) {
            return Ok(ty.clone());
        }
        let ty = match t.kind() {
            TermKind::Var(_) => t.ty_in(self.env)?,
            TermKind::Coh(h, args) => {
                check_head(h)?;
                if args.len() != h.arity() {
                    return Err(Error::SubstitutionArity {
                        expected: h.arity(),
                        found: args.len(),
                    });
                }
                let sub = h.arg_sub(args);
                let mut app = Applier::new(&sub);
                for (i, a) in args.iter().enumerate() {
                    let found = self.term(a)?;
                    let expected = app.ty(&h.ctx().entries()[i].1);
                    if found != expected {
                        return Err(Error::TypeMismatch {
                            expected: expected.to_string(),
                            found: found.to_string(),
                        });
                    }
                }
                t.ty_in(self.env)?
            }
        };
        self.memo.insert(t.id(), ty.clone());
        Ok(ty)
    }

    fn ty(&mut self, t: &Ty) -> Result<()> {
        match t.kind() {
            TyKind::Obj => Ok(()),
            TyKind::Arr(b, s, u) => {
                self.ty(b)?;
                let ts = self.term(s)?;
                let tu = self.term(u)?;
                if &ts != b || &tu != b {
                    return Err(Error::NotParallel(format!(
                        "`{s} : {ts}` and `{u} : {tu}` over `{b}`"
                    )));
                }
                Ok(())
            }
        }
    }
}

fn with_ctx<R>(ctx: &Ctx, f: impl FnOnce(&mut Checker<'_>) -> R) -> R {
    let memo = CTX_MEMO
        .lock()
        .unwrap()
        .entry(ctx.id())
        .or_default()
        .clone();
    let mut guard = memo.lock().unwrap();
    let mut c = Checker {
        env: ctx,
        memo: &mut guard,
    };
    f(&mut c)
}

/// Checks a list of entries and returns the interned context.
pub fn check_context(entries: &[(super::Var, Ty)]) -> Result<Ctx> {
    let ctx = Ctx::new(entries.to_vec());
    if GOOD_CTX.lock().unwrap().contains(&ctx.id()) {
        return Ok(ctx);
    }
    let mut b = CtxBuilder::new();
    let mut memo = HashMap::new();
    for (i, (v, t)) in entries.iter().enumerate() {
        if b.contains(*v) {
            return Err(Error::DuplicateVariable(v.name().to_string()));
        }
        let mut c = Checker {
            env: &b,
            memo: &mut memo,
        };
        c.ty(t).map_err(|e| Error::IllTypedEntry {
            position: i,
            name: v.name().to_string(),
            cause: Box::new(e),
        })?;
        b.push(*v, t.clone());
    }
    GOOD_CTX.lock().unwrap().insert(ctx.id());
    Ok(ctx)
}

/// Checks a type in an already checked context.
pub fn check_type(ctx: &Ctx, t: &Ty) -> Result<()> {
    with_ctx(ctx, |c| c.ty(t))
}

/// Checks a term in an already checked context and returns its type.
pub fn check_term(ctx: &Ctx, t: &Term) -> Result<Ty> {
    with_ctx(ctx, |c| c.term(t))
}

/// Alias of [`check_term`].
pub fn infer(ctx: &Ctx, t: &Term) -> Result<Ty> {
    check_term(ctx, t)
}

/// Checks `ambient ⊢ s : target`: one entry per variable of `target`, in order.
pub fn check_sub(ambient: &Ctx, s: &Sub, target: &Ctx) -> Result<()> {
    if s.len() != target.len() {
        return Err(Error::SubstitutionArity {
            expected: target.len(),
            found: s.len(),
        });
    }
    for (i, ((v, _), (w, _))) in s.entries().iter().zip(target.entries()).enumerate() {
        if v != w {
            return Err(Error::SubstitutionOrder {
                position: i,
                expected: w.name().to_string(),
            });
        }
    }
    let mut app = Applier::new(s);
    with_ctx(ambient, |c| {
        for ((_, t), (_, a)) in s.entries().iter().zip(target.entries()) {
            let found = c.term(t)?;
            let expected = app.ty(a);
            if found != expected {
                return Err(Error::TypeMismatch {
                    expected: expected.to_string(),
                    found: found.to_string(),
                });
            }
        }
        Ok(())
    })
}

/// Validates a coherence head: pasting context, well-typed type, fullness.
pub fn check_head(h: &Head) -> Result<Fullness> {
    if let Some(r) = HEADS.lock().unwrap().get(&h.id()) {
        return r.clone();
    }
    let r = check_head_uncached(h);
    HEADS.lock().unwrap().insert(h.id(), r.clone());
    r
}

fn check_head_uncached(h: &Head) -> Result<Fullness> {
    let ctx = check_context(h.ctx().entries())?;
    let ps = pasting::check_ps(&ctx)?;
    // A local memo: the shared one for this context may be held by a caller.
    let mut memo = HashMap::new();
    Checker {
        env: &ctx,
        memo: &mut memo,
    }
    .ty(h.ty())?;
    let (base, s, t) = h
        .ty()
        .parts()
        .ok_or_else(|| Error::NotFull("the type of a coherence must be an arrow".into()))?;
    let mut src: HashSet<_> = s.vars().iter().copied().collect();
    src.extend(base.vars().iter().copied());
    let mut tgt: HashSet<_> = t.vars().iter().copied().collect();
    tgt.extend(base.vars().iter().copied());
    let all: HashSet<_> = ctx.vars().collect();
    if src == all && tgt == all {
        return Ok(Fullness::Inv);
    }
    let d = ctx.dim();
    if d > 0 {
        let bm: HashSet<_> = ps.boundary_vars(d - 1, false).into_iter().collect();
        let bp: HashSet<_> = ps.boundary_vars(d - 1, true).into_iter().collect();
        if src == bm && tgt == bp {
            return Ok(Fullness::Comp);
        }
    }
    Err(Error::NotFull(format!("{} over a context of {} variables", h.ty(), ctx.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Var;

    fn v(s: &str) -> Term {
        Term::var(Var::named(s))
    }

    fn arrow_ctx() -> Vec<(Var, Ty)> {
        vec![
            (Var::named("x"), Ty::obj()),
            (Var::named("y"), Ty::obj()),
            (Var::named("f"), Ty::arr(Ty::obj(), v("x"), v("y"))),
        ]
    }

    #[test]
    fn contexts() {
        assert!(check_context(&arrow_ctx()).is_ok());
        let mut dup = arrow_ctx();
        dup.push((Var::named("x"), Ty::obj()));
        assert!(matches!(check_context(&dup), Err(Error::DuplicateVariable(_))));
        let bad = vec![(Var::named("f"), Ty::arr(Ty::obj(), v("x"), v("y")))];
        assert!(matches!(check_context(&bad), Err(Error::IllTypedEntry { .. })));
    }

    #[test]
    fn identity_is_inv_and_composition_is_comp() {
        let ctx = Ctx::new(arrow_ctx());
        let id = Head::new(&ctx, &Ty::arr(Ty::arr(Ty::obj(), v("x"), v("y")), v("f"), v("f")));
        assert_eq!(check_head(&id), Ok(Fullness::Inv));
        let wrong = Head::new(&ctx, &Ty::arr(Ty::obj(), v("x"), v("x")));
        assert!(matches!(check_head(&wrong), Err(Error::NotFull(_))));
        let comp = Head::new(&ctx, &Ty::arr(Ty::obj(), v("x"), v("y")));
        assert_eq!(check_head(&comp), Ok(Fullness::Comp));
    }

    #[test]
    fn non_pasting_head() {
        let ctx = Ctx::new(vec![(Var::named("x"), Ty::obj()), (Var::named("y"), Ty::obj())]);
        let h = Head::new(&ctx, &Ty::arr(Ty::obj(), v("x"), v("y")));
        assert!(matches!(check_head(&h), Err(Error::NotAPastingContext { .. })));
    }
}
