//! The lifting engine: types, terms and substitutions along a fixed `X`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{LazyLock, Mutex};

use super::coh::coh_up;
use crate::error::{Error, Result};
use crate::kernel::{Ctx, CtxBuilder, Sub, Term, TermKind, Ty, TyKind, TypeEnv, Var};
use crate::pasting::comp;

type CtxKey = (u32, Vec<Var>);

static LIFTED: LazyLock<Mutex<HashMap<CtxKey, (Ctx, Ctx)>>> = LazyLock::new(Default::default);

/// `x ↦ x^±` for every `x` in `X`.
pub(crate) fn inj_sub(x: &BTreeSet<Var>, plus: bool) -> Sub {
    x.iter()
        .map(|v| (*v, Term::var(if plus { v.plus() } else { v.minus() })))
        .collect()
}

pub(crate) struct Up<'a> {
    pub x: &'a BTreeSet<Var>,
    pub env: &'a dyn TypeEnv,
    inj_m: Sub,
    inj_p: Sub,
    memo: HashMap<u32, Term>,
}

impl<'a> Up<'a> {
    pub fn new(x: &'a BTreeSet<Var>, env: &'a dyn TypeEnv) -> Self {
        Up {
            x,
            env,
            inj_m: inj_sub(x, false),
            inj_p: inj_sub(x, true),
            memo: HashMap::new(),
        }
    }

    pub fn meets(&self, t: &Term) -> bool {
        t.vars().iter().any(|v| self.x.contains(v))
    }

    pub fn inj(&self, t: &Term, plus: bool) -> Term {
        t.subst(if plus { &self.inj_p } else { &self.inj_m })
    }

    /// `t↑X`.
    pub fn term(&mut self, t: &Term) -> Result<Term> {
        if let Some(r) = self.memo.get(&t.id()) {
            return Ok(r.clone());
        }
        let r = match t.kind() {
            TermKind::Var(v) if self.x.contains(v) => Term::var(v.bar()),
            TermKind::Var(v) => {
                return Err(Error::Internal(format!("lifting `{v}` which is not in X")))
            }
            TermKind::Coh(h, args) => {
                let (p, sigma) = self.args(args)?;
                if p.is_empty() {
                    return Err(Error::Internal(format!("lifting `{t}` which misses X")));
                }
                coh_up(h, &p)?.subst(&sigma)
            }
        };
        self.memo.insert(t.id(), r.clone());
        Ok(r)
    }

    /// The preimage of `X` under the arguments of `h`, and the lifted
    /// arguments as a substitution out of `h`'s lifted context.
    pub fn args(&mut self, args: &[Term]) -> Result<(BTreeSet<Var>, Sub)> {
        let mut p = BTreeSet::new();
        let mut sigma = Sub::new();
        for (i, a) in args.iter().enumerate() {
            let v = Var::pos(i);
            if self.meets(a) {
                p.insert(v);
                sigma.push(v.minus(), self.inj(a, false));
                sigma.push(v.plus(), self.inj(a, true));
                sigma.push(v.bar(), self.term(a)?);
            } else {
                sigma.push(v, a.clone());
            }
        }
        Ok((p, sigma))
    }

    /// `A↑X` with the given lower and upper endpoints.
    pub fn ty_with(&mut self, a: &Ty, lo: Term, hi: Term) -> Result<Ty> {
        match a.kind() {
            TyKind::Obj => Ok(Ty::arr(Ty::obj(), lo, hi)),
            TyKind::Arr(b, u, v) => {
                let n = b.dim();
                let base = Ty::arr(b.clone(), self.inj(u, false), self.inj(v, true));
                let lo = if self.meets(v) {
                    let vu = self.term(v)?;
                    comp(self.env, n, &[lo, vu])?
                } else {
                    lo
                };
                let hi = if self.meets(u) {
                    let uu = self.term(u)?;
                    comp(self.env, n, &[uu, hi])?
                } else {
                    hi
                };
                Ok(Ty::arr(base, lo, hi))
            }
        }
    }

    /// `A↑^t X`.
    pub fn ty_term(&mut self, a: &Ty, t: &Term) -> Result<Ty> {
        let lo = self.inj(t, false);
        let hi = self.inj(t, true);
        self.ty_with(a, lo, hi)
    }
}

/// `(Γ⇑X, Γ↑X)`, memoised. No depth check is made here.
pub(crate) fn lifted_ctx(ctx: &Ctx, x: &BTreeSet<Var>) -> Result<(Ctx, Ctx)> {
    let key = (ctx.id(), x.iter().copied().collect::<Vec<_>>());
    if let Some(r) = LIFTED.lock().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let inj_m = inj_sub(x, false);
    let inj_p = inj_sub(x, true);
    let mut b = CtxBuilder::new();
    let mut pm_len = 0;
    for (v, a) in ctx.entries() {
        if !x.contains(v) {
            b.push(*v, a.clone());
            pm_len = b.entries().len();
            continue;
        }
        b.push(v.minus(), a.subst(&inj_m));
        b.push(v.plus(), a.subst(&inj_p));
        pm_len = b.entries().len();
        let ty = Up::new(x, &b).ty_with(a, Term::var(v.minus()), Term::var(v.plus()))?;
        b.push(v.bar(), ty);
    }
    let up = b.build();
    let pm = Ctx::new(up.entries()[..pm_len].to_vec());
    let r = (pm, up);
    LIFTED.lock().unwrap().insert(key, r.clone());
    Ok(r)
}
