//! Unbiased composites and argument inference.

use std::collections::{HashMap, HashSet};
use std::sync::{LazyLock, Mutex};

use super::{reorder, PsTree};
use crate::error::{Error, Result};
use crate::kernel::{match_ty, Bindings, Ctx, Head, Term, Ty, TypeEnv, Var};

static COMP_HEADS: LazyLock<Mutex<HashMap<PsTree, Head>>> = LazyLock::new(Default::default);

/// Composite of a labelled pasting context: its unique top cell when it is a
/// disc, the unbiased composite otherwise.
pub fn comp_term_of(p: &super::Pasting) -> Term {
    let shape = p.shape();
    if shape.is_disc() {
        let mut n = &p.root;
        while let Some(c) = n.children.first() {
            n = c;
        }
        return Term::var(n.var);
    }
    Term::coh(comp_head(&shape), p.ctx.identity_args())
}

/// The unbiased composite of a tree that is not a disc.
pub fn comp_head(t: &PsTree) -> Head {
    if let Some(h) = COMP_HEADS.lock().unwrap().get(t) {
        return h.clone();
    }
    assert!(!t.is_disc(), "composite of a disc");
    let p = t.to_pasting();
    let d = p.dim();
    let s = comp_term_of(&p.boundary(d - 1, false));
    let u = comp_term_of(&p.boundary(d - 1, true));
    let ty = Ty::arr(s.ty_in(&p.ctx).unwrap(), s, u);
    let h = Head::new(&p.ctx, &ty);
    COMP_HEADS.lock().unwrap().insert(t.clone(), h.clone());
    h
}

/// Whether the head is the unbiased composite of its context.
pub fn is_comp_head(h: &Head) -> Option<PsTree> {
    let p = super::check_ps(h.ctx()).ok()?;
    let t = p.shape();
    (!t.is_disc() && comp_head(&t) == *h).then_some(t)
}

/// Infers a substitution into `env` for a definition over `def`, given the
/// images of some of its variables. Every variable must end up bound.
pub fn apply_def(env: &dyn TypeEnv, def: &Ctx, given: &[(Var, Term)]) -> Result<crate::kernel::Sub> {
    let mut b = Bindings::new();
    let bindable = |v: Var| def.contains(v);
    for (v, t) in given {
        if let Some(old) = b.get(v) {
            if old != t {
                return Err(Error::TypeMismatch {
                    expected: old.to_string(),
                    found: t.to_string(),
                });
            }
        }
        b.insert(*v, t.clone());
    }
    for (v, t) in given.iter().rev() {
        let pat = def
            .get(*v)
            .ok_or_else(|| Error::UnboundVariable(v.name().to_string()))?;
        let actual = t.ty_in(env)?;
        if !match_ty(pat, &actual, &bindable, &mut b) {
            return Err(Error::TypeMismatch {
                expected: pat.subst(&b.iter().map(|(k, x)| (*k, x.clone())).collect()).to_string(),
                found: actual.to_string(),
            });
        }
    }
    let mut s = crate::kernel::Sub::new();
    for v in def.vars() {
        let t = b
            .get(&v)
            .ok_or_else(|| Error::Internal(format!("argument `{v}` could not be inferred")))?;
        s.push(v, t.clone());
    }
    Ok(s)
}

/// Applies a head to the images of its locally maximal variables.
pub fn apply_head(env: &dyn TypeEnv, h: &Head, locmax_args: &[Term]) -> Result<Term> {
    let lm = h.locmax();
    if lm.len() != locmax_args.len() {
        return Err(Error::SubstitutionArity {
            expected: lm.len(),
            found: locmax_args.len(),
        });
    }
    let given: Vec<(Var, Term)> = lm
        .iter()
        .zip(locmax_args)
        .map(|(&p, t)| (Var::pos(p), t.clone()))
        .collect();
    let s = apply_def(env, h.ctx(), &given)?;
    Ok(Term::coh(h.clone(), s.entries().iter().map(|(_, t)| t.clone()).collect()))
}

/// The unbiased composite of `cells` along their `k`-boundaries.
/// A single cell is returned unchanged.
pub fn comp(env: &dyn TypeEnv, k: usize, cells: &[Term]) -> Result<Term> {
    if cells.is_empty() {
        return Err(Error::IndexOutOfRange("composite of no cells".into()));
    }
    let mut heights = Vec::with_capacity(cells.len());
    for c in cells {
        let d = c.dim_in(env)?;
        if d <= k {
            return Err(Error::IndexOutOfRange(format!(
                "cannot compose a {d}-cell along dimension {k}"
            )));
        }
        heights.push(d);
    }
    if cells.len() == 1 {
        return Ok(cells[0].clone());
    }
    apply_head(env, &comp_head(&PsTree::wedge(k, &heights)), cells)
}

/// The coherence `s -> t` over the pasting context spanned by the
/// variables of `s` and `t` inside `ambient`, applied to the identity.
pub fn auto_coh(ambient: &Ctx, s: &Term, t: &Term) -> Result<Term> {
    let mut keep: HashSet<Var> = HashSet::new();
    let mut todo: Vec<Var> = s.vars().iter().chain(t.vars().iter()).copied().collect();
    while let Some(v) = todo.pop() {
        if keep.insert(v) {
            let ty = ambient
                .get(v)
                .ok_or_else(|| Error::UnboundVariable(v.name().to_string()))?;
            todo.extend(ty.vars().iter().copied());
        }
    }
    let entries: Vec<(Var, Ty)> = ambient
        .entries()
        .iter()
        .filter(|(v, _)| keep.contains(v))
        .cloned()
        .collect();
    let sub = reorder(&entries)?;
    let ty = s.ty_in(ambient)?;
    let h = Head::new(&sub, &Ty::arr(ty, s.clone(), t.clone()));
    Ok(Term::coh(h, sub.identity_args()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check_head, check_term, Fullness};

    #[test]
    fn comp_heads_are_valid() {
        for t in [
            PsTree::linear(0, 2),
            PsTree::linear(1, 3),
            PsTree::wedge(0, &[1, 2]),
            PsTree::wedge(1, &[3, 2, 2]),
        ] {
            assert_eq!(check_head(&comp_head(&t)), Ok(Fullness::Comp), "{t:?}");
        }
    }

    #[test]
    fn binary_composite_by_matching() {
        let ctx = PsTree::linear(0, 3).to_ctx();
        let f = Term::var(Var::pos(2));
        let g = Term::var(Var::pos(4));
        let h = Term::var(Var::pos(6));
        let fg = comp(&ctx, 0, &[f.clone(), g.clone()]).unwrap();
        let fgh = comp(&ctx, 0, &[fg, h.clone()]).unwrap();
        let ty = check_term(&ctx, &fgh).unwrap();
        assert_eq!(ty.src().unwrap(), &Term::var(Var::pos(0)));
        assert_eq!(ty.tgt().unwrap(), &Term::var(Var::pos(5)));
        assert!(comp(&ctx, 0, &[g, f]).is_err());
    }
}
