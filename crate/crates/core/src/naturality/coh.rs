//! Naturality of coherence heads.
//!
//! The dispatcher follows the case split of the construction: depth 0,
//! linear composites, reduced composites and general composites. Results
//! are memoised per head and preimage set, and are terms over the lifted
//! positional context of the head.

use std::collections::{BTreeSet, HashMap};
use std::sync::{LazyLock, Mutex};

use super::lift::{lifted_ctx, Up};
use super::{depth_ctx, street_desc};
use crate::error::{Error, Result};
use crate::kernel::{check_head, Ctx, Fullness, Head, Sub, Term, Ty, Var};
use crate::metaops::{arr_pos, assoc, obj_pos, Suspend};
use crate::pasting::{self, auto_coh, comp, is_comp_head, PsTree};

static MEMO: LazyLock<Mutex<HashMap<(u32, Vec<Var>), Term>>> = LazyLock::new(Default::default);

/// `coh_H↑P`, a term over `H.ctx↑P`.
pub fn coh_up(h: &Head, p: &BTreeSet<Var>) -> Result<Term> {
    let key = (h.id(), p.iter().copied().collect::<Vec<_>>());
    if let Some(t) = MEMO.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let r = dispatch(h, p)?;
    MEMO.lock().unwrap().insert(key, r.clone());
    Ok(r)
}

fn dispatch(h: &Head, p: &BTreeSet<Var>) -> Result<Term> {
    let gamma = h.ctx();
    let (_, up) = lifted_ctx(gamma, p)?;
    match depth_ctx(gamma, p) {
        0 => depth_zero(h, p, &up),
        1 => {
            if check_head(h)? == Fullness::Inv {
                return Err(Error::UnsupportedIndices(
                    "depth-1 naturality of an invertible coherence".into(),
                ));
            }
            if let Some((s, k)) = is_comp_head(h).and_then(|t| t.as_linear()) {
                return linear(s, k, p);
            }
            let ps = pasting::check_ps(gamma)?;
            if ps.is_reduced() {
                reduced(h, p, &up, &ps)
            } else {
                general(h, p, &up, &ps)
            }
        }
        d if d < 0 => Err(Error::Internal("coherence lifted along a set it misses".into())),
        d => Err(Error::DepthExceeded(d as usize)),
    }
}

fn ps_order(c: &Ctx) -> Result<Ctx> {
    if pasting::check_ps(c).is_ok() {
        Ok(c.clone())
    } else {
        pasting::reorder(c.entries())
    }
}

fn depth_zero(h: &Head, p: &BTreeSet<Var>, up: &Ctx) -> Result<Term> {
    let t = h.identity_term();
    let ty = Up::new(p, up).ty_term(h.ty(), &t)?;
    let ord = ps_order(up)?;
    Ok(Term::coh(Head::new(&ord, &ty), ord.identity_args()))
}

/// The images of `ψ_{k,j}`, listed by position in `Ψ^0_{k+1}`.
pub(crate) fn scan_args(
    k: usize,
    j: usize,
    x: &dyn Fn(usize) -> Var,
    f: &dyn Fn(usize) -> Var,
    inl: &dyn Fn(Var) -> Term,
    inr: &dyn Fn(Var) -> Term,
) -> Vec<Term> {
    let mut args = vec![Term::var(Var::pos(0)); 2 * (k + 1) + 1];
    args[obj_pos(0)] = inl(x(0));
    for i in 0..=k {
        let (y, g) = if i < j {
            (inl(x(i + 1)), inl(f(i)))
        } else if i == j {
            (inr(x(i)), Term::var(x(j).bar()))
        } else {
            (inr(x(i)), inr(f(i - 1)))
        };
        args[obj_pos(i + 1)] = y;
        args[arr_pos(i)] = g;
    }
    args
}

/// `comp^0_k↑X` over `Ψ^0_k` with its variables shifted by `off`.
pub(crate) fn assemble_linear(k: usize, off: usize, p: &BTreeSet<Var>) -> Result<(Ctx, Term)> {
    let base = PsTree::linear(0, k).to_ctx();
    let shift: Sub = base
        .vars()
        .enumerate()
        .map(|(i, _)| (Var::pos(i), Term::var(Var::pos(i + off))))
        .collect();
    let ctx0 = Ctx::new(
        base.entries()
            .iter()
            .enumerate()
            .map(|(i, (_, t))| (Var::pos(i + off), t.subst(&shift)))
            .collect(),
    );
    if p.iter().any(|v| !ctx0.contains(*v)) {
        return Err(Error::DepthExceeded(2));
    }
    let (_, up0) = lifted_ctx(&ctx0, p)?;
    let x = |i: usize| Var::pos(off + obj_pos(i));
    let f = |i: usize| Var::pos(off + arr_pos(i));
    let side = |v: Var, plus: bool| {
        Term::var(match (p.contains(&v), plus) {
            (false, _) => v,
            (true, false) => v.minus(),
            (true, true) => v.plus(),
        })
    };
    let inl = |v: Var| side(v, false);
    let inr = |v: Var| side(v, true);
    let mut phases = Vec::new();
    for v in street_desc(&ctx0, p)? {
        if let Some(j) = (0..=k).find(|&j| x(j) == v) {
            let args = scan_args(k, j, &x, &f, &inl, &inr);
            phases.push(Term::coh(assoc(k, j)?, args));
        } else {
            let j = (0..k).find(|&j| f(j) == v).unwrap();
            let mut cells: Vec<Term> = (0..j).map(|i| inl(f(i))).collect();
            cells.push(Term::var(f(j).bar()));
            cells.extend((j + 1..k).map(|i| inr(f(i))));
            phases.push(comp(&up0, 0, &cells)?);
        }
    }
    let r = comp(&up0, 1, &phases).map_err(|e| Error::PhasesNotComposable(e.to_string()))?;
    Ok((up0, r))
}

fn linear(s: usize, k: usize, p: &BTreeSet<Var>) -> Result<Term> {
    let (_, mut r) = assemble_linear(k, 2 * s, p)?;
    for l in (0..s).rev() {
        r = Suspend::new(Var::pos(2 * l), Var::pos(2 * l + 1)).term(&r);
    }
    Ok(r)
}

/// `θ_{Γ,X}`: `Γ↑X ⊢ θ : Γ↑X^{lm}`.
pub(crate) fn theta(
    gamma: &Ctx,
    p: &BTreeSet<Var>,
    p_lm: &BTreeSet<Var>,
    up: &Ctx,
    ps: &pasting::Pasting,
) -> Result<Sub> {
    let n = ps.dim();
    let bm: BTreeSet<Var> = ps.boundary_vars(n - 1, false).into_iter().collect();
    let bp: BTreeSet<Var> = ps.boundary_vars(n - 1, true).into_iter().collect();
    let mut th = Sub::new();
    for v in gamma.vars() {
        if p_lm.contains(&v) {
            let ty = up
                .get(v.bar())
                .ok_or_else(|| Error::Internal(format!("missing filler for `{v}`")))?;
            th.push(v.minus(), ty.src().unwrap().clone());
            th.push(v.plus(), ty.tgt().unwrap().clone());
            th.push(v.bar(), Term::var(v.bar()));
        } else if p.contains(&v) {
            let img = match (bm.contains(&v), bp.contains(&v)) {
                (true, false) => v.minus(),
                (false, true) => v.plus(),
                _ => {
                    return Err(Error::Internal(format!(
                        "boundary side of `{v}` is not unique"
                    )))
                }
            };
            th.push(v, Term::var(img));
        } else {
            th.push(v, Term::var(v));
        }
    }
    Ok(th)
}

fn reduced(h: &Head, p: &BTreeSet<Var>, up: &Ctx, ps: &pasting::Pasting) -> Result<Term> {
    let gamma = h.ctx();
    let lm: BTreeSet<Var> = gamma.locmax_vars().into_iter().collect();
    let p_lm: BTreeSet<Var> = p.intersection(&lm).copied().collect();
    let middle = coh_up(h, &p_lm)?.subst(&theta(gamma, p, &p_lm, up, ps)?);
    let mty = middle.ty_in(up)?;
    let (_, u, v) = h.ty().parts().unwrap();
    let t = h.identity_term();
    let nt = h.ty().dim();
    let mut lift = Up::new(p, up);
    let refl = Head::new(gamma, &Ty::arr(h.ty().clone(), t.clone(), t.clone()));
    let refl_at = |plus: bool, lift: &Up| {
        Term::coh(
            refl.clone(),
            gamma.vars().map(|x| lift.inj(&Term::var(x), plus)).collect(),
        )
    };
    let jm = if lift.meets(v) {
        let vu = lift.term(v)?;
        let s = comp(up, nt - 1, &[lift.inj(&t, false), vu])?;
        auto_coh(up, &s, mty.src().unwrap())?
    } else {
        refl_at(false, &lift)
    };
    let jp = if lift.meets(u) {
        let uu = lift.term(u)?;
        let e = comp(up, nt - 1, &[uu, lift.inj(&t, true)])?;
        auto_coh(up, mty.tgt().unwrap(), &e)?
    } else {
        refl_at(true, &lift)
    };
    comp(up, nt, &[jm, middle, jp])
}

fn general(h: &Head, p: &BTreeSet<Var>, up: &Ctx, ps: &pasting::Pasting) -> Result<Term> {
    let gamma = h.ctx();
    let (red, rho) = ps.reduce()?;
    let a = h.ty();
    let (_, u, v) = a.parts().unwrap();
    let t = h.identity_term();
    let nt = a.dim();
    let hr = Head::new(&red.ctx, a);
    let tr = Term::coh(hr, rho.entries().iter().map(|(_, x)| x.clone()).collect());
    let e = Term::coh(
        Head::new(gamma, &Ty::arr(a.clone(), t.clone(), tr.clone())),
        gamma.identity_args(),
    );
    let e_inv = Term::coh(
        Head::new(gamma, &Ty::arr(a.clone(), tr.clone(), t.clone())),
        gamma.identity_args(),
    );
    let mut lift = Up::new(p, up);
    let c = lift.term(&tr)?;
    let mut em = lift.inj(&e, false);
    if lift.meets(v) {
        let vu = lift.term(v)?;
        em = comp(up, nt - 1, &[em, vu])?;
    }
    let mut ep = lift.inj(&e_inv, true);
    if lift.meets(u) {
        let uu = lift.term(u)?;
        ep = comp(up, nt - 1, &[uu, ep])?;
    }
    comp(up, nt, &[em, c, ep])
}
