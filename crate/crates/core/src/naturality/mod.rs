//! Naturality of contexts, types, terms and substitutions along an
//! up-closed set of variables of depth at most 1.
//!
//! Lifted variables are derived from the originals: `x` in `X` becomes
//! `x_m`, `x_p` and the filler `x_b`.

mod coh;
mod lift;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::kernel::{check_context, check_sub, check_term, check_type, Ctx, Sub, Term, Ty, Var};
use crate::pasting;

pub use coh::coh_up;
use lift::{inj_sub, lifted_ctx, Up};

/// The lifted contexts and the two inclusions.
#[derive(Clone, Debug)]
pub struct NaturalityOutput {
    /// `Γ⇑X`.
    pub ctx_pm: Ctx,
    /// `Γ↑X`.
    pub ctx_up: Ctx,
    pub inj_minus: Sub,
    pub inj_plus: Sub,
}

/// Depth of `X` in the context (`d`) and in the focus (`k`); `-1` when empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepthReport {
    pub d: isize,
    pub k: isize,
}

/// What a depth is measured on.
pub enum Focus<'a> {
    Term(&'a Term),
    Ty(&'a Ty),
    Sub(&'a Sub),
    Ctx,
}

fn dim_of(ctx: &Ctx, v: Var) -> isize {
    ctx.get(v).map(|t| t.dim() as isize).unwrap_or(0)
}

fn depth_over(ctx: &Ctx, top: isize, vars: impl Iterator<Item = Var>, x: &BTreeSet<Var>) -> isize {
    vars.filter(|v| x.contains(v))
        .map(|v| top - dim_of(ctx, v))
        .max()
        .unwrap_or(-1)
}

pub(crate) fn depth_term_in(ctx: &Ctx, t: &Term, x: &BTreeSet<Var>) -> Result<isize> {
    let ty = t.ty_in(ctx)?;
    let vars = t.vars().iter().chain(ty.vars().iter()).copied();
    Ok(depth_over(ctx, ty.dim() as isize, vars, x))
}

pub(crate) fn depth_ctx(ctx: &Ctx, x: &BTreeSet<Var>) -> isize {
    ctx.entries()
        .iter()
        .map(|(v, ty)| {
            let vars = std::iter::once(*v).chain(ty.vars().iter().copied());
            depth_over(ctx, ty.dim() as isize, vars, x)
        })
        .max()
        .unwrap_or(-1)
}

/// The depths of `X` in `ctx` and in the focus.
pub fn depth(ctx: &Ctx, x: &BTreeSet<Var>, focus: Focus<'_>) -> Result<DepthReport> {
    let d = depth_ctx(ctx, x);
    let k = match focus {
        Focus::Ctx => d,
        Focus::Term(t) => depth_term_in(ctx, t, x)?,
        Focus::Ty(a) => depth_over(ctx, a.dim() as isize - 1, a.vars().iter().copied(), x),
        Focus::Sub(s) => {
            let mut k = -1;
            for (_, t) in s.entries() {
                k = k.max(depth_term_in(ctx, t, x)?);
            }
            k
        }
    };
    Ok(DepthReport { d, k })
}

/// `γ⁻¹X`: the variables whose image meets `X`.
pub fn preimage(s: &Sub, x: &BTreeSet<Var>) -> BTreeSet<Var> {
    s.entries()
        .iter()
        .filter(|(_, t)| t.vars().iter().any(|v| x.contains(v)))
        .map(|(v, _)| *v)
        .collect()
}

/// The least up-closed set containing `x`.
pub fn up_closure(ctx: &Ctx, x: &BTreeSet<Var>) -> BTreeSet<Var> {
    let mut out = x.clone();
    for (v, t) in ctx.entries() {
        if t.vars().iter().any(|w| out.contains(w)) {
            out.insert(*v);
        }
    }
    out
}

/// Fails with `NotUpClosed` naming the first missing variable.
pub fn check_up_closed(ctx: &Ctx, x: &BTreeSet<Var>) -> Result<()> {
    for v in x {
        if !ctx.contains(*v) {
            return Err(Error::UnboundVariable(v.name().to_string()));
        }
    }
    let closed = up_closure(ctx, x);
    match closed.difference(x).next() {
        Some(v) => Err(Error::NotUpClosed(v.name().to_string())),
        None => Ok(()),
    }
}

fn check_problem(ctx: &Ctx, x: &BTreeSet<Var>) -> Result<()> {
    check_up_closed(ctx, x)?;
    let d = depth_ctx(ctx, x);
    if d > 1 {
        return Err(Error::DepthExceeded(d as usize));
    }
    Ok(())
}

/// Variables of `X` in descending planar order of the pasting context.
pub(crate) fn street_desc(ctx: &Ctx, x: &BTreeSet<Var>) -> Result<Vec<Var>> {
    let ps = pasting::check_ps(ctx)?;
    let mut order: Vec<Var> = ps.street_order().into_iter().filter(|v| x.contains(v)).collect();
    order.reverse();
    Ok(order)
}

/// `(Γ⇑X, Γ↑X, inj⁻, inj⁺)`.
pub fn ctx_up(ctx: &Ctx, x: &BTreeSet<Var>) -> Result<NaturalityOutput> {
    check_problem(ctx, x)?;
    let (ctx_pm, up) = lifted_ctx(ctx, x)?;
    let ctx_up = check_context(up.entries())?;
    let inj = |plus| -> Sub {
        let s = inj_sub(x, plus);
        ctx.vars()
            .map(|v| (v, s.get(v).cloned().unwrap_or_else(|| Term::var(v))))
            .collect()
    };
    let out = NaturalityOutput {
        ctx_pm,
        ctx_up,
        inj_minus: inj(false),
        inj_plus: inj(true),
    };
    check_sub(&out.ctx_up, &out.inj_minus, ctx)?;
    check_sub(&out.ctx_up, &out.inj_plus, ctx)?;
    Ok(out)
}

/// `A↑^x X` for a fresh variable `x` of type `A`, in `(Γ, x : A)↑X`.
pub fn type_up_fresh(ctx: &Ctx, a: &Ty, x: Var, xs: &BTreeSet<Var>) -> Result<Ty> {
    if ctx.contains(x) {
        return Err(Error::DuplicateVariable(x.name().to_string()));
    }
    let mut e = ctx.entries().to_vec();
    e.push((x, a.clone()));
    let ext = check_context(&e)?;
    let mut xs2 = xs.clone();
    xs2.insert(x);
    check_problem(&ext, &xs2)?;
    let (_, up) = lifted_ctx(&ext, &xs2)?;
    Ok(up.get(x.bar()).unwrap().clone())
}

/// `A↑^t X`.
pub fn type_up_term(ctx: &Ctx, a: &Ty, t: &Term, x: &BTreeSet<Var>) -> Result<Ty> {
    let out = ctx_up(ctx, x)?;
    let k = depth_term_in(ctx, t, x)?;
    if k > 1 {
        return Err(Error::DepthExceeded(k as usize));
    }
    Up::new(x, &out.ctx_up).ty_term(a, t)
}

/// `t↑X`, re-checked against `A↑^t X` in `Γ↑X`.
pub fn term_up(ctx: &Ctx, t: &Term, x: &BTreeSet<Var>) -> Result<Term> {
    let out = ctx_up(ctx, x)?;
    let ty = check_term(ctx, t)?;
    let k = depth_term_in(ctx, t, x)?;
    if k < 0 {
        return Err(Error::IndexOutOfRange(format!("`{t}` does not meet the lifted set")));
    }
    if k > 1 {
        return Err(Error::DepthExceeded(k as usize));
    }
    let mut lift = Up::new(x, &out.ctx_up);
    let r = lift.term(t)?;
    let want = lift.ty_term(&ty, t)?;
    check_type(&out.ctx_up, &want)?;
    let got = check_term(&out.ctx_up, &r)?;
    if got != want {
        return Err(Error::Internal(format!(
            "naturality has type `{got}`, expected `{want}`"
        )));
    }
    Ok(r)
}

/// `γ↑X` for `delta ⊢ γ : gamma`, a substitution `Δ↑X ⊢ γ↑X : Γ↑γ⁻¹X`.
pub fn sub_up(delta: &Ctx, g: &Sub, gamma: &Ctx, x: &BTreeSet<Var>) -> Result<Sub> {
    let out = ctx_up(delta, x)?;
    let mut lift = Up::new(x, &out.ctx_up);
    let mut s = Sub::new();
    for (v, t) in g.entries() {
        if lift.meets(t) {
            s.push(v.minus(), lift.inj(t, false));
            s.push(v.plus(), lift.inj(t, true));
            s.push(v.bar(), lift.term(t)?);
        } else {
            s.push(*v, t.clone());
        }
    }
    let pre = preimage(g, x);
    let (_, target) = lifted_ctx(gamma, &pre)?;
    check_sub(&out.ctx_up, &s, &check_context(target.entries())?)?;
    Ok(s)
}

/// Phase helpers of the linear case, exposed for tests.
pub mod linear {
    use super::*;
    use crate::metaops::{arr_pos, obj_pos};

    /// `ψ_{k,j}` as a substitution `Ψ^0_k↑X ⊢ ψ : Ψ^0_{k+1}`.
    pub fn scan_sub(k: usize, j: usize, x: &BTreeSet<Var>) -> Result<Sub> {
        if j > k {
            return Err(Error::IndexOutOfRange(format!("object {j} of a chain of {k}")));
        }
        let xv = |i: usize| Var::pos(obj_pos(i));
        if !x.contains(&xv(j)) {
            return Err(Error::IndexOutOfRange(format!("object {j} is not lifted")));
        }
        let fv = |i: usize| Var::pos(arr_pos(i));
        let side = |v: Var, plus: bool| {
            Term::var(match (x.contains(&v), plus) {
                (false, _) => v,
                (true, false) => v.minus(),
                (true, true) => v.plus(),
            })
        };
        let args = coh::scan_args(k, j, &xv, &fv, &|v| side(v, false), &|v| side(v, true));
        Ok(args.into_iter().enumerate().map(|(i, t)| (Var::pos(i), t)).collect())
    }

    /// `comp^0_k↑X` over the lifted chain, and that context.
    pub fn assemble(k: usize, x: &BTreeSet<Var>) -> Result<(Ctx, Term)> {
        coh::assemble_linear(k, 0, x)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::pasting::{comp, PsTree};

    fn v(s: &str) -> Var {
        Var::named(s)
    }
    fn t(s: &str) -> Term {
        let var = match s.rsplit_once('_') {
            Some((b, "m")) => v(b).minus(),
            Some((b, "p")) => v(b).plus(),
            Some((b, "b")) => v(b).bar(),
            _ => v(s),
        };
        Term::var(var)
    }
    fn hom(a: &str, b: &str) -> Ty {
        Ty::arr(Ty::obj(), t(a), t(b))
    }
    fn set(xs: &[&str]) -> BTreeSet<Var> {
        xs.iter().map(|s| v(s)).collect()
    }
    fn chain() -> Ctx {
        check_context(&[
            (v("x"), Ty::obj()),
            (v("y"), Ty::obj()),
            (v("f"), hom("x", "y")),
            (v("z"), Ty::obj()),
            (v("g"), hom("y", "z")),
        ])
        .unwrap()
    }

    #[test]
    fn whiskering_is_depth_zero_naturality() {
        let g = chain();
        let fg = comp(&g, 0, &[t("f"), t("g")]).unwrap();
        let x = set(&["f"]);
        assert_eq!(depth_ctx(&g, &x), 0);
        let r = term_up(&g, &fg, &x).unwrap();
        let out = ctx_up(&g, &x).unwrap();
        let ty = check_term(&out.ctx_up, &r).unwrap();
        let fm = comp(&out.ctx_up, 0, &[t("f_m"), t("g")]).unwrap();
        let fp = comp(&out.ctx_up, 0, &[t("f_p"), t("g")]).unwrap();
        assert_eq!(ty.src().unwrap(), &fm);
        assert_eq!(ty.tgt().unwrap(), &fp);
    }

    #[test]
    fn full_chain_has_five_phases() {
        let g = chain();
        let fg = comp(&g, 0, &[t("f"), t("g")]).unwrap();
        let x: BTreeSet<Var> = g.vars().collect();
        assert_eq!(depth_ctx(&g, &x), 1);
        let r = term_up(&g, &fg, &x).unwrap();
        let out = ctx_up(&g, &x).unwrap();
        let ty = check_term(&out.ctx_up, &r).unwrap();
        let up = &out.ctx_up;
        let left = comp(up, 0, &[comp(up, 0, &[t("f_m"), t("g_m")]).unwrap(), t("z_b")]).unwrap();
        let right = comp(up, 0, &[t("x_b"), comp(up, 0, &[t("f_p"), t("g_p")]).unwrap()]).unwrap();
        assert_eq!(ty.src().unwrap(), &left);
        assert_eq!(ty.tgt().unwrap(), &right);
        let (_, lin) = linear::assemble(2, &PsTree::linear(0, 2).to_ctx().vars().collect()).unwrap();
        match lin.kind() {
            crate::kernel::TermKind::Coh(h, _) => assert_eq!(h.locmax().len(), 5),
            _ => panic!("expected a composite"),
        }
    }

    #[test]
    fn square_type_for_a_single_arrow() {
        let g = check_context(&[(v("x"), Ty::obj()), (v("y"), Ty::obj()), (v("f"), hom("x", "y"))]).unwrap();
        let out = ctx_up(&g, &set(&["x", "y", "f"])).unwrap();
        let fb = out.ctx_up.get(v("f").bar()).unwrap();
        let up = &out.ctx_up;
        assert_eq!(fb.src().unwrap(), &comp(up, 0, &[t("f_m"), t("y_b")]).unwrap());
        assert_eq!(fb.tgt().unwrap(), &comp(up, 0, &[t("x_b"), t("f_p")]).unwrap());
        assert_eq!(out.ctx_pm.len(), 8);
        assert_eq!(out.ctx_up.len(), 9);
    }

    #[test]
    fn rejects_bad_sets() {
        let g = chain();
        assert!(matches!(ctx_up(&g, &set(&["x"])), Err(Error::NotUpClosed(_))));
        let d2 = PsTree::disc(2).to_ctx();
        let all: BTreeSet<Var> = d2.vars().collect();
        assert!(matches!(ctx_up(&d2, &all), Err(Error::DepthExceeded(2))));
    }

    #[test]
    fn up_closure_and_preimage() {
        let g = chain();
        assert_eq!(up_closure(&g, &set(&["y"])), set(&["y", "f", "g"]));
        let s: Sub = [(v("a"), t("f")), (v("b"), t("x"))].into_iter().collect();
        assert_eq!(preimage(&s, &set(&["f"])), set(&["a"]));
    }

    fn two_cells(extra: bool) -> Ctx {
        let xy = hom("x", "y");
        let mut e = vec![
            (v("x"), Ty::obj()),
            (v("y"), Ty::obj()),
            (v("f"), xy.clone()),
            (v("g"), xy.clone()),
            (v("a"), Ty::arr(xy.clone(), t("f"), t("g"))),
        ];
        if extra {
            e.push((v("h"), xy.clone()));
            e.push((v("b"), Ty::arr(xy, t("g"), t("h"))));
        }
        e.push((v("z"), Ty::obj()));
        e.push((v("k"), hom("y", "z")));
        check_context(&e).unwrap()
    }

    fn lifts(g: &Ctx, tm: &Term, xs: &[&str]) {
        let x = up_closure(g, &set(xs));
        if let Err(e) = term_up(g, tm, &x) {
            panic!("lifting `{tm}` along {xs:?}: {e}");
        }
    }

    #[test]
    fn suspended_linear_case() {
        let g = check_context(&[
            (v("x"), Ty::obj()),
            (v("y"), Ty::obj()),
            (v("f"), hom("x", "y")),
            (v("g"), hom("x", "y")),
            (v("a"), Ty::arr(hom("x", "y"), t("f"), t("g"))),
            (v("h"), hom("x", "y")),
            (v("b"), Ty::arr(hom("x", "y"), t("g"), t("h"))),
        ])
        .unwrap();
        let ab = comp(&g, 1, &[t("a"), t("b")]).unwrap();
        lifts(&g, &ab, &["f"]);
        lifts(&g, &ab, &["g"]);
        lifts(&g, &ab, &["a"]);
    }

    #[test]
    fn reduced_case() {
        let g = two_cells(false);
        let ak = comp(&g, 0, &[t("a"), t("k")]).unwrap();
        lifts(&g, &ak, &["f", "g"]);
        lifts(&g, &ak, &["f"]);
        lifts(&g, &ak, &["k"]);
        lifts(&g, &ak, &["a"]);
    }

    #[test]
    fn general_case() {
        let g = two_cells(true);
        let ps = crate::pasting::check_ps(&g).unwrap();
        let c = crate::pasting::comp_term_of(&ps);
        lifts(&g, &c, &["f", "g", "h"]);
        lifts(&g, &c, &["g"]);
        lifts(&g, &c, &["k"]);
        lifts(&g, &c, &["b"]);
    }

    #[test]
    fn nested_terms_in_a_non_pasting_context() {
        let g = check_context(&[
            (v("x"), Ty::obj()),
            (v("y"), Ty::obj()),
            (v("f"), hom("x", "y")),
            (v("f2"), hom("x", "y")),
            (v("z"), Ty::obj()),
            (v("g"), hom("y", "z")),
            (v("w"), Ty::obj()),
            (v("h"), hom("z", "w")),
        ])
        .unwrap();
        let fg = comp(&g, 0, &[t("f"), t("g")]).unwrap();
        let fgh = comp(&g, 0, &[fg, t("h")]).unwrap();
        lifts(&g, &fgh, &["x", "y", "z", "w"]);
        lifts(&g, &fgh, &["y"]);
        lifts(&g, &fgh, &["g"]);
        let f2g = comp(&g, 0, &[t("f2"), t("g")]).unwrap();
        lifts(&g, &f2g, &["x"]);
    }
}
