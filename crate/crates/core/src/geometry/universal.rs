//! Composites and stacking over universal contexts.
//!
//! Each operation is first built once over a context holding two generic
//! instances, then transported to the instances at hand by the
//! substitution obtained from matching their types.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, LazyLock, Mutex};

use super::{classify, cone_type, cyl_type, shape, Instance, Kind};
use crate::error::{Error, Result};
use crate::kernel::{check_context, check_term, match_ty, Bindings, Ctx, Sub, Tag, Term, Ty, Var};
use crate::metaops::{dims_upto, Op, Suspend};
use crate::naturality::{ctx_up, term_up};
use crate::pasting::{auto_coh, comp};

/// A context with two generic instances `a`, `b` and an operation `u` on them.
#[derive(Debug)]
pub(crate) struct Universal {
    pub ctx: Ctx,
    pub a: Var,
    pub b: Var,
    pub u: Term,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Comp(Kind, usize, usize, usize),
    Stack(usize),
}

static UNIVERSAL: LazyLock<Mutex<HashMap<Key, Arc<Universal>>>> = LazyLock::new(Default::default);

fn memo(key: Key, build: impl FnOnce() -> Result<Universal>) -> Result<Arc<Universal>> {
    if let Some(u) = UNIVERSAL.lock().unwrap().get(&key) {
        return Ok(u.clone());
    }
    let u = Arc::new(build()?);
    UNIVERSAL.lock().unwrap().insert(key, u.clone());
    Ok(u)
}

fn v(s: &str) -> Var {
    Var::named(s)
}

fn t(s: &str) -> Term {
    Term::var(v(s))
}

fn hom(a: &str, b: &str) -> Ty {
    Ty::arr(Ty::obj(), t(a), t(b))
}

/// `f *_0 g` lifted along every variable of the chain `x -f-> y -g-> z`.
fn cylinder_base() -> Result<Universal> {
    let chain = check_context(&[
        (v("x"), Ty::obj()),
        (v("y"), Ty::obj()),
        (v("f"), hom("x", "y")),
        (v("z"), Ty::obj()),
        (v("g"), hom("y", "z")),
    ])?;
    let all: BTreeSet<Var> = chain.vars().collect();
    let fg = comp(&chain, 0, &[t("f"), t("g")])?;
    let u = term_up(&chain, &fg, &all)?;
    Ok(Universal {
        ctx: ctx_up(&chain, &all)?.ctx_up,
        a: v("f").bar(),
        b: v("g").bar(),
        u,
    })
}

/// `a *_1 (f *_0 b) *_1 α` for the cones `a : h -> f *_0 j` and
/// `b : j -> g *_0 l` with common apex `p`.
fn cone_base() -> Result<Universal> {
    let mut e = vec![
        (v("x"), Ty::obj()),
        (v("y"), Ty::obj()),
        (v("f"), hom("x", "y")),
        (v("z"), Ty::obj()),
        (v("g"), hom("y", "z")),
        (v("p"), Ty::obj()),
        (v("h"), hom("x", "p")),
        (v("j"), hom("y", "p")),
        (v("l"), hom("z", "p")),
    ];
    let pre = check_context(&e)?;
    let fj = comp(&pre, 0, &[t("f"), t("j")])?;
    let gl = comp(&pre, 0, &[t("g"), t("l")])?;
    e.push((v("a"), Ty::arr(hom("x", "p"), t("h"), fj)));
    e.push((v("b"), Ty::arr(hom("y", "p"), t("j"), gl.clone())));
    let ctx = check_context(&e)?;
    let fb = comp(&ctx, 0, &[t("f"), t("b")])?;
    let f_gl = comp(&ctx, 0, &[t("f"), gl])?;
    let fg = comp(&ctx, 0, &[t("f"), t("g")])?;
    let fg_l = comp(&ctx, 0, &[fg, t("l")])?;
    let assoc = auto_coh(&ctx, &f_gl, &fg_l)?;
    let u = comp(&ctx, 1, &[t("a"), fb, assoc])?;
    Ok(Universal { ctx, a: v("a"), b: v("b"), u })
}

/// Two generic instances of dimensions `m` and `n` glued along
/// `front^k(a) = back^k(b)`.
fn glue(kind: Kind, m: usize, n: usize, k: usize) -> Result<(Ctx, Var, Var)> {
    let (sa, sb) = (shape(kind, m), shape(kind, n));
    let fa = Instance::generic(kind, m)?.front_k(k);
    let bb = Instance::generic(kind, n)?.back_k(k);
    let ra: Sub = sa.ctx.vars().map(|x| (x, Term::var(x.derived(Tag::Copy(0))))).collect();
    let mut rb = Sub::new();
    let mut shared = BTreeSet::new();
    for w in shape(kind, k).ctx.vars() {
        let x = bb.sub.get(w).and_then(Term::as_var).ok_or_else(|| internal("glued face"))?;
        let y = fa.sub.get(w).unwrap().subst(&ra);
        shared.insert(x);
        rb.push(x, y);
    }
    for x in sb.ctx.vars() {
        if !shared.contains(&x) {
            rb.push(x, Term::var(x.derived(Tag::Copy(1))));
        }
    }
    let mut e: Vec<(Var, Ty)> = sa
        .ctx
        .entries()
        .iter()
        .map(|(x, ty)| (x.derived(Tag::Copy(0)), ty.subst(&ra)))
        .collect();
    for (x, ty) in sb.ctx.entries() {
        if !shared.contains(x) {
            e.push((x.derived(Tag::Copy(1)), ty.subst(&rb)));
        }
    }
    Ok((
        check_context(&e)?,
        sa.filler.derived(Tag::Copy(0)),
        sb.filler.derived(Tag::Copy(1)),
    ))
}

fn internal(what: &str) -> Error {
    Error::Internal(format!("universal construction: {what}"))
}

fn as_var(t: &Term, what: &str) -> Result<Var> {
    t.as_var().ok_or_else(|| internal(&format!("{what} is not a variable")))
}

/// The substitution `Γ ⊢ σ : U` sending the generic instances of `U` to
/// `a` and `b`, matched jointly so that shared faces must agree.
fn instantiate(univ: &Universal, a: &Term, b: &Term, ambient: &Ctx) -> Result<Sub> {
    let bindable = |x: Var| univ.ctx.contains(x);
    let ta = check_term(ambient, a)?;
    let tb = check_term(ambient, b)?;
    let mut bind = Bindings::new();
    if !match_ty(univ.ctx.get(univ.a).unwrap(), &ta, &bindable, &mut bind) {
        return Err(Error::ShapeMismatch(format!("`{a}` does not have the expected shape")));
    }
    let mut alone = Bindings::new();
    if !match_ty(univ.ctx.get(univ.b).unwrap(), &tb, &bindable, &mut alone) {
        return Err(Error::ShapeMismatch(format!("`{b}` does not have the expected shape")));
    }
    if !match_ty(univ.ctx.get(univ.b).unwrap(), &tb, &bindable, &mut bind) {
        return Err(Error::FacesMismatch(format!("the faces of `{a}` and `{b}` do not agree")));
    }
    bind.insert(univ.a, a.clone());
    bind.insert(univ.b, b.clone());
    univ.ctx
        .vars()
        .map(|x| {
            bind.get(&x)
                .cloned()
                .map(|t| (x, t))
                .ok_or_else(|| internal(&format!("`{x}` is not reached by the instances")))
        })
        .collect()
}

/// The matching substitution of a pattern type against an actual type,
/// required to bind every variable of `over`.
fn match_all(pattern: &Ty, actual: &Ty, over: &Ctx) -> Result<Sub> {
    let mut b = Bindings::new();
    if !match_ty(pattern, actual, &|x| over.contains(x), &mut b) {
        return Err(internal(&format!("`{actual}` is not an instance of `{pattern}`")));
    }
    over.vars()
        .map(|x| {
            b.get(&x)
                .cloned()
                .map(|t| (x, t))
                .ok_or_else(|| internal(&format!("`{x}` left unbound")))
        })
        .collect()
}

/// One side of the boundary correction: the naturality of `side` along
/// the parameters on which `from` and `to` differ, filled by coherences.
fn retarget(
    ambient: &Ctx,
    params: &Ctx,
    side: &Term,
    from: &Sub,
    to: &Sub,
) -> Result<Option<Term>> {
    let x: BTreeSet<Var> = params
        .vars()
        .filter(|p| side.mentions(*p) && from.get(*p) != to.get(*p))
        .collect();
    if x.is_empty() {
        return Ok(None);
    }
    let lifted = term_up(params, side, &x)?;
    let mut s = Sub::new();
    for p in params.vars() {
        let (f, g) = (from.get(p).unwrap(), to.get(p).unwrap());
        if x.contains(&p) {
            s.push(p.minus(), f.clone());
            s.push(p.plus(), g.clone());
            s.push(p.bar(), auto_coh(ambient, f, g)?);
        } else {
            s.push(p, f.clone());
        }
    }
    Ok(Some(lifted.subst(&s)))
}

/// Composes `u : pattern[have]` with interchangers on either side so that
/// the result has type `pattern[want]`.
fn correct(ambient: &Ctx, u: Term, params: &Ctx, pattern: &Ty, have: &Sub, want: &Sub) -> Result<Term> {
    let (_, s, t) = pattern.parts().ok_or_else(|| internal("pattern is not an arrow"))?;
    let n = pattern.dim() - 1;
    let mut cells = Vec::new();
    cells.extend(retarget(ambient, params, s, want, have)?);
    cells.push(u);
    cells.extend(retarget(ambient, params, t, have, want)?);
    comp(ambient, n, &cells)
}

/// `^{k+1}∘_k^{k+1}` from `^k∘_{k-1}^k` by suspension, for `k ≥ 2`.
fn suspended(kind: Kind, k: usize) -> Result<Universal> {
    let prev = universal_comp(kind, k, k, k - 1)?;
    let dims = match kind {
        Kind::Cylinder => BTreeSet::new(),
        Kind::Cone => dims_upto(k),
    };
    let (n_pole, s_pole) = Var::poles(0);
    let mut op = Op::new(&dims);
    let mut sus = Suspend::new(n_pole, s_pole);
    let sctx = sus.ctx(&op.ctx(&prev.ctx));
    let su = sus.term(&op.term(&prev.u));

    let (ctx, a, b) = glue(kind, k + 1, k + 1, k)?;
    // Reversing the composition dimension exchanges the two operands.
    let (first, second) = match kind {
        Kind::Cylinder => (a, b),
        Kind::Cone => (b, a),
    };
    let tau = instantiate(
        &Universal {
            ctx: sctx,
            a: prev.a,
            b: prev.b,
            u: su.clone(),
        },
        &Term::var(first),
        &Term::var(second),
        &ctx,
    )
    .map_err(|e| internal(&format!("suspended shape does not match: {e}")))?;
    let u = su.subst(&tau);

    let ia = classify(kind, k + 1, &ctx, &Term::var(a))?;
    let ib = classify(kind, k + 1, &ctx, &Term::var(b))?;
    let top = comp(&ctx, k - 1, &[ia.top(), ib.top()])?;
    let (back, front) = (ia.back().unwrap(), ib.front().unwrap());
    let want_ty = match kind {
        Kind::Cylinder => {
            let bot = comp(&ctx, k - 1, &[ia.bot().unwrap(), ib.bot().unwrap()])?;
            cyl_type(&ctx, &top, &bot, &back, &front)?
        }
        Kind::Cone => cone_type(&ctx, &top, &back, &front)?,
    };
    let have_ty = check_term(&ctx, &u)?;

    let sh = shape(kind, k);
    let mut op = Op::new(&dims);
    let mut sus = Suspend::new(n_pole, s_pole);
    let params = sus.ctx(&op.ctx(&sh.boundary));
    let pattern = sus.ty(&op.ty(sh.filler_ty()));
    let have = match_all(&pattern, &have_ty, &params)?;
    let want = match_all(&pattern, &want_ty, &params)?;
    let u = correct(&ctx, u, &params, &pattern, &have, &want)?;
    Ok(Universal { ctx, a, b, u })
}

#[derive(Clone, Copy)]
enum Side {
    Both,
    A,
    B,
}

/// Lifts a universal composite along the generic instances named by `side`.
/// The opposite on `d` is applied for cylinders.
fn lifted(kind: Kind, prev: &Universal, side: Side, d: usize) -> Result<Universal> {
    let mut x = BTreeSet::new();
    let mut add = |fill: Var| -> Result<()> {
        let n = check_term(&prev.ctx, &Term::var(fill))?.dim();
        let i = classify(kind, n, &prev.ctx, &Term::var(fill))?;
        x.insert(fill);
        x.insert(as_var(&i.top(), "a top face")?);
        if let Some(b) = i.bot() {
            x.insert(as_var(&b, "a bottom face")?);
        }
        Ok(())
    };
    if matches!(side, Side::Both | Side::A) {
        add(prev.a)?;
    }
    if matches!(side, Side::Both | Side::B) {
        add(prev.b)?;
    }
    finish_lift(kind, prev, &x, d)
}

fn finish_lift(kind: Kind, prev: &Universal, x: &BTreeSet<Var>, d: usize) -> Result<Universal> {
    let ctx = ctx_up(&prev.ctx, x)?.ctx_up;
    let u = term_up(&prev.ctx, &prev.u, x)?;
    let (ctx, u) = match kind {
        Kind::Cylinder => {
            let mut op = Op::new(&BTreeSet::from([d]));
            (op.ctx(&ctx), op.term(&u))
        }
        Kind::Cone => (ctx, u),
    };
    let pick = |f: Var| if x.contains(&f) { f.bar() } else { f };
    Ok(Universal {
        ctx,
        a: pick(prev.a),
        b: pick(prev.b),
        u,
    })
}

pub(crate) fn universal_comp(kind: Kind, m: usize, n: usize, k: usize) -> Result<Arc<Universal>> {
    memo(Key::Comp(kind, m, n, k), || {
        if m == k + 1 && n == k + 1 {
            match (kind, k) {
                (Kind::Cylinder, 1) => cylinder_base(),
                (Kind::Cone, 1) => cone_base(),
                _ => suspended(kind, k),
            }
        } else if m == n {
            lifted(kind, &*universal_comp(kind, m - 1, n - 1, k)?, Side::Both, m)
        } else if m > n {
            lifted(kind, &*universal_comp(kind, m - 1, n, k)?, Side::A, m)
        } else {
            lifted(kind, &*universal_comp(kind, m, n - 1, k)?, Side::B, n)
        }
    })
}

pub(crate) fn universal_stack(n: usize) -> Result<Arc<Universal>> {
    memo(Key::Stack(n), || {
        if n == 1 {
            let ctx = check_context(&[
                (v("top"), Ty::obj()),
                (v("mid"), Ty::obj()),
                (v("a"), hom("top", "mid")),
                (v("bot"), Ty::obj()),
                (v("b"), hom("mid", "bot")),
            ])?;
            let u = comp(&ctx, 0, &[t("a"), t("b")])?;
            return Ok(Universal { ctx, a: v("a"), b: v("b"), u });
        }
        let prev = universal_stack(n - 1)?;
        let ia = classify(Kind::Cylinder, n - 1, &prev.ctx, &Term::var(prev.a))?;
        let ib = classify(Kind::Cylinder, n - 1, &prev.ctx, &Term::var(prev.b))?;
        let x: BTreeSet<Var> = [
            as_var(&ia.top(), "a top face")?,
            as_var(&ia.bot().unwrap(), "a bottom face")?,
            prev.a,
            as_var(&ib.bot().unwrap(), "a bottom face")?,
            prev.b,
        ]
        .into_iter()
        .collect();
        finish_lift(Kind::Cylinder, &prev, &x, n)
    })
}

fn check_indices(a: &Instance, b: &Instance, k: usize) -> Result<()> {
    if a.kind != b.kind {
        return Err(Error::ShapeMismatch("a cylinder and a cone do not compose".into()));
    }
    if a.ambient != b.ambient {
        return Err(Error::FacesMismatch("the instances live in different contexts".into()));
    }
    if k == 0 {
        return Err(Error::UnsupportedIndices("composition along dimension 0".into()));
    }
    if a.n < k + 1 || b.n < k + 1 {
        return Err(Error::UnsupportedIndices(format!(
            "composing along dimension {k} needs both instances of dimension at least {}",
            k + 1
        )));
    }
    let (f, g) = (a.front_k(k), b.back_k(k));
    if f.filler != g.filler {
        return Err(Error::FacesMismatch(format!(
            "front^{k} `{}` differs from back^{k} `{}`",
            f.filler, g.filler
        )));
    }
    Ok(())
}

fn apply(kind: Kind, univ: &Universal, a: &Instance, b: &Instance, d: usize) -> Result<Instance> {
    let s = instantiate(univ, &a.filler, &b.filler, &a.ambient)?;
    let r = univ.u.subst(&s);
    classify(kind, d, &a.ambient, &r)
}

/// `a ∘_k b` for a `m`-cylinder `a` and a `n`-cylinder `b`.
pub fn cyl_comp(a: &Instance, b: &Instance, k: usize) -> Result<Instance> {
    if a.kind != Kind::Cylinder {
        return Err(Error::ShapeMismatch("expected cylinders".into()));
    }
    check_indices(a, b, k)?;
    let univ = universal_comp(Kind::Cylinder, a.n, b.n, k)?;
    apply(Kind::Cylinder, &univ, a, b, a.n.max(b.n))
}

/// `a ▹_k b` for a `m`-cone `a` and a `n`-cone `b`.
pub fn cone_comp(a: &Instance, b: &Instance, k: usize) -> Result<Instance> {
    if a.kind != Kind::Cone {
        return Err(Error::ShapeMismatch("expected cones".into()));
    }
    check_indices(a, b, k)?;
    let univ = universal_comp(Kind::Cone, a.n, b.n, k)?;
    apply(Kind::Cone, &univ, a, b, a.n.max(b.n))
}

/// The stacking `a ⊞ b` of two `n`-cylinders with `bot(a) = top(b)`.
pub fn cyl_stack(a: &Instance, b: &Instance) -> Result<Instance> {
    if a.kind != Kind::Cylinder || b.kind != Kind::Cylinder {
        return Err(Error::ShapeMismatch("expected cylinders".into()));
    }
    if a.n != b.n {
        return Err(Error::ShapeMismatch(format!(
            "stacking a {}-cylinder on a {}-cylinder",
            a.n, b.n
        )));
    }
    if a.ambient != b.ambient {
        return Err(Error::FacesMismatch("the instances live in different contexts".into()));
    }
    if a.bot() != Some(b.top()) {
        return Err(Error::FacesMismatch(format!(
            "bottom `{}` differs from top `{}`",
            a.bot().unwrap(),
            b.top()
        )));
    }
    let univ = universal_stack(a.n)?;
    apply(Kind::Cylinder, &univ, a, b, a.n)
}

/// The universal context and term of an operation, for size reporting.
pub fn universal_term(kind: Kind, m: usize, n: usize, k: usize) -> Result<(Ctx, Term)> {
    if k == 0 || m < k + 1 || n < k + 1 {
        return Err(Error::UnsupportedIndices(format!("indices {m}, {n} along {k}")));
    }
    let u = universal_comp(kind, m, n, k)?;
    Ok((u.ctx.clone(), u.u.clone()))
}

/// The universal context and term of the stacking of `n`-cylinders.
pub fn universal_stack_term(n: usize) -> Result<(Ctx, Term)> {
    if n == 0 {
        return Err(Error::UnsupportedIndices("stacking of 0-cylinders".into()));
    }
    let u = universal_stack(n)?;
    Ok((u.ctx.clone(), u.u.clone()))
}

/// A context holding a generic `m`-instance and a generic `n`-instance
/// glued along `front^k(a) = back^k(b)`.
pub fn generic_pair(kind: Kind, m: usize, n: usize, k: usize) -> Result<(Ctx, Instance, Instance)> {
    if k >= m.min(n) + 1 {
        return Err(Error::UnsupportedIndices(format!("gluing along {k} above dimensions {m}, {n}")));
    }
    let (ctx, a, b) = glue(kind, m, n, k)?;
    let ia = classify(kind, m, &ctx, &Term::var(a))?;
    let ib = classify(kind, n, &ctx, &Term::var(b))?;
    Ok((ctx, ia, ib))
}

/// A context holding two generic `n`-cylinders with `bot(a) = top(b)`.
pub fn generic_stack_pair(n: usize) -> Result<(Ctx, Instance, Instance)> {
    let univ = universal_stack(n)?;
    let ia = classify(Kind::Cylinder, n, &univ.ctx, &Term::var(univ.a))?;
    let ib = classify(Kind::Cylinder, n, &univ.ctx, &Term::var(univ.b))?;
    Ok((univ.ctx.clone(), ia, ib))
}
