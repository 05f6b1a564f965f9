//! Small instances and executable statements of the naturality lemmas.
//!
//! Instances are drawn from exhaustive enumerations over pasting contexts
//! with at most three edges, so every choice vector selects a valid,
//! non-vacuous instance. Each `check_*` function returns `Err` with a
//! description when the property fails on the selected instance.

use std::collections::BTreeSet;

use crate::kernel::{check_term, Ctx, Head, Sub, Term, Ty, Var};
use crate::metaops::{Op, Suspend};
use crate::naturality::{ctx_up, depth, preimage, sub_up, term_up, type_up_term, up_closure, Focus};
use crate::pasting::{apply_head, check_ps, comp, comp_term_of, PsTree};

/// Every pasting shape with between one and `max_edges` edges.
pub fn trees(max_edges: usize) -> Vec<PsTree> {
    fn forests(edges: usize) -> Vec<Vec<PsTree>> {
        if edges == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for first in 1..=edges {
            for head in with_edges(first - 1) {
                for rest in forests(edges - first) {
                    let mut f = vec![head.clone()];
                    f.extend(rest);
                    out.push(f);
                }
            }
        }
        out
    }
    fn with_edges(edges: usize) -> Vec<PsTree> {
        forests(edges).into_iter().map(|children| PsTree { children }).collect()
    }
    (1..=max_edges).flat_map(with_edges).collect()
}

/// The pasting context of `t` with variables `{prefix}0, {prefix}1, ...`.
pub fn labelled(t: &PsTree, prefix: &str) -> Ctx {
    let ctx = t.to_ctx();
    let ren: Sub = ctx
        .vars()
        .enumerate()
        .map(|(i, v)| (v, Term::var(Var::named(&format!("{prefix}{i}")))))
        .collect();
    Ctx::new(
        ctx.entries()
            .iter()
            .map(|(v, ty)| (ren.get(*v).unwrap().as_var().unwrap(), ty.subst(&ren)))
            .collect(),
    )
}

/// The identity coherence on a term.
pub fn identity(ctx: &Ctx, t: &Term) -> Option<Term> {
    let a = check_term(ctx, t).ok()?;
    let disc = PsTree::disc(a.dim()).to_ctx();
    let top = disc.vars().last()?;
    let x = Term::var(top);
    let head = Head::new(&disc, &Ty::arr(disc.get(top)?.clone(), x.clone(), x));
    apply_head(ctx, &head, &[t.clone()]).ok()
}

/// Variables, iterated identities up to dimension three, binary composites
/// of variables, and the unbiased composite.
pub fn term_pool(ctx: &Ctx) -> Vec<Term> {
    let vars: Vec<Term> = ctx.vars().map(Term::var).collect();
    let mut out = vars.clone();
    let mut layer = vars.clone();
    while !layer.is_empty() {
        layer = layer
            .iter()
            .filter(|t| t.dim_in(ctx).map(|d| d < 3).unwrap_or(false))
            .filter_map(|t| identity(ctx, t))
            .collect();
        out.extend(layer.iter().cloned());
    }
    for a in &vars {
        for b in &vars {
            let d = a.dim_in(ctx).unwrap_or(0).min(b.dim_in(ctx).unwrap_or(0));
            for k in 0..d {
                if let Ok(c) = comp(ctx, k, &[a.clone(), b.clone()]) {
                    if check_term(ctx, &c).is_ok() && !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
        }
    }
    if let Ok(p) = check_ps(ctx) {
        let c = comp_term_of(&p);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Substitutions `ambient ⊢ σ : domain` with images drawn from `pool`,
/// at most `limit` of them.
pub fn substitutions(domain: &Ctx, ambient: &Ctx, pool: &[Term], limit: usize) -> Vec<Sub> {
    let typed: Vec<(Term, Ty)> = pool
        .iter()
        .filter_map(|t| check_term(ambient, t).ok().map(|ty| (t.clone(), ty)))
        .collect();
    let entries = domain.entries();
    let mut out = Vec::new();
    let mut cur = Sub::new();
    fn go(
        i: usize,
        entries: &[(Var, Ty)],
        typed: &[(Term, Ty)],
        cur: &mut Sub,
        out: &mut Vec<Sub>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if i == entries.len() {
            out.push(cur.clone());
            return;
        }
        let (v, ty) = &entries[i];
        let want = ty.subst(cur);
        for (t, tty) in typed {
            if *tty == want {
                let saved = cur.clone();
                cur.push(*v, t.clone());
                go(i + 1, entries, typed, cur, out, limit);
                *cur = saved;
            }
        }
    }
    go(0, entries, &typed, &mut cur, &mut out, limit);
    out
}

/// Every up-closed subset of the variables of `ctx`.
pub fn up_closed_subsets(ctx: &Ctx) -> Vec<BTreeSet<Var>> {
    let vars: Vec<Var> = ctx.vars().collect();
    assert!(vars.len() <= 12, "context too large to enumerate");
    let mut out = Vec::new();
    for mask in 0u32..(1 << vars.len()) {
        let x: BTreeSet<Var> = (0..vars.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| vars[i])
            .collect();
        if up_closure(ctx, &x) == x {
            out.push(x);
        }
    }
    out
}

/// Cursor over a choice vector; indices wrap around.
struct Picks<'a> {
    c: &'a [usize],
    i: usize,
}

impl Picks<'_> {
    fn next(&mut self) -> usize {
        let v = if self.c.is_empty() { 0 } else { self.c[self.i % self.c.len()] };
        self.i += 1;
        v
    }

    /// The items of `v`, starting at a chosen offset and wrapping.
    fn rotate<'b, T>(&mut self, v: &'b [T]) -> impl Iterator<Item = &'b T> {
        let n = v.len();
        let s = if n == 0 { 0 } else { self.next() % n };
        (0..n).map(move |i| &v[(s + i) % n])
    }
}

fn tree_ctx(p: &mut Picks, prefix: &str) -> Ctx {
    let ts = trees(3);
    let t = &ts[p.next() % ts.len()];
    labelled(t, prefix)
}

fn meets(t: &Term, x: &BTreeSet<Var>) -> bool {
    t.vars().iter().any(|v| x.contains(v))
}

fn depth_ok(ctx: &Ctx, x: &BTreeSet<Var>, f: Focus) -> bool {
    depth(ctx, x, f).map(|r| r.d <= 1 && r.k <= 1).unwrap_or(false)
}

fn inj(ctx: &Ctx, x: &BTreeSet<Var>, plus: bool) -> Result<Sub, String> {
    let out = ctx_up(ctx, x).map_err(|e| e.to_string())?;
    Ok(if plus { out.inj_plus } else { out.inj_minus })
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, a: T, b: T) -> Result<(), String> {
    if a == b {
        Ok(())
    } else {
        Err(format!("{what}: {a:?} differs from {b:?}"))
    }
}

fn e2s(e: crate::Error) -> String {
    e.to_string()
}

/// A pullback instance: `G ⊢ σ : D`, a term of `D`, a second substitution
/// `D ⊢ τ : T`, and `X` up-closed in `G` of depth at most one in `G`, `σ`
/// and `t[σ]`, with `t[σ]` meeting `X`.
struct Pullback {
    g: Ctx,
    d: Ctx,
    sigma: Sub,
    t: Term,
    theta: Ctx,
    tau: Sub,
    x: BTreeSet<Var>,
}

/// Some shape pairs admit no instance; those move on to the next shapes.
fn pullback_instance(c: &[usize]) -> Result<Pullback, String> {
    let n = trees(3).len();
    for shift in 0..n * n {
        let mut c2 = c.to_vec();
        c2.resize(c2.len().max(3), 0);
        c2[0] += shift % n;
        c2[1] += shift / n;
        if let Ok(pb) = pullback_attempt(&c2) {
            return Ok(pb);
        }
    }
    Err("no instance".into())
}

fn pullback_attempt(c: &[usize]) -> Result<Pullback, String> {
    let mut p = Picks { c, i: 0 };
    let g = tree_ctx(&mut p, "g");
    let d = tree_ctx(&mut p, "d");
    let theta = tree_ctx(&mut p, "e");
    let sigmas = substitutions(&d, &g, &term_pool(&g), 64);
    let taus = substitutions(&theta, &d, &term_pool(&d), 16);
    let d_pool = term_pool(&d);
    let xs = up_closed_subsets(&g);
    let tau = p.rotate(&taus).next().cloned().ok_or("no substitution into the domain")?;
    let sig_start: Vec<&Sub> = p.rotate(&sigmas).collect();
    let t_start = p.next();
    let x_start = p.next();
    for sigma in sig_start {
        for i in 0..d_pool.len() {
            let t = &d_pool[(t_start + i) % d_pool.len()];
            let ts = t.subst(sigma);
            for j in 0..xs.len() {
                let x = &xs[(x_start + j) % xs.len()];
                if meets(&ts, x)
                    && depth_ok(&g, x, Focus::Sub(sigma))
                    && depth_ok(&g, x, Focus::Term(&ts))
                    && depth_ok(&g, x, Focus::Sub(&sigma.compose(&tau)))
                {
                    return Ok(Pullback {
                        g: g.clone(),
                        d: d.clone(),
                        sigma: sigma.clone(),
                        t: t.clone(),
                        theta: theta.clone(),
                        tau: tau.clone(),
                        x: x.clone(),
                    });
                }
            }
        }
    }
    Err("no instance".into())
}

/// `σ∘inj±_{G,X} = inj±_{D,σ⁻¹X}∘(σ↑X)`.
pub fn check_pullback_inj(c: &[usize]) -> Result<(), String> {
    let pb = pullback_instance(c)?;
    let y = preimage(&pb.sigma, &pb.x);
    let sig_up = sub_up(&pb.g, &pb.sigma, &pb.d, &pb.x).map_err(e2s)?;
    for plus in [false, true] {
        let lhs = inj(&pb.g, &pb.x, plus)?.compose(&pb.sigma);
        let rhs = sig_up.compose(&inj(&pb.d, &y, plus)?);
        eq("σ∘inj", lhs.entries(), rhs.entries())?;
    }
    Ok(())
}

/// `t[σ]↑X = (t↑σ⁻¹X)[σ↑X]` and `A[σ]↑^{t[σ]}X = (A↑^t σ⁻¹X)[σ↑X]`.
pub fn check_pullback_term(c: &[usize]) -> Result<(), String> {
    let pb = pullback_instance(c)?;
    let y = preimage(&pb.sigma, &pb.x);
    let sig_up = sub_up(&pb.g, &pb.sigma, &pb.d, &pb.x).map_err(e2s)?;
    let ts = pb.t.subst(&pb.sigma);
    let lhs = term_up(&pb.g, &ts, &pb.x).map_err(e2s)?;
    let rhs = term_up(&pb.d, &pb.t, &y).map_err(e2s)?.subst(&sig_up);
    eq("t[σ]↑X", lhs, rhs)?;
    let a = check_term(&pb.d, &pb.t).map_err(e2s)?;
    let lhs = type_up_term(&pb.g, &a.subst(&pb.sigma), &ts, &pb.x).map_err(e2s)?;
    let rhs = type_up_term(&pb.d, &a, &pb.t, &y).map_err(e2s)?.subst(&sig_up);
    eq("A[σ]↑X", lhs, rhs)
}

/// `(τ∘σ)↑X = (τ↑σ⁻¹X)∘(σ↑X)`.
pub fn check_pullback_sub(c: &[usize]) -> Result<(), String> {
    let pb = pullback_instance(c)?;
    let y = preimage(&pb.sigma, &pb.x);
    let sig_up = sub_up(&pb.g, &pb.sigma, &pb.d, &pb.x).map_err(e2s)?;
    let ts = pb.sigma.compose(&pb.tau);
    let lhs = sub_up(&pb.g, &ts, &pb.theta, &pb.x).map_err(e2s)?;
    let rhs = sig_up.compose(&sub_up(&pb.d, &pb.tau, &pb.theta, &y).map_err(e2s)?);
    eq("(τ∘σ)↑X", lhs.entries(), rhs.entries())
}

/// Adding an unused variable changes neither inclusions nor naturality.
pub fn check_weakening(c: &[usize]) -> Result<(), String> {
    let mut p = Picks { c, i: 0 };
    let g = tree_ctx(&mut p, "g");
    let pool = term_pool(&g);
    let mut tys: Vec<Ty> = vec![Ty::obj()];
    for (_, t) in g.entries() {
        if !tys.contains(t) {
            tys.push(t.clone());
        }
    }
    let junk = Var::named("junk");
    let ty_start = p.next();
    let t_start = p.next();
    let x_start = p.next();
    for i in 0..tys.len() {
        let a = &tys[(ty_start + i) % tys.len()];
        let mut e = g.entries().to_vec();
        e.push((junk, a.clone()));
        let ext = Ctx::new(e);
        let xs = up_closed_subsets(&ext);
        for j in 0..pool.len() {
            let t = &pool[(t_start + j) % pool.len()];
            for k in 0..xs.len() {
                let xe = &xs[(x_start + k) % xs.len()];
                let x: BTreeSet<Var> = xe.iter().copied().filter(|v| *v != junk).collect();
                if !meets(t, &x) || !depth_ok(&ext, xe, Focus::Term(t)) {
                    continue;
                }
                let b = check_term(&g, t).map_err(e2s)?;
                for plus in [false, true] {
                    let ie = inj(&ext, xe, plus)?;
                    let ig = inj(&g, &x, plus)?;
                    eq("t[inj]", t.subst(&ie), t.subst(&ig))?;
                    eq("B[inj]", b.subst(&ie), b.subst(&ig))?;
                }
                let lhs = term_up(&ext, t, xe).map_err(e2s)?;
                let rhs = term_up(&g, t, &x).map_err(e2s)?;
                eq("t↑X", lhs, rhs)?;
                let lhs = type_up_term(&ext, &b, t, xe).map_err(e2s)?;
                let rhs = type_up_term(&g, &b, t, &x).map_err(e2s)?;
                return eq("B↑X", lhs, rhs);
            }
        }
    }
    Err("no instance".into())
}

/// Terms, types and substitutions missing `X` are fixed by the inclusions.
pub fn check_empty_intersection(c: &[usize]) -> Result<(), String> {
    let mut p = Picks { c, i: 0 };
    let g = tree_ctx(&mut p, "g");
    let d = tree_ctx(&mut p, "d");
    let pool = term_pool(&g);
    let sigmas = substitutions(&d, &g, &pool, 64);
    let xs: Vec<BTreeSet<Var>> = up_closed_subsets(&g)
        .into_iter()
        .filter(|x| !x.is_empty() && depth_ok(&g, x, Focus::Ctx))
        .collect();
    let x_start = p.next();
    let t_start = p.next();
    let s_start = p.next();
    for i in 0..xs.len() {
        let x = &xs[(x_start + i) % xs.len()];
        let Some(t) = (0..pool.len())
            .map(|j| &pool[(t_start + j) % pool.len()])
            .find(|t| !meets(t, x))
        else {
            continue;
        };
        let a = check_term(&g, t).map_err(e2s)?;
        let sigma = (0..sigmas.len())
            .map(|j| &sigmas[(s_start + j) % sigmas.len()])
            .find(|s| s.entries().iter().all(|(_, u)| !meets(u, x)));
        for plus in [false, true] {
            let i = inj(&g, x, plus)?;
            eq("t[inj]", t.subst(&i), t.clone())?;
            if !a.vars().iter().any(|v| x.contains(v)) {
                eq("A[inj]", a.subst(&i), a.clone())?;
            }
            if let Some(s) = sigma {
                eq("σ∘inj", i.compose(s).entries(), s.entries())?;
            }
        }
        return Ok(());
    }
    Err("no instance".into())
}

/// `Σ(Γ↑X) = (ΣΓ)↑X`, `Σ inj± = inj±` and `Σ(t↑X) = (Σt)↑X` at depth 0.
pub fn check_suspension(c: &[usize]) -> Result<(), String> {
    let mut p = Picks { c, i: 0 };
    let g = tree_ctx(&mut p, "g");
    let pool = term_pool(&g);
    let xs: Vec<BTreeSet<Var>> = up_closed_subsets(&g)
        .into_iter()
        .filter(|x| {
            depth(&g, x, Focus::Ctx)
                .map(|r| r.d == 0)
                .unwrap_or(false)
        })
        .collect();
    let (n, s) = Var::poles(0);
    let sus = || Suspend::new(n, s);
    let x_start = p.next();
    let t_start = p.next();
    for i in 0..xs.len() {
        let x = &xs[(x_start + i) % xs.len()];
        let Some(t) = (0..pool.len())
            .map(|j| &pool[(t_start + j) % pool.len()])
            .find(|t| {
                meets(t, x) && depth(&g, x, Focus::Term(t)).map(|r| r.k == 0).unwrap_or(false)
            })
        else {
            continue;
        };
        let up = ctx_up(&g, x).map_err(e2s)?;
        let sg = sus().ctx(&g);
        let sup = ctx_up(&sg, x).map_err(e2s)?;
        eq("Σ(Γ↑X)", sus().ctx(&up.ctx_up), sup.ctx_up.clone())?;
        eq("Σinj⁻", sus().sub(&up.inj_minus).entries(), sup.inj_minus.entries())?;
        eq("Σinj⁺", sus().sub(&up.inj_plus).entries(), sup.inj_plus.entries())?;
        let lhs = sus().term(&term_up(&g, t, x).map_err(e2s)?);
        let rhs = term_up(&sg, &sus().term(t), x).map_err(e2s)?;
        return eq("Σ(t↑X)", lhs, rhs);
    }
    Err("no instance".into())
}

/// `γ⁻¹(σ⁻¹X) = (γ∘σ)⁻¹X`.
pub fn check_preimage_composition(c: &[usize]) -> Result<(), String> {
    let mut p = Picks { c, i: 0 };
    let a = tree_ctx(&mut p, "a");
    let b = tree_ctx(&mut p, "b");
    let th = tree_ctx(&mut p, "c");
    let gammas = substitutions(&a, &b, &term_pool(&b), 64);
    let sigmas = substitutions(&b, &th, &term_pool(&th), 64);
    let gamma = p.rotate(&gammas).next().ok_or("no substitution")?;
    let sigma = p.rotate(&sigmas).next().ok_or("no substitution")?;
    let vars: Vec<Var> = th.vars().collect();
    let mask = p.next();
    let x: BTreeSet<Var> = (0..vars.len()).filter(|i| mask & (1 << i) != 0).map(|i| vars[i]).collect();
    let lhs = preimage(gamma, &preimage(sigma, &x));
    let rhs = preimage(&sigma.compose(gamma), &x);
    eq("preimage", lhs, rhs)
}

/// Depth-0 lifts of pasting contexts are pasting contexts.
pub fn check_pasting_preservation(c: &[usize]) -> Result<(), String> {
    let mut p = Picks { c, i: 0 };
    let g = tree_ctx(&mut p, "g");
    let xs: Vec<BTreeSet<Var>> = up_closed_subsets(&g)
        .into_iter()
        .filter(|x| !x.is_empty() && depth(&g, x, Focus::Ctx).map(|r| r.d == 0).unwrap_or(false))
        .collect();
    let x = p.rotate(&xs).next().ok_or("no depth-0 set")?;
    let up = ctx_up(&g, x).map_err(e2s)?;
    check_ps(&up.ctx_up).map(|_| ()).map_err(|e| format!("{:?} is not pasting: {e}", up.ctx_up))
}

/// `Γ↑∅ = Γ`, `inj± = id`, `σ↑∅ = σ`, and `op_∅` and `op_M ∘ op_M` are
/// identities.
pub fn check_degenerate(c: &[usize]) -> Result<(), String> {
    let mut p = Picks { c, i: 0 };
    let g = tree_ctx(&mut p, "g");
    let d = tree_ctx(&mut p, "d");
    let none = BTreeSet::new();
    let up = ctx_up(&g, &none).map_err(e2s)?;
    eq("Γ↑∅", &up.ctx_up, &g)?;
    eq("inj⁻", up.inj_minus.entries(), g.identity().entries())?;
    eq("inj⁺", up.inj_plus.entries(), g.identity().entries())?;
    let sigmas = substitutions(&d, &g, &term_pool(&g), 64);
    let sigma = p.rotate(&sigmas).next().ok_or("no substitution")?;
    eq("σ↑∅", sub_up(&g, sigma, &d, &none).map_err(e2s)?.entries(), sigma.entries())?;
    let pool = term_pool(&g);
    let t = p.rotate(&pool).next().unwrap();
    let mut id = Op::new(&BTreeSet::new());
    eq("op_∅ Γ", id.ctx(&g), g.clone())?;
    eq("op_∅ t", id.term(t), t.clone())?;
    let dims: BTreeSet<usize> = (1..=3).filter(|i| p.next() & (1 << i) != 0).collect();
    let mut o1 = Op::new(&dims);
    let mut o2 = Op::new(&dims);
    eq("op∘op Γ", o2.ctx(&o1.ctx(&g)), g.clone())?;
    eq("op∘op t", o2.term(&o1.term(t)), t.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_up_to_three_edges() {
        let ts = trees(3);
        assert_eq!(ts.len(), 1 + 2 + 5);
        assert!(ts.iter().all(|t| t.to_ctx().len() <= 7));
    }

    #[test]
    fn substitutions_are_well_typed() {
        let ts = trees(3);
        let g = labelled(&ts[7], "g");
        let d = labelled(&ts[1], "d");
        let subs = substitutions(&d, &g, &term_pool(&g), 50);
        assert!(!subs.is_empty());
        for s in subs {
            crate::kernel::check_sub(&g, &s, &d).unwrap();
        }
    }

    #[test]
    fn every_lemma_on_a_few_choices() {
        for seed in 0..20usize {
            let c = [seed, seed * 7 + 1, seed * 13 + 2, seed * 3 + 5, seed + 11, seed * 17, 3];
            check_pullback_inj(&c).unwrap();
            check_pullback_term(&c).unwrap();
            check_pullback_sub(&c).unwrap();
            check_weakening(&c).unwrap();
            check_empty_intersection(&c).unwrap();
            check_suspension(&c).unwrap();
            check_preimage_composition(&c).unwrap();
            check_pasting_preservation(&c).unwrap();
            check_degenerate(&c).unwrap();
        }
    }
}
