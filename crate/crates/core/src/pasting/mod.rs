//! Pasting contexts.
//!
//! A pasting context is stored as a rooted planar tree. The root is the
//! initial object; a child of a node `c` of type `A` stands for a pair of
//! entries `(y : A) (f : prev -> y)`, where `prev` is `c` for the first
//! child and the previous child's `y` otherwise. The subtree of the child
//! hangs off `f`.

mod comp;

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::kernel::{Ctx, Sub, Tag, Term, Ty, Var};

pub use comp::{apply_def, apply_head, auto_coh, comp, comp_head, comp_term_of, is_comp_head};

/// Shape of a pasting context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PsTree {
    pub children: Vec<PsTree>,
}

impl PsTree {
    pub fn leaf() -> PsTree {
        PsTree::default()
    }

    /// The n-disc: a chain of n edges.
    pub fn disc(n: usize) -> PsTree {
        (0..n).fold(PsTree::leaf(), |t, _| PsTree { children: vec![t] })
    }

    /// `k` cells of dimension `s + 1` composed along their `s`-boundary.
    pub fn linear(s: usize, k: usize) -> PsTree {
        let inner = PsTree {
            children: vec![PsTree::leaf(); k],
        };
        (0..s).fold(inner, |t, _| PsTree { children: vec![t] })
    }

    /// A chain of `k` edges, then one branch per height in `heights`,
    /// each a chain reaching that total height.
    pub fn wedge(k: usize, heights: &[usize]) -> PsTree {
        let inner = PsTree {
            children: heights.iter().map(|&h| PsTree::disc(h - k - 1)).collect(),
        };
        (0..k).fold(inner, |t, _| PsTree { children: vec![t] })
    }

    pub fn dim(&self) -> usize {
        self.children.iter().map(|c| c.dim() + 1).max().unwrap_or(0)
    }

    pub fn is_disc(&self) -> bool {
        match self.children.as_slice() {
            [] => true,
            [c] => c.is_disc(),
            _ => false,
        }
    }

    /// Recognises `Ψ^s_k`; returns `(s, k)`.
    pub fn as_linear(&self) -> Option<(usize, usize)> {
        let mut t = self;
        let mut s = 0;
        while t.children.len() == 1 && !t.children[0].children.is_empty() {
            t = &t.children[0];
            s += 1;
        }
        if t.children.len() >= 2 && t.children.iter().all(|c| c.children.is_empty()) {
            Some((s, t.children.len()))
        } else {
            None
        }
    }

    /// Number of variables of the flattened context.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| 1 + c.size()).sum::<usize>()
    }

    /// The labelled pasting context with positional variables.
    pub fn to_pasting(&self) -> Pasting {
        let mut next = 0;
        let mut fresh = || {
            let v = Var::pos(next);
            next += 1;
            v
        };
        fn go(t: &PsTree, var: Var, tgt: Option<Var>, fresh: &mut dyn FnMut() -> Var) -> Node {
            let mut children = Vec::new();
            for c in &t.children {
                let y = fresh();
                let f = fresh();
                children.push(go(c, f, Some(y), fresh));
            }
            Node { var, tgt, children }
        }
        let root_var = fresh();
        let root = go(self, root_var, None, &mut fresh);
        Pasting::from_root(root)
    }

    pub fn to_ctx(&self) -> Ctx {
        self.to_pasting().ctx
    }
}

/// A labelled node: `var` is the cell, `tgt` the target of the edge
/// leading to it (absent at the root).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub var: Var,
    pub tgt: Option<Var>,
    pub children: Vec<Node>,
}

impl Node {
    fn shape(&self) -> PsTree {
        PsTree {
            children: self.children.iter().map(|c| c.shape()).collect(),
        }
    }
}

/// A pasting context with its tree.
#[derive(Clone, Debug)]
pub struct Pasting {
    pub ctx: Ctx,
    pub root: Node,
}

impl Pasting {
    /// Builds the context from a labelled tree, deriving the types.
    pub fn from_root(root: Node) -> Pasting {
        let mut entries = vec![(root.var, Ty::obj())];
        fn go(n: &Node, ty: &Ty, out: &mut Vec<(Var, Ty)>) {
            let mut prev = n.var;
            for c in &n.children {
                let y = c.tgt.expect("non-root node without target");
                out.push((y, ty.clone()));
                let fty = Ty::arr(ty.clone(), Term::var(prev), Term::var(y));
                out.push((c.var, fty.clone()));
                go(c, &fty, out);
                prev = y;
            }
        }
        go(&root, &Ty::obj(), &mut entries);
        Pasting {
            ctx: Ctx::new(entries),
            root,
        }
    }

    pub fn shape(&self) -> PsTree {
        self.root.shape()
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    pub fn vars(&self) -> Vec<Var> {
        self.ctx.vars().collect()
    }

    /// The labelled `i`-boundary on the given side.
    pub fn boundary(&self, i: usize, plus: bool) -> Pasting {
        fn go(n: &Node, h: usize, i: usize, plus: bool) -> Node {
            if h == i {
                let var = match (plus, n.children.last()) {
                    (true, Some(last)) => last.tgt.unwrap(),
                    _ => n.var,
                };
                Node {
                    var,
                    tgt: n.tgt,
                    children: vec![],
                }
            } else {
                Node {
                    var: n.var,
                    tgt: n.tgt,
                    children: n.children.iter().map(|c| go(c, h + 1, i, plus)).collect(),
                }
            }
        }
        Pasting::from_root(go(&self.root, 0, i, plus))
    }

    pub fn boundary_vars(&self, i: usize, plus: bool) -> Vec<Var> {
        self.boundary(i, plus).vars()
    }

    /// Boundary as a context together with its inclusion substitution.
    pub fn boundary_with_inclusion(&self, i: usize, plus: bool) -> (Ctx, Sub) {
        let b = self.boundary(i, plus);
        let inc = b.ctx.identity();
        (b.ctx, inc)
    }

    /// Variables occurring in no type: the leaves of the tree.
    pub fn locmax(&self) -> Vec<Var> {
        self.ctx.locmax_vars()
    }

    /// The planar order in which every cell follows its source and
    /// precedes its target.
    pub fn street_order(&self) -> Vec<Var> {
        fn go(n: &Node, out: &mut Vec<Var>) {
            out.push(n.var);
            for c in &n.children {
                go(c, out);
                out.push(c.tgt.unwrap());
            }
        }
        let mut out = Vec::new();
        go(&self.root, &mut out);
        out
    }

    /// No two top-dimensional cells are glued along a codimension-one cell.
    pub fn is_reduced(&self) -> bool {
        let n = self.dim();
        fn go(node: &Node, h: usize, n: usize) -> bool {
            if n > 0 && h == n - 1 && node.children.len() >= 2 {
                return false;
            }
            node.children.iter().all(|c| go(c, h + 1, n))
        }
        go(&self.root, 0, n)
    }

    /// Fuses every run of top-dimensional cells sharing a codimension-one
    /// node into one cell. Returns the reduced pasting context and the
    /// substitution `Γ ⊢ ρ : Γ^r` sending a fused cell to the composite.
    pub fn reduce(&self) -> Result<(Pasting, Sub)> {
        let n = self.dim();
        let mut fused: Vec<(Var, Vec<Var>)> = Vec::new();
        fn go(node: &Node, h: usize, n: usize, fused: &mut Vec<(Var, Vec<Var>)>) -> Node {
            if n > 0 && h == n - 1 && node.children.len() >= 2 {
                let cells: Vec<Var> = node.children.iter().map(|c| c.var).collect();
                let var = cells[0].derived(Tag::Red);
                fused.push((var, cells));
                return Node {
                    var: node.var,
                    tgt: node.tgt,
                    children: vec![Node {
                        var,
                        tgt: node.children.last().unwrap().tgt,
                        children: vec![],
                    }],
                };
            }
            Node {
                var: node.var,
                tgt: node.tgt,
                children: node.children.iter().map(|c| go(c, h + 1, n, fused)).collect(),
            }
        }
        let root = go(&self.root, 0, n, &mut fused);
        let red = Pasting::from_root(root);
        let fused: HashMap<Var, Vec<Var>> = fused.into_iter().collect();
        let mut rho = Sub::new();
        for v in red.ctx.vars() {
            let t = match fused.get(&v) {
                Some(cells) => comp(
                    &self.ctx,
                    n - 1,
                    &cells.iter().map(|c| Term::var(*c)).collect::<Vec<_>>(),
                )?,
                None => Term::var(v),
            };
            rho.push(v, t);
        }
        Ok((red, rho))
    }
}

/// Recognises a pasting context, returning its tree.
pub fn check_ps(ctx: &Ctx) -> Result<Pasting> {
    let e = ctx.entries();
    if e.is_empty() || !e[0].1.is_obj() {
        return Err(Error::NotAPastingContext { position: 0 });
    }
    fn go(e: &[(Var, Ty)], idx: &mut usize, var: Var, tgt: Option<Var>, ty: &Ty) -> Result<Node> {
        let mut children = Vec::new();
        let mut prev = var;
        while *idx < e.len() && &e[*idx].1 == ty {
            let y = e[*idx].0;
            let want = Ty::arr(ty.clone(), Term::var(prev), Term::var(y));
            if *idx + 1 >= e.len() || e[*idx + 1].1 != want {
                return Err(Error::NotAPastingContext { position: *idx + 1 });
            }
            let f = e[*idx + 1].0;
            *idx += 2;
            children.push(go(e, idx, f, Some(y), &want)?);
            prev = y;
        }
        Ok(Node { var, tgt, children })
    }
    let mut idx = 1;
    let root = go(e, &mut idx, e[0].0, None, &Ty::obj())?;
    if idx != e.len() {
        return Err(Error::NotAPastingContext { position: idx });
    }
    let mut seen = HashSet::new();
    for (i, (v, _)) in e.iter().enumerate() {
        if !seen.insert(*v) {
            return Err(Error::NotAPastingContext { position: i });
        }
    }
    Ok(Pasting {
        ctx: ctx.clone(),
        root,
    })
}

/// Puts a globular set given as context entries into pasting order.
pub fn reorder(entries: &[(Var, Ty)]) -> Result<Ctx> {
    let fail = || Error::NotAPastingContext { position: 0 };
    fn order(cells: &[(Var, Ty)], a: &Ty, out: &mut Vec<Var>) -> Result<()> {
        let fail = || Error::NotAPastingContext { position: 0 };
        let d = a.dim() + 1;
        let objs: Vec<Var> = cells.iter().filter(|(_, t)| t == a).map(|(v, _)| *v).collect();
        let higher: Vec<(&(Var, Ty), Ty)> = cells
            .iter()
            .filter(|(_, t)| t != a)
            .map(|c| (c, c.1.truncate(d)))
            .collect();
        let targets: HashSet<Var> = higher
            .iter()
            .filter_map(|(_, t)| t.tgt().and_then(|x| x.as_var()))
            .collect();
        let roots: Vec<Var> = objs.iter().copied().filter(|o| !targets.contains(o)).collect();
        if roots.len() != 1 {
            return Err(fail());
        }
        let mut cur = roots[0];
        out.push(cur);
        let mut used = 1;
        let mut used_higher = 0;
        loop {
            let group: Vec<&(&(Var, Ty), Ty)> = higher
                .iter()
                .filter(|(_, t)| t.src().and_then(|x| x.as_var()) == Some(cur))
                .collect();
            if group.is_empty() {
                break;
            }
            let hom = group[0].1.clone();
            if group.iter().any(|(_, t)| t != &hom) {
                return Err(fail());
            }
            let y = hom.tgt().and_then(|x| x.as_var()).ok_or_else(fail)?;
            if !objs.contains(&y) {
                return Err(fail());
            }
            out.push(y);
            used += 1;
            used_higher += group.len();
            let sub: Vec<(Var, Ty)> = group.iter().map(|(c, _)| (*c).clone()).collect();
            order(&sub, &hom, out)?;
            cur = y;
            if used > objs.len() {
                return Err(fail());
            }
        }
        if used != objs.len() || used_higher != higher.len() {
            return Err(fail());
        }
        Ok(())
    }
    if entries.is_empty() {
        return Err(fail());
    }
    let mut out = Vec::new();
    order(entries, &Ty::obj(), &mut out)?;
    let types: HashMap<Var, Ty> = entries.iter().cloned().collect();
    let ctx = Ctx::new(out.into_iter().map(|v| (v, types[&v].clone())).collect());
    check_ps(&ctx)?;
    Ok(ctx)
}

/// Grafts `delta` onto `gamma` along `∂⁺_n gamma = ∂⁻_n delta`.
/// Returns the glued context and the two inclusions.
pub fn graft(gamma: &Ctx, delta: &Ctx, n: usize) -> Result<(Ctx, Sub, Sub)> {
    let pg = check_ps(gamma)?;
    let pd = check_ps(delta)?;
    let bg = pg.boundary(n, true);
    let bd = pd.boundary(n, false);
    if bg.ctx.positional() != bd.ctx.positional() {
        return Err(Error::BoundaryMismatch(format!(
            "{:?} against {:?}",
            bg.ctx, bd.ctx
        )));
    }
    let mut r = Sub::new();
    for (a, b) in bd.ctx.vars().zip(bg.ctx.vars()) {
        r.push(a, Term::var(b));
    }
    let mut entries: Vec<(Var, Ty)> = gamma.entries().to_vec();
    for (v, t) in delta.entries() {
        if r.contains(*v) {
            continue;
        }
        let mut w = *v;
        let mut i = 2;
        while gamma.contains(w) {
            w = v.derived(Tag::Copy(i));
            i += 1;
        }
        r.push(*v, Term::var(w));
        entries.push((w, t.subst(&r)));
    }
    let ctx = reorder(&entries)?;
    let mut r2 = Sub::new();
    for v in delta.vars() {
        r2.push(v, r.get(v).unwrap().clone());
    }
    Ok((ctx, gamma.identity(), r2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Var {
        Var::named(s)
    }

    fn tv(s: &str) -> Term {
        Term::var(v(s))
    }

    /// Two parallel-composable 2-cells and a whiskered edge.
    pub(crate) fn fig5() -> Ctx {
        let o = Ty::obj();
        let xy = Ty::arr(o.clone(), tv("x"), tv("y"));
        Ctx::new(vec![
            (v("x"), o.clone()),
            (v("y"), o.clone()),
            (v("f"), xy.clone()),
            (v("g"), xy.clone()),
            (v("a"), Ty::arr(xy.clone(), tv("f"), tv("g"))),
            (v("h"), xy.clone()),
            (v("b"), Ty::arr(xy.clone(), tv("g"), tv("h"))),
            (v("z"), o.clone()),
            (v("k"), Ty::arr(o, tv("y"), tv("z"))),
        ])
    }

    fn names(vs: Vec<Var>) -> Vec<String> {
        vs.into_iter().map(|v| v.name().to_string()).collect()
    }

    #[test]
    fn boundaries_of_the_whiskered_context() {
        let p = check_ps(&fig5()).unwrap();
        assert_eq!(names(p.boundary_vars(1, false)), ["x", "y", "f", "z", "k"]);
        assert_eq!(names(p.boundary_vars(1, true)), ["x", "y", "h", "z", "k"]);
        assert_eq!(names(p.boundary_vars(0, true)), ["z"]);
        assert_eq!(names(p.boundary_vars(5, true)).len(), 9);
        assert_eq!(names(p.locmax()), ["a", "b", "k"]);
        assert!(!p.is_reduced());
    }

    #[test]
    fn flatten_roundtrip() {
        for t in [PsTree::linear(2, 3), PsTree::wedge(1, &[3, 2, 4]), PsTree::disc(3)] {
            let p = t.to_pasting();
            let q = check_ps(&p.ctx).unwrap();
            assert_eq!(q.shape(), t);
        }
        assert_eq!(PsTree::linear(1, 3).as_linear(), Some((1, 3)));
        assert_eq!(PsTree::disc(2).as_linear(), None);
    }

    #[test]
    fn reorder_recovers_pasting_order() {
        let c = fig5();
        let mut e = c.entries().to_vec();
        e.reverse();
        assert_eq!(reorder(&e).unwrap(), c);
    }

    #[test]
    fn reduce_fuses_vertical_pairs() {
        let p = check_ps(&fig5()).unwrap();
        let (r, rho) = p.reduce().unwrap();
        assert!(r.is_reduced());
        assert_eq!(r.ctx.len(), 7);
        let fused = r.ctx.vars().find(|x| x.name().ends_with("_r")).unwrap();
        assert!(rho.get(fused).unwrap().as_var().is_none());
    }

    #[test]
    fn grafting_along_objects() {
        let a = PsTree::disc(1).to_ctx();
        let (g, _, i2) = graft(&a, &a, 0).unwrap();
        assert_eq!(check_ps(&g).unwrap().shape(), PsTree::linear(0, 2));
        assert_eq!(i2.len(), 3);
        let two = PsTree::disc(2).to_ctx();
        let pair = PsTree::linear(0, 2).to_ctx();
        assert!(matches!(graft(&pair, &two, 1), Err(Error::BoundaryMismatch(_))));
    }
}
