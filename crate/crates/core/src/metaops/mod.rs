//! Suspension, opposites and the biased composites of a linear chain.

use std::collections::{BTreeSet, HashMap};
use std::sync::{LazyLock, Mutex};

use crate::error::Result;
use crate::kernel::{Ctx, Head, Sub, Term, TermKind, Ty, TyKind, Var};
use crate::pasting::{self, comp, PsTree};

static SUSP: LazyLock<Mutex<HashMap<u32, Head>>> = LazyLock::new(Default::default);
static OPS: LazyLock<Mutex<HashMap<(u32, Vec<usize>), (Head, Vec<usize>)>>> =
    LazyLock::new(Default::default);

/// Suspension with explicit poles `n` (source) and `s` (target).
pub struct Suspend {
    n: Term,
    s: Term,
    memo: HashMap<u32, Term>,
}

impl Suspend {
    pub fn new(n: Var, s: Var) -> Self {
        Suspend {
            n: Term::var(n),
            s: Term::var(s),
            memo: HashMap::new(),
        }
    }

    pub fn ty(&mut self, t: &Ty) -> Ty {
        match t.kind() {
            TyKind::Obj => Ty::arr(Ty::obj(), self.n.clone(), self.s.clone()),
            TyKind::Arr(b, u, v) => {
                let b = self.ty(b);
                Ty::arr(b, self.term(u), self.term(v))
            }
        }
    }

    pub fn term(&mut self, t: &Term) -> Term {
        if let Some(r) = self.memo.get(&t.id()) {
            return r.clone();
        }
        let r = match t.kind() {
            TermKind::Var(_) => t.clone(),
            TermKind::Coh(h, args) => {
                let mut a = vec![self.n.clone(), self.s.clone()];
                a.extend(args.iter().map(|x| self.term(x)));
                Term::coh(suspend_head(h), a)
            }
        };
        self.memo.insert(t.id(), r.clone());
        r
    }

    /// `ΣΓ`: the poles followed by the suspended entries.
    pub fn ctx(&mut self, c: &Ctx) -> Ctx {
        let (n, s) = (self.n.as_var().unwrap(), self.s.as_var().unwrap());
        let mut e = vec![(n, Ty::obj()), (s, Ty::obj())];
        for (v, t) in c.entries() {
            e.push((*v, self.ty(t)));
        }
        Ctx::new(e)
    }

    /// `Σγ`: poles to poles, other images suspended.
    pub fn sub(&mut self, g: &Sub) -> Sub {
        let mut out = Sub::new();
        out.push(self.n.as_var().unwrap(), self.n.clone());
        out.push(self.s.as_var().unwrap(), self.s.clone());
        for (v, t) in g.entries() {
            out.push(*v, self.term(t));
        }
        out
    }
}

/// The suspension of a head: poles at positions 0 and 1, the rest shifted by 2.
pub fn suspend_head(h: &Head) -> Head {
    if let Some(r) = SUSP.lock().unwrap().get(&h.id()) {
        return r.clone();
    }
    let shift: Sub = (0..h.arity())
        .map(|i| (Var::pos(i), Term::var(Var::pos(i + 2))))
        .collect();
    let mut sus = Suspend::new(Var::pos(0), Var::pos(1));
    let mut e = vec![(Var::pos(0), Ty::obj()), (Var::pos(1), Ty::obj())];
    for (i, (_, t)) in h.ctx().entries().iter().enumerate() {
        e.push((Var::pos(i + 2), sus.ty(&t.subst(&shift))));
    }
    let ty = sus.ty(&h.ty().subst(&shift));
    let r = Head::new(&Ctx::new(e), &ty);
    SUSP.lock().unwrap().insert(h.id(), r.clone());
    r
}

/// Suspends a term over a context with fresh poles of the given level.
pub fn suspend(ctx: &Ctx, t: &Term, level: usize) -> (Ctx, Term) {
    let (n, s) = Var::poles(level);
    let mut sus = Suspend::new(n, s);
    (sus.ctx(ctx), sus.term(t))
}

/// The opposite with respect to a set of dimensions: cells whose
/// dimension lies in the set have source and target exchanged.
pub struct Op {
    dims: Vec<usize>,
    memo: HashMap<u32, Term>,
}

impl Op {
    pub fn new(dims: &BTreeSet<usize>) -> Self {
        Op {
            dims: dims.iter().copied().collect(),
            memo: HashMap::new(),
        }
    }

    pub fn ty(&mut self, t: &Ty) -> Ty {
        match t.kind() {
            TyKind::Obj => t.clone(),
            TyKind::Arr(b, u, v) => {
                let b2 = self.ty(b);
                let (u, v) = (self.term(u), self.term(v));
                if self.dims.contains(&t.dim()) {
                    Ty::arr(b2, v, u)
                } else {
                    Ty::arr(b2, u, v)
                }
            }
        }
    }

    pub fn term(&mut self, t: &Term) -> Term {
        if let Some(r) = self.memo.get(&t.id()) {
            return r.clone();
        }
        let r = match t.kind() {
            TermKind::Var(_) => t.clone(),
            TermKind::Coh(h, args) => {
                let (h2, perm) = op_head(h, &self.dims);
                let a = perm.iter().map(|&i| self.term(&args[i])).collect();
                Term::coh(h2, a)
            }
        };
        self.memo.insert(t.id(), r.clone());
        r
    }

    /// The opposite context, keeping the order of entries.
    pub fn ctx(&mut self, c: &Ctx) -> Ctx {
        Ctx::new(c.entries().iter().map(|(v, t)| (*v, self.ty(t))).collect())
    }

    pub fn sub(&mut self, g: &Sub) -> Sub {
        g.entries().iter().map(|(v, t)| (*v, self.term(t))).collect()
    }
}

/// Opposite of a head. Returns the new head and, for each of its
/// positions, the position of the original head it comes from.
pub fn op_head(h: &Head, dims: &[usize]) -> (Head, Vec<usize>) {
    let key = (h.id(), dims.to_vec());
    if let Some(r) = OPS.lock().unwrap().get(&key) {
        return r.clone();
    }
    let mut op = Op {
        dims: dims.to_vec(),
        memo: HashMap::new(),
    };
    let flipped = op.ctx(h.ctx());
    let ordered = pasting::reorder(flipped.entries()).expect("opposite of a pasting context");
    let perm: Vec<usize> = ordered.vars().map(|v| h.ctx().index_of(v).unwrap()).collect();
    let ty = op.ty(h.ty());
    let r = (Head::new(&ordered, &ty), perm);
    OPS.lock().unwrap().insert(key, r.clone());
    r
}

/// `op_M` on a context and a term over it.
pub fn op(dims: &BTreeSet<usize>, ctx: &Ctx, t: &Term) -> (Ctx, Term) {
    let mut o = Op::new(dims);
    (o.ctx(ctx), o.term(t))
}

/// `{1, ..., k}`.
pub fn dims_upto(k: usize) -> BTreeSet<usize> {
    (1..=k).collect()
}

/// Position of the i-th object of `Ψ^0_n`.
pub fn obj_pos(i: usize) -> usize {
    if i == 0 {
        0
    } else {
        2 * i - 1
    }
}

/// Position of the i-th arrow of `Ψ^0_n`.
pub fn arr_pos(i: usize) -> usize {
    2 * i + 2
}

/// The composite of `k + 1` arrows bracketed at `j`, over `Ψ^0_{k+1}`.
pub fn bcomp(k: usize, j: usize) -> Result<Term> {
    let ctx = PsTree::linear(0, k + 1).to_ctx();
    let f: Vec<Term> = (0..=k).map(|i| Term::var(Var::pos(arr_pos(i)))).collect();
    if j == 0 {
        let rest = comp(&ctx, 0, &f[1..])?;
        comp(&ctx, 0, &[f[0].clone(), rest])
    } else if j <= k {
        let mut cells: Vec<Term> = f[..j - 1].to_vec();
        cells.push(comp(&ctx, 0, &f[j - 1..=j])?);
        cells.extend_from_slice(&f[j + 1..]);
        comp(&ctx, 0, &cells)
    } else {
        let front = comp(&ctx, 0, &f[..k])?;
        comp(&ctx, 0, &[front, f[k].clone()])
    }
}

/// The associator `bcomp(k, j + 1) -> bcomp(k, j)`.
pub fn assoc(k: usize, j: usize) -> Result<Head> {
    let ctx = PsTree::linear(0, k + 1).to_ctx();
    let s = bcomp(k, j + 1)?;
    let t = bcomp(k, j)?;
    Ok(Head::new(&ctx, &Ty::arr(s.ty_in(&ctx)?, s, t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check_head, check_term, Fullness};
    use crate::pasting::comp_head;

    #[test]
    fn suspended_heads_stay_valid() {
        let h = comp_head(&PsTree::linear(0, 2));
        let sh = suspend_head(&h);
        assert_eq!(check_head(&sh), Ok(Fullness::Comp));
        assert_eq!(sh, comp_head(&PsTree::linear(1, 2)));
    }

    #[test]
    fn associators() {
        for j in 0..=2 {
            let a = assoc(2, j).unwrap();
            assert_eq!(check_head(&a), Ok(Fullness::Inv));
        }
        assert_eq!(assoc(2, 0).unwrap(), assoc(2, 2).unwrap());
    }

    #[test]
    fn opposite_of_composite() {
        let h = comp_head(&PsTree::linear(0, 2));
        let (o, perm) = op_head(&h, &[1]);
        assert_eq!(check_head(&o), Ok(Fullness::Comp));
        assert_eq!(perm, vec![3, 1, 4, 0, 2]);
        let (back, _) = op_head(&o, &[1]);
        assert_eq!(back, h);
        let ctx = h.ctx().clone();
        let (octx, ot) = op(&dims_upto(1), &ctx, &h.identity_term());
        assert!(check_term(&crate::kernel::check_context(octx.entries()).unwrap(), &ot).is_ok());
    }
}
