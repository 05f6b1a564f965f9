//! Hash-consed types, terms, coherence heads and contexts.
//!
//! Every node is interned, so equality and hashing are by id. Coherence
//! heads are stored in positional form: the variables of a head context
//! are `x0, x1, ...` in order, which makes alpha-equivalent heads
//! identical.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, LazyLock, Mutex, OnceLock};

use super::var::{Origin, Var};
use crate::error::{Error, Result};

/// Sorted, deduplicated set of free variables.
pub type VarSet = Arc<[Var]>;

fn union<'a>(sets: impl Iterator<Item = &'a VarSet>) -> VarSet {
    let mut all: Vec<Var> = sets.flat_map(|s| s.iter().copied()).collect();
    all.sort_unstable();
    all.dedup();
    all.into()
}

macro_rules! interned {
    ($name:ident, $node:ident) => {
        #[derive(Clone)]
        pub struct $name(Arc<$node>);

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                self.0.id == other.0.id
            }
        }
        impl Eq for $name {}
        impl Hash for $name {
            fn hash<H: Hasher>(&self, state: &mut H) {
                self.0.id.hash(state)
            }
        }
        impl $name {
            pub fn id(&self) -> u32 {
                self.0.id
            }
        }
    };
}

interned!(Ty, TyNode);
interned!(Term, TermNode);
interned!(Head, HeadNode);
interned!(Ctx, CtxNode);

pub struct TyNode {
    id: u32,
    kind: TyKind,
    dim: usize,
    vars: VarSet,
}

#[derive(Clone)]
pub enum TyKind {
    Obj,
    Arr(Ty, Term, Term),
}

pub struct TermNode {
    id: u32,
    kind: TermKind,
    vars: VarSet,
    coh_ty: OnceLock<Ty>,
}

#[derive(Clone)]
pub enum TermKind {
    Var(Var),
    Coh(Head, Arc<[Term]>),
}

pub struct HeadNode {
    id: u32,
    ctx: Ctx,
    ty: Ty,
    locmax: OnceLock<Arc<[usize]>>,
}

pub struct CtxNode {
    id: u32,
    entries: Arc<[(Var, Ty)]>,
    index: HashMap<Var, usize>,
    positional: OnceLock<Ctx>,
}

#[derive(PartialEq, Eq, Hash)]
enum TyKey {
    Obj,
    Arr(u32, u32, u32),
}

#[derive(PartialEq, Eq, Hash)]
enum TermKey {
    Var(Var),
    Coh(u32, Box<[u32]>),
}

static NEXT_ID: AtomicU32 = AtomicU32::new(0);
static TYS: LazyLock<Mutex<HashMap<TyKey, Ty>>> = LazyLock::new(Default::default);
static TERMS: LazyLock<Mutex<HashMap<TermKey, Term>>> = LazyLock::new(Default::default);
static HEADS: LazyLock<Mutex<HashMap<(u32, u32), Head>>> = LazyLock::new(Default::default);
static CTXS: LazyLock<Mutex<HashMap<Box<[(Var, u32)]>, Ctx>>> =
    LazyLock::new(Default::default);

fn fresh_id() -> u32 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

impl Ty {
    pub fn obj() -> Ty {
        let mut m = TYS.lock().unwrap();
        m.entry(TyKey::Obj)
            .or_insert_with(|| {
                Ty(Arc::new(TyNode {
                    id: fresh_id(),
                    kind: TyKind::Obj,
                    dim: 0,
                    vars: Arc::from([]),
                }))
            })
            .clone()
    }

    pub fn arr(base: Ty, src: Term, tgt: Term) -> Ty {
        let key = TyKey::Arr(base.id(), src.id(), tgt.id());
        let mut m = TYS.lock().unwrap();
        if let Some(t) = m.get(&key) {
            return t.clone();
        }
        let vars = union([&base.0.vars, &src.0.vars, &tgt.0.vars].into_iter());
        let t = Ty(Arc::new(TyNode {
            id: fresh_id(),
            dim: base.dim() + 1,
            kind: TyKind::Arr(base, src, tgt),
            vars,
        }));
        m.insert(key, t.clone());
        t
    }

    pub fn kind(&self) -> &TyKind {
        &self.0.kind
    }

    /// Dimension of the cells of this type: `*` has dimension 0.
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn vars(&self) -> &VarSet {
        &self.0.vars
    }

    pub fn is_obj(&self) -> bool {
        matches!(self.0.kind, TyKind::Obj)
    }

    pub fn parts(&self) -> Option<(&Ty, &Term, &Term)> {
        match &self.0.kind {
            TyKind::Obj => None,
            TyKind::Arr(b, s, t) => Some((b, s, t)),
        }
    }

    pub fn src(&self) -> Option<&Term> {
        self.parts().map(|p| p.1)
    }

    pub fn tgt(&self) -> Option<&Term> {
        self.parts().map(|p| p.2)
    }

    pub fn base(&self) -> Option<&Ty> {
        self.parts().map(|p| p.0)
    }

    /// The iterated base of dimension `d` (which must not exceed `self.dim()`).
    pub fn truncate(&self, d: usize) -> Ty {
        let mut t = self.clone();
        while t.dim() > d {
            t = t.base().unwrap().clone();
        }
        t
    }

    pub fn subst(&self, s: &Sub) -> Ty {
        Applier::new(s).ty(self)
    }
}

impl Term {
    pub fn var(v: Var) -> Term {
        let mut m = TERMS.lock().unwrap();
        m.entry(TermKey::Var(v))
            .or_insert_with(|| {
                Term(Arc::new(TermNode {
                    id: fresh_id(),
                    kind: TermKind::Var(v),
                    vars: Arc::from([v]),
                    coh_ty: OnceLock::new(),
                }))
            })
            .clone()
    }

    /// A coherence applied to its full positional argument list.
    pub fn coh(head: Head, args: Vec<Term>) -> Term {
        debug_assert_eq!(head.ctx().len(), args.len());
        let key = TermKey::Coh(head.id(), args.iter().map(|a| a.id()).collect());
        let mut m = TERMS.lock().unwrap();
        if let Some(t) = m.get(&key) {
            return t.clone();
        }
        let vars = union(args.iter().map(|a| &a.0.vars));
        let t = Term(Arc::new(TermNode {
            id: fresh_id(),
            kind: TermKind::Coh(head, args.into()),
            vars,
            coh_ty: OnceLock::new(),
        }));
        m.insert(key, t.clone());
        t
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn as_var(&self) -> Option<Var> {
        match self.0.kind {
            TermKind::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.0.vars
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.0.vars.binary_search(&v).is_ok()
    }

    pub fn meets(&self, set: &std::collections::HashSet<Var>) -> bool {
        self.0.vars.iter().any(|v| set.contains(v))
    }

    /// Type of the term; variables are looked up in `env`.
    pub fn ty_in(&self, env: &dyn TypeEnv) -> Result<Ty> {
        match &self.0.kind {
            TermKind::Var(v) => env
                .var_ty(*v)
                .ok_or_else(|| Error::UnboundVariable(v.name().to_string())),
            TermKind::Coh(h, args) => Ok(self
                .0
                .coh_ty
                .get_or_init(|| h.ty().subst(&h.arg_sub(args)))
                .clone()),
        }
    }

    pub fn dim_in(&self, env: &dyn TypeEnv) -> Result<usize> {
        Ok(self.ty_in(env)?.dim())
    }

    pub fn subst(&self, s: &Sub) -> Term {
        Applier::new(s).term(self)
    }

    /// Number of nodes in the term viewed as a tree.
    pub fn tree_size(&self) -> usize {
        match &self.0.kind {
            TermKind::Var(_) => 1,
            TermKind::Coh(_, args) => 1 + args.iter().map(|a| a.tree_size()).sum::<usize>(),
        }
    }
}

impl Head {
    /// Interns the coherence `coh_{ctx, ty}` after renaming `ctx` positionally.
    /// No validity check happens here.
    pub fn new(ctx: &Ctx, ty: &Ty) -> Head {
        let (pctx, pty) = if ctx.is_positional() {
            (ctx.clone(), ty.clone())
        } else {
            (ctx.positional(), ty.subst(&ctx.positional_renaming()))
        };
        let key = (pctx.id(), pty.id());
        let mut m = HEADS.lock().unwrap();
        m.entry(key)
            .or_insert_with(|| {
                Head(Arc::new(HeadNode {
                    id: fresh_id(),
                    ctx: pctx,
                    ty: pty,
                    locmax: OnceLock::new(),
                }))
            })
            .clone()
    }

    pub fn ctx(&self) -> &Ctx {
        &self.0.ctx
    }

    pub fn ty(&self) -> &Ty {
        &self.0.ty
    }

    pub fn arity(&self) -> usize {
        self.0.ctx.len()
    }

    pub fn arg_sub(&self, args: &[Term]) -> Sub {
        let mut s = Sub::new();
        for (i, a) in args.iter().enumerate() {
            s.push(Var::pos(i), a.clone());
        }
        s
    }

    /// The head applied to the identity: a term over its own context.
    pub fn identity_term(&self) -> Term {
        Term::coh(self.clone(), (0..self.arity()).map(|i| Term::var(Var::pos(i))).collect())
    }

    /// Positions of the locally maximal variables of the head context.
    pub fn locmax(&self) -> &[usize] {
        self.0.locmax.get_or_init(|| {
            let ctx = &self.0.ctx;
            ctx.locmax_vars()
                .into_iter()
                .map(|v| ctx.index_of(v).unwrap())
                .collect()
        })
    }
}

impl Ctx {
    /// Interns a context without checking it. Later duplicates shadow earlier ones.
    pub fn new(entries: Vec<(Var, Ty)>) -> Ctx {
        let key: Box<[(Var, u32)]> = entries.iter().map(|(v, t)| (*v, t.id())).collect();
        let mut m = CTXS.lock().unwrap();
        if let Some(c) = m.get(&key) {
            return c.clone();
        }
        let index = entries.iter().enumerate().map(|(i, (v, _))| (*v, i)).collect();
        let c = Ctx(Arc::new(CtxNode {
            id: fresh_id(),
            entries: entries.into(),
            index,
            positional: OnceLock::new(),
        }));
        m.insert(key, c.clone());
        c
    }

    pub fn empty() -> Ctx {
        Ctx::new(Vec::new())
    }

    pub fn entries(&self) -> &[(Var, Ty)] {
        &self.0.entries
    }

    pub fn len(&self) -> usize {
        self.0.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.entries.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.entries.iter().map(|(v, _)| *v)
    }

    pub fn get(&self, v: Var) -> Option<&Ty> {
        self.0.index.get(&v).map(|&i| &self.0.entries[i].1)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0.index.contains_key(&v)
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.0.index.get(&v).copied()
    }

    /// Dimension of the context: the largest dimension of a variable.
    pub fn dim(&self) -> usize {
        self.entries().iter().map(|(_, t)| t.dim()).max().unwrap_or(0)
    }

    /// Variables that occur in no type of the context.
    pub fn locmax_vars(&self) -> Vec<Var> {
        let mut used = std::collections::HashSet::new();
        for (_, t) in self.entries() {
            used.extend(t.vars().iter().copied());
        }
        self.vars().filter(|v| !used.contains(v)).collect()
    }

    fn is_positional(&self) -> bool {
        self.vars()
            .enumerate()
            .all(|(i, v)| v.origin() == Origin::Pos(i as u32))
    }

    /// Renaming sending the i-th variable to `x_i`.
    pub fn positional_renaming(&self) -> Sub {
        let mut s = Sub::new();
        for (i, v) in self.vars().enumerate() {
            s.push(v, Term::var(Var::pos(i)));
        }
        s
    }

    /// The context with its variables renamed positionally.
    pub fn positional(&self) -> Ctx {
        self.0
            .positional
            .get_or_init(|| {
                if self.is_positional() {
                    return self.clone();
                }
                let r = self.positional_renaming();
                Ctx::new(
                    self.entries()
                        .iter()
                        .enumerate()
                        .map(|(i, (_, t))| (Var::pos(i), t.subst(&r)))
                        .collect(),
                )
            })
            .clone()
    }

    /// The identity substitution on this context.
    pub fn identity(&self) -> Sub {
        let mut s = Sub::new();
        for v in self.vars() {
            s.push(v, Term::var(v));
        }
        s
    }

    pub fn identity_args(&self) -> Vec<Term> {
        self.vars().map(Term::var).collect()
    }
}

/// Something that knows the types of variables.
pub trait TypeEnv {
    fn var_ty(&self, v: Var) -> Option<Ty>;
}

impl TypeEnv for Ctx {
    fn var_ty(&self, v: Var) -> Option<Ty> {
        self.get(v).cloned()
    }
}

/// A context under construction.
#[derive(Clone, Default)]
pub struct CtxBuilder {
    entries: Vec<(Var, Ty)>,
    index: HashMap<Var, usize>,
}

impl CtxBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: Var, t: Ty) {
        self.index.insert(v, self.entries.len());
        self.entries.push((v, t));
    }

    pub fn contains(&self, v: Var) -> bool {
        self.index.contains_key(&v)
    }

    pub fn build(self) -> Ctx {
        Ctx::new(self.entries)
    }

    pub fn entries(&self) -> &[(Var, Ty)] {
        &self.entries
    }
}

impl TypeEnv for CtxBuilder {
    fn var_ty(&self, v: Var) -> Option<Ty> {
        self.index.get(&v).map(|&i| self.entries[i].1.clone())
    }
}

/// A substitution: an ordered list of variable assignments.
#[derive(Clone, Default)]
pub struct Sub {
    entries: Vec<(Var, Term)>,
    index: HashMap<Var, usize>,
}

impl Sub {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or overwrites an assignment.
    pub fn push(&mut self, v: Var, t: Term) {
        if let Some(&i) = self.index.get(&v) {
            self.entries[i].1 = t;
        } else {
            self.index.insert(v, self.entries.len());
            self.entries.push((v, t));
        }
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.index.get(&v).map(|&i| &self.entries[i].1)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.index.contains_key(&v)
    }

    pub fn entries(&self) -> &[(Var, Term)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `self ∘ other`: first `other`, then `self` applied to its images.
    pub fn compose(&self, other: &Sub) -> Sub {
        let mut app = Applier::new(self);
        let mut out = Sub::new();
        for (v, t) in &other.entries {
            out.push(*v, app.term(t));
        }
        out
    }

    /// Images of the variables of `ctx`, in order. Missing variables are an error.
    pub fn args_for(&self, ctx: &Ctx) -> Result<Vec<Term>> {
        ctx.vars()
            .map(|v| {
                self.get(v)
                    .cloned()
                    .ok_or_else(|| Error::UnboundVariable(v.name().to_string()))
            })
            .collect()
    }
}

impl FromIterator<(Var, Term)> for Sub {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        let mut s = Sub::new();
        for (v, t) in iter {
            s.push(v, t);
        }
        s
    }
}

/// Applies a substitution with memoisation over shared subterms.
pub struct Applier<'a> {
    sub: &'a Sub,
    memo: HashMap<u32, Term>,
    ty_memo: HashMap<u32, Ty>,
}

impl<'a> Applier<'a> {
    pub fn new(sub: &'a Sub) -> Self {
        Applier {
            sub,
            memo: HashMap::new(),
            ty_memo: HashMap::new(),
        }
    }

    fn untouched(&self, vars: &VarSet) -> bool {
        vars.iter().all(|v| !self.sub.contains(*v))
    }

    pub fn term(&mut self, t: &Term) -> Term {
        if self.untouched(t.vars()) {
            return t.clone();
        }
        if let Some(r) = self.memo.get(&t.id()) {
            return r.clone();
        }
        let r = match t.kind() {
            TermKind::Var(v) => self.sub.get(*v).cloned().unwrap_or_else(|| t.clone()),
            TermKind::Coh(h, args) => {
                let args = args.iter().map(|a| self.term(a)).collect();
                Term::coh(h.clone(), args)
            }
        };
        self.memo.insert(t.id(), r.clone());
        r
    }

    pub fn ty(&mut self, t: &Ty) -> Ty {
        if self.untouched(t.vars()) {
            return t.clone();
        }
        if let Some(r) = self.ty_memo.get(&t.id()) {
            return r.clone();
        }
        let r = match t.kind() {
            TyKind::Obj => t.clone(),
            TyKind::Arr(b, s, u) => {
                let b = self.ty(b);
                let s = self.term(s);
                let u = self.term(u);
                Ty::arr(b, s, u)
            }
        };
        self.ty_memo.insert(t.id(), r.clone());
        r
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            TermKind::Var(v) => write!(f, "{v}"),
            TermKind::Coh(h, args) => {
                write!(f, "coh#{}(", h.id())?;
                for (i, p) in h.locmax().iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", args[*p])?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            TyKind::Obj => f.write_str("*"),
            TyKind::Arr(_, s, t) => write!(f, "{s} -> {t}"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coh#{}{{{:?} : {}}}", self.id(), self.ctx(), self.ty())
    }
}

impl fmt::Debug for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, t)) in self.entries().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({v} : {t})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sub {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, (v, t)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} := {t}")?;
        }
        f.write_str(">")
    }
}
