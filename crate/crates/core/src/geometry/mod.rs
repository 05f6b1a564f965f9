//! Cylinders and cones: their contexts, types, faces, and the composite
//! and stacking operations built by iterated naturality.
//!
//! Cylinder contexts start from `C^1 = (top : *, bot : *, fill : top -> bot)`
//! and grow by `C^{n+1} = op_{n+1}(C^n ↑ {top, bot, fill})`. Cone contexts
//! start from `D^1 = (apex : *, base : *, fill : base -> apex)` and grow by
//! `D^{n+1} = D^n ↑ {base, fill}`. An instance of a shape in a context is a
//! term together with its classifying substitution, recovered by matching
//! the term's type against the filler type of the shape.

mod universal;

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, LazyLock, Mutex};

use crate::error::{Error, Result};
use crate::kernel::{check_term, check_type, match_ty, Bindings, Ctx, Sub, Term, Ty, Var};
use crate::metaops::Op;
use crate::naturality::ctx_up;
use crate::pasting::comp;

pub use universal::{
    cone_comp, cyl_comp, cyl_stack, generic_pair, generic_stack_pair, universal_stack_term, universal_term,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Cylinder,
    Cone,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::Cylinder => "cylinder",
            Kind::Cone => "cone",
        })
    }
}

/// The context `C^n` or `D^n` with its distinguished variables.
#[derive(Debug)]
pub struct Shape {
    pub kind: Kind,
    pub n: usize,
    /// The full context, ending with the filler.
    pub ctx: Ctx,
    /// The context without its filler.
    pub boundary: Ctx,
    pub filler: Var,
    /// The top of a cylinder, or the base of a cone.
    pub top: Var,
    /// The bottom of a cylinder.
    pub bot: Option<Var>,
    /// The apex of a cone.
    pub apex: Option<Var>,
}

pub type CylinderShape = Shape;
pub type ConeShape = Shape;

impl Shape {
    pub fn filler_ty(&self) -> &Ty {
        self.ctx.get(self.filler).expect("filler in its shape")
    }

    /// The variables lifted when passing to the next dimension.
    pub fn lifted(&self) -> BTreeSet<Var> {
        let mut x: BTreeSet<Var> = [self.top, self.filler].into_iter().collect();
        x.extend(self.bot);
        x
    }

    /// The variables of the previous shape that the back and front faces
    /// see through `x ↦ x^-` and `x ↦ x^+`.
    fn face_lifted(&self) -> BTreeSet<Var> {
        match (self.kind, self.n) {
            (Kind::Cone, 1) => BTreeSet::new(),
            _ => shape(self.kind, self.n - 1).lifted(),
        }
    }
}

static SHAPES: LazyLock<Mutex<HashMap<(Kind, usize), Arc<Shape>>>> =
    LazyLock::new(Default::default);

fn build_shape(kind: Kind, n: usize) -> Result<Shape> {
    let obj = Ty::obj();
    let t = |v: Var| Term::var(v);
    match (kind, n) {
        (Kind::Cylinder, 0) => Err(Error::UnsupportedIndices("cylinders start in dimension 1".into())),
        (Kind::Cylinder, 1) => {
            let (top, bot, fill) = (Var::named("top"), Var::named("bot"), Var::named("fill"));
            let ctx = Ctx::new(vec![
                (top, obj.clone()),
                (bot, obj.clone()),
                (fill, Ty::arr(obj, t(top), t(bot))),
            ]);
            Ok(Shape {
                kind,
                n,
                boundary: Ctx::new(ctx.entries()[..2].to_vec()),
                ctx,
                filler: fill,
                top,
                bot: Some(bot),
                apex: None,
            })
        }
        (Kind::Cone, 0) => {
            let apex = Var::named("apex");
            Ok(Shape {
                kind,
                n,
                ctx: Ctx::new(vec![(apex, obj)]),
                boundary: Ctx::empty(),
                filler: apex,
                top: apex,
                bot: None,
                apex: Some(apex),
            })
        }
        (Kind::Cone, 1) => {
            let (apex, base, fill) = (Var::named("apex"), Var::named("base"), Var::named("cfill"));
            let ctx = Ctx::new(vec![
                (apex, obj.clone()),
                (base, obj.clone()),
                (fill, Ty::arr(obj, t(base), t(apex))),
            ]);
            Ok(Shape {
                kind,
                n,
                boundary: Ctx::new(ctx.entries()[..2].to_vec()),
                ctx,
                filler: fill,
                top: base,
                bot: None,
                apex: Some(apex),
            })
        }
        _ => {
            let prev = shape(kind, n - 1);
            let up = ctx_up(&prev.ctx, &prev.lifted())?.ctx_up;
            let ctx = match kind {
                Kind::Cylinder => Op::new(&BTreeSet::from([n])).ctx(&up),
                Kind::Cone => up,
            };
            let len = ctx.len();
            Ok(Shape {
                kind,
                n,
                boundary: Ctx::new(ctx.entries()[..len - 1].to_vec()),
                ctx,
                filler: prev.filler.bar(),
                top: prev.top.bar(),
                bot: prev.bot.map(Var::bar),
                apex: prev.apex,
            })
        }
    }
}

/// `C^n` (cylinders) or `D^n` (cones, with `D^0` the apex alone).
/// Panics on `C^0`, which does not exist.
pub fn shape(kind: Kind, n: usize) -> Arc<Shape> {
    try_shape(kind, n).expect("shape construction")
}

pub fn try_shape(kind: Kind, n: usize) -> Result<Arc<Shape>> {
    if let Some(s) = SHAPES.lock().unwrap().get(&(kind, n)) {
        return Ok(s.clone());
    }
    let s = Arc::new(build_shape(kind, n)?);
    SHAPES.lock().unwrap().insert((kind, n), s.clone());
    Ok(s)
}

pub fn cyl_shape(n: usize) -> Result<Arc<CylinderShape>> {
    try_shape(Kind::Cylinder, n)
}

pub fn cone_shape(n: usize) -> Result<Arc<ConeShape>> {
    try_shape(Kind::Cone, n)
}

/// A term of a shape's filler type, with its classifying substitution
/// `Γ ⊢ sub : C^n` (or `D^n`).
#[derive(Clone, Debug)]
pub struct Instance {
    pub kind: Kind,
    pub n: usize,
    pub ambient: Ctx,
    pub filler: Term,
    pub sub: Sub,
}

pub type CylinderInstance = Instance;
pub type ConeInstance = Instance;

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.n == other.n && self.filler == other.filler
    }
}

/// Recognises `t` as an `n`-dimensional instance of the shape.
pub fn classify(kind: Kind, n: usize, ambient: &Ctx, t: &Term) -> Result<Instance> {
    let ty = check_term(ambient, t)?;
    let sh = try_shape(kind, n)?;
    let mut b = Bindings::new();
    let bindable = |v: Var| sh.boundary.contains(v);
    if !match_ty(sh.filler_ty(), &ty, &bindable, &mut b) {
        return Err(Error::ShapeMismatch(format!("`{t}` is not a {n}-dimensional {kind}")));
    }
    let mut sub = Sub::new();
    for v in sh.boundary.vars() {
        let img = b
            .get(&v)
            .ok_or_else(|| Error::ShapeMismatch(format!("`{v}` is not determined by the type of `{t}`")))?;
        sub.push(v, img.clone());
    }
    sub.push(sh.filler, t.clone());
    Ok(Instance {
        kind,
        n,
        ambient: ambient.clone(),
        filler: t.clone(),
        sub,
    })
}

impl Instance {
    pub fn shape(&self) -> Arc<Shape> {
        shape(self.kind, self.n)
    }

    fn at(&self, v: Var) -> Term {
        self.sub.get(v).cloned().expect("classifying substitution is total")
    }

    /// The instance given by the filler of the shape itself.
    pub fn generic(kind: Kind, n: usize) -> Result<Instance> {
        let sh = try_shape(kind, n)?;
        Ok(Instance {
            kind,
            n,
            ambient: sh.ctx.clone(),
            filler: Term::var(sh.filler),
            sub: sh.ctx.identity(),
        })
    }

    /// Top of a cylinder; base of a cone.
    pub fn top(&self) -> Term {
        self.at(self.shape().top)
    }

    pub fn base(&self) -> Term {
        self.top()
    }

    /// Bottom of a cylinder.
    pub fn bot(&self) -> Option<Term> {
        self.shape().bot.map(|v| self.at(v))
    }

    pub fn apex(&self) -> Option<Term> {
        self.shape().apex.map(|v| self.at(v))
    }

    fn face(&self, plus: bool) -> Option<Instance> {
        let lowest = match self.kind {
            Kind::Cylinder => 1,
            Kind::Cone => 0,
        };
        if self.n <= lowest {
            return None;
        }
        let sh = self.shape();
        let lifted = sh.face_lifted();
        let prev = shape(self.kind, self.n - 1);
        let sub: Sub = prev
            .ctx
            .vars()
            .map(|v| {
                let w = match (lifted.contains(&v), plus) {
                    (false, _) => v,
                    (true, false) => v.minus(),
                    (true, true) => v.plus(),
                };
                (v, self.at(w))
            })
            .collect();
        Some(Instance {
            kind: self.kind,
            n: self.n - 1,
            ambient: self.ambient.clone(),
            filler: sub.get(prev.filler).unwrap().clone(),
            sub,
        })
    }

    pub fn back(&self) -> Option<Instance> {
        self.face(false)
    }

    pub fn front(&self) -> Option<Instance> {
        self.face(true)
    }

    /// The back face iterated down to dimension `k`; the instance itself
    /// when `k ≥ n`.
    pub fn back_k(&self, k: usize) -> Instance {
        let mut i = self.clone();
        while i.n > k {
            match i.back() {
                Some(b) => i = b,
                None => break,
            }
        }
        i
    }

    pub fn front_k(&self, k: usize) -> Instance {
        let mut i = self.clone();
        while i.n > k {
            match i.front() {
                Some(b) => i = b,
                None => break,
            }
        }
        i
    }

    /// The instance transported along `Δ ⊢ γ : Γ`.
    pub fn subst(&self, delta: &Ctx, g: &Sub) -> Result<Instance> {
        classify(self.kind, self.n, delta, &self.filler.subst(g))
    }
}

fn mismatch(what: &str) -> Error {
    Error::ShapeMismatch(what.to_string())
}

/// The type of a shape instantiated by its faces: `Cyl^{n+1}(a, b, c, d)`
/// or `Cone^{n+1}(a, b, c)` (with `bot` absent), obtained by substitution
/// into the filler type of the shape.
fn shape_type(
    kind: Kind,
    ambient: &Ctx,
    top: &Term,
    bot: Option<&Term>,
    back: &Instance,
    front: &Instance,
) -> Result<Ty> {
    if back.kind != kind || front.kind != kind || back.n != front.n {
        return Err(mismatch("the back and front faces must be instances of the same shape"));
    }
    let sh = try_shape(kind, back.n + 1)?;
    let lifted = sh.face_lifted();
    let mut g = Sub::new();
    for v in sh.boundary.vars() {
        let img = if v == sh.top {
            top.clone()
        } else if Some(v) == sh.bot {
            bot.ok_or_else(|| mismatch("a cylinder needs a bottom"))?.clone()
        } else {
            match v.origin() {
                crate::kernel::Origin::Derived(w, crate::kernel::Tag::Minus) if lifted.contains(&w) => {
                    back.at(w)
                }
                crate::kernel::Origin::Derived(w, crate::kernel::Tag::Plus) if lifted.contains(&w) => {
                    front.at(w)
                }
                _ => {
                    let (x, y) = (back.at(v), front.at(v));
                    if x != y {
                        return Err(Error::ShapeMismatch(format!(
                            "back and front disagree on `{v}`: `{x}` and `{y}`"
                        )));
                    }
                    x
                }
            }
        };
        g.push(v, img);
    }
    let ty = sh.filler_ty().subst(&g);
    check_type(ambient, &ty).map_err(|e| Error::ShapeMismatch(e.to_string()))?;
    Ok(ty)
}

/// `Cyl^1(a, b) = a -> b`.
pub fn cyl_type1(ambient: &Ctx, a: &Term, b: &Term) -> Result<Ty> {
    let ty = Ty::arr(Ty::obj(), a.clone(), b.clone());
    check_type(ambient, &ty).map_err(|e| Error::ShapeMismatch(e.to_string()))?;
    Ok(ty)
}

/// `Cyl^{n+1}(a, b, c, d)` for `n`-cylinders `c` and `d`.
pub fn cyl_type(ambient: &Ctx, a: &Term, b: &Term, c: &Instance, d: &Instance) -> Result<Ty> {
    shape_type(Kind::Cylinder, ambient, a, Some(b), c, d)
}

/// `Cone^1(a, b) = a -> b`, with `a` the base and `b` the apex.
pub fn cone_type1(ambient: &Ctx, a: &Term, b: &Term) -> Result<Ty> {
    cyl_type1(ambient, a, b)
}

/// `Cone^{n+1}(a, b, c)` for `n`-cones `b` and `c`.
pub fn cone_type(ambient: &Ctx, a: &Term, b: &Instance, c: &Instance) -> Result<Ty> {
    shape_type(Kind::Cone, ambient, a, None, b, c)
}

fn filler_k(i: &Instance, k: usize, plus: bool) -> Term {
    if plus {
        i.front_k(k).filler
    } else {
        i.back_k(k).filler
    }
}

/// The closed formula for `Cyl^{n+1}(a, b, c, d)`:
/// `(..((a *_0 front^1 d) *_1 front^2 d) .. ) *_{n-1} d`
/// to `c *_{n-1} (back^{n-1} c *_{n-2} ( .. (back^1 c *_0 b)))`.
pub fn cyl_type_formula(ambient: &Ctx, a: &Term, b: &Term, c: &Instance, d: &Instance) -> Result<Ty> {
    let n = c.n;
    let mut src = a.clone();
    for i in 1..n {
        src = comp(ambient, i - 1, &[src, filler_k(d, i, true)])?;
    }
    let src = comp(ambient, n - 1, &[src, d.filler.clone()])?;
    let mut tgt = b.clone();
    for i in 1..n {
        tgt = comp(ambient, i - 1, &[filler_k(c, i, false), tgt])?;
    }
    let tgt = comp(ambient, n - 1, &[c.filler.clone(), tgt])?;
    Ok(Ty::arr(src.ty_in(ambient)?, src, tgt))
}

/// The closed formula for `Cone^{n+1}(a, b, c)`. With
/// `W_0 = a *_0 front^1 c`, `W_i = back^{i+1} b *_i W_{i-1}` for odd `i` and
/// `W_i = W_{i-1} *_i front^{i+1} c` for even `i`, the type is
/// `b -> W *_{n-1} c` for odd `n` and `b *_{n-1} W -> c` for even `n`.
pub fn cone_type_formula(ambient: &Ctx, a: &Term, b: &Instance, c: &Instance) -> Result<Ty> {
    let n = b.n;
    let mut w = a.clone();
    for i in 0..n - 1 {
        w = if i % 2 == 0 {
            comp(ambient, i, &[w, filler_k(c, i + 1, true)])?
        } else {
            comp(ambient, i, &[filler_k(b, i + 1, false), w])?
        };
    }
    let (src, tgt) = if n % 2 == 1 {
        (b.filler.clone(), comp(ambient, n - 1, &[w, c.filler.clone()])?)
    } else {
        (comp(ambient, n - 1, &[b.filler.clone(), w])?, c.filler.clone())
    };
    Ok(Ty::arr(src.ty_in(ambient)?, src, tgt))
}
