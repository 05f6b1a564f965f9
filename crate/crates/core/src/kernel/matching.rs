//! First-order matching of patterns against syntax.
//!
//! Pattern variables are those accepted by the `bindable` predicate.
//! Coherence nodes match only when the heads coincide, in which case the
//! arguments are matched pointwise. This is how arguments omitted by the
//! user, and classifying substitutions of shapes, are recovered.

use std::collections::{HashMap, HashSet};

use super::syntax::{Term, TermKind, Ty, TyKind};
use super::var::Var;

pub type Bindings = HashMap<Var, Term>;

struct Matcher<'a> {
    bindable: &'a dyn Fn(Var) -> bool,
    done: HashSet<(u32, u32)>,
}

impl Matcher<'_> {
    fn term(&mut self, p: &Term, a: &Term, b: &mut Bindings) -> bool {
        if self.done.contains(&(p.id(), a.id())) {
            return true;
        }
        let ok = match (p.kind(), a.kind()) {
            (TermKind::Var(v), _) if (self.bindable)(*v) => match b.get(v) {
                Some(t) => t == a,
                None => {
                    b.insert(*v, a.clone());
                    true
                }
            },
            (TermKind::Var(_), _) => p == a,
            (TermKind::Coh(h, pargs), TermKind::Coh(k, aargs)) => {
                h == k && pargs.iter().zip(aargs.iter()).all(|(x, y)| self.term(x, y, b))
            }
            _ => false,
        };
        if ok {
            self.done.insert((p.id(), a.id()));
        }
        ok
    }
}

/// Extends `b` so that `pattern[b] = actual`. Returns false on failure,
/// in which case `b` may hold partial bindings.
pub fn match_term(
    pattern: &Term,
    actual: &Term,
    bindable: &dyn Fn(Var) -> bool,
    b: &mut Bindings,
) -> bool {
    let mut m = Matcher {
        bindable,
        done: HashSet::new(),
    };
    m.term(pattern, actual, b)
}

/// Type version of [`match_term`].
pub fn match_ty(pattern: &Ty, actual: &Ty, bindable: &dyn Fn(Var) -> bool, b: &mut Bindings) -> bool {
    let mut m = Matcher {
        bindable,
        done: HashSet::new(),
    };
    match_ty_with(&mut m, pattern, actual, b)
}

fn match_ty_with(m: &mut Matcher<'_>, p: &Ty, a: &Ty, b: &mut Bindings) -> bool {
    match (p.kind(), a.kind()) {
        (TyKind::Obj, TyKind::Obj) => true,
        (TyKind::Arr(pb, ps, pt), TyKind::Arr(ab, as_, at)) => {
            match_ty_with(m, pb, ab, b) && m.term(ps, as_, b) && m.term(pt, at, b)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binds_and_detects_conflicts() {
        let (x, y, u) = (Var::named("mx"), Var::named("my"), Var::named("mu"));
        let pat = Ty::arr(Ty::obj(), Term::var(x), Term::var(y));
        let act = Ty::arr(Ty::obj(), Term::var(u), Term::var(u));
        let mut b = Bindings::new();
        assert!(match_ty(&pat, &act, &|v| v == x || v == y, &mut b));
        assert_eq!(b[&x], Term::var(u));
        let pat2 = Ty::arr(Ty::obj(), Term::var(x), Term::var(x));
        let act2 = Ty::arr(Ty::obj(), Term::var(u), Term::var(y));
        let mut b = Bindings::new();
        assert!(!match_ty(&pat2, &act2, &|v| v == x, &mut b));
    }
}
