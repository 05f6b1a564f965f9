//! Deterministic concrete syntax for checked terms.
//!
//! Composites of pasting shapes print as `comp{...}` with the shape written
//! as nested braces, every other coherence as `coh[tel : ty]` over
//! positional variables. Applications are fully parenthesised and list only
//! the locally maximal arguments, which is enough to infer the rest.

use std::collections::{HashMap, HashSet};
use std::fmt::Write;

use catt_core::kernel::{Ctx, Head, Term, TermKind, Ty, TyKind, Var};
use catt_core::pasting::{is_comp_head, PsTree};

use crate::lexer::KEYWORDS;

/// Printer with a cache of rendered coherence heads.
#[derive(Default)]
pub struct Printer {
    heads: HashMap<u32, String>,
}

/// Surface names for the variables of one context.
#[derive(Clone, Debug, Default)]
pub struct Names {
    map: HashMap<Var, String>,
}

impl Names {
    /// Gives every variable of `ctx` a distinct identifier, keeping the
    /// variable's own name when it is free.
    pub fn for_ctx(ctx: &Ctx) -> Names {
        let mut used: HashSet<String> = HashSet::new();
        let mut map = HashMap::new();
        for v in ctx.vars() {
            let base = v.name().to_string();
            let mut name = base.clone();
            let mut i = 1;
            while used.contains(&name) || KEYWORDS.contains(&name.as_str()) {
                name = format!("{base}_{i}");
                i += 1;
            }
            used.insert(name.clone());
            map.insert(v, name);
        }
        Names { map }
    }

    pub fn get(&self, v: Var) -> String {
        self.map.get(&v).cloned().unwrap_or_else(|| v.name().to_string())
    }
}

pub fn write_tree(t: &PsTree, out: &mut String) {
    out.push('{');
    for c in &t.children {
        write_tree(c, out);
    }
    out.push('}');
}

impl Printer {
    pub fn new() -> Printer {
        Printer::default()
    }

    pub fn term(&mut self, names: &Names, t: &Term) -> String {
        let mut s = String::new();
        self.write_term(names, t, &mut s);
        s
    }

    pub fn ty(&mut self, names: &Names, t: &Ty) -> String {
        let mut s = String::new();
        self.write_ty(names, t, &mut s);
        s
    }

    fn write_term(&mut self, names: &Names, t: &Term, out: &mut String) {
        match t.kind() {
            TermKind::Var(v) => out.push_str(&names.get(*v)),
            TermKind::Coh(h, args) => {
                out.push('(');
                let head = self.head(h);
                out.push_str(&head);
                for &p in h.locmax() {
                    out.push(' ');
                    self.write_term(names, &args[p], out);
                }
                out.push(')');
            }
        }
    }

    fn write_ty(&mut self, names: &Names, t: &Ty, out: &mut String) {
        match t.kind() {
            TyKind::Obj => out.push('*'),
            TyKind::Arr(_, s, u) => {
                self.write_term(names, s, out);
                out.push_str(" -> ");
                self.write_term(names, u, out);
            }
        }
    }

    fn head(&mut self, h: &Head) -> String {
        if let Some(s) = self.heads.get(&h.id()) {
            return s.clone();
        }
        let mut s = String::new();
        if let Some(tree) = is_comp_head(h) {
            s.push_str("comp");
            write_tree(&tree, &mut s);
        } else {
            let names = Names::for_ctx(h.ctx());
            s.push_str("coh[");
            let tel = self.telescope(&names, h.ctx());
            s.push_str(&tel);
            s.push_str(" : ");
            let ty = self.ty(&names, h.ty());
            s.push_str(&ty);
            s.push(']');
        }
        self.heads.insert(h.id(), s.clone());
        s
    }

    /// Binders of `ctx`, grouping consecutive variables of the same type.
    pub fn telescope(&mut self, names: &Names, ctx: &Ctx) -> String {
        let mut groups: Vec<(Vec<String>, String)> = Vec::new();
        for (v, t) in ctx.entries() {
            let ty = self.ty(names, t);
            match groups.last_mut() {
                Some((vs, last)) if *last == ty => vs.push(names.get(*v)),
                _ => groups.push((vec![names.get(*v)], ty)),
            }
        }
        let mut s = String::new();
        for (i, (vs, ty)) in groups.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "({} : {ty})", vs.join(" "));
        }
        s
    }

    /// `let name tel : ty = term`.
    pub fn definition(&mut self, name: &str, ctx: &Ctx, ty: &Ty, term: &Term) -> String {
        let names = Names::for_ctx(ctx);
        let tel = self.telescope(&names, ctx);
        let ty = self.ty(&names, ty);
        let body = self.term(&names, term);
        if tel.is_empty() {
            format!("let {name} : {ty} = {body}")
        } else {
            format!("let {name} {tel} : {ty} = {body}")
        }
    }
}

/// Prints `t` over `ctx` in a fresh printer.
pub fn print_term(ctx: &Ctx, t: &Term) -> String {
    Printer::new().term(&Names::for_ctx(ctx), t)
}

/// Prints `t` over `ctx` in a fresh printer.
pub fn print_ty(ctx: &Ctx, t: &Ty) -> String {
    Printer::new().ty(&Names::for_ctx(ctx), t)
}

/// Byte length of the printed term.
pub fn size(ctx: &Ctx, t: &Term) -> usize {
    print_term(ctx, t).len()
}
