//! Interned variables.
//!
//! A variable is a small integer into a global table that records how it
//! was made. Derived variables are keyed by their parent and tag, so
//! building the same lifted context twice yields the same variables.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Tag {
    Minus,
    Plus,
    Bar,
    Red,
    Copy(u32),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Origin {
    Named(Arc<str>),
    Derived(Var, Tag),
    /// Position in a coherence head context.
    Pos(u32),
    /// Suspension pole; `true` for the source pole.
    Pole(u32, bool),
}

struct Table {
    origins: Vec<Origin>,
    names: Vec<Arc<str>>,
    index: HashMap<Origin, Var>,
}

static TABLE: LazyLock<RwLock<Table>> = LazyLock::new(|| {
    RwLock::new(Table {
        origins: Vec::new(),
        names: Vec::new(),
        index: HashMap::new(),
    })
});

fn intern(origin: Origin) -> Var {
    if let Some(v) = TABLE.read().unwrap().index.get(&origin) {
        return *v;
    }
    let mut t = TABLE.write().unwrap();
    if let Some(v) = t.index.get(&origin) {
        return *v;
    }
    let name: Arc<str> = match &origin {
        Origin::Named(s) => s.clone(),
        Origin::Derived(p, tag) => {
            let base = &t.names[p.0 as usize];
            let suffix = match tag {
                Tag::Minus => "_m".to_string(),
                Tag::Plus => "_p".to_string(),
                Tag::Bar => "_b".to_string(),
                Tag::Red => "_r".to_string(),
                Tag::Copy(i) => format!("_c{i}"),
            };
            format!("{base}{suffix}").into()
        }
        Origin::Pos(i) => format!("x{i}").into(),
        Origin::Pole(0, true) => "N".into(),
        Origin::Pole(0, false) => "S".into(),
        Origin::Pole(i, true) => format!("N{i}").into(),
        Origin::Pole(i, false) => format!("S{i}").into(),
    };
    let v = Var(t.origins.len() as u32);
    t.origins.push(origin.clone());
    t.names.push(name);
    t.index.insert(origin, v);
    v
}

impl Var {
    pub fn named(name: &str) -> Var {
        intern(Origin::Named(name.into()))
    }

    pub fn pos(i: usize) -> Var {
        intern(Origin::Pos(i as u32))
    }

    /// A pair of suspension poles, distinct for each level.
    pub fn poles(level: usize) -> (Var, Var) {
        (
            intern(Origin::Pole(level as u32, true)),
            intern(Origin::Pole(level as u32, false)),
        )
    }

    pub fn derived(self, tag: Tag) -> Var {
        intern(Origin::Derived(self, tag))
    }

    pub fn minus(self) -> Var {
        self.derived(Tag::Minus)
    }

    pub fn plus(self) -> Var {
        self.derived(Tag::Plus)
    }

    pub fn bar(self) -> Var {
        self.derived(Tag::Bar)
    }

    pub fn origin(self) -> Origin {
        TABLE.read().unwrap().origins[self.0 as usize].clone()
    }

    pub fn name(self) -> Arc<str> {
        TABLE.read().unwrap().names[self.0 as usize].clone()
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.name(), self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let x = Var::named("x");
        assert_eq!(x, Var::named("x"));
        assert_eq!(x.minus(), x.minus());
        assert_ne!(x.minus(), x.plus());
        assert_eq!(&*x.bar().name(), "x_b");
        assert_eq!(x.bar().origin(), Origin::Derived(x, Tag::Bar));
    }
}
