//! Cylinder and cone builtins and their size tables.

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::{Arc, LazyLock, Mutex};

use catt_core::geometry::{universal_stack_term, universal_term, Kind};
use catt_core::kernel::{check_term, Ctx, Term, Ty};
use catt_core::{Error, Result};

use crate::ast::Builtin;
use crate::printer;

/// A generated definition: the universal context, its term and its type.
#[derive(Clone, Debug)]
pub struct Generated {
    pub ctx: Ctx,
    pub term: Term,
    pub ty: Ty,
}

static CACHE: LazyLock<Mutex<HashMap<Builtin, Arc<Generated>>>> = LazyLock::new(Default::default);

/// Runs a builtin and re-checks its result with the kernel.
pub fn run_builtin(b: Builtin) -> Result<Arc<Generated>> {
    if let Some(g) = CACHE.lock().unwrap().get(&b) {
        return Ok(g.clone());
    }
    let (ctx, term) = match b {
        Builtin::CylComp { m, k, n } => universal_term(Kind::Cylinder, m, n, k)?,
        Builtin::ConeComp { m, k, n } => universal_term(Kind::Cone, m, n, k)?,
        Builtin::CylStack { n } => universal_stack_term(n)?,
    };
    let ty = check_term(&ctx, &term)?;
    let g = Arc::new(Generated { ctx, term, ty });
    CACHE.lock().unwrap().insert(b, g.clone());
    Ok(g)
}

/// The families reported by `--sizes`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeKind {
    /// `cylcomp(n,1,n)`
    Cyl,
    /// `cylstack(n)`
    Stack,
    /// `conecomp(n,1,n)`
    Cone,
}

impl FromStr for SizeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cyl" | "cylcomp" => Ok(SizeKind::Cyl),
            "stack" | "cylstack" => Ok(SizeKind::Stack),
            "cone" | "conecomp" => Ok(SizeKind::Cone),
            _ => Err(format!("unknown size family `{s}`; expected cyl, stack or cone")),
        }
    }
}

impl SizeKind {
    pub fn builtin(self, n: usize) -> Builtin {
        match self {
            SizeKind::Cyl => Builtin::CylComp { m: n, k: 1, n },
            SizeKind::Stack => Builtin::CylStack { n },
            SizeKind::Cone => Builtin::ConeComp { m: n, k: 1, n },
        }
    }
}

/// Parses `a..b` (inclusive) or a single number.
pub fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let bad = || format!("invalid range `{s}`; expected `a..b` or a number");
    match s.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
        None => {
            let a: usize = s.trim().parse().map_err(|_| bad())?;
            Ok((a, a))
        }
    }
}

/// Printed size in bytes of each member of the family in the range.
pub fn sizes(kind: SizeKind, lo: usize, hi: usize) -> Result<Vec<(usize, usize)>> {
    (lo..=hi)
        .map(|n| {
            let g = run_builtin(kind.builtin(n))?;
            Ok((n, printer::size(&g.ctx, &g.term)))
        })
        .collect()
}

/// Rejects builtins outside the supported index ranges before running them.
pub fn validate(b: Builtin) -> Result<()> {
    let bad = |why: &str| Err(Error::UnsupportedIndices(why.to_string()));
    match b {
        Builtin::CylComp { m, k, n } | Builtin::ConeComp { m, k, n } => {
            if k == 0 {
                return bad("composition index must be at least 1");
            }
            if m < k + 1 || n < k + 1 {
                return bad("both dimensions must exceed the composition index");
            }
            Ok(())
        }
        Builtin::CylStack { n } if n == 0 => bad("stacking needs dimension at least 1"),
        Builtin::CylStack { .. } => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..4"), Ok((2, 4)));
        assert_eq!(parse_range("2..=4"), Ok((2, 4)));
        assert_eq!(parse_range("3"), Ok((3, 3)));
        assert!(parse_range("4..2").is_err());
    }

    #[test]
    fn builtins_recheck() {
        let g = run_builtin(Builtin::CylComp { m: 2, k: 1, n: 2 }).unwrap();
        assert_eq!(check_term(&g.ctx, &g.term).unwrap(), g.ty);
        assert!(validate(Builtin::CylComp { m: 2, k: 0, n: 2 }).is_err());
        assert!(validate(Builtin::ConeComp { m: 1, k: 1, n: 2 }).is_err());
    }
}
