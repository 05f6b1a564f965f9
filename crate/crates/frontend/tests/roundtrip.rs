//! Printing then re-reading a definition yields an alpha-equivalent one.

use catt::{check_source, run_builtin, Builtin, Printer};
use catt_core::kernel::{alpha_equiv_term, Ctx, Term, Ty};

fn reread(name: &str, ctx: &Ctx, ty: &Ty, term: &Term) {
    let printed = Printer::new().definition(name, ctx, ty, term);
    let el = check_source(&printed).unwrap_or_else(|e| panic!("{name} does not re-check: {e}"));
    let d = el.get(name).unwrap();
    assert!(alpha_equiv_term(ctx, term, &d.ctx, &d.term), "{name} changed");
    let again = Printer::new().definition(name, &d.ctx, &d.ty, &d.term);
    assert_eq!(printed, again, "{name} prints differently");
}

#[test]
fn example_definitions_round_trip() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples");
    for i in 1..=5 {
        let src = std::fs::read_to_string(format!("{dir}/example_{i}.catt")).unwrap();
        let el = check_source(&src).unwrap();
        for d in el.definitions() {
            reread(&d.name, &d.ctx, &d.ty, &d.term);
        }
        for c in el.checks() {
            reread("checked", &c.ctx, &c.ty, &c.term);
        }
    }
}

#[test]
fn generated_terms_round_trip() {
    let all = [
        Builtin::CylComp { m: 2, k: 1, n: 2 },
        Builtin::CylComp { m: 3, k: 1, n: 2 },
        Builtin::CylComp { m: 3, k: 2, n: 3 },
        Builtin::CylStack { n: 3 },
        Builtin::ConeComp { m: 3, k: 1, n: 3 },
        Builtin::ConeComp { m: 2, k: 1, n: 3 },
    ];
    for b in all {
        let g = run_builtin(b).unwrap();
        reread("generated", &g.ctx, &g.ty, &g.term);
    }
}

#[test]
fn printing_is_deterministic() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/example_3.catt")).unwrap();
    let print = || {
        let el = check_source(&src).unwrap();
        let mut p = Printer::new();
        el.definitions()
            .map(|d| p.definition(&d.name, &d.ctx, &d.ty, &d.term))
            .collect::<Vec<_>>()
    };
    assert_eq!(print(), print());
}
