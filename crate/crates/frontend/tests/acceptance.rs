//! Acceptance checks. Each criterion prints one `PASS` or `FAIL` line and
//! the target exits with a failure status when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use catt::{check_source, run_builtin, sizes, Builtin, Elaborator, FrontendError, SizeKind};
use catt_core::geometry::{
    cone_comp, cone_type_formula, cyl_comp, cyl_stack, cyl_type_formula, generic_pair, generic_stack_pair, Instance,
    Kind,
};
use catt_core::kernel::{check_head, check_term, Ctx, Fullness, Term, TermKind, Ty, Var};
use catt_core::naturality::{depth, term_up, type_up_term, Focus};
use catt_core::pasting::{apply_head, auto_coh, comp, is_comp_head};
use catt_core::properties::{self, labelled, term_pool, trees, up_closed_subsets};
use catt_core::Error;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn ensure_eq<T: PartialEq + std::fmt::Display>(what: &str, got: &T, want: &T) -> Outcome {
    ensure(got == want, || format!("{what}: got `{got}`, expected `{want}`"))
}

fn e2s(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn t(name: &str) -> Term {
    Term::var(Var::named(name))
}

fn c(ctx: &Ctx, k: usize, cells: &[Term]) -> Result<Term, String> {
    comp(ctx, k, cells).map_err(e2s)
}

fn example(n: usize) -> Result<(Elaborator, Duration), String> {
    let path = format!("{}/examples/example_{n}.catt", env!("CARGO_MANIFEST_DIR"));
    let src = std::fs::read_to_string(&path).map_err(e2s)?;
    let start = Instant::now();
    let el = check_source(&src).map_err(|e| e.render(&path, &src))?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(1), || format!("example {n} took {took:?}"))?;
    Ok((el, took))
}

fn head_of(t: &Term) -> Result<(&catt_core::Head, &[Term]), String> {
    match t.kind() {
        TermKind::Coh(h, args) => Ok((h, args)),
        _ => Err(format!("`{t}` is not a coherence")),
    }
}

fn example_1() -> Outcome {
    let (el, _) = example(1)?;
    let d = el.get("comp_func").ok_or("no definition comp_func")?;
    let g = &d.ctx;
    let src = c(g, 0, &[t("f_m"), t("g")])?;
    let tgt = c(g, 0, &[t("f_p"), t("g")])?;
    let want = Ty::arr(src.ty_in(g).map_err(e2s)?, src, tgt);
    ensure_eq("type", &d.ty, &want)
}

fn example_2() -> Outcome {
    let (el, _) = example(2)?;
    let d = el.get("comp_nat").ok_or("no definition comp_nat")?;
    let g = &d.ctx;
    let fg_m = c(g, 0, &[t("f_m"), t("g_m")])?;
    let fg_p = c(g, 0, &[t("f_p"), t("g_p")])?;
    let src = c(g, 0, &[fg_m.clone(), t("z_b")])?;
    let tgt = c(g, 0, &[t("x_b"), fg_p.clone()])?;
    let want = Ty::arr(src.ty_in(g).map_err(e2s)?, src.clone(), tgt.clone());
    ensure_eq("type", &d.ty, &want)?;

    let gz = c(g, 0, &[t("g_m"), t("z_b")])?;
    let yg = c(g, 0, &[t("y_b"), t("g_p")])?;
    let f_yg = c(g, 0, &[t("f_m"), yg.clone()])?;
    let fy_g = c(g, 0, &[c(g, 0, &[t("f_m"), t("y_b")])?, t("g_p")])?;
    let xf_g = c(g, 0, &[c(g, 0, &[t("x_b"), t("f_p")])?, t("g_p")])?;
    let phases = vec![
        auto_coh(g, &src, &c(g, 0, &[t("f_m"), gz])?).map_err(e2s)?,
        c(g, 0, &[t("f_m"), t("g_b")])?,
        auto_coh(g, &f_yg, &fy_g).map_err(e2s)?,
        c(g, 0, &[t("f_b"), t("g_p")])?,
        auto_coh(g, &xf_g, &tgt).map_err(e2s)?,
    ];
    let expected = c(g, 1, &phases)?;
    ensure_eq("term", &d.term, &expected)?;

    let (h, args) = head_of(&d.term)?;
    let locmax: Vec<&Term> = h.locmax().iter().map(|&i| &args[i]).collect();
    let kinds: Vec<&str> = locmax
        .iter()
        .map(|a| match head_of(a) {
            Ok((h, _)) if is_comp_head(h).is_some() => "whisker",
            Ok((h, _)) if check_head(h) == Ok(Fullness::Inv) => "assoc",
            _ => "other",
        })
        .collect();
    ensure(kinds == ["assoc", "whisker", "assoc", "whisker", "assoc"], || {
        format!("phase heads {kinds:?}")
    })
}

fn example_3() -> Outcome {
    let (el, _) = example(3)?;
    let d = el.get("assoc_nat").ok_or("no definition assoc_nat")?;
    let assoc = el.get("assoc").ok_or("no definition assoc")?;
    let (ah, _) = head_of(&assoc.term)?;
    let g = &d.ctx;
    let alpha = |f: &str| apply_head(g, ah, &[t(f), t("g"), t("h")]).map_err(e2s);
    let gh = c(g, 0, &[t("g"), t("h")])?;
    let left = c(g, 0, &[c(g, 0, &[t("f_arrow"), t("g")])?, t("h")])?;
    let right = c(g, 0, &[t("f_arrow"), gh])?;
    let src = c(g, 1, &[alpha("f_minus")?, right])?;
    let tgt = c(g, 1, &[left, alpha("f_plus")?])?;
    let want = Ty::arr(src.ty_in(g).map_err(e2s)?, src, tgt);
    ensure_eq("type", &d.ty, &want)
}

fn criterion_1() -> Outcome {
    example_1().map_err(|e| format!("example 1: {e}"))?;
    example_2().map_err(|e| format!("example 2: {e}"))?;
    example_3().map_err(|e| format!("example 3: {e}"))
}

fn cyl_faces(a: &Instance, b: &Instance, k: usize) -> Result<(Term, Term, Instance, Instance), String> {
    let g = &a.ambient;
    let d = a.n.max(b.n);
    let top = c(g, k - 1, &[a.top(), b.top()])?;
    let bot = c(g, k - 1, &[a.bot().ok_or("no bottom")?, b.bot().ok_or("no bottom")?])?;
    if a.n == k + 1 && b.n == k + 1 {
        return Ok((top, bot, a.back().ok_or("no back")?, b.front().ok_or("no front")?));
    }
    let back = cyl_comp(&a.back_k(d - 1), &b.back_k(d - 1), k).map_err(e2s)?;
    let front = cyl_comp(&a.front_k(d - 1), &b.front_k(d - 1), k).map_err(e2s)?;
    Ok((top, bot, back, front))
}

fn cone_faces(a: &Instance, b: &Instance, k: usize) -> Result<(Term, Instance, Instance), String> {
    let g = &a.ambient;
    let d = a.n.max(b.n);
    let base = c(g, k - 1, &[a.base(), b.base()])?;
    if a.n == k + 1 && b.n == k + 1 {
        return Ok((base, a.back().ok_or("no back")?, b.front().ok_or("no front")?));
    }
    let back = cone_comp(&a.back_k(d - 1), &b.back_k(d - 1), k).map_err(e2s)?;
    let front = cone_comp(&a.front_k(d - 1), &b.front_k(d - 1), k).map_err(e2s)?;
    Ok((base, back, front))
}

fn recheck_naturality() -> Outcome {
    let mut lifted = 0;
    for tree in trees(3) {
        let g = labelled(&tree, "g");
        let pool = term_pool(&g);
        for x in up_closed_subsets(&g) {
            for s in &pool {
                let ok = depth(&g, &x, Focus::Term(s)).map(|r| r.d >= 0 && r.d <= 1 && r.k >= 0 && r.k <= 1);
                if !matches!(ok, Ok(true)) {
                    continue;
                }
                let ty = check_term(&g, s).map_err(e2s)?;
                let up = term_up(&g, s, &x).map_err(|e| format!("{s} over {x:?}: {e}"))?;
                let out = catt_core::naturality::ctx_up(&g, &x).map_err(e2s)?;
                let got = check_term(&out.ctx_up, &up).map_err(e2s)?;
                let want = type_up_term(&g, &ty, s, &x).map_err(e2s)?;
                ensure_eq("lifted type", &got, &want)?;
                lifted += 1;
            }
        }
    }
    println!("    {lifted} terms lifted and re-checked");
    ensure(lifted > 0, || "no term was lifted".into())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    recheck_naturality()?;
    for k in 1..=2 {
        for m in k + 1..=4 {
            for n in k + 1..=4 {
                let at = |what: &str| format!("{what}({m},{k},{n})");
                run_builtin(Builtin::CylComp { m, k, n }).map_err(|e| format!("{}: {e}", at("cylcomp")))?;
                run_builtin(Builtin::ConeComp { m, k, n }).map_err(|e| format!("{}: {e}", at("conecomp")))?;

                let (g, a, b) = generic_pair(Kind::Cylinder, m, n, k).map_err(e2s)?;
                let r = cyl_comp(&a, &b, k).map_err(|e| format!("{}: {e}", at("cylcomp")))?;
                let (top, bot, back, front) = cyl_faces(&a, &b, k)?;
                let want = cyl_type_formula(&g, &top, &bot, &back, &front).map_err(e2s)?;
                ensure_eq(&at("cylcomp"), &check_term(&g, &r.filler).map_err(e2s)?, &want)?;

                let (g, a, b) = generic_pair(Kind::Cone, m, n, k).map_err(e2s)?;
                let r = cone_comp(&a, &b, k).map_err(|e| format!("{}: {e}", at("conecomp")))?;
                let (base, back, front) = cone_faces(&a, &b, k)?;
                let want = cone_type_formula(&g, &base, &back, &front).map_err(e2s)?;
                ensure_eq(&at("conecomp"), &check_term(&g, &r.filler).map_err(e2s)?, &want)?;
            }
        }
    }
    for n in 1..=4 {
        run_builtin(Builtin::CylStack { n }).map_err(|e| format!("cylstack({n}): {e}"))?;
        let (g, a, b) = generic_stack_pair(n).map_err(e2s)?;
        let r = cyl_stack(&a, &b).map_err(e2s)?;
        ensure_eq("stack top", &r.top(), &a.top())?;
        ensure(r.bot() == b.bot(), || format!("cylstack({n}) changes the bottom"))?;
        if n >= 2 {
            let back = cyl_stack(&a.back().ok_or("no back")?, &b.back().ok_or("no back")?).map_err(e2s)?;
            let front = cyl_stack(&a.front().ok_or("no front")?, &b.front().ok_or("no front")?).map_err(e2s)?;
            let bot = b.bot().ok_or("no bottom")?;
            let want = cyl_type_formula(&g, &a.top(), &bot, &back, &front).map_err(e2s)?;
            ensure_eq(&format!("cylstack({n})"), &check_term(&g, &r.filler).map_err(e2s)?, &want)?;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))
}

fn criterion_3() -> Outcome {
    let mut report = Vec::new();
    for (name, kind) in [("cyl", SizeKind::Cyl), ("stack", SizeKind::Stack), ("cone", SizeKind::Cone)] {
        let rows = sizes(kind, 2, 4).map_err(e2s)?;
        for w in rows.windows(2) {
            let (n, a) = w[0];
            let (_, b) = w[1];
            ensure(b >= 5 * a, || format!("{name}: size {b} at n={} is not five times {a} at n={n}", n + 1))?;
        }
        report.push(format!("{name} {:?}", rows.iter().map(|r| r.1).collect::<Vec<_>>()));
    }
    println!("    sizes for n = 2..4: {}", report.join(", "));
    Ok(())
}

fn run_property(name: &str, check: fn(&[usize]) -> Outcome) -> Outcome {
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 500, failure_persistence: None, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner
        .run(&prop::collection::vec(0usize..10_000, 8), |c| {
            check(&c).map_err(TestCaseError::fail)
        })
        .map_err(|e| format!("{name}: {e}"))
}

fn criterion_4() -> Outcome {
    let lemmas: [(&str, fn(&[usize]) -> Outcome); 8] = [
        ("pullback of inclusions", properties::check_pullback_inj),
        ("pullback of terms and types", properties::check_pullback_term),
        ("pullback of substitutions", properties::check_pullback_sub),
        ("weakening", properties::check_weakening),
        ("empty intersection", properties::check_empty_intersection),
        ("suspension", properties::check_suspension),
        ("preimage of a composite", properties::check_preimage_composition),
        ("depth-zero pasting", properties::check_pasting_preservation),
    ];
    for (name, check) in lemmas {
        run_property(name, check)?;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    run_property("degenerate sets and opposites", properties::check_degenerate)?;
    for kind in [Kind::Cylinder, Kind::Cone] {
        for n in 1..=4 {
            let g = Instance::generic(kind, n).map_err(e2s)?;
            for k in n..=n + 2 {
                ensure(g.back_k(k).filler == g.filler, || format!("{kind} {n}: back_{k} moved"))?;
                ensure(g.front_k(k).filler == g.filler, || format!("{kind} {n}: front_{k} moved"))?;
            }
        }
    }
    Ok(())
}

fn expect_error(src: &str, code: &str) -> Outcome {
    match check_source(src) {
        Ok(_) => Err(format!("accepted `{src}`")),
        Err(e) if e.code() == code => Ok(()),
        Err(e) => Err(format!("expected error[{code}], got error[{}]: {e}", e.code())),
    }
}

fn criterion_6() -> Outcome {
    const COMP: &str = "coh comp (x y z : *) (f : x -> y) (g : y -> z) : x -> z\n";
    let not_up_closed = format!(
        "{COMP}let a (x_m x_p : *) (x_b : x_m -> x_p) (y z : *) (f : x_p -> y) (g : y -> z) = comp [x_b] y f z g"
    );
    match check_source(&not_up_closed) {
        Err(FrontendError::NotUpClosed { ref var, .. }) if var == "f" => {}
        other => return Err(format!("non-up-closed set: {:?}", other.err())),
    }
    let depth_two = "coh vert (x y : *) (f g h : x -> y) (a : f -> g) (b : g -> h) : f -> h\n\
                     let d (x : *) (y : *) (f g h : x -> y) (a : f -> g) (b : g -> h) \
                     = vert [x] y [f] [g] [h] [a] [b]";
    match check_source(depth_two) {
        Err(FrontendError::DepthExceeded { depth: 2, .. }) => {}
        other => return Err(format!("depth two: {:?}", other.err())),
    }
    expect_error("coh bad (x y : *) (f g : x -> y) : x -> y", "not-pasting")?;

    let (_, a, b) = generic_pair(Kind::Cylinder, 2, 2, 1).map_err(e2s)?;
    ensure(matches!(cyl_comp(&b, &a, 1), Err(Error::FacesMismatch(_))), || {
        "cylinders with mismatched faces were composed".into()
    })?;
    let (_, a, b) = generic_pair(Kind::Cone, 2, 2, 1).map_err(e2s)?;
    ensure(matches!(cone_comp(&b, &a, 1), Err(Error::FacesMismatch(_))), || {
        "cones with mismatched faces were composed".into()
    })?;
    let (_, a, b) = generic_pair(Kind::Cylinder, 3, 3, 2).map_err(e2s)?;
    ensure(matches!(cyl_stack(&a, &b), Err(Error::FacesMismatch(_))), || {
        "cylinders with mismatched faces were stacked".into()
    })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("worked naturality examples elaborate to the expected terms", criterion_1),
        ("naturality and cylinder and cone operations re-check", criterion_2),
        ("composite sizes grow at least fivefold per dimension", criterion_3),
        ("naturality lemmas hold on 500 instances each", criterion_4),
        ("degenerate sets, opposites and iterated faces are identities", criterion_5),
        ("malformed inputs are rejected with the right error", criterion_6),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        match outcome {
            Ok(()) => println!("PASS criterion {}: {name} ({took:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({took:.2?}): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
