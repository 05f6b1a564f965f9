//! Structured errors of the elaborator.

use catt::{check_source, FrontendError};

const COMP: &str = "coh comp (x y z : *) (f : x -> y) (g : y -> z) : x -> z\n";

fn err(src: &str) -> FrontendError {
    match check_source(src) {
        Ok(_) => panic!("expected an error"),
        Err(e) => e,
    }
}

#[test]
fn unknown_and_forward_names() {
    let e = err("let a (x : *) (f : x -> x) = g f\ncoh g (x y : *) (f : x -> y) : x -> y");
    assert!(matches!(e, FrontendError::UnknownName { ref name, .. } if name == "g"));
}

#[test]
fn duplicate_names() {
    let e = err(&format!("{COMP}{COMP}"));
    assert!(matches!(e, FrontendError::DuplicateName { .. }));
    let e = err("let a (x x : *) = x");
    assert!(matches!(e, FrontendError::DuplicateName { .. }));
}

#[test]
fn bracketed_set_must_be_up_closed() {
    let src = format!("{COMP}let a (x_m x_p : *) (x_b : x_m -> x_p) (y z : *) (f : x_p -> y) (g : y -> z) = comp [x_b] y f z g");
    let e = err(&src);
    assert!(matches!(e, FrontendError::NotUpClosed { ref var, .. } if var == "f"), "{e}");
}

#[test]
fn depth_two_is_rejected() {
    let src = "coh vert (x y : *) (f g h : x -> y) (a : f -> g) (b : g -> h) : f -> h\n\
               let d (x : *) (y : *) (f g h : x -> y) (a : f -> g) (b : g -> h) \
               = vert [x] y [f] [g] [h] [a] [b]";
    let e = err(src);
    assert!(matches!(e, FrontendError::DepthExceeded { depth: 2, .. }), "{e}");
}

#[test]
fn non_pasting_coherence() {
    let e = err("coh bad (x y : *) (f g : x -> y) : x -> y");
    assert_eq!(e.code(), "not-pasting");
}

#[test]
fn non_full_coherence() {
    let e = err("coh bad (x y z : *) (f : x -> y) (g : y -> z) : x -> y");
    assert_eq!(e.code(), "not-full");
}

#[test]
fn annotation_must_match() {
    let e = err(&format!("{COMP}let a (x y : *) (f : x -> y) (g : y -> y) : x -> x = comp f g"));
    assert!(matches!(e, FrontendError::AnnotationMismatch { .. }));
}

#[test]
fn builtin_indices() {
    let e = err("check cylcomp(2,0,2)");
    assert_eq!(e.code(), "unsupported-indices");
    let e = err("check conecomp(1,1,2)");
    assert_eq!(e.code(), "unsupported-indices");
}

#[test]
fn wrong_argument_count() {
    let e = err(&format!("{COMP}let a (x y : *) (f : x -> y) = comp f"));
    assert!(matches!(e, FrontendError::Arity { .. }));
}

#[test]
fn ill_typed_application() {
    let e = err(&format!("{COMP}let a (x y : *) (f : x -> y) (g : x -> y) = comp f g"));
    assert_eq!(e.code(), "type-mismatch");
}
