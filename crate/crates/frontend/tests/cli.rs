//! The command line: success lines, printing, sizes and exit codes.

use std::process::Command;

fn catt(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_catt"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn temp_file(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("catt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn examples_succeed() {
    for i in 1..=5 {
        let f = format!("examples/example_{i}.catt");
        let (code, out, err) = catt(&[&f]);
        assert_eq!(code, 0, "{f}: {err}");
        assert!(out.contains("success"), "{f}");
    }
}

#[test]
fn print_definition() {
    let (code, out, _) = catt(&["examples/example_1.catt", "--print", "comp_func"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("let comp_func (x y z : *)"));
    let (code, _, err) = catt(&["examples/example_1.catt", "--print", "missing"]);
    assert_eq!(code, 1);
    assert!(err.contains("missing"));
}

#[test]
fn size_table_has_three_rows() {
    let (code, out, _) = catt(&["--sizes", "cyl", "2..4"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("2\t"));
}

#[test]
fn user_errors_exit_with_one_and_a_span() {
    let f = temp_file(
        "bad.catt",
        "coh comp (x y z : *) (f : x -> y) (g : y -> z) : x -> z\n\
         let bad (x y z : *) (f : x -> y) (g : y -> z) = comp [x] [y] f [z] [g]\n",
    );
    let (code, _, err) = catt(&[&f]);
    assert_eq!(code, 1);
    assert!(err.contains(":2:"), "{err}");
    assert!(err.contains("error[not-up-closed]"), "{err}");
}

#[test]
fn missing_file() {
    let (code, _, err) = catt(&["no/such/file.catt"]);
    assert_eq!(code, 1);
    assert!(err.contains("error[io]"));
}

#[test]
fn unknown_size_family() {
    let (code, _, _) = catt(&["--sizes", "disc", "2..3"]);
    assert_eq!(code, 1);
}
