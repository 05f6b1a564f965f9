//! Command line entry point.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use catt::builtins::{parse_range, SizeKind};
use catt::printer::{Names, Printer};
use catt::{check_source, sizes, FrontendError};

/// Type-checks `.catt` files.
#[derive(Parser, Debug)]
#[command(name = "catt", version, about)]
struct Cli {
    /// Files to check, in order.
    files: Vec<PathBuf>,
    /// Print the named definition after checking.
    #[arg(long, value_name = "NAME")]
    print: Option<String>,
    /// Print printed sizes of a builtin family, e.g. `--sizes cyl 2..4`.
    #[arg(long, num_args = 2, value_names = ["KIND", "RANGE"])]
    sizes: Option<Vec<String>>,
}

fn fail(e: &FrontendError, path: &str, src: &str) -> ExitCode {
    eprintln!("{}", e.render(path, src));
    ExitCode::from(if e.is_internal() { 2 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut printed = cli.print.is_none();
    for path in &cli.files {
        let shown = path.display().to_string();
        let src = match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => {
                let err = FrontendError::Io {
                    path: shown.clone(),
                    message: e.to_string(),
                };
                return fail(&err, &shown, "");
            }
        };
        let el = match check_source(&src) {
            Ok(el) => el,
            Err(e) => return fail(&e, &shown, &src),
        };
        let mut p = Printer::new();
        for c in el.checks() {
            let names = Names::for_ctx(&c.ctx);
            let tel = p.telescope(&names, &c.ctx);
            let term = p.term(&names, &c.term);
            let ty = p.ty(&names, &c.ty);
            let (l, col) = c.span.line_col(&src);
            println!("{shown}:{l}:{col}: check {tel} : {ty} = {term}");
        }
        if let Some(name) = &cli.print {
            if let Some(d) = el.get(name) {
                println!("{}", p.definition(&d.name, &d.ctx, &d.ty, &d.term));
                printed = true;
            }
        }
        println!("{shown}: success ({} definitions)", el.definitions().count());
    }
    if !printed {
        let name = cli.print.unwrap_or_default();
        eprintln!("error[unknown-name]: no definition named `{name}`");
        return ExitCode::from(1);
    }
    if let Some(args) = &cli.sizes {
        let kind: SizeKind = match args[0].parse() {
            Ok(k) => k,
            Err(e) => {
                eprintln!("error[usage]: {e}");
                return ExitCode::from(1);
            }
        };
        let (lo, hi) = match parse_range(&args[1]) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error[usage]: {e}");
                return ExitCode::from(1);
            }
        };
        match sizes(kind, lo, hi) {
            Ok(rows) => {
                println!("n\tbytes");
                for (n, s) in rows {
                    println!("{n}\t{s}");
                }
            }
            Err(e) => {
                let internal = matches!(e, catt_core::Error::Internal(_));
                eprintln!("error[sizes]: {e}");
                return ExitCode::from(if internal { 2 } else { 1 });
            }
        }
    }
    ExitCode::SUCCESS
}
