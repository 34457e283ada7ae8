use std::io::Write;

use clap::Parser;
use g1jac::cli::{run, Cli};

fn main() {
    let out = run(Cli::parse());
    let ok = std::io::stdout().write_all(out.stdout.as_bytes()).is_ok();
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(if ok { out.code } else { 4 });
}
