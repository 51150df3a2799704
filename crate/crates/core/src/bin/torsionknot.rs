use std::io::{stderr, stdout};
use std::process::exit;

fn main() {
    torsionknot::cli::init_logging();
    let code = torsionknot::cli::run(
        std::env::args_os(),
        &mut stdout().lock(),
        &mut stderr().lock(),
    );
    exit(code);
}
