use std::io;

fn main() {
    let outcome = grip::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(outcome.exit_code);
}
