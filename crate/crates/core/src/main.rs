use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = hadafrac::cli::run(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    code.into()
}
