use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (out, code) = elliptica::cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(out.as_bytes());
    ExitCode::from(code as u8)
}
