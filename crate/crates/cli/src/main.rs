use std::io::Write;

fn main() {
    hogeom_cli::init_threads();
    let (code, out, err) = hogeom_cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(out.as_bytes());
    let _ = std::io::stderr().write_all(err.as_bytes());
    std::process::exit(code);
}
