fn main() {
    let args: Vec<String> = std::env::args().collect();
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout();
    let code = cl18_cli::run_with_io(&args, &mut stdin.lock(), &mut stdout);
    std::process::exit(code);
}
