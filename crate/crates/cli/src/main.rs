use std::io::{IsTerminal, Read, Write};

fn main() {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();

    let args: Vec<String> = std::env::args().collect();
    let mut stdin = String::new();
    if stegotax_cli::reads_stdin(&args) && !std::io::stdin().is_terminal() {
        if let Err(e) = std::io::stdin().read_to_string(&mut stdin) {
            eprintln!("error: cannot read stdin: {e}");
            std::process::exit(stegotax_cli::EXIT_USAGE);
        }
    }

    let outcome = stegotax_cli::run(args, &stdin);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}
