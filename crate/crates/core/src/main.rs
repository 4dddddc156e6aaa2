use clap::Parser;

use gauge_certify::cli;

fn main() {
    cli::init_logging();
    let parsed = match cli::Cli::try_parse() {
        Ok(p) => p,
        Err(e) => {
            // clap renders its own message (including --help/--version).
            if e.use_stderr() {
                eprintln!("{e}");
                std::process::exit(cli::EXIT_CONFIG);
            }
            print!("{e}");
            std::process::exit(cli::EXIT_OK);
        }
    };
    match cli::run(parsed) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(cli::exit_code_for(&err));
        }
    }
}
