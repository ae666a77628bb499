use clap::Parser;
use ldpost_cli::args::Cli;
use ldpost_cli::error::exit;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::SUCCESS
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = ldpost_cli::init_threads().and_then(|()| ldpost_cli::run(&cli));
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(e.exit_code());
    }
}
