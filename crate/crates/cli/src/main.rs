use clap::Parser;
use pseudoatom_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("pseudoatom: {e}");
        std::process::exit(e.exit_code());
    }
}
