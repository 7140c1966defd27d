use clap::Parser;
use twostep_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    std::process::exit(twostep_cli::run(&cli));
}
