use clap::Parser;

fn main() {
    std::process::exit(quantal::cli::run(quantal::cli::Cli::parse()));
}
