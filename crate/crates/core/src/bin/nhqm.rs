use clap::Parser;

fn main() {
    std::process::exit(nhqm::cli::main_with(nhqm::cli::Cli::parse()));
}
