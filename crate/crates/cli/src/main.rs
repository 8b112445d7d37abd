use clap::Parser;

use royroot_cli::args::Cli;

fn main() {
    std::process::exit(royroot_cli::run(Cli::parse()));
}
