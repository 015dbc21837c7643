use clap::Parser;

fn main() {
    let cli = qlaplace::cli::Cli::parse();
    std::process::exit(qlaplace::cli::run(cli));
}
