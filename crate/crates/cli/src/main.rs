use clap::Parser;

fn main() {
    let cli = abeltrans_cli::Cli::parse();
    let outcome = abeltrans_cli::run(&cli);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::process::exit(outcome.code);
}
