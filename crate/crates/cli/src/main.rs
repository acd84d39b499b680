use clap::Parser;

fn main() {
    let cli = bellab_cli::Cli::parse();
    if let Err(e) = bellab_cli::run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
