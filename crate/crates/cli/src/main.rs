use clap::Parser;

fn main() {
    let cli = cotor_cli::Cli::parse();
    let (out, code) = cotor_cli::run(&cli);
    if let Some(out) = out {
        print!("{out}");
    }
    std::process::exit(code);
}
