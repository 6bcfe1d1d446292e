use clap::Parser;

use fairtab_cli::{run, thread_cap, Cli, EXIT_INPUT};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match thread_cap() {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: {e}");
                std::process::exit(EXIT_INPUT);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
    if let Err(e) = run(cli, &args) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
