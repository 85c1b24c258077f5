use clap::Parser;
use lab_cli::cli::{emit, run, Cli};
use std::io::Write;

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli).and_then(|o| emit(&o, cli.command.out_dir()).map(|text| (o, text))) {
        Ok((outcome, text)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}
