use std::panic;
use std::process::exit;

use clap::error::ErrorKind;
use clap::Parser;
use kfactor_lab::{execute, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("LAB_LOG")).format_timestamp(None).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            exit(code);
        }
    };
    match panic::catch_unwind(|| execute(&cli)) {
        Ok(Ok(out)) => print!("{}", out.text),
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            exit(e.exit_code());
        }
        // the panic message has already been printed by the default hook
        Err(_) => exit(2),
    }
}
