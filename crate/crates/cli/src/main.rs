use clap::Parser;

use pqbezier_cli::commands::{run, Cli, SceneFileError};

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            match err.downcast_ref::<SceneFileError>() {
                Some(scene) => eprintln!("{scene}"),
                None => eprintln!("error: {err:#}"),
            }
            std::process::exit(2);
        }
    }
}
