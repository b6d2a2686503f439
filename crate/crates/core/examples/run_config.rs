//! Build run configurations in code and print what the command line would.

use harmolec::cli::run;
use harmolec::config::{Command, OutputFormat, Preset, RunConfig};

fn main() -> harmolec::Result<()> {
    let mut config = RunConfig::new(Command::Compare);
    config.preset = Some(Preset::OneElectronDiatomic);
    config.nucleus_mass = 1836.0;
    config.nmax = 1;
    println!("{}", serde_json::to_string_pretty(&config)?);
    run(&config, &mut std::io::stdout())?;

    let mut config = RunConfig::new(Command::Spectrum);
    config.preset = Some(Preset::HeliumLike);
    config.nmax = 1;
    config.format = Some(OutputFormat::Json);
    run(&config, &mut std::io::stdout())?;
    Ok(())
}
