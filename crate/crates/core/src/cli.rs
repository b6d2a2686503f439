//! Command-line front end.
//!
//! Every subcommand builds a [`RunConfig`] and hands it to [`run`], which is
//! also what `harmolec run <config.json>` does with a configuration file.
//! Tables are written as CSV (floats with 17 significant digits) or as a JSON
//! array of row objects.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use crate::asymptotics::{sweep, MassRatioFamily};
use crate::born_oppenheimer::BoSolution;
use crate::config::{load_config, Command, OutputFormat, Pair, ParamsInput, Preset, RunConfig, SampleRange};
use crate::error::Result;
use crate::exact::{exact_frequencies, level_table, total_energy};
use crate::homonuclear::{linspace, rho_ne, rho_ne_bo, rho_nn, HomonuclearParams};
use crate::oracle::{verify, VerifyReport};

#[derive(Debug, Parser)]
#[command(name = "harmolec", version, about = "Exact and Born-Oppenheimer spectra of a 1D harmonic molecule")]
struct Cli {
    /// Write output here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Exact level table.
    Spectrum(TableArgs),
    /// Born-Oppenheimer levels next to the exact ones.
    Bo(TableArgs),
    /// Side-by-side exact and BO frequencies and energies.
    Compare(TableArgs),
    /// Squared frequencies against their first-order mass-ratio series.
    Expand(ExpandArgs),
    /// Ground-state separation densities for identical nuclei.
    Correlate(CorrelateArgs),
    /// Finite-difference check of the lowest levels.
    Verify(VerifyArgs),
    /// Execute a JSON run configuration.
    Run {
        config: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Source {
    /// Parameters as JSON: {"masses":[..],"force_constants":{..}} or {"physical":{..}}.
    #[arg(long, group = "source")]
    params: Option<String>,
    /// File holding the parameter JSON.
    #[arg(long, group = "source")]
    params_file: Option<PathBuf>,
    #[arg(long, value_enum, group = "source")]
    preset: Option<Preset>,
    /// Nucleus mass used by the presets.
    #[arg(long)]
    nucleus_mass: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    source: Source,
    /// Largest quantum number of either mode.
    #[arg(long)]
    nmax: Option<u32>,
    /// Center-of-mass wavenumber.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
}

#[derive(Debug, Args)]
struct ExpandArgs {
    #[command(flatten)]
    source: Source,
    /// Mass ratios, comma separated.
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    /// Nuclear masses are `u1/lambda` and `u2/lambda`; both default to m3.
    #[arg(long)]
    u1: Option<f64>,
    #[arg(long)]
    u2: Option<f64>,
}

#[derive(Debug, Args)]
struct CorrelateArgs {
    #[command(flatten)]
    source: Source,
    /// Separations sampled as start:end:steps.
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    #[arg(long, value_enum)]
    pair: Option<Pair>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    /// Grid points per axis.
    #[arg(long)]
    grid_n: Option<usize>,
    /// Half width of a square box; chosen from the analytic widths when absent.
    #[arg(long)]
    domain: Option<f64>,
    /// Number of levels to compare.
    #[arg(long)]
    states: Option<usize>,
}

impl Source {
    fn apply(self, c: &mut RunConfig) -> Result<()> {
        c.params = self.params.as_deref().map(ParamsInput::parse).transpose()?;
        c.params_file = self.params_file;
        c.preset = self.preset;
        if let Some(m) = self.nucleus_mass {
            c.nucleus_mass = m;
        }
        c.format = self.format;
        Ok(())
    }
}

impl Sub {
    fn into_config(self) -> Result<RunConfig> {
        let mut c;
        match self {
            Sub::Spectrum(a) => c = table_config(Command::Spectrum, a)?,
            Sub::Bo(a) => c = table_config(Command::Bo, a)?,
            Sub::Compare(a) => c = table_config(Command::Compare, a)?,
            Sub::Expand(a) => {
                c = RunConfig::new(Command::Expand);
                a.source.apply(&mut c)?;
                if let Some(l) = a.lambdas {
                    c.lambdas = l;
                }
                c.u1 = a.u1;
                c.u2 = a.u2;
            }
            Sub::Correlate(a) => {
                c = RunConfig::new(Command::Correlate);
                a.source.apply(&mut c)?;
                if let Some(r) = a.range {
                    c.range = r.parse::<SampleRange>()?;
                }
                if let Some(p) = a.pair {
                    c.pair = p;
                }
            }
            Sub::Verify(a) => {
                c = RunConfig::new(Command::Verify);
                a.source.apply(&mut c)?;
                if let Some(n) = a.grid_n {
                    c.grid_n = n;
                }
                c.domain = a.domain;
                if let Some(s) = a.states {
                    c.states = s;
                }
            }
            Sub::Run { config } => c = load_config(config)?,
        }
        c.validate()?;
        Ok(c)
    }
}

fn table_config(command: Command, a: TableArgs) -> Result<RunConfig> {
    let mut c = RunConfig::new(command);
    a.source.apply(&mut c)?;
    if let Some(n) = a.nmax {
        c.nmax = n;
    }
    if let Some(k) = a.kappa {
        c.kappa = k;
    }
    Ok(c)
}

/// One table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.16e}"),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(v) => Value::from(v),
            // Non-finite values have no JSON number form.
            Cell::Real(v) => serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number),
        }
    }
}

/// Column names plus rows of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(name, cell)| (name.to_string(), cell.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write(&self, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(out)?,
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

use Cell::{Int, Real};

fn spectrum_table(c: &RunConfig) -> Result<Table> {
    let p = c.model_params()?;
    let mut t = Table::new(&["n1", "n2", "kappa", "omega1", "omega2", "epsilon", "E_total"]);
    for l in level_table(&p, c.kappa, c.nmax)? {
        t.push(vec![
            Int(l.n1.into()),
            Int(l.n2.into()),
            Real(l.kappa),
            Real(l.omega1),
            Real(l.omega2),
            Real(l.epsilon),
            Real(l.e_total),
        ]);
    }
    Ok(t)
}

fn labels(nmax: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=nmax).flat_map(move |n1| (0..=nmax).map(move |n2| (n1, n2)))
}

fn bo_table(c: &RunConfig) -> Result<Table> {
    let p = c.model_params()?;
    let bo = BoSolution::new(&p)?;
    let mut t = Table::new(&["kappa", "n1", "n2", "omega_e", "omega_N", "E_BO", "E_exact", "abs_error"]);
    for (n1, n2) in labels(c.nmax) {
        let e_bo = bo.energy(c.kappa, n1, n2);
        let e_exact = total_energy(&p, c.kappa, n1, n2)?;
        t.push(vec![
            Real(c.kappa),
            Int(n1.into()),
            Int(n2.into()),
            Real(bo.omega_e),
            Real(bo.omega_n),
            Real(e_bo),
            Real(e_exact),
            Real((e_exact - e_bo).abs()),
        ]);
    }
    Ok(t)
}

fn compare_table(c: &RunConfig) -> Result<Table> {
    let p = c.model_params()?;
    let bo = BoSolution::new(&p)?;
    let (w1, w2) = exact_frequencies(&p)?;
    let mut t = Table::new(&[
        "n1", "n2", "kappa", "omega1", "omega_e", "omega2", "omega_N", "E_exact", "E_BO", "abs_error", "rel_error",
    ]);
    for (n1, n2) in labels(c.nmax) {
        let e_exact = total_energy(&p, c.kappa, n1, n2)?;
        let e_bo = bo.energy(c.kappa, n1, n2);
        let abs = (e_exact - e_bo).abs();
        t.push(vec![
            Int(n1.into()),
            Int(n2.into()),
            Real(c.kappa),
            Real(w1),
            Real(bo.omega_e),
            Real(w2),
            Real(bo.omega_n),
            Real(e_exact),
            Real(e_bo),
            Real(abs),
            Real(abs / e_exact.abs()),
        ]);
    }
    Ok(t)
}

fn expand_table(c: &RunConfig) -> Result<Table> {
    let p = c.model_params()?;
    let family = MassRatioFamily::new(
        p.force_constants(),
        c.u1.unwrap_or(p.m3()),
        c.u2.unwrap_or(p.m3()),
        p.m3(),
    )?;
    let mut t = Table::new(&[
        "lambda", "w1_exact", "w2_exact", "w1_series", "w2_series", "E_exact", "E_BO", "abs_error",
    ]);
    for s in sweep(&family, &c.lambdas)? {
        t.push(vec![
            Real(s.lambda),
            Real(s.w1_exact),
            Real(s.w2_exact),
            Real(s.w1_series),
            Real(s.w2_series),
            Real(s.e_exact),
            Real(s.e_bo),
            Real(s.abs_error()),
        ]);
    }
    Ok(t)
}

fn correlate_table(c: &RunConfig) -> Result<Table> {
    let h = HomonuclearParams::from_model(&c.model_params()?)?;
    // The nucleus-nucleus density is the same in both treatments.
    let (exact, bo) = match c.pair {
        Pair::Nn => (rho_nn(&h), rho_nn(&h)),
        Pair::Ne => (rho_ne(&h), rho_ne_bo(&h)),
    };
    let mut t = Table::new(&["delta", "rho_exact", "rho_bo"]);
    for d in linspace(c.range.start, c.range.end, c.range.steps) {
        t.push(vec![Real(d), Real(exact.density(d)), Real(bo.density(d))]);
    }
    Ok(t)
}

/// Per-state rows of a verify report, for CSV output.
pub fn verify_table(r: &VerifyReport) -> Table {
    let mut t = Table::new(&[
        "state", "n1", "n2", "analytic", "grid", "abs_err", "residual", "kinetic", "potential", "parity",
    ]);
    for k in 0..r.grid.len() {
        t.push(vec![
            Int(k as i64),
            Int(r.labels[k][0].into()),
            Int(r.labels[k][1].into()),
            Real(r.analytic[k]),
            Real(r.grid[k]),
            Real(r.abs_err[k]),
            Real(r.residual[k]),
            Real(r.kinetic[k]),
            Real(r.potential[k]),
            Int(r.parity.get(k).copied().unwrap_or(0).into()),
        ]);
    }
    t
}

/// Execute one configuration, writing its table or report to `out`.
pub fn run(c: &RunConfig, out: &mut dyn Write) -> Result<()> {
    c.validate()?;
    let format = c.output_format();
    let table = match c.command {
        Command::Spectrum => spectrum_table(c)?,
        Command::Bo => bo_table(c)?,
        Command::Compare => compare_table(c)?,
        Command::Expand => expand_table(c)?,
        Command::Correlate => correlate_table(c)?,
        Command::Verify => {
            let report = verify(&c.model_params()?, c.grid_n, c.domain, c.states)?;
            if format == OutputFormat::Json {
                serde_json::to_writer_pretty(&mut *out, &report)?;
                writeln!(out)?;
                return Ok(());
            }
            verify_table(&report)
        }
    };
    table.write(format, out)
}

fn execute(cli: Cli) -> Result<()> {
    let config = cli.command.into_config()?;
    match cli.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            run(&config, &mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            run(&config, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Parse `args` (program name first), run, and return the exit status:
/// 0 on success, 1 for usage or validation errors, 2 for numerical failures.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
