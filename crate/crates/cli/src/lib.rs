//! Batch driver for the screened-pseudopotential solver: ionization tables,
//! excited spectra, screening diagnostics, convergence sweeps and reference
//! comparisons. Every output carries the run configuration and version.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use pseudoatom::{ModelKind, ReferenceTable, ZetaTruncation};

pub use commands::References;
pub use config::{Format, Overrides, RunConfig};
pub use error::{CliError, CliResult};
pub use output::{Cell, Table, VERSION};

#[derive(Debug, Parser)]
#[command(name = "pseudoatom", version, about = "Screened-pseudopotential atomic levels")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration; flags override its fields
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Comma-separated element symbols
    #[arg(long, global = true, value_delimiter = ',')]
    pub elements: Option<Vec<String>>,
    /// Model(s) to evaluate: v1, v2 or coulomb
    #[arg(long, global = true, value_delimiter = ',', value_parser = config::parse_model)]
    pub model: Option<Vec<ModelKind>>,
    #[arg(long, global = true)]
    pub splines: Option<usize>,
    /// Box radius in bohr
    #[arg(long, global = true)]
    pub rmax: Option<f64>,
    /// Spline order
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Knot clustering; 0 gives a uniform grid
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Gauss points per knot interval
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Occupancy override, e.g. Mg=3 (repeatable)
    #[arg(long = "m-override", global = true, value_parser = config::parse_m_override)]
    pub m_override: Vec<(String, u32)>,
    /// Energy conversion factor in eV per hartree
    #[arg(long = "hartree-ev", global = true)]
    pub hartree_ev: Option<f64>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ionization potentials, one column per model
    IpTable,
    /// Scaled levels of one element
    Spectrum {
        #[arg(default_value = "Li")]
        element: String,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        #[arg(long, default_value_t = 3)]
        l_max: u32,
    },
    /// Closed-form screening factor against the quadrature oracle
    Zeta {
        #[arg(long = "z", value_delimiter = ',', default_values_t = [1u32, 2, 3])]
        zs: Vec<u32>,
        #[arg(
            long = "r",
            value_delimiter = ',',
            default_values_t = [0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 2.0, 5.0]
        )]
        rs: Vec<f64>,
        /// Highest binomial term kept in the oracle, or `exact`
        #[arg(long, default_value = "1")]
        k_max: String,
    },
    /// Lithium 2s energy across basis sizes
    Converge {
        /// Sweep points N[:RMAX[:GAMMA]], comma separated
        #[arg(long, value_delimiter = ',', default_values_t = ["150".to_string(), "300".into(), "600".into()])]
        sweep: Vec<String>,
    },
    /// Deviation report against reference values
    Compare {
        /// Reference CSV (label,kind,value_eV,source); defaults to the fixtures
        #[arg(long = "ref")]
        reference: Option<PathBuf>,
    },
    /// Export the element catalog
    Catalog,
}

impl GlobalArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            splines: self.splines,
            r_max: self.rmax,
            order: self.order,
            gamma: self.gamma,
            quadrature_nodes: self.nodes,
            models: self.model.clone(),
            elements: self.elements.clone(),
            format: self.format,
            m_override: self.m_override.clone(),
            hartree_ev: self.hartree_ev,
        }
    }

    pub fn run_config(&self) -> CliResult<RunConfig> {
        let file = self.config.as_deref().map(RunConfig::load).transpose()?;
        RunConfig::resolve(file, self.overrides())
    }
}

fn parse_k_max(s: &str) -> CliResult<ZetaTruncation> {
    if s.eq_ignore_ascii_case("exact") {
        return Ok(ZetaTruncation::exact());
    }
    let k: u32 = s
        .parse()
        .map_err(|_| CliError::Config(format!("--k-max expects an integer or `exact`, got `{s}`")))?;
    Ok(ZetaTruncation {
        k_max: Some(k),
        ..ZetaTruncation::first_order()
    })
}

/// Runs one command to a finished table.
pub fn execute(command: &Command, cfg: &RunConfig) -> CliResult<Table> {
    match command {
        Command::IpTable => commands::ip_table(cfg, &References::from_env()?),
        Command::Spectrum {
            element,
            n_max,
            l_max,
        } => commands::spectrum(cfg, &References::from_env()?, element, *n_max, *l_max),
        Command::Zeta { zs, rs, k_max } => commands::zeta(cfg, zs, rs, &parse_k_max(k_max)?),
        Command::Converge { sweep } => {
            let points = sweep
                .iter()
                .map(|s| commands::parse_sweep_point(s, cfg))
                .collect::<CliResult<Vec<_>>>()?;
            commands::converge(cfg, &points)
        }
        Command::Compare { reference } => {
            let table = match reference {
                Some(path) => {
                    ReferenceTable::load(path).map_err(|e| CliError::from_core_at(e, path))?
                }
                None => References::from_env()?.combined(),
            };
            commands::compare(cfg, &table)
        }
        Command::Catalog => commands::catalog(cfg),
    }
}

/// Writes to `out` only once the whole document exists, via a temporary sibling file.
pub fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    use std::io::Write;
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".partial");
            let tmp = PathBuf::from(tmp);
            std::fs::write(&tmp, text)
                .map_err(|e| CliError::Io(format!("{}: {e}", tmp.display())))?;
            std::fs::rename(&tmp, path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(())
}

/// Parses, runs and writes; returns the process exit code.
pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = cli.global.run_config()?;
    let table = execute(&cli.command, &cfg)?;
    let text = table.render(&cfg)?;
    emit(&text, cli.global.out.as_deref())
}
