use std::collections::BTreeMap;
use std::path::Path;

use pseudoatom::catalog::{builtin_elements, lookup, ElementRecord};
use pseudoatom::units::HARTREE_EV;
use pseudoatom::{GridLaw, ModelKind, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

/// Everything that determines a run. Echoed into every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub splines: usize,
    pub r_max: f64,
    pub order: usize,
    /// Exponential clustering; `None` picks the value giving a 1e-4 bohr first interval.
    pub gamma: Option<f64>,
    /// Gauss points per knot interval; `None` uses the spline order.
    pub quadrature_nodes: Option<usize>,
    pub models: Vec<ModelKind>,
    /// Element symbols; empty means the command's own default set.
    pub elements: Vec<String>,
    pub format: Format,
    pub m_override: BTreeMap<String, u32>,
    pub hartree_ev: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            splines: 600,
            r_max: 200.0,
            order: 10,
            gamma: None,
            quadrature_nodes: None,
            models: vec![ModelKind::ConstantScreening, ModelKind::VaryingScreening],
            elements: Vec::new(),
            format: Format::Csv,
            m_override: BTreeMap::new(),
            hartree_ev: HARTREE_EV,
        }
    }
}

/// Values given on the command line. Unset fields fall through to the file, then defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub splines: Option<usize>,
    pub r_max: Option<f64>,
    pub order: Option<usize>,
    pub gamma: Option<f64>,
    pub quadrature_nodes: Option<usize>,
    pub models: Option<Vec<ModelKind>>,
    pub elements: Option<Vec<String>>,
    pub format: Option<Format>,
    pub m_override: Vec<(String, u32)>,
    pub hartree_ev: Option<f64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Flags over file over defaults. The m-override maps are merged key by key.
    pub fn resolve(file: Option<RunConfig>, flags: Overrides) -> CliResult<Self> {
        let mut cfg = file.unwrap_or_default();
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = flags.$field { cfg.$field = v; }
            )*};
        }
        take!(splines, r_max, order, models, elements, format, hartree_ev);
        if flags.gamma.is_some() {
            cfg.gamma = flags.gamma;
        }
        if flags.quadrature_nodes.is_some() {
            cfg.quadrature_nodes = flags.quadrature_nodes;
        }
        for (sym, m) in flags.m_override {
            cfg.m_override.insert(sym, m);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(CliError::Config(format!("r_max must be positive, got {}", self.r_max)));
        }
        if !(self.hartree_ev > 0.0 && self.hartree_ev.is_finite()) {
            return Err(CliError::Config("hartree_ev must be positive".into()));
        }
        if let Some(g) = self.gamma {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(CliError::Config(format!("gamma must be non-negative, got {g}")));
            }
        }
        if self.models.is_empty() {
            return Err(CliError::Config("no model selected".into()));
        }
        for sym in &self.elements {
            lookup(sym)?;
        }
        for (sym, &m) in &self.m_override {
            lookup(sym)?.with_m(m)?;
        }
        self.solver_config()?;
        Ok(())
    }

    pub fn solver_config(&self) -> CliResult<SolverConfig> {
        self.solver_config_for(self.splines, self.r_max, self.gamma)
    }

    pub fn solver_config_for(
        &self,
        splines: usize,
        r_max: f64,
        gamma: Option<f64>,
    ) -> CliResult<SolverConfig> {
        let mut sc = match gamma {
            None => SolverConfig::with_auto_grid(splines, r_max, self.order)?,
            Some(g) => {
                let grid = if g == 0.0 {
                    GridLaw::Uniform
                } else {
                    GridLaw::Exponential { gamma: g }
                };
                if self.order == 0 || splines < 2 * self.order {
                    return Err(CliError::Config(format!(
                        "{splines} splines of order {} is too small",
                        self.order
                    )));
                }
                SolverConfig {
                    splines,
                    r_max,
                    order: self.order,
                    grid,
                    quadrature_nodes: self.order,
                }
            }
        };
        if let Some(nodes) = self.quadrature_nodes {
            if nodes < self.order {
                return Err(CliError::Config(format!(
                    "{nodes} quadrature nodes cannot integrate order-{} splines exactly",
                    self.order
                )));
            }
            sc.quadrature_nodes = nodes;
        }
        Ok(sc)
    }

    /// Catalog records for the selection, with m overrides applied.
    pub fn elements_or(&self, default: &[&str]) -> CliResult<Vec<ElementRecord>> {
        let symbols: Vec<String> = if self.elements.is_empty() {
            default.iter().map(|s| s.to_string()).collect()
        } else {
            self.elements.clone()
        };
        symbols.iter().map(|s| self.element(s)).collect()
    }

    pub fn element(&self, symbol: &str) -> CliResult<ElementRecord> {
        let record = lookup(symbol)?;
        match self
            .m_override
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(&record.symbol))
        {
            Some((_, &m)) => Ok(record.with_m(m)?),
            None => Ok(record),
        }
    }
}

/// `He` through `Mg`, the rows of the ionization table.
pub fn ip_table_symbols() -> Vec<&'static str> {
    const ALL: [&str; 12] = ["H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg"];
    debug_assert_eq!(builtin_elements().len(), ALL.len());
    ALL[1..].to_vec()
}

/// Parses `SYM=INT`.
pub fn parse_m_override(s: &str) -> Result<(String, u32), String> {
    let (sym, m) = s
        .split_once('=')
        .ok_or_else(|| format!("expected SYM=INT, got `{s}`"))?;
    let m: u32 = m
        .trim()
        .parse()
        .map_err(|_| format!("`{m}` is not a non-negative integer"))?;
    Ok((sym.trim().to_owned(), m))
}

pub fn parse_model(s: &str) -> Result<ModelKind, String> {
    ModelKind::from_tag(s).ok_or_else(|| format!("unknown model `{s}` (expected v1, v2 or coulomb)"))
}
