use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use pseudoatom::catalog::{
    builtin_elements, excited_spectrum_in, ionization_potential_in, lookup, ElementRecord,
};
use pseudoatom::report::{
    anomaly_note, build_report, bundled_reference, zeta_deviation_map, ComputedRow,
    QuantityKind, ReferenceRow,
};
use pseudoatom::{ModelKind, RadialSolver, ReferenceTable, ZetaTruncation};

use crate::config::{ip_table_symbols, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};

/// Directory holding `table1.csv` (ionization potentials) and `table2.csv` (levels).
pub const FIXTURE_ENV: &str = "PSEUDOATOM_FIXTURES";

/// Reference values used for the `ref` columns and as the default comparison target.
#[derive(Debug, Clone)]
pub struct References {
    pub ionization: ReferenceTable,
    pub levels: ReferenceTable,
}

impl References {
    pub fn bundled() -> Self {
        let (ionization, levels) = bundled_reference().expect("bundled fixtures parse");
        Self { ionization, levels }
    }

    pub fn from_dir(dir: &Path) -> CliResult<Self> {
        let load = |name: &str| {
            let path = dir.join(name);
            ReferenceTable::load(&path).map_err(|e| CliError::from_core_at(e, &path))
        };
        Ok(Self {
            ionization: load("table1.csv")?,
            levels: load("table2.csv")?,
        })
    }

    /// The fixture directory from the environment, or the bundled tables.
    pub fn from_env() -> CliResult<Self> {
        match std::env::var_os(FIXTURE_ENV) {
            Some(dir) if !dir.is_empty() => Self::from_dir(&PathBuf::from(dir)),
            _ => Ok(Self::bundled()),
        }
    }

    pub fn combined(&self) -> ReferenceTable {
        let mut rows = self.ionization.rows.clone();
        rows.extend(self.levels.rows.iter().cloned());
        ReferenceTable { rows }
    }
}

fn lookup_ref(table: &ReferenceTable, label: &str, kind: QuantityKind) -> Option<f64> {
    table
        .rows
        .iter()
        .find(|r| r.label == label && r.kind == kind)
        .map(|r| r.value_ev)
}

/// Anomaly notes only hold for the tabulated occupancy.
fn note_applies(element: &ElementRecord) -> bool {
    lookup(&element.symbol).is_ok_and(|base| base.m == element.m)
}

fn solver(cfg: &RunConfig) -> CliResult<RadialSolver> {
    Ok(RadialSolver::new(cfg.solver_config()?)?)
}

/// Ionization potentials, one column per model, for `He..Mg` by default.
pub fn ip_table(cfg: &RunConfig, refs: &References) -> CliResult<Table> {
    let elements = cfg.elements_or(&ip_table_symbols())?;
    let solver = solver(cfg)?;
    let mut columns = vec!["n", "atom", "m/n"];
    columns.extend(cfg.models.iter().map(|m| m.tag()));
    columns.push("ref");
    let mut table = Table::new("ip-table", &columns);
    for el in &elements {
        let mut row = vec![
            Cell::Int(el.n_electrons.into()),
            Cell::text(el.symbol.clone()),
            Cell::text(format!("{}/{}", el.m, el.n_electrons)),
        ];
        for &kind in &cfg.models {
            let res = ionization_potential_in(el, kind, &solver, cfg.hartree_ev)?;
            row.push(Cell::num(res.ip_ev, 2));
            if note_applies(el) {
                if let Some(note) = anomaly_note(&el.symbol, kind) {
                    table.notes.push(note.to_owned());
                }
            }
        }
        row.push(Cell::opt(
            lookup_ref(&refs.ionization, &el.symbol, QuantityKind::Ip),
            2,
        ));
        table.push(row);
    }
    Ok(table)
}

/// Scaled levels of one element from its outermost shell up to `n_max`.
pub fn spectrum(
    cfg: &RunConfig,
    refs: &References,
    symbol: &str,
    n_max: u32,
    l_max: u32,
) -> CliResult<Table> {
    let element = cfg.element(symbol)?;
    let solver = solver(cfg)?;
    let mut columns = vec!["state"];
    columns.extend(cfg.models.iter().map(|m| m.tag()));
    columns.push("ref");
    let mut table = Table::new("spectrum", &columns);

    let mut per_model = Vec::new();
    for &kind in &cfg.models {
        let levels =
            excited_spectrum_in(&element, kind, n_max, l_max, &solver, cfg.hartree_ev)?;
        per_model.push(levels);
    }
    // Models can bind different numbers of states inside the box; rows are the union.
    let mut states: BTreeMap<(u32, u32), String> = BTreeMap::new();
    for levels in &per_model {
        for lv in levels {
            states.insert((lv.principal_n, lv.l), lv.label.clone());
        }
    }
    for ((n, l), label) in states {
        let mut row = vec![Cell::text(label.clone())];
        for levels in &per_model {
            let value = levels
                .iter()
                .find(|lv| lv.principal_n == n && lv.l == l)
                .map(|lv| lv.energy_scaled_ev);
            row.push(Cell::opt(value, 3));
        }
        let key = format!("{} {label}", element.symbol);
        row.push(Cell::opt(lookup_ref(&refs.levels, &key, QuantityKind::Level), 3));
        table.push(row);
    }
    table.notes.push(format!(
        "{} m/n = {}/{}, n_max = {n_max}, l_max = {l_max}",
        element.symbol, element.m, element.n_electrons
    ));
    Ok(table)
}

/// Closed-form screening factor next to both quadrature orientations.
pub fn zeta(
    _cfg: &RunConfig,
    zs: &[u32],
    rs: &[f64],
    truncation: &ZetaTruncation,
) -> CliResult<Table> {
    if zs.is_empty() || rs.is_empty() {
        return Err(CliError::Config("zeta needs at least one Z and one r".into()));
    }
    let rows = zeta_deviation_map(zs, rs, truncation)?;
    let mut table = Table::new(
        "zeta",
        &[
            "Z",
            "r",
            "zeta_closed_form",
            "oracle_active",
            "oracle_passive",
            "divergent_regime",
        ],
    );
    for r in rows {
        table.push(vec![
            Cell::Int(r.z.into()),
            Cell::num(r.r, 6),
            Cell::num(r.zeta_closed_form, 9),
            Cell::num(r.oracle_active, 9),
            Cell::num(r.oracle_passive, 9),
            Cell::Bool(r.divergent_regime),
        ]);
    }
    table.notes.push(match truncation.k_max {
        None => "oracle uses the exact weight".to_owned(),
        Some(k) => format!("oracle keeps binomial terms k <= {k}"),
    });
    Ok(table)
}

/// One discretization of a convergence sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub splines: usize,
    pub r_max: f64,
    /// `None` picks the automatic clustering for this size.
    pub gamma: Option<f64>,
}

/// Parses `N[:RMAX[:GAMMA]]`, where a missing or `auto` field takes the run value.
pub fn parse_sweep_point(s: &str, cfg: &RunConfig) -> CliResult<SweepPoint> {
    let bad = |what: &str| CliError::Config(format!("sweep point `{s}`: {what}"));
    let mut parts = s.split(':').map(str::trim);
    let splines = parts
        .next()
        .filter(|p| !p.is_empty())
        .ok_or_else(|| bad("missing N"))?
        .parse()
        .map_err(|_| bad("N is not an integer"))?;
    let r_max = match parts.next() {
        None | Some("") | Some("auto") => cfg.r_max,
        Some(v) => v.parse().map_err(|_| bad("RMAX is not a number"))?,
    };
    let gamma = match parts.next() {
        None | Some("") | Some("auto") => None,
        Some(v) => Some(v.parse().map_err(|_| bad("GAMMA is not a number"))?),
    };
    if parts.next().is_some() {
        return Err(bad("too many fields"));
    }
    Ok(SweepPoint {
        splines,
        r_max,
        gamma,
    })
}

/// Absolute slack allowed when checking that refinement never raises the energy.
pub const MONOTONE_SLACK: f64 = 1e-9;

/// Lithium 2s energy (varying screening, raw hartree) across a sweep.
pub fn converge(cfg: &RunConfig, sweep: &[SweepPoint]) -> CliResult<Table> {
    if sweep.is_empty() {
        return Err(CliError::Config("empty convergence sweep".into()));
    }
    let li = cfg.element("Li")?;
    let model = li.model(ModelKind::VaryingScreening)?;
    let mut energies = Vec::with_capacity(sweep.len());
    for p in sweep {
        let sc = cfg.solver_config_for(p.splines, p.r_max, p.gamma)?;
        let solver = RadialSolver::new(sc)?;
        let states = solver.solve_spectrum(&model, 0, 2)?;
        let e = states
            .iter()
            .find(|s| s.principal_n == 2)
            .map(|s| s.energy_raw)
            .ok_or_else(|| CliError::Solver(pseudoatom::Error::MissingOrbital {
                label: "Li 2s".into(),
            }))?;
        let gamma = match sc.grid {
            pseudoatom::GridLaw::Exponential { gamma } => gamma,
            pseudoatom::GridLaw::Uniform => 0.0,
        };
        energies.push((e, gamma));
    }
    // Finest point: most splines, last one on ties.
    let finest = (0..sweep.len())
        .rev()
        .max_by_key(|&i| sweep[i].splines)
        .expect("non-empty");
    let e_finest = energies[finest].0;

    let mut table = Table::new(
        "converge",
        &["N", "r_max", "gamma", "energy_hartree", "delta_to_finest_hartree", "monotone"],
    );
    let mut all_monotone = true;
    for (i, (p, &(e, gamma))) in sweep.iter().zip(&energies).enumerate() {
        let monotone = i == 0 || e <= energies[i - 1].0 + MONOTONE_SLACK;
        all_monotone &= monotone;
        table.push(vec![
            Cell::Int(p.splines as i64),
            Cell::num(p.r_max, 3),
            Cell::num(gamma, 6),
            Cell::num(e, 10),
            Cell::num(e - e_finest, 10),
            Cell::Bool(monotone),
        ]);
    }
    table.notes.push(format!(
        "Li 2s, varying screening; non-increasing from above: {}",
        if all_monotone { "yes" } else { "no" }
    ));
    Ok(table)
}

/// Computed rows for every IP and level the reference could match.
pub fn computed_rows(cfg: &RunConfig, reference: &ReferenceTable) -> CliResult<Vec<ComputedRow>> {
    let solver = solver(cfg)?;
    let mut rows = Vec::new();
    for el in cfg.elements_or(&ip_table_symbols())? {
        for &kind in &cfg.models {
            let res = ionization_potential_in(&el, kind, &solver, cfg.hartree_ev)?;
            rows.push(ComputedRow {
                label: el.symbol.clone(),
                kind: QuantityKind::Ip,
                z: el.z,
                model: kind,
                value_ev: res.ip_ev,
            });
        }
    }

    // Level labels look like `Li 2s`; collect the largest n and l per element.
    let mut wanted: BTreeMap<String, (u32, u32)> = BTreeMap::new();
    for ReferenceRow { label, kind, .. } in &reference.rows {
        if *kind != QuantityKind::Level {
            continue;
        }
        let Some((sym, state)) = label.split_once(' ') else { continue };
        let Some((n, l)) = parse_state(state) else { continue };
        let Ok(el) = lookup(sym) else { continue };
        let entry = wanted.entry(el.symbol).or_insert((n, l));
        entry.0 = entry.0.max(n);
        entry.1 = entry.1.max(l);
    }
    for (sym, (n_max, l_max)) in wanted {
        let el = cfg.element(&sym)?;
        let n_max = n_max.max(l_max + 1);
        for &kind in &cfg.models {
            for lv in excited_spectrum_in(&el, kind, n_max, l_max, &solver, cfg.hartree_ev)? {
                rows.push(ComputedRow {
                    label: format!("{sym} {}", lv.label),
                    kind: QuantityKind::Level,
                    z: el.z,
                    model: kind,
                    value_ev: lv.energy_scaled_ev,
                });
            }
        }
    }
    Ok(rows)
}

fn parse_state(s: &str) -> Option<(u32, u32)> {
    const LETTERS: &str = "spdfghik";
    let letter = s.chars().last()?;
    let n: u32 = s[..s.len() - letter.len_utf8()].parse().ok()?;
    let l = LETTERS.find(letter)? as u32;
    (l < n).then_some((n, l))
}

/// Deviation report of the computed values against `reference`.
pub fn compare(cfg: &RunConfig, reference: &ReferenceTable) -> CliResult<Table> {
    let computed = computed_rows(cfg, reference)?;
    let report = build_report(&computed, reference)?;
    let mut table = Table::new(
        "compare",
        &[
            "label",
            "kind",
            "Z",
            "model",
            "computed_eV",
            "reference_eV",
            "source",
            "delta_eV",
            "abs_dev_eV",
            "rel_dev",
            "within_tolerance",
            "annotation",
        ],
    );
    for r in &report.rows {
        let note = match r.kind {
            QuantityKind::Ip if note_applies(&cfg.element(&r.label)?) => report
                .annotation_for(&r.label, r.model)
                .map(|a| a.note.clone()),
            _ => None,
        };
        table.push(vec![
            Cell::text(r.label.clone()),
            Cell::text(r.kind.as_str()),
            Cell::Int(r.z.into()),
            Cell::text(r.model.tag()),
            Cell::num(r.computed_ev, 6),
            Cell::num(r.reference_ev, 6),
            Cell::text(r.source.clone()),
            Cell::num(r.delta_ev, 6),
            Cell::num(r.abs_dev_ev, 6),
            Cell::num(r.rel_dev, 6),
            Cell::Bool(r.within_tolerance),
            note.map_or(Cell::Empty, Cell::Text),
        ]);
    }
    table.notes.push(format!(
        "matched {} rows, max |dev| {:.6} eV, mean |dev| {:.6} eV, tolerance {} eV, {} unmatched",
        report.summary.matched,
        report.summary.max_abs_dev_ev,
        report.summary.mean_abs_dev_ev,
        report.tolerance_ev,
        report.unmatched.len()
    ));
    let value = serde_json::to_value(&report).map_err(|e| CliError::Io(e.to_string()))?;
    table.extra = Some(("report".into(), value));
    Ok(table)
}

/// The built-in element records with any m overrides applied.
pub fn catalog(cfg: &RunConfig) -> CliResult<Table> {
    let all: Vec<String> = builtin_elements().into_iter().map(|e| e.symbol).collect();
    let all: Vec<&str> = all.iter().map(String::as_str).collect();
    let mut table = Table::new("catalog", &["symbol", "Z", "n", "m", "outermost", "ref_ip_eV"]);
    for e in cfg.elements_or(&all)? {
        table.push(vec![
            Cell::text(e.symbol.clone()),
            Cell::Int(e.z.into()),
            Cell::Int(e.n_electrons.into()),
            Cell::Int(e.m.into()),
            Cell::text(e.outermost_label()),
            Cell::opt(e.reference_ip_ev, 2),
        ]);
    }
    Ok(table)
}
