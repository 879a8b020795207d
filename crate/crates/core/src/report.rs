//! Reference tables, deviation reports and the zeta diagnostic map.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pseudopotential::{zeta, zeta_quadrature_oracle, ModelKind, Orientation, ZetaTruncation};

/// Reference ionization potentials of He through Mg.
pub const BUNDLED_TABLE1: &str = include_str!("../fixtures/table1.csv");
/// Reference excited levels of lithium.
pub const BUNDLED_TABLE2: &str = include_str!("../fixtures/table2.csv");

/// Default band for the `within_tolerance` flag, eV. Metadata only.
pub const DEFAULT_AGREEMENT_EV: f64 = 0.15;

/// Below this value of `Z r` the closed-form zeta is in its divergent regime.
pub const DIVERGENT_ZR: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuantityKind {
    #[serde(rename = "IP")]
    Ip,
    #[serde(rename = "level")]
    Level,
}

impl QuantityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            QuantityKind::Ip => "IP",
            QuantityKind::Level => "level",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "IP" | "ip" => Some(QuantityKind::Ip),
            "level" | "LEVEL" => Some(QuantityKind::Level),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub label: String,
    pub kind: QuantityKind,
    pub value_ev: f64,
    pub source: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub rows: Vec<ReferenceRow>,
}

const HEADER: [&str; 4] = ["label", "kind", "value_eV", "source"];

impl ReferenceTable {
    /// Parses `label,kind,value_eV,source` CSV. Lines starting with `#` are skipped.
    pub fn parse<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(input);
        let header = reader.headers().map_err(csv_parse_error)?.clone();
        if header.is_empty() {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                reason: "empty input: missing header".into(),
            });
        }
        let found: Vec<&str> = header.iter().collect();
        if found != HEADER {
            return Err(Error::Parse {
                line: header.position().map_or(1, |p| p.line()),
                column: 1,
                reason: format!("expected header {HEADER:?}, found {found:?}"),
            });
        }
        let mut rows = Vec::new();
        let mut seen = HashSet::new();
        for record in reader.records() {
            let record = record.map_err(csv_parse_error)?;
            let line = record.position().map_or(0, |p| p.line());
            let label = record[0].to_owned();
            if label.is_empty() {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    reason: "empty label".into(),
                });
            }
            let kind = QuantityKind::parse(&record[1]).ok_or_else(|| Error::Parse {
                line,
                column: 2,
                reason: format!("unknown kind `{}` (expected IP or level)", &record[1]),
            })?;
            let value_ev: f64 = record[2].parse().map_err(|_| Error::Parse {
                line,
                column: 3,
                reason: format!("`{}` is not a number", &record[2]),
            })?;
            if !value_ev.is_finite() {
                return Err(Error::Parse {
                    line,
                    column: 3,
                    reason: "value must be finite".into(),
                });
            }
            let source = record[3].to_owned();
            if !seen.insert((label.clone(), kind, source.clone())) {
                return Err(Error::DuplicateLabel {
                    label,
                    kind: kind.as_str().into(),
                    source_tag: source,
                });
            }
            rows.push(ReferenceRow {
                label,
                kind,
                value_ev,
                source,
            });
        }
        if rows.is_empty() {
            return Err(Error::Parse {
                line: 2,
                column: 1,
                reason: "no data rows".into(),
            });
        }
        Ok(Self { rows })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::parse(file)
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(HEADER)?;
        for row in &self.rows {
            w.write_record([
                row.label.as_str(),
                row.kind.as_str(),
                &format_value(row.value_ev),
                row.source.as_str(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Computed rows reused as a reference, e.g. for self-comparison.
    pub fn from_computed(rows: &[ComputedRow], source: &str) -> Self {
        Self {
            rows: rows
                .iter()
                .map(|c| ReferenceRow {
                    label: c.label.clone(),
                    kind: c.kind,
                    value_ev: c.value_ev,
                    source: source.to_owned(),
                })
                .collect(),
        }
    }

    fn find(&self, label: &str, kind: QuantityKind) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| r.label == label && r.kind == kind)
    }
}

/// Shortest representation that parses back to the same `f64`.
fn format_value(v: f64) -> String {
    format!("{v}")
}

fn csv_parse_error(e: csv::Error) -> Error {
    let (line, column) = e
        .position()
        .map_or((0, 0), |p| (p.line(), p.record() as usize));
    Error::Parse {
        line,
        column,
        reason: e.to_string(),
    }
}

/// Loads the bundled reference tables.
pub fn bundled_reference() -> Result<(ReferenceTable, ReferenceTable)> {
    Ok((
        ReferenceTable::parse(BUNDLED_TABLE1.as_bytes())?,
        ReferenceTable::parse(BUNDLED_TABLE2.as_bytes())?,
    ))
}

/// A model output to compare against a reference row with the same label and kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComputedRow {
    pub label: String,
    pub kind: QuantityKind,
    pub z: u32,
    pub model: ModelKind,
    pub value_ev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationRow {
    pub label: String,
    pub kind: QuantityKind,
    pub z: u32,
    pub model: ModelKind,
    pub computed_ev: f64,
    pub reference_ev: f64,
    pub source: String,
    pub delta_ev: f64,
    pub abs_dev_ev: f64,
    pub rel_dev: f64,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub label: String,
    pub model: ModelKind,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub matched: usize,
    pub max_abs_dev_ev: f64,
    pub mean_abs_dev_ev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub tolerance_ev: f64,
    pub rows: Vec<DeviationRow>,
    pub unmatched: Vec<ComputedRow>,
    pub summary: Summary,
    pub annotations: Vec<Annotation>,
}

fn sort_key(z: u32, label: &str, model: ModelKind) -> (u32, String, ModelKind) {
    (z, label.to_owned(), model)
}

/// Joins computed rows to the reference on `(label, kind)`.
pub fn build_report(computed: &[ComputedRow], reference: &ReferenceTable) -> Result<DeviationReport> {
    build_report_with_tolerance(computed, reference, DEFAULT_AGREEMENT_EV)
}

pub fn build_report_with_tolerance(
    computed: &[ComputedRow],
    reference: &ReferenceTable,
    tolerance_ev: f64,
) -> Result<DeviationReport> {
    let mut rows = Vec::new();
    let mut unmatched = Vec::new();
    for c in computed {
        match reference.find(&c.label, c.kind) {
            Some(r) => {
                let delta = c.value_ev - r.value_ev;
                let abs = delta.abs();
                rows.push(DeviationRow {
                    label: c.label.clone(),
                    kind: c.kind,
                    z: c.z,
                    model: c.model,
                    computed_ev: c.value_ev,
                    reference_ev: r.value_ev,
                    source: r.source.clone(),
                    delta_ev: delta,
                    abs_dev_ev: abs,
                    rel_dev: if r.value_ev != 0.0 {
                        abs / r.value_ev.abs()
                    } else {
                        f64::INFINITY
                    },
                    within_tolerance: abs <= tolerance_ev,
                });
            }
            None => unmatched.push(c.clone()),
        }
    }
    if rows.is_empty() {
        return Err(Error::NoOverlap);
    }
    rows.sort_by(|a, b| {
        sort_key(a.z, &a.label, a.model)
            .cmp(&sort_key(b.z, &b.label, b.model))
            .then(a.kind.cmp(&b.kind))
    });
    unmatched.sort_by(|a, b| sort_key(a.z, &a.label, a.model).cmp(&sort_key(b.z, &b.label, b.model)));
    let max = rows.iter().fold(0.0_f64, |m, r| m.max(r.abs_dev_ev));
    let mean = rows.iter().map(|r| r.abs_dev_ev).sum::<f64>() / rows.len() as f64;
    let annotations = anomaly_annotations(&rows);
    Ok(DeviationReport {
        tolerance_ev,
        summary: Summary {
            matched: rows.len(),
            max_abs_dev_ev: max,
            mean_abs_dev_ev: mean,
        },
        rows,
        unmatched,
        annotations,
    })
}

/// Known anomaly of the screened models for an ionization-potential row, if any.
pub fn anomaly_note(label: &str, model: ModelKind) -> Option<&'static str> {
    match (label, model) {
        ("He", ModelKind::ConstantScreening) => Some(
            "He anomaly: the constant-screening pipeline gives ~19.80 eV against a published \
             24.76 eV; the published helium value relies on a separate treatment not \
             reproduced here",
        ),
        ("He", ModelKind::VaryingScreening) => Some(
            "He anomaly: the varying-screening pipeline gives ~22.41 eV against a published \
             35.21 eV; helium is a known failure of this model",
        ),
        ("Mg", ModelKind::ConstantScreening) => Some(
            "Mg anomaly: tabulated m/n = 2/12 gives ~5.97 eV; the published 8.95 eV \
             corresponds to m/n = 3/12 (use --m-override Mg=3)",
        ),
        ("Mg", ModelKind::VaryingScreening) => Some(
            "Mg anomaly: tabulated m/n = 2/12 gives ~5.73 eV; the published 8.59 eV \
             corresponds to m/n = 3/12 (use --m-override Mg=3)",
        ),
        _ => None,
    }
}

fn anomaly_annotations(rows: &[DeviationRow]) -> Vec<Annotation> {
    rows.iter()
        .filter(|r| r.kind == QuantityKind::Ip)
        .filter_map(|row| {
            anomaly_note(&row.label, row.model).map(|note| Annotation {
                label: row.label.clone(),
                model: row.model,
                note: note.to_owned(),
            })
        })
        .collect()
}

impl DeviationReport {
    pub fn annotation_for(&self, label: &str, model: ModelKind) -> Option<&Annotation> {
        self.annotations
            .iter()
            .find(|a| a.label == label && a.model == model)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
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
        ])?;
        for r in &self.rows {
            let note = self
                .annotation_for(&r.label, r.model)
                .filter(|_| r.kind == QuantityKind::Ip)
                .map(|a| a.note.clone())
                .unwrap_or_default();
            w.write_record([
                r.label.clone(),
                r.kind.as_str().to_owned(),
                r.z.to_string(),
                r.model.tag().to_owned(),
                format!("{:.6}", r.computed_ev),
                format!("{:.6}", r.reference_ev),
                r.source.clone(),
                format!("{:.6}", r.delta_ev),
                format!("{:.6}", r.abs_dev_ev),
                format!("{:.6}", r.rel_dev),
                r.within_tolerance.to_string(),
                note,
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// One row of the closed-form versus quadrature comparison for zeta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaMapRow {
    pub z: u32,
    pub r: f64,
    pub zeta_closed_form: f64,
    pub oracle_active: f64,
    pub oracle_passive: f64,
    pub divergent_regime: bool,
}

/// Closed-form zeta next to both quadrature orientations on a `(Z, r)` grid.
pub fn zeta_deviation_map(
    zs: &[u32],
    rs: &[f64],
    truncation: &ZetaTruncation,
) -> Result<Vec<ZetaMapRow>> {
    if let Some(&bad) = rs.iter().find(|&&r| !(r > 0.0)) {
        return Err(Error::NonPositiveRadius(bad));
    }
    let mut rows = Vec::with_capacity(zs.len() * rs.len());
    for &z in zs {
        for &r in rs {
            rows.push(ZetaMapRow {
                z,
                r,
                zeta_closed_form: zeta(z, r)?,
                oracle_active: zeta_quadrature_oracle(z, r, truncation, Orientation::ActiveNumerator)?,
                oracle_passive: zeta_quadrature_oracle(z, r, truncation, Orientation::PassiveNumerator)?,
                divergent_regime: f64::from(z) * r < DIVERGENT_ZR,
            });
        }
    }
    Ok(rows)
}

pub fn write_zeta_map_csv<W: Write>(rows: &[ZetaMapRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "Z",
        "r",
        "zeta_closed_form",
        "oracle_active",
        "oracle_passive",
        "divergent_regime",
    ])?;
    for row in rows {
        w.write_record([
            row.z.to_string(),
            format!("{}", row.r),
            format!("{:.9}", row.zeta_closed_form),
            format!("{:.9}", row.oracle_active),
            format!("{:.9}", row.oracle_passive),
            row.divergent_regime.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables() {
        let (t1, t2) = bundled_reference().unwrap();
        assert_eq!(t1.rows.len(), 11);
        assert!(t1.rows.iter().all(|r| r.kind == QuantityKind::Ip));
        assert_eq!(t1.find("Li", QuantityKind::Ip).unwrap().value_ev, 5.39);
        assert_eq!(t2.rows.len(), 9);
        assert_eq!(t2.find("Li 2p", QuantityKind::Level).unwrap().value_ev, -3.542);
    }

    #[test]
    fn empty_input_is_a_parse_error() {
        assert!(matches!(
            ReferenceTable::parse("".as_bytes()),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            ReferenceTable::parse("label,kind,value_eV,source\n".as_bytes()),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn malformed_rows_report_position() {
        let text = "label,kind,value_eV,source\nLi,IP,5.39,ref\nBe,IP,abc,ref\n";
        match ReferenceTable::parse(text.as_bytes()) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = "label,kind,value_eV,source\nLi,energy,5.39,ref\n";
        assert!(matches!(
            ReferenceTable::parse(text.as_bytes()),
            Err(Error::Parse { line: 2, column: 2, .. })
        ));
        let text = "label,kind,value_eV,source\nLi,IP,5.39\n";
        assert!(matches!(
            ReferenceTable::parse(text.as_bytes()),
            Err(Error::Parse { .. })
        ));
        let text = "name,kind,value_eV,source\nLi,IP,5.39,ref\n";
        assert!(matches!(
            ReferenceTable::parse(text.as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn duplicates_rejected() {
        let text = "label,kind,value_eV,source\nLi,IP,5.39,ref\nLi,IP,5.40,ref\n";
        assert!(matches!(
            ReferenceTable::parse(text.as_bytes()),
            Err(Error::DuplicateLabel { .. })
        ));
        // same label from another source is fine
        let text = "label,kind,value_eV,source\nLi,IP,5.39,ref\nLi,IP,5.40,other\n";
        assert_eq!(ReferenceTable::parse(text.as_bytes()).unwrap().rows.len(), 2);
    }

    fn row(label: &str, z: u32, model: ModelKind, value: f64) -> ComputedRow {
        ComputedRow {
            label: label.into(),
            kind: QuantityKind::Ip,
            z,
            model,
            value_ev: value,
        }
    }

    #[test]
    fn li_deviation() {
        let (t1, _) = bundled_reference().unwrap();
        let report = build_report(&[row("Li", 3, ModelKind::ConstantScreening, 5.50)], &t1).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert!((report.rows[0].abs_dev_ev - 0.11).abs() < 1e-12);
        assert!((report.rows[0].rel_dev - 0.11 / 5.39).abs() < 1e-12);
    }

    #[test]
    fn level_deviation() {
        let (_, t2) = bundled_reference().unwrap();
        let c = ComputedRow {
            label: "Li 2s".into(),
            kind: QuantityKind::Level,
            z: 3,
            model: ModelKind::VaryingScreening,
            value_ev: -4.977,
        };
        let report = build_report(&[c], &t2).unwrap();
        assert!((report.rows[0].abs_dev_ev - 0.413).abs() < 1e-12);
    }

    #[test]
    fn ordering_unmatched_and_overlap() {
        let (t1, _) = bundled_reference().unwrap();
        let computed = vec![
            row("Na", 11, ModelKind::VaryingScreening, 5.3),
            row("H", 1, ModelKind::ConstantScreening, 13.6),
            row("Be", 4, ModelKind::VaryingScreening, 8.9),
            row("Be", 4, ModelKind::ConstantScreening, 9.4),
        ];
        let report = build_report(&computed, &t1).unwrap();
        let order: Vec<(&str, ModelKind)> =
            report.rows.iter().map(|r| (r.label.as_str(), r.model)).collect();
        assert_eq!(
            order,
            vec![
                ("Be", ModelKind::ConstantScreening),
                ("Be", ModelKind::VaryingScreening),
                ("Na", ModelKind::VaryingScreening)
            ]
        );
        assert_eq!(report.unmatched.len(), 1);
        assert_eq!(report.unmatched[0].label, "H");
        assert!(matches!(
            build_report(&computed[1..2], &t1),
            Err(Error::NoOverlap)
        ));
    }

    #[test]
    fn self_comparison_is_zero() {
        let computed = vec![
            row("He", 2, ModelKind::ConstantScreening, 19.8),
            row("Li", 3, ModelKind::ConstantScreening, 5.503),
        ];
        let table = ReferenceTable::from_computed(&computed, "self");
        let report = build_report(&computed, &table).unwrap();
        assert!(report.rows.iter().all(|r| r.abs_dev_ev == 0.0));
        assert_eq!(report.summary.max_abs_dev_ev, 0.0);
        assert!(report.annotation_for("He", ModelKind::ConstantScreening).is_some());
    }

    #[test]
    fn anomalies_flagged() {
        let (t1, _) = bundled_reference().unwrap();
        let computed = vec![
            row("Mg", 12, ModelKind::ConstantScreening, 5.97),
            row("Li", 3, ModelKind::ConstantScreening, 5.50),
        ];
        let report = build_report(&computed, &t1).unwrap();
        assert!(report.annotation_for("Mg", ModelKind::ConstantScreening).is_some());
        assert!(report.annotation_for("Li", ModelKind::ConstantScreening).is_none());
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("Mg anomaly"));
        assert!(text.lines().next().unwrap().starts_with("label,kind,Z,model"));
    }

    #[test]
    fn zeta_map_examples() {
        let rows = zeta_deviation_map(&[1, 3], &[0.01, 1.0, 10.0], &ZetaTruncation::exact()).unwrap();
        assert_eq!(rows.len(), 6);
        let at = |z: u32, r: f64| rows.iter().find(|x| x.z == z && x.r == r).unwrap();
        let far = at(3, 10.0);
        assert!((far.zeta_closed_form - 1.0).abs() < 1e-12);
        assert!((far.oracle_active - 1.0).abs() < 1e-2);
        assert!(!far.divergent_regime);
        let near = at(1, 0.01);
        assert!(near.zeta_closed_form > 1.0);
        assert!(near.oracle_active <= 1.0);
        assert!(near.divergent_regime);
        assert!((at(3, 1.0).zeta_closed_form - 0.988439).abs() < 1e-6);
        assert!(zeta_deviation_map(&[1], &[0.0], &ZetaTruncation::exact()).is_err());
    }
}
