//! CSV and JSON serialisation of sweeps and figure datasets.
//!
//! Floats are written with 17 significant digits, so they parse back to
//! the same bits. Files are replaced atomically.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::sweep::{FigureData, FigureId, RegionDataset, SweepSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidRequest(format!(
                "unknown output format `{other}`"
            ))),
        }
    }
}

/// 17 significant digits; fixed-point for decimal exponents in `[-5, 17)`.
pub fn format_sig17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0" } else { "0.0" }.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if exp >= 0 {
        let split = exp as usize + 1;
        let (int, frac) = digits.split_at(split);
        if frac.is_empty() {
            format!("{int}.0")
        } else {
            format!("{int}.{frac}")
        }
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    format!("{sign}{body}")
}

fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

pub fn series_to_csv(series: &SweepSeries) -> String {
    csv(
        "phi,delta,entropy_bits",
        series.rows.iter().map(|r| {
            vec![
                format_sig17(r.phi),
                format_sig17(r.delta),
                format_sig17(r.entropy),
            ]
        }),
    )
}

fn series_value(series: &SweepSeries) -> Value {
    json!({
        "metadata": series.metadata,
        "columns": ["phi", "delta", "entropy_bits"],
        "rows": series.rows.iter().map(|r| [r.phi, r.delta, r.entropy]).collect::<Vec<_>>(),
    })
}

pub fn series_to_json(series: &SweepSeries) -> Result<String> {
    Ok(serde_json::to_string_pretty(&series_value(series))?)
}

pub fn region_to_csv(region: &RegionDataset) -> String {
    csv(
        "u,v,ultra",
        region
            .speeds
            .iter()
            .zip(&region.ultra)
            .flat_map(|(&u, row)| {
                region
                    .speeds
                    .iter()
                    .zip(row)
                    .map(move |(&v, &ultra)| vec![format_sig17(u), format_sig17(v), flag(ultra)])
            }),
    )
}

pub fn figure_to_csv(data: &FigureData) -> String {
    match data {
        FigureData::AngleVsSpeed(curves) => csv(
            "phi,u,delta",
            curves.iter().flat_map(|c| {
                c.points.iter().map(|p| {
                    vec![
                        format_sig17(c.parameter),
                        format_sig17(p[0]),
                        format_sig17(p[1]),
                    ]
                })
            }),
        ),
        FigureData::AngleVsBoostingAngle(curves) => csv(
            "speed,phi,delta",
            curves.iter().flat_map(|c| {
                c.points.iter().map(|p| {
                    vec![
                        format_sig17(c.parameter),
                        format_sig17(p[0]),
                        format_sig17(p[1]),
                    ]
                })
            }),
        ),
        FigureData::Region(region) => region_to_csv(region),
        FigureData::Entanglement(series) => series_to_csv(series),
        FigureData::AngleWithCrossings { rows, .. } => csv(
            "phi,delta,crossing",
            rows.iter()
                .map(|r| vec![format_sig17(r.phi), format_sig17(r.delta), flag(r.crossing)]),
        ),
    }
}

pub fn figure_to_json(id: FigureId, data: &FigureData) -> Result<String> {
    let curves = |key: &str, cs: &[crate::sweep::Curve]| {
        cs.iter()
            .map(|c| json!({ key: c.parameter, "points": c.points }))
            .collect::<Vec<_>>()
    };
    let mut value = match data {
        FigureData::AngleVsSpeed(cs) => json!({
            "columns": ["u", "delta"],
            "curves": curves("phi", cs),
        }),
        FigureData::AngleVsBoostingAngle(cs) => json!({
            "columns": ["phi", "delta"],
            "curves": curves("speed", cs),
        }),
        FigureData::Region(region) => serde_json::to_value(region)?,
        FigureData::Entanglement(series) => series_value(series),
        FigureData::AngleWithCrossings {
            speed,
            rows,
            crossings,
        } => json!({
            "speed": speed,
            "crossings": crossings,
            "columns": ["phi", "delta", "crossing"],
            "rows": rows.iter().map(|r| json!([r.phi, r.delta, r.crossing])).collect::<Vec<_>>(),
        }),
    };
    value["figure"] = json!(id.label());
    value["version"] = json!(crate::sweep::VERSION);
    Ok(serde_json::to_string_pretty(&value)?)
}

/// Writes `contents` to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::Speed;
    use crate::states::{HelicityClass, PreparationAngle};
    use crate::sweep::{emit_figure, sweep_entanglement, FigureOverrides, SweepRequest};
    use proptest::prelude::*;

    fn small_series() -> SweepSeries {
        let s = Speed::new(0.95).unwrap();
        let req = SweepRequest {
            samples: 5,
            ..SweepRequest::full_range(
                s,
                s,
                PreparationAngle::new(0.6).unwrap(),
                HelicityClass::Unequal,
            )
        };
        sweep_entanglement(&req).unwrap()
    }

    #[test]
    fn sig17_examples() {
        assert_eq!(format_sig17(0.0), "0.0");
        assert_eq!(format_sig17(1.0), "1.0000000000000000");
        assert_eq!(format_sig17(std::f64::consts::PI), "3.1415926535897931");
        assert_eq!(format_sig17(-0.00125), "-0.0012500000000000000");
        assert_eq!(format_sig17(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_sig17(1e17), "1.0000000000000000e17");
        assert_eq!(format_sig17(12345678901234567.0), "12345678901234568.0");
    }

    proptest! {
        #[test]
        fn sig17_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let s = format_sig17(x);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn csv_layout() {
        let text = series_to_csv(&small_series());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "phi,delta,entropy_bits");
        assert_eq!(lines.len(), 6);
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
        assert!(lines[5].starts_with("3.1415926535897931,0.0,"));
    }

    #[test]
    fn csv_round_trips_bits() {
        let series = small_series();
        let text = series_to_csv(&series);
        for (line, row) in text.lines().skip(1).zip(&series.rows) {
            let vals: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
            assert_eq!(vals, vec![row.phi, row.delta, row.entropy]);
        }
    }

    #[test]
    fn json_round_trips_rows_and_metadata() {
        let series = small_series();
        let v: Value = serde_json::from_str(&series_to_json(&series).unwrap()).unwrap();
        assert_eq!(v["metadata"]["class"], "xi");
        assert_eq!(v["metadata"]["samples"], 5);
        assert_eq!(v["metadata"]["version"], crate::sweep::VERSION);
        let rows = v["rows"].as_array().unwrap();
        for (r, row) in rows.iter().zip(&series.rows) {
            assert_eq!(r[2].as_f64().unwrap(), row.entropy);
        }
        let meta: crate::sweep::SweepMetadata =
            serde_json::from_value(v["metadata"].clone()).unwrap();
        assert_eq!(meta, series.metadata);
    }

    #[test]
    fn figure_headers() {
        let o = FigureOverrides {
            samples: Some(3),
            ..Default::default()
        };
        let expected = [
            (FigureId::Fig1a, "phi,u,delta", 9),
            (FigureId::Fig1b, "speed,phi,delta", 12),
            (FigureId::Fig1c, "u,v,ultra", 9),
            (FigureId::Fig3a, "phi,delta,entropy_bits", 3),
            (FigureId::Fig3b, "phi,delta,crossing", 5),
            (FigureId::Fig3c, "phi,delta,entropy_bits", 3),
        ];
        for (id, header, rows) in expected {
            let data = emit_figure(id, &o).unwrap();
            let text = figure_to_csv(&data);
            assert_eq!(text.lines().next().unwrap(), header, "{id}");
            assert_eq!(text.lines().count(), rows + 1, "{id}");
            let v: Value = serde_json::from_str(&figure_to_json(id, &data).unwrap()).unwrap();
            assert_eq!(v["figure"], id.label());
        }
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        std::fs::write(&path, "old").unwrap();
        write_atomic(&path, "new\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "new\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn atomic_write_into_missing_directory_fails() {
        let dir = tempfile::tempdir().unwrap();
        assert!(write_atomic(&dir.path().join("nope/out.csv"), "x").is_err());
    }
}
