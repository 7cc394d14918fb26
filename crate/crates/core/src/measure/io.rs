//! CSV and JSON encodings of [`DiscreteMeasure`].
//!
//! CSV: header `x0,...,x{d-1},w`, one atom per row.
//! JSON: `{"dim": d, "atoms": [{"x": [...], "w": ...}, ...]}`.

use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use super::{Atom, DiscreteMeasure, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureFormat {
    Csv,
    Json,
}

impl MeasureFormat {
    /// Guess from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(MeasureFormat::Csv),
            "json" => Some(MeasureFormat::Json),
            _ => None,
        }
    }
}

impl FromStr for MeasureFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(MeasureFormat::Csv),
            "json" => Ok(MeasureFormat::Json),
            other => Err(Error::Config(format!("unknown format {other:?}"))),
        }
    }
}

pub fn load_measure<R: Read>(source: R, format: MeasureFormat, normalize: bool) -> Result<DiscreteMeasure> {
    let measure = match format {
        MeasureFormat::Csv => read_csv(source)?,
        MeasureFormat::Json => serde_json::from_reader(source)?,
    };
    if normalize {
        measure.normalized()
    } else {
        Ok(measure)
    }
}

pub fn save_measure<W: Write>(measure: &DiscreteMeasure, sink: W, format: MeasureFormat) -> Result<()> {
    match format {
        MeasureFormat::Csv => write_csv(measure, sink),
        MeasureFormat::Json => {
            serde_json::to_writer(sink, measure)?;
            Ok(())
        }
    }
}

fn read_csv<R: Read>(source: R) -> Result<DiscreteMeasure> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let header = reader.headers()?.clone();
    let dim = header
        .len()
        .checked_sub(1)
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Format("CSV header needs at least one coordinate column and `w`".into()))?;
    for (i, name) in header.iter().take(dim).enumerate() {
        if name != format!("x{i}") {
            return Err(Error::Format(format!("expected column x{i}, found {name:?}")));
        }
    }
    if &header[dim] != "w" {
        return Err(Error::Format(format!("last column must be `w`, found {:?}", &header[dim])));
    }

    let mut atoms = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let values = record
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| Error::Format(format!("row {}: bad number {f:?}", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != dim + 1 {
            return Err(Error::Format(format!("row {}: expected {} fields", line + 1, dim + 1)));
        }
        let weight = values[dim];
        if !(weight >= 0.0) || !weight.is_finite() {
            return Err(Error::Format(format!("row {}: invalid weight {weight}", line + 1)));
        }
        let point = Point::new(values[..dim].to_vec())
            .map_err(|e| Error::Format(format!("row {}: {e}", line + 1)))?;
        atoms.push(Atom::new(point, weight));
    }
    DiscreteMeasure::new(dim, atoms)
}

fn write_csv<W: Write>(measure: &DiscreteMeasure, sink: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    let mut header: Vec<String> = (0..measure.dim()).map(|i| format!("x{i}")).collect();
    header.push("w".into());
    writer.write_record(&header)?;
    for atom in measure.atoms() {
        let row = atom.point.coords().iter().chain(std::iter::once(&atom.weight)).map(|v| v.to_string());
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, format: MeasureFormat, normalize: bool) -> Result<DiscreteMeasure> {
        load_measure(text.as_bytes(), format, normalize)
    }

    #[test]
    fn csv_single_atom() {
        let m = load("x0,x1,w\n0,0,1", MeasureFormat::Csv, false).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.len(), 1);
        assert_eq!(m.atoms()[0].weight, 1.0);
    }

    #[test]
    fn csv_normalizes() {
        let m = load("x0,w\n-1,2\n1,2\n", MeasureFormat::Csv, true).unwrap();
        assert_eq!(m.weights().collect::<Vec<_>>(), vec![0.5, 0.5]);
    }

    #[test]
    fn csv_rejects_bad_rows() {
        assert!(matches!(load("x0,w\n1,-2\n", MeasureFormat::Csv, false), Err(Error::Format(_))));
        assert!(matches!(load("x0,w\n1,2,3\n", MeasureFormat::Csv, false), Err(Error::Format(_))));
        assert!(matches!(load("x0,w\n1,abc\n", MeasureFormat::Csv, false), Err(Error::Format(_))));
        assert!(matches!(load("y,w\n1,1\n", MeasureFormat::Csv, false), Err(Error::Format(_))));
        assert!(matches!(load("w\n1\n", MeasureFormat::Csv, false), Err(Error::Format(_))));
    }

    #[test]
    fn json_mixed_dims_rejected() {
        let text = r#"{"dim": 2, "atoms": [{"x": [0, 0], "w": 0.5}, {"x": [1], "w": 0.5}]}"#;
        assert!(matches!(load(text, MeasureFormat::Json, false), Err(Error::Format(_))));
    }

    #[test]
    fn json_negative_weight_rejected() {
        let text = r#"{"dim": 1, "atoms": [{"x": [0], "w": -0.5}]}"#;
        assert!(matches!(load(text, MeasureFormat::Json, false), Err(Error::Format(_))));
    }

    #[test]
    fn csv_round_trip() {
        let m = load("x0,x1,w\n0.1,-2.5,0.3\n1e-7,3,0.7\n", MeasureFormat::Csv, false).unwrap();
        let mut buf = Vec::new();
        save_measure(&m, &mut buf, MeasureFormat::Csv).unwrap();
        assert_eq!(load(std::str::from_utf8(&buf).unwrap(), MeasureFormat::Csv, false).unwrap(), m);
    }

    #[test]
    fn format_from_path() {
        assert_eq!(MeasureFormat::from_path(Path::new("a/b.CSV")), Some(MeasureFormat::Csv));
        assert_eq!(MeasureFormat::from_path(Path::new("b.json")), Some(MeasureFormat::Json));
        assert_eq!(MeasureFormat::from_path(Path::new("b.txt")), None);
    }
}
