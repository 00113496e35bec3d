//! Records CSV and summary JSON.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::campaign::DropRecord;
use crate::error::HarnessError;

pub const RECORDS_HEADER: [&str; 8] = ["drop", "method", "ue", "q", "se_bps_hz", "ee_bit_j", "outage", "outer_var"];

/// 17 significant digits: enough for every `f64` to parse back exactly.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_records_to<W: Write>(out: W, records: &[DropRecord]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORDS_HEADER)?;
    for r in records {
        w.write_record([
            r.drop.to_string(),
            r.method.clone(),
            r.ue.to_string(),
            format_float(r.q),
            format_float(r.se),
            format_float(r.ee),
            r.outage.to_string(),
            r.outer_var.map(format_float).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_records(path: &Path, records: &[DropRecord]) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(HarnessError::io(path))?;
    write_records_to(BufWriter::new(file), records).map_err(HarnessError::csv(path))
}

pub fn read_records(path: &Path) -> Result<Vec<DropRecord>, HarnessError> {
    let mut reader = csv::Reader::from_path(path).map_err(HarnessError::csv(path))?;
    let header = reader.headers().map_err(HarnessError::csv(path))?;
    if header.iter().ne(RECORDS_HEADER) {
        return Err(HarnessError::Format {
            path: path.into(),
            message: format!("expected header {}", RECORDS_HEADER.join(",")),
        });
    }
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(HarnessError::csv(path))?;
        let line = i + 2;
        let bad = |column: &str| HarnessError::Format {
            path: path.into(),
            message: format!("line {line}: malformed {column}"),
        };
        let float = |idx: usize, column: &str| row[idx].parse::<f64>().map_err(|_| bad(column));
        records.push(DropRecord {
            drop: row[0].parse().map_err(|_| bad("drop"))?,
            method: row[1].to_string(),
            ue: row[2].parse().map_err(|_| bad("ue"))?,
            q: float(3, "q")?,
            se: float(4, "se_bps_hz")?,
            ee: float(5, "ee_bit_j")?,
            outage: row[6].parse().map_err(|_| bad("outage"))?,
            outer_var: if row[7].is_empty() {
                None
            } else {
                Some(float(7, "outer_var")?)
            },
            total_ee: None,
        });
    }
    Ok(records)
}

/// Pretty-printed JSON. `serde_json` prints the shortest string that parses
/// back to the same `f64`, so values round-trip exactly.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(HarnessError::io(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(std::io::Error::from)
        .and_then(|_| w.write_all(b"\n"))
        .and_then(|_| w.flush())
        .map_err(HarnessError::io(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(drop: u64, outer_var: Option<f64>) -> DropRecord {
        DropRecord {
            drop,
            method: "MaxMinEE[nu=0.7]".into(),
            ue: 3,
            q: 0.1 + 0.2,
            se: 1.0 / 3.0,
            ee: 1.2345678901234567e9,
            outage: drop % 2 == 1,
            outer_var,
            total_ee: None,
        }
    }

    #[test]
    fn empty_records_write_header_only() {
        let mut buf = Vec::new();
        write_records_to(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "drop,method,ue,q,se_bps_hz,ee_bit_j,outage,outer_var\n");
    }

    #[test]
    fn records_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let records = vec![record(0, Some(0.7)), record(1, None), record(2, Some(f64::MIN_POSITIVE))];
        write_records(&path, &records).unwrap();
        let back = read_records(&path).unwrap();
        assert_eq!(back, records);
        let again = dir.path().join("r2.csv");
        write_records(&again, &back).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
    }

    #[test]
    fn wrong_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(matches!(read_records(&path), Err(HarnessError::Format { .. })));
    }

    #[test]
    fn missing_file_names_path() {
        let err = read_records(Path::new("/nonexistent/records.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/records.csv"));
    }
}
