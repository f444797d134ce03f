//! Versioned CSV record formats. Every file starts with a
//! `schema_version` column; floats are written in shortest round-trip form.

use std::io::{Read, Write};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrwRow {
    pub schema_version: u32,
    pub replica: u64,
    pub n: u32,
    pub k_min: f64,
    pub k_max: f64,
    pub tau: f64,
}

/// One point `J(v) = K(v) - gamma n` above the floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    pub schema_version: u32,
    pub replica: u64,
    pub n: u32,
    pub j: f64,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GillespieRow {
    pub schema_version: u32,
    pub replica: u64,
    pub event_time: f64,
    pub m_t: u32,
    pub M_t: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpineRow {
    pub schema_version: u32,
    pub replica: u64,
    pub i: u32,
    pub split_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub schema_version: u32,
    pub q: f64,
    pub n: u32,
    pub t: f64,
    pub survival: f64,
    pub abs_error: f64,
}

pub const BRW_HEADER: &[&str] = &["schema_version", "replica", "n", "k_min", "k_max", "tau"];
pub const POINT_HEADER: &[&str] = &["schema_version", "replica", "n", "j"];
pub const GILLESPIE_HEADER: &[&str] = &["schema_version", "replica", "event_time", "m_t", "M_t"];
pub const SPINE_HEADER: &[&str] = &["schema_version", "replica", "i", "split_time"];
pub const TAIL_HEADER: &[&str] = &["schema_version", "q", "n", "t", "survival", "abs_error"];

/// A parsed record file, identified by its header.
#[derive(Debug, Clone, PartialEq)]
pub enum RecordTable {
    Brw(Vec<BrwRow>),
    Points(Vec<PointRow>),
    Gillespie(Vec<GillespieRow>),
    Spine(Vec<SpineRow>),
    Tails(Vec<TailRow>),
}

impl RecordTable {
    pub fn kind(&self) -> &'static str {
        match self {
            RecordTable::Brw(_) => "brw",
            RecordTable::Points(_) => "points",
            RecordTable::Gillespie(_) => "gillespie",
            RecordTable::Spine(_) => "spine",
            RecordTable::Tails(_) => "tails",
        }
    }

    pub fn len(&self) -> usize {
        match self {
            RecordTable::Brw(r) => r.len(),
            RecordTable::Points(r) => r.len(),
            RecordTable::Gillespie(r) => r.len(),
            RecordTable::Spine(r) => r.len(),
            RecordTable::Tails(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Writes rows with a header even when `rows` is empty.
pub fn write_rows<W: Write, T: Serialize>(out: W, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = table_writer(out, header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| HarnessError::io("<csv>", e))?;
    Ok(())
}

/// CSV writer whose header has already been emitted; rows are then added
/// with `serialize`.
pub fn table_writer<W: Write>(out: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    Ok(w)
}

fn parse_rows<T: DeserializeOwned>(rdr: &mut csv::Reader<impl Read>, header: &csv::StringRecord) -> Result<Vec<T>> {
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row: T = rec.deserialize(Some(header))?;
        rows.push(row);
    }
    Ok(rows)
}

fn check_versions<T>(rows: &[T], version: impl Fn(&T) -> u32) -> Result<()> {
    match rows.iter().map(version).find(|&v| v != SCHEMA_VERSION) {
        Some(v) => Err(HarnessError::Record(format!(
            "schema_version {v} is not supported (expected {SCHEMA_VERSION})"
        ))),
        None => Ok(()),
    }
}

/// Reads any record file written by this crate, dispatching on the header.
pub fn read_records<R: Read>(input: R) -> Result<RecordTable> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rdr.headers()?.clone();
    let names: Vec<&str> = header.iter().collect();
    let table = if names == BRW_HEADER {
        let rows: Vec<BrwRow> = parse_rows(&mut rdr, &header)?;
        check_versions(&rows, |r| r.schema_version)?;
        RecordTable::Brw(rows)
    } else if names == POINT_HEADER {
        let rows: Vec<PointRow> = parse_rows(&mut rdr, &header)?;
        check_versions(&rows, |r| r.schema_version)?;
        RecordTable::Points(rows)
    } else if names == GILLESPIE_HEADER {
        let rows: Vec<GillespieRow> = parse_rows(&mut rdr, &header)?;
        check_versions(&rows, |r| r.schema_version)?;
        RecordTable::Gillespie(rows)
    } else if names == SPINE_HEADER {
        let rows: Vec<SpineRow> = parse_rows(&mut rdr, &header)?;
        check_versions(&rows, |r| r.schema_version)?;
        RecordTable::Spine(rows)
    } else if names == TAIL_HEADER {
        let rows: Vec<TailRow> = parse_rows(&mut rdr, &header)?;
        check_versions(&rows, |r| r.schema_version)?;
        RecordTable::Tails(rows)
    } else {
        return Err(HarnessError::Record(format!("unrecognised header {names:?}")));
    };
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_bits() {
        let rows = vec![
            BrwRow { schema_version: 1, replica: 0, n: 3, k_min: 0.1, k_max: 1.0 / 3.0, tau: -2.5e-300 },
            BrwRow { schema_version: 1, replica: 1, n: 0, k_min: 7.0, k_max: 7.0, tau: 7.0 },
        ];
        let mut buf = Vec::new();
        write_rows(&mut buf, BRW_HEADER, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("schema_version,replica,n,k_min,k_max,tau\n"));
        assert!(text.contains("0.1,"));
        assert_eq!(read_records(buf.as_slice()).unwrap(), RecordTable::Brw(rows));
    }

    #[test]
    fn header_only_and_kinds() {
        let mut buf = Vec::new();
        write_rows::<_, GillespieRow>(&mut buf, GILLESPIE_HEADER, &[]).unwrap();
        let t = read_records(buf.as_slice()).unwrap();
        assert_eq!(t.kind(), "gillespie");
        assert!(t.is_empty());
    }

    #[test]
    fn rejects_unknown_and_bad_versions() {
        assert!(read_records("a,b\n1,2\n".as_bytes()).is_err());
        assert!(read_records("schema_version,replica,i,split_time\n2,0,0,1.0\n".as_bytes()).is_err());
        assert!(read_records("schema_version,replica,i,split_time\n1,0,zero,1.0\n".as_bytes()).is_err());
        assert!(read_records("".as_bytes()).is_err());
    }
}
