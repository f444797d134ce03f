//! Tables shaped for external plotting. Nothing is rendered here.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use fragsim_core::analytic::gumbel_limit_cdf;
use fragsim_core::predictors::{m_window, M_window, PredictorWindow};
use fragsim_core::statistics::expected_count;
use fragsim_core::ModelParams;
use serde::Serialize;

use crate::config::ExperimentSpec;
use crate::error::{HarnessError, Result};
use crate::records::{read_records, table_writer, RecordTable, SCHEMA_VERSION};
use crate::run::points_path;
use crate::sidecar::Sidecar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotKind {
    /// `m_t` with its window, from a gillespie record.
    Staircase,
    /// `M_t` with its window, from a gillespie record.
    StaircaseMax,
    /// Empirical CDF of `tau` at the last generation vs the limit law.
    Gumbel,
    /// Binned point intensity at the last generation vs `e^{-s} / phi_inf`.
    Intensity,
}

impl PlotKind {
    fn engine(self) -> &'static str {
        match self {
            PlotKind::Staircase | PlotKind::StaircaseMax => "gillespie",
            PlotKind::Gumbel | PlotKind::Intensity => "brw",
        }
    }

    fn header(self) -> &'static [&'static str] {
        match self {
            PlotKind::Staircase | PlotKind::StaircaseMax => {
                &["schema_version", "replica", "t", "value", "lo_int", "hi_int"]
            }
            PlotKind::Gumbel => &["schema_version", "s", "empirical_cdf", "limit_cdf"],
            PlotKind::Intensity => &["schema_version", "s_lo", "s_hi", "empirical_intensity", "limit_intensity"],
        }
    }
}

#[derive(Serialize)]
struct StairRow {
    schema_version: u32,
    replica: u64,
    t: f64,
    value: u32,
    /// Empty where the window is undefined (`t <= e`).
    lo_int: Option<i64>,
    hi_int: Option<i64>,
}

#[derive(Serialize)]
struct CdfRow {
    schema_version: u32,
    s: f64,
    empirical_cdf: f64,
    limit_cdf: f64,
}

#[derive(Serialize)]
struct IntensityRow {
    schema_version: u32,
    s_lo: f64,
    s_hi: f64,
    empirical_intensity: f64,
    limit_intensity: f64,
}

/// Upper edge of the intensity histogram; the limit mass beyond it is
/// below `e^-6 / phi_inf`.
pub const INTENSITY_UPPER: f64 = 6.0;
pub const INTENSITY_BIN: f64 = 0.5;

fn simulate_spec(input: &Path) -> Result<ExperimentSpec> {
    Sidecar::read_for(input)?
        .simulate_spec()
        .cloned()
        .ok_or_else(|| HarnessError::Record(format!("{} is not a simulate record", input.display())))
}

fn read_table(path: &Path) -> Result<RecordTable> {
    let f = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_records(BufReader::new(f))
}

/// Writes the `kind` table derived from the record at `input` to `out`.
/// An empty record yields a header-only table.
pub fn emit_plotdata<W: Write>(input: &Path, kind: PlotKind, out: W) -> Result<u64> {
    let table = read_table(input)?;
    if table.kind() != kind.engine() {
        return Err(HarnessError::Usage(format!(
            "plot kind {kind:?} needs a {} record, got {}",
            kind.engine(),
            table.kind()
        )));
    }
    let mut w = table_writer(out, kind.header())?;
    let mut rows = 0u64;
    let v = SCHEMA_VERSION;
    if !table.is_empty() {
        let spec = simulate_spec(input)?;
        let params = spec.params()?;
        match (&table, kind) {
            (RecordTable::Gillespie(recs), PlotKind::Staircase | PlotKind::StaircaseMax) => {
                let window = |t: f64| -> Result<Option<PredictorWindow>> {
                    if t <= std::f64::consts::E {
                        return Ok(None);
                    }
                    Ok(Some(match kind {
                        PlotKind::Staircase => m_window(&params, t)?,
                        _ => M_window(&params, t)?,
                    }))
                };
                for r in recs {
                    let win = window(r.event_time)?;
                    w.serialize(StairRow {
                        schema_version: v,
                        replica: r.replica,
                        t: r.event_time,
                        value: if kind == PlotKind::Staircase { r.m_t } else { r.M_t },
                        lo_int: win.map(|x| x.lo_int),
                        hi_int: win.map(|x| x.hi_int),
                    })?;
                    rows += 1;
                }
            }
            (RecordTable::Brw(recs), PlotKind::Gumbel) => {
                let n = recs.iter().map(|r| r.n).max().unwrap_or(0);
                let mut tau: Vec<f64> = recs.iter().filter(|r| r.n == n).map(|r| r.tau).collect();
                tau.sort_by(f64::total_cmp);
                let total = tau.len() as f64;
                for (i, &s) in tau.iter().enumerate() {
                    w.serialize(CdfRow {
                        schema_version: v,
                        s,
                        empirical_cdf: (i + 1) as f64 / total,
                        limit_cdf: gumbel_limit_cdf(params.q(), s)?,
                    })?;
                    rows += 1;
                }
            }
            (RecordTable::Brw(recs), PlotKind::Intensity) => {
                rows = intensity_rows(&mut w, &params, &spec, recs.iter().map(|r| r.n).max().unwrap_or(0), input)?;
            }
            _ => unreachable!("engine checked above"),
        }
    }
    w.flush().map_err(|e| HarnessError::io("<plotdata>", e))?;
    Ok(rows)
}

fn intensity_rows<W: Write>(
    w: &mut csv::Writer<W>,
    params: &ModelParams,
    spec: &ExperimentSpec,
    n: u32,
    input: &Path,
) -> Result<u64> {
    if !spec.points {
        return Err(HarnessError::Usage(format!(
            "{} was simulated without --points; rerun with it for intensity data",
            input.display()
        )));
    }
    let pts_path = points_path(input);
    let RecordTable::Points(points) = read_table(&pts_path)? else {
        return Err(HarnessError::Record(format!("{} is not a points record", pts_path.display())));
    };
    let replicas = spec.replicas as f64;
    let mut rows = 0;
    let mut lo = spec.floor;
    while lo < INTENSITY_UPPER {
        let hi = lo + INTENSITY_BIN;
        let hits = points.iter().filter(|p| p.n == n && p.j >= lo && p.j < hi).count() as f64;
        w.serialize(IntensityRow {
            schema_version: SCHEMA_VERSION,
            s_lo: lo,
            s_hi: hi,
            empirical_intensity: hits / replicas / INTENSITY_BIN,
            limit_intensity: expected_count(params.q(), lo, hi)? / INTENSITY_BIN,
        })?;
        rows += 1;
        lo = hi;
    }
    Ok(rows)
}

/// [`emit_plotdata`] into a file.
pub fn write_plotdata(input: &Path, kind: PlotKind, out: &Path) -> Result<u64> {
    let f = File::create(out).map_err(|e| HarnessError::io(out, e))?;
    emit_plotdata(input, kind, BufWriter::new(f))
}
