//! Executes an experiment and persists its records.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use fragsim_core::analytic::survival_kn;
use fragsim_core::simulator::{
    brw_sweep, frame_bytes, gillespie_run, projected_bytes, replicate_range, spine_sample,
    DEFAULT_BUDGET_BYTES,
};
use fragsim_core::Error as CoreError;

use crate::config::{Engine, ExperimentSpec};
use crate::error::{HarnessError, Result};
use crate::grid::TGrid;
use crate::records::*;
use crate::sidecar::{RunDescription, Sidecar, TailsSpec};

/// Environment variable capping frame memory, in bytes.
pub const BUDGET_ENV: &str = "FRAGSIM_BUDGET_BYTES";

/// Replicas simulated per parallel batch; bounds memory held before rows
/// are written.
pub const REPLICA_CHUNK: u64 = 256;

pub fn budget_from_env() -> Result<u64> {
    match std::env::var(BUDGET_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_BUDGET_BYTES),
        Err(e) => Err(HarnessError::Usage(format!("{BUDGET_ENV}: {e}"))),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| HarnessError::Usage(format!("{BUDGET_ENV}={v:?} is not a byte count"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub label: String,
    pub rows: u64,
    pub csv: PathBuf,
    pub sidecar: PathBuf,
    pub points: Option<PathBuf>,
    pub wall_clock_seconds: f64,
}

impl std::fmt::Display for RunSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} rows -> {} ({:.3} s)",
            self.label,
            self.rows,
            self.csv.display(),
            self.wall_clock_seconds
        )?;
        if let Some(p) = &self.points {
            write!(f, ", points -> {}", p.display())?;
        }
        Ok(())
    }
}

/// `<stem>.points.csv` next to the main output.
pub fn points_path(csv: &Path) -> PathBuf {
    csv.with_extension("points.csv")
}

/// Rejects runs whose memory estimate exceeds `budget` before any output
/// is created.
pub fn check_budget(spec: &ExperimentSpec, budget: u64) -> Result<()> {
    let params = spec.params()?;
    let required = match spec.engine {
        Engine::Brw => frame_bytes(spec.k, spec.n_max.unwrap_or(0)).unwrap_or(u128::MAX),
        Engine::Gillespie => projected_bytes(&params, spec.t_end.unwrap_or(0.0))?,
        Engine::Spine => 0,
    };
    if required > u128::from(budget) {
        return Err(CoreError::BudgetExceeded { required, budget }.into());
    }
    Ok(())
}

/// Streams the rows of `spec` to `out` (and point rows to `points`, when
/// given) in replica order. Returns the number of main rows.
pub fn write_simulation<W: Write, P: Write>(
    spec: &ExperimentSpec,
    budget: u64,
    out: W,
    points: Option<P>,
) -> Result<u64> {
    spec.validate()?;
    check_budget(spec, budget)?;
    let params = spec.params()?;
    let mut rows = 0u64;
    let v = SCHEMA_VERSION;
    match spec.engine {
        Engine::Brw => {
            let n_max = spec.n_max.unwrap_or(0);
            let floor = if points.is_some() { spec.floor } else { f64::INFINITY };
            let mut w = table_writer(out, BRW_HEADER)?;
            let mut pw = points.map(|p| table_writer(p, POINT_HEADER)).transpose()?;
            for start in (0..spec.replicas).step_by(REPLICA_CHUNK as usize) {
                let end = (start + REPLICA_CHUNK).min(spec.replicas);
                let batch = replicate_range(start..end, spec.seed, |s| {
                    brw_sweep(&params, n_max, s, floor, budget)
                });
                for (r, gens) in (start..end).zip(batch) {
                    for g in gens? {
                        w.serialize(BrwRow { schema_version: v, replica: r, n: g.n, k_min: g.k_min, k_max: g.k_max, tau: g.tau })?;
                        rows += 1;
                        if let Some(pw) = pw.as_mut() {
                            for &j in &g.points_above {
                                pw.serialize(PointRow { schema_version: v, replica: r, n: g.n, j })?;
                            }
                        }
                    }
                }
            }
            w.flush().map_err(|e| HarnessError::io("<output>", e))?;
            if let Some(mut pw) = pw {
                pw.flush().map_err(|e| HarnessError::io("<points>", e))?;
            }
        }
        Engine::Gillespie => {
            let t_end = spec.t_end.unwrap_or(0.0);
            let mut w = table_writer(out, GILLESPIE_HEADER)?;
            for start in (0..spec.replicas).step_by(REPLICA_CHUNK as usize) {
                let end = (start + REPLICA_CHUNK).min(spec.replicas);
                let batch = replicate_range(start..end, spec.seed, |s| {
                    gillespie_run(&params, t_end, s, budget)
                });
                for (r, run) in (start..end).zip(batch) {
                    for j in run?.trajectory {
                        w.serialize(GillespieRow { schema_version: v, replica: r, event_time: j.time, m_t: j.m, M_t: j.M })?;
                        rows += 1;
                    }
                }
            }
            w.flush().map_err(|e| HarnessError::io("<output>", e))?;
        }
        Engine::Spine => {
            let n = spec.n_max.unwrap_or(0);
            let mut w = table_writer(out, SPINE_HEADER)?;
            for start in (0..spec.replicas).step_by(REPLICA_CHUNK as usize) {
                let end = (start + REPLICA_CHUNK).min(spec.replicas);
                let batch = replicate_range(start..end, spec.seed, |s| spine_sample(&params, n, s));
                for (r, path) in (start..end).zip(batch) {
                    for (i, &split_time) in path.split_times.iter().enumerate() {
                        w.serialize(SpineRow { schema_version: v, replica: r, i: i as u32, split_time })?;
                        rows += 1;
                    }
                }
            }
            w.flush().map_err(|e| HarnessError::io("<output>", e))?;
        }
    }
    Ok(rows)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| HarnessError::io(path, e))?))
}

/// Runs `spec`, writing the CSV, optional points file and JSON sidecar.
pub fn run_simulation(spec: &ExperimentSpec, budget: u64) -> Result<RunSummary> {
    spec.validate()?;
    check_budget(spec, budget)?;
    let started = Instant::now();
    let out = create(&spec.out)?;
    let points = spec.points.then(|| points_path(&spec.out));
    let pw = points.as_deref().map(create).transpose()?;
    let rows = write_simulation(spec, budget, out, pw)?;
    let wall = started.elapsed().as_secs_f64();
    let sidecar = Sidecar::new(RunDescription::Simulate { spec: spec.clone() }, wall, rows)
        .write_for(&spec.out)?;
    Ok(RunSummary {
        label: format!("{} x{}", spec.engine.name(), spec.replicas),
        rows,
        csv: spec.out.clone(),
        sidecar,
        points,
        wall_clock_seconds: wall,
    })
}

/// Tail table `P(K_n > t)` over the grid.
pub fn write_tails<W: Write>(q: f64, n: u32, grid: &TGrid, out: W) -> Result<u64> {
    let mut w = table_writer(out, TAIL_HEADER)?;
    let mut rows = 0;
    for t in grid.values() {
        let e = survival_kn(q, n as usize, t)?;
        w.serialize(TailRow { schema_version: SCHEMA_VERSION, q, n, t, survival: e.value, abs_error: e.abs_error })?;
        rows += 1;
    }
    w.flush().map_err(|e| HarnessError::io("<output>", e))?;
    Ok(rows)
}

pub fn run_tails(q: f64, n: u32, t_grid: &str, out: &Path) -> Result<RunSummary> {
    let grid = TGrid::parse(t_grid)?;
    // Validate q before touching the filesystem.
    survival_kn(q, 0, 0.0).map_err(|e| HarnessError::spec("q", e.to_string()))?;
    let started = Instant::now();
    let rows = write_tails(q, n, &grid, create(out)?)?;
    let wall = started.elapsed().as_secs_f64();
    let spec = TailsSpec { q, n, t_grid: t_grid.to_string() };
    let sidecar = Sidecar::new(RunDescription::Tails { spec }, wall, rows).write_for(out)?;
    Ok(RunSummary {
        label: format!("tails q={q} n={n}"),
        rows,
        csv: out.to_path_buf(),
        sidecar,
        points: None,
        wall_clock_seconds: wall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(engine: Engine) -> ExperimentSpec {
        ExperimentSpec {
            k: 2,
            alpha: 1.0,
            engine,
            n_max: (engine != Engine::Gillespie).then_some(4),
            t_end: (engine == Engine::Gillespie).then_some(200.0),
            replicas: 3,
            seed: 42,
            floor: -5.0,
            out: "unused.csv".into(),
            points: false,
        }
    }

    fn body(spec: &ExperimentSpec) -> Vec<u8> {
        let mut buf = Vec::new();
        write_simulation(spec, DEFAULT_BUDGET_BYTES, &mut buf, None::<Vec<u8>>).unwrap();
        buf
    }

    #[test]
    fn root_only_brw_is_one_row() {
        let mut s = spec(Engine::Brw);
        s.n_max = Some(0);
        s.replicas = 1;
        let text = String::from_utf8(body(&s)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let draw = fragsim_core::simulator::SeedSpec::new(42, 0).rng().exp1();
        assert_eq!(lines[1], format!("1,0,0,{draw},{draw},{draw}"));
    }

    #[test]
    fn row_counts_and_determinism() {
        for e in [Engine::Brw, Engine::Gillespie, Engine::Spine] {
            let s = spec(e);
            let a = body(&s);
            assert_eq!(a, body(&s));
            let table = read_records(a.as_slice()).unwrap();
            assert_eq!(table.kind(), e.name());
            match e {
                Engine::Brw => assert_eq!(table.len(), 15),
                Engine::Spine => assert_eq!(table.len(), 15),
                Engine::Gillespie => assert!(table.len() >= 3),
            }
        }
    }

    #[test]
    fn budget_refused_up_front() {
        let mut s = spec(Engine::Brw);
        s.n_max = Some(20);
        assert!(matches!(
            check_budget(&s, 1024),
            Err(HarnessError::Core(CoreError::BudgetExceeded { .. }))
        ));
    }

    #[test]
    fn tails_rows() {
        let mut buf = Vec::new();
        let n = write_tails(0.5, 1, &TGrid::parse("0:2:0.5").unwrap(), &mut buf).unwrap();
        assert_eq!(n, 5);
        let RecordTable::Tails(rows) = read_records(buf.as_slice()).unwrap() else { panic!() };
        assert_eq!(rows[0].survival, 1.0);
        assert!((rows[2].survival - 0.600_424).abs() < 1e-6);
    }

    #[test]
    fn points_path_shape() {
        assert_eq!(points_path(Path::new("a/b.csv")), PathBuf::from("a/b.points.csv"));
    }
}
