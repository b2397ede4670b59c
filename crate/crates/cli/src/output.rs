//! Report envelope and atomic file output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliResult;

/// Version tag of the report layout; bump when the payload shape changes.
pub const REPORT_SCHEMA: &str = "zygops-report/1";
pub const TOOLKIT: &str = "zygops";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const REPORT_FILE: &str = "report.json";
pub const PAYLOAD_FILE: &str = "payload.json";

#[derive(Debug, Clone, Serialize)]
pub struct StageTime {
    pub stage: String,
    pub seconds: f64,
}

/// Wall-clock data, kept apart from the payload so that the payload is
/// reproducible byte for byte.
#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub started_at: String,
    pub finished_at: String,
    pub stages: Vec<StageTime>,
}

#[derive(Debug, Serialize)]
pub struct Envelope<'a, P: Serialize> {
    pub schema: &'static str,
    pub toolkit: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub timing: Timing,
    pub payload: &'a P,
}

/// Records stage durations for the envelope.
pub struct Clock {
    started_at: String,
    last: Instant,
    stages: Vec<StageTime>,
}

impl Clock {
    pub fn start() -> Self {
        Clock {
            started_at: now(),
            last: Instant::now(),
            stages: Vec::new(),
        }
    }

    pub fn lap(&mut self, stage: &str) {
        let t = Instant::now();
        self.stages.push(StageTime {
            stage: stage.to_string(),
            seconds: (t - self.last).as_secs_f64(),
        });
        self.last = t;
    }

    pub fn finish(self) -> Timing {
        Timing {
            started_at: self.started_at,
            finished_at: now(),
            stages: self.stages,
        }
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// A CSV table assembled in memory, written atomically.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> CliResult<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Table { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> CliResult<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn write(self, path: &Path) -> CliResult<()> {
        let bytes = self.writer.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        write_atomic(path, &bytes)
    }
}

/// Shortest round-trip representation; empty for missing values.
pub fn num(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:?}"),
        None => String::new(),
    }
}

/// Writes `report.json` (envelope) and `payload.json` into `dir`.
pub fn write_report<P: Serialize>(
    dir: &Path,
    command: &str,
    config: &RunConfig,
    payload: &P,
    clock: Clock,
) -> CliResult<PathBuf> {
    write_atomic(&dir.join(PAYLOAD_FILE), &to_json(payload)?)?;
    let envelope = Envelope {
        schema: REPORT_SCHEMA,
        toolkit: TOOLKIT,
        version: VERSION,
        command,
        config,
        timing: clock.finish(),
        payload,
    };
    let path = dir.join(REPORT_FILE);
    write_atomic(&path, &to_json(&envelope)?)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_leaves_no_temp_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
        let names: Vec<_> = fs::read_dir(p.parent().unwrap()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 1);
    }

    #[test]
    fn number_format_round_trips() {
        assert_eq!(num(Some(0.1)), "0.1");
        assert_eq!(num(Some(1.0)), "1.0");
        assert_eq!(num(None), "");
        let x = 1.0 / 3.0;
        assert_eq!(num(Some(x)).parse::<f64>().unwrap(), x);
    }
}
