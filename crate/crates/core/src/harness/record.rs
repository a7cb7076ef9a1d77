use std::collections::BTreeSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::predictors::Family;

pub const SCHEMA_VERSION: u32 = 1;

/// One trained predictor evaluated on one machine.
///
/// The normalized rate, accuracy and distance are omitted for machines whose
/// optimal predictor has zero rate. Failed runs keep zero rate and accuracy
/// and are excluded from every aggregate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalRecord {
    pub schema_version: u32,
    pub machine_id: String,
    pub family: Family,
    pub size: usize,
    pub seed: u64,
    pub rate_nats: f64,
    pub accuracy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized_accuracy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized_distance: Option<f64>,
    pub normalized_distortion_pct: f64,
    pub h_mu: f64,
    #[serde(rename = "C_mu")]
    pub c_mu: f64,
    #[serde(rename = "A_opt")]
    pub a_opt: f64,
    #[serde(rename = "R_opt")]
    pub r_opt: f64,
    #[serde(default)]
    pub failed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl EvalRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// Append-only JSON-lines file of [`EvalRecord`]s.
#[derive(Clone, Debug)]
pub struct RecordStore {
    path: PathBuf,
}

impl RecordStore {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        RecordStore { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All records, or an empty list if the file does not exist yet.
    ///
    /// A final line without its newline is the remnant of an interrupted
    /// write; it is cut off so later appends start on a clean line.
    pub fn load(&self) -> Result<Vec<EvalRecord>> {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(Error::io(&self.path, e)),
        };
        let complete = match text.rfind('\n') {
            Some(i) => i + 1,
            None => 0,
        };
        if complete < text.len() {
            log::warn!("{}: dropping incomplete trailing line", self.path.display());
            let f = OpenOptions::new().write(true).open(&self.path).map_err(|e| Error::io(&self.path, e))?;
            f.set_len(complete as u64).map_err(|e| Error::io(&self.path, e))?;
        }
        text[..complete]
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, line)| {
                let rec: EvalRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
                    line: i + 1,
                    reason: e.to_string(),
                })?;
                if rec.schema_version != SCHEMA_VERSION {
                    return Err(Error::Parse {
                        line: i + 1,
                        reason: format!("unsupported schema_version {}", rec.schema_version),
                    });
                }
                Ok(rec)
            })
            .collect()
    }

    /// `(machine_id, family)` pairs already present.
    pub fn completed_units(&self) -> Result<BTreeSet<(String, Family)>> {
        Ok(self
            .load()?
            .into_iter()
            .map(|r| (r.machine_id, r.family))
            .collect())
    }

    pub fn append(&self, records: &[EvalRecord]) -> Result<()> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::io(&self.path, e))?;
        let mut w = BufWriter::new(file);
        let mut buf = String::new();
        for r in records {
            buf.push_str(&r.to_json());
            buf.push('\n');
        }
        w.write_all(buf.as_bytes()).map_err(|e| Error::io(&self.path, e))?;
        w.flush().map_err(|e| Error::io(&self.path, e))
    }

    pub fn write_all(&self, records: &[EvalRecord]) -> Result<()> {
        File::create(&self.path).map_err(|e| Error::io(&self.path, e))?;
        self.append(records)
    }
}
