//! Append-only newline-delimited JSON store of computed invariants.
//!
//! Records with the same key must carry the same value whatever method
//! produced them; a disagreement is an error both when writing and when
//! loading.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Nbc,
    FiniteField,
    Oracle,
    Fit,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Nbc => "nbc",
            Provenance::FiniteField => "finite-field",
            Provenance::Oracle => "oracle",
            Provenance::Fit => "fit",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RecordKey {
    #[serde(rename = "S")]
    pub s: Vec<String>,
    pub n: usize,
    pub quantity: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
}

impl RecordKey {
    pub fn new(s: Vec<String>, n: usize, quantity: &str) -> Self {
        RecordKey {
            s,
            n,
            quantity: quantity.to_string(),
            i: None,
            parity: None,
            partition: None,
        }
    }

    pub fn degree(mut self, i: usize) -> Self {
        self.i = Some(i);
        self
    }

    pub fn parity(mut self, parity: impl ToString) -> Self {
        self.parity = Some(parity.to_string());
        self
    }

    pub fn partition(mut self, partition: impl ToString) -> Self {
        self.partition = Some(partition.to_string());
        self
    }
}

impl fmt::Display for RecordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let json = serde_json::to_string(self).map_err(|_| fmt::Error)?;
        f.write_str(&json)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub key: RecordKey,
    pub value: serde_json::Value,
    pub provenance: Provenance,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl InvariantRecord {
    pub fn new(key: RecordKey, value: serde_json::Value, provenance: Provenance) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        InvariantRecord {
            key,
            value,
            provenance,
            timestamp,
        }
    }
}

pub struct Store {
    path: PathBuf,
    index: BTreeMap<RecordKey, Vec<InvariantRecord>>,
}

fn conflict(existing: &InvariantRecord, incoming: &InvariantRecord) -> Error {
    Error::StoreConflict {
        key: incoming.key.to_string(),
        existing: existing.value.to_string(),
        existing_provenance: existing.provenance.to_string(),
        incoming: incoming.value.to_string(),
        incoming_provenance: incoming.provenance.to_string(),
    }
}

impl Store {
    /// Loads the file (a missing file is an empty store) and checks it for
    /// conflicting records.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut store = Store {
            path,
            index: BTreeMap::new(),
        };
        let file = match File::open(&store.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(store),
            Err(e) => return Err(e.into()),
        };
        for line in BufReader::new(file).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: InvariantRecord = serde_json::from_str(&line)?;
            store.admit(&record)?;
            store.index.entry(record.key.clone()).or_default().push(record);
        }
        Ok(store)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Errors on a value conflict; `Ok(true)` if the record is new.
    fn admit(&self, record: &InvariantRecord) -> Result<bool> {
        let Some(existing) = self.index.get(&record.key) else {
            return Ok(true);
        };
        if let Some(other) = existing.iter().find(|r| r.value != record.value) {
            return Err(conflict(other, record));
        }
        Ok(!existing.iter().any(|r| r.provenance == record.provenance))
    }

    /// Appends the record unless the same key, value and provenance is
    /// already stored. Returns whether anything was written.
    pub fn put(&mut self, record: InvariantRecord) -> Result<bool> {
        if !self.admit(&record)? {
            return Ok(false);
        }
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let mut line = serde_json::to_string(&record)?;
        line.push('\n');
        file.write_all(line.as_bytes())?;
        self.index.entry(record.key.clone()).or_default().push(record);
        Ok(true)
    }

    pub fn get(&self, key: &RecordKey) -> &[InvariantRecord] {
        self.index.get(key).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.index.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &InvariantRecord> {
        self.index.values().flatten()
    }
}
