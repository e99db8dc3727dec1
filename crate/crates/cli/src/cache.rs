//! Append-only JSON-lines cache of optimizer results.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use maxcut_core::{OptResult, CODE_VERSION};
use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "MAXCUT_CACHE";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub algorithm: String,
    pub degree: u32,
    /// Canonical JSON of the optimizer settings that affect the result.
    pub params: String,
    pub version: String,
}

impl CacheKey {
    pub fn new(algorithm: &str, degree: u32, params: &impl Serialize) -> Self {
        CacheKey {
            algorithm: algorithm.to_string(),
            degree,
            params: serde_json::to_string(params).expect("settings serialize"),
            version: CODE_VERSION.to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    key: CacheKey,
    value: OptResult,
    timestamp: u64,
}

/// In-memory index over the file. Appends go through one mutex-guarded
/// writer.
pub struct Cache {
    entries: Mutex<HashMap<CacheKey, OptResult>>,
    writer: Mutex<File>,
    path: PathBuf,
}

impl Cache {
    pub fn open(path: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        if path.exists() {
            let file = File::open(path).with_context(|| format!("opening cache {}", path.display()))?;
            for line in BufReader::new(file).lines() {
                let line = line?;
                // A torn trailing line from an interrupted run is skipped.
                if let Ok(e) = serde_json::from_str::<CacheEntry>(&line) {
                    if e.key.version == CODE_VERSION {
                        entries.insert(e.key, e.value);
                    }
                }
            }
        }
        let mut writer = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening cache {} for append", path.display()))?;
        let existing = std::fs::read(path)?;
        if existing.last().is_some_and(|&b| b != b'\n') {
            writer.write_all(b"\n")?;
        }
        Ok(Cache { entries: Mutex::new(entries), writer: Mutex::new(writer), path: path.to_path_buf() })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn get(&self, key: &CacheKey) -> Option<OptResult> {
        self.entries.lock().unwrap().get(key).copied()
    }

    pub fn put(&self, key: CacheKey, value: OptResult) -> Result<()> {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let entry = CacheEntry { key: key.clone(), value, timestamp };
        let mut line = serde_json::to_string(&entry)?;
        line.push('\n');
        self.writer.lock().unwrap().write_all(line.as_bytes())?;
        self.entries.lock().unwrap().insert(key, value);
        Ok(())
    }
}

/// Looks `key` up, computing and recording it on a miss.
pub fn cached<F>(cache: Option<&Cache>, key: CacheKey, compute: F) -> Result<OptResult>
where
    F: FnOnce() -> maxcut_core::Result<OptResult>,
{
    if let Some(c) = cache {
        if let Some(v) = c.get(&key) {
            return Ok(v);
        }
    }
    let v = compute()?;
    if let Some(c) = cache {
        c.put(key, v)?;
    }
    Ok(v)
}
