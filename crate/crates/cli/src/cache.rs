//! Content-keyed JSON result cache.
//!
//! Each entry lives in `<dir>/<sha256(key)>.json` and stores the key text, the
//! payload and a checksum of the payload. Unreadable, mismatched or corrupt
//! entries are treated as misses.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::report::Report;

pub const CACHE_ENV: &str = "NILSHEET_CACHE_DIR";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub payload: Report,
    pub checksum: String,
}

pub struct Cache {
    dir: PathBuf,
}

fn sha(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn payload_checksum(r: &Report) -> String {
    sha(&serde_json::to_string(r).expect("report serializes"))
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    /// `$NILSHEET_CACHE_DIR`, else `$XDG_CACHE_HOME/nilsheet`, else `~/.cache/nilsheet`.
    pub fn default_dir() -> PathBuf {
        if let Some(d) = std::env::var_os(CACHE_ENV) {
            return PathBuf::from(d);
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return Path::new(&d).join("nilsheet");
        }
        match std::env::var_os("HOME") {
            Some(h) => Path::new(&h).join(".cache").join("nilsheet"),
            None => PathBuf::from(".nilsheet-cache"),
        }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", sha(key)))
    }

    pub fn get(&self, key: &str) -> Option<Report> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.key == key && entry.checksum == payload_checksum(&entry.payload)).then_some(entry.payload)
    }

    /// Writes to a temporary file in the cache directory, then renames it into place.
    pub fn put(&self, key: &str, payload: &Report) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry { key: key.to_string(), payload: payload.clone(), checksum: payload_checksum(payload) };
        let n = TEMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".tmp-{}-{n}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(&entry).expect("entry serializes").as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key))
    }
}
