use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sforge::verify::content_hash;

/// Result cache on disk, one file per key. Entries hold the exact output text,
/// so a hit reproduces the computed output byte for byte.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os("SFORGE_CACHE_DIR")
            .filter(|d| !d.is_empty())
            .map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Key over the canonical input text, the command and its flags.
    pub fn key(input: &str, command: &str, flags: &str) -> String {
        content_hash(&format!("{command}\n{flags}\n{input}"))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.out"))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)).ok()
    }

    pub fn put(&self, key: &str, text: &str) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
        fs::write(&tmp, text)?;
        fs::rename(tmp, self.path(key))
    }

    /// Returns the cached text for `key`, computing and storing it on a miss.
    pub fn get_or_compute<E>(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<String, E>,
    ) -> Result<(String, bool), E> {
        if let Some(text) = self.get(key) {
            return Ok((text, true));
        }
        let text = compute()?;
        if let Err(e) = self.put(key, &text) {
            eprintln!("warning: could not write cache entry {key}: {e}");
        }
        Ok((text, false))
    }
}
