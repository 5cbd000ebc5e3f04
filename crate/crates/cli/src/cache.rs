//! Content-addressed JSON cache: one file per `(operation, input)` pair, named by
//! the SHA-256 of both.

use std::fs;
use std::path::{Path, PathBuf};

use dihedralsig::report::Cache;
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "DIHEDRALSIG_CACHE";

pub struct FileCache {
    dir: PathBuf,
}

impl FileCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FileCache { dir: dir.into() }
    }

    fn path(&self, op: &str, input: &str) -> PathBuf {
        let mut h = Sha256::new();
        h.update(op.as_bytes());
        h.update([0u8]);
        h.update(input.as_bytes());
        self.dir.join(op).join(format!("{}.json", hex::encode(h.finalize())))
    }
}

impl Cache for FileCache {
    fn get(&self, op: &str, input: &str) -> Option<String> {
        fs::read_to_string(self.path(op, input)).ok()
    }

    /// Best effort: a failed write only loses the memo.
    fn put(&self, op: &str, input: &str, output: &str) {
        let path = self.path(op, input);
        let Some(parent) = path.parent() else { return };
        if fs::create_dir_all(parent).is_err() {
            return;
        }
        // write then rename, so concurrent readers never see a partial file
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if fs::write(&tmp, output).is_ok() && fs::rename(&tmp, &path).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }
}

/// The environment variable wins over the flag; without either, the user cache directory is used.
pub fn resolve_dir(flag: Option<&Path>) -> Option<PathBuf> {
    if let Some(v) = std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()) {
        return Some(PathBuf::from(v));
    }
    if let Some(f) = flag {
        return Some(f.to_path_buf());
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("dihedralsig"))
}
