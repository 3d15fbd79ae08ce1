//! Output memo under `OPCAT_CACHE_DIR`, keyed by command and arguments.

use std::path::PathBuf;

fn path_for(key: &str) -> Option<PathBuf> {
    let dir = std::env::var_os("OPCAT_CACHE_DIR")?;
    let name: String = key.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
    Some(PathBuf::from(dir).join(format!("{name}.out")))
}

/// Returns the cached text for `key`, computing and storing it on a miss.
/// Cache I/O failures fall back to computing.
pub fn get_or_compute(key: &str, compute: impl FnOnce() -> String) -> String {
    let Some(path) = path_for(key) else {
        return compute();
    };
    if let Ok(s) = std::fs::read_to_string(&path) {
        return s;
    }
    let s = compute();
    if let Some(parent) = path.parent() {
        let _ = std::fs::create_dir_all(parent);
    }
    if let Err(e) = std::fs::write(&path, &s) {
        eprintln!("warning: could not write cache file {}: {e}", path.display());
    }
    s
}
