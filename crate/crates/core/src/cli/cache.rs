//! On-disk cache of Betti rows, one JSON file per `(k, n, d, method)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{BettiRecord, Cell, Method};

pub fn path(dir: &Path, cell: Cell, method: Method) -> PathBuf {
    dir.join(format!("{}-{}-{}-{}.json", cell.k, cell.n, cell.d, method.label()))
}

/// A cached record, or `None` when missing, unreadable or for another cell.
pub fn load(dir: &Path, cell: Cell, method: Method) -> Option<BettiRecord> {
    let bytes = fs::read(path(dir, cell, method)).ok()?;
    let record: BettiRecord = serde_json::from_slice(&bytes).ok()?;
    record.matches(cell, method).then_some(record)
}

/// Writes through a temporary file and a rename so readers never see a
/// partial file. Failures only cost a recomputation later, so they are ignored.
pub fn store(dir: &Path, record: &BettiRecord) {
    let cell = Cell { k: record.k, n: record.n, d: record.d };
    let method = match record.method.as_str() {
        "closedform" => Method::Closed,
        "both" => Method::Both,
        _ => Method::Loc,
    };
    let target = path(dir, cell, method);
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        target.file_name().and_then(|s| s.to_str()).unwrap_or("entry"),
        std::process::id()
    ));
    let write = || -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string_pretty(record).map_err(std::io::Error::other)?.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, &target)
    };
    if write().is_err() {
        let _ = fs::remove_file(&tmp);
    }
}
