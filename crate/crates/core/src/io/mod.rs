//! File formats and run configuration.

pub mod ascii;
pub mod config;
pub mod geojson;
pub mod manifest;
pub mod ppm;

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub use ascii::{format_ascii_grid, parse_ascii_grid, read_ascii_grid, write_ascii_grid};
pub use config::{LayerEntry, RunConfig};
pub use geojson::{
    parse_feature_collection, read_vector_file, to_feature_collection, write_vector_file,
};
pub use manifest::Manifest;
pub use ppm::{render_map, render_ppm, CLASS_PALETTE, NODATA_COLOR};

/// Writes every file to a temporary sibling first and renames them into
/// place only after all writes succeeded.
pub fn write_files_atomic(files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, bytes) in files {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = tempfile::Builder::new()
            .prefix(".vulnmap-")
            .tempfile_in(&dir)
            .map_err(|e| Error::io(path, e))?;
        tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
        #[cfg(unix)]
        {
            use std::os::unix::fs::PermissionsExt;
            tmp.as_file()
                .set_permissions(std::fs::Permissions::from_mode(0o644))
                .map_err(|e| Error::io(path, e))?;
        }
        tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    }
    Ok(())
}

pub fn write_file_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    write_files_atomic(&[(path.to_path_buf(), bytes.to_vec())])
}
