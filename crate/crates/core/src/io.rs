//! Reservoir files (JSON lines of nets) and atomic writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::petri::Net;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Parses JSON lines; blank lines are skipped, every net must validate.
pub fn parse_reservoir(text: &str) -> Result<Vec<Net>, IoError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fail = |message: String| IoError::Format { line: i + 1, message };
        let net: Net = serde_json::from_str(line).map_err(|e| fail(e.to_string()))?;
        net.validate().map_err(|e| fail(e.to_string()))?;
        out.push(net);
    }
    Ok(out)
}

pub fn read_reservoir(path: &Path) -> Result<Vec<Net>, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_reservoir(&text)
}

/// One compact JSON object per line, LF terminated.
pub fn reservoir_to_string(nets: &[Net]) -> String {
    let mut s = String::new();
    for n in nets {
        s.push_str(&serde_json::to_string(n).expect("nets serialize"));
        s.push('\n');
    }
    s
}

pub fn write_reservoir(path: &Path, nets: &[Net]) -> Result<(), IoError> {
    write_atomic(path, reservoir_to_string(nets).as_bytes())
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let wrap = |source| IoError::Io {
        path: path.to_path_buf(),
        source,
    };
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(wrap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_text() {
        let nets = vec![fixtures::three_event_net(), fixtures::weighted_net()];
        let text = reservoir_to_string(&nets);
        assert_eq!(text.lines().count(), 2);
        assert_eq!(parse_reservoir(&text).unwrap(), nets);
    }

    #[test]
    fn reports_line_numbers() {
        let good = serde_json::to_string(&fixtures::assembly_net()).unwrap();
        let text = format!("{good}\n\n{{\"id\":1}}\n");
        match parse_reservoir(&text) {
            Err(IoError::Format { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let bad_arc = r#"{"id":"n","conditions":[],"events":[{"id":"e","label":"E"}],"arcs":[{"from":"e","to":"zz"}]}"#;
        assert!(matches!(parse_reservoir(bad_arc), Err(IoError::Format { line: 1, .. })));
    }
}
