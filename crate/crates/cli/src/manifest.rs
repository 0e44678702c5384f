//! Reproducibility manifest: config echo, input digests, output digests,
//! per-stage timings.

use std::path::{Path, PathBuf};
use std::time::Instant;

use sha2::{Digest, Sha256};

#[derive(Debug, serde::Serialize)]
pub struct FileDigest {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, serde::Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub wall_ms: u128,
}

#[derive(Debug, serde::Serialize)]
pub struct RunManifest<C: serde::Serialize> {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: C,
    pub inputs: Vec<FileDigest>,
    pub row_counts: Vec<(String, usize)>,
    pub outputs: Vec<FileDigest>,
    pub stages: Vec<StageTiming>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

pub fn digest_file(path: &Path) -> std::io::Result<FileDigest> {
    let bytes = std::fs::read(path)?;
    Ok(FileDigest {
        file: path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string()),
        sha256: sha256_hex(&bytes),
        bytes: bytes.len() as u64,
    })
}

/// Collects written artifacts and stage timings as the pipeline runs.
pub struct Recorder {
    out_dir: PathBuf,
    outputs: Vec<FileDigest>,
    stages: Vec<StageTiming>,
    current: Option<(String, Instant)>,
}

impl Recorder {
    pub fn new(out_dir: &Path) -> Self {
        Self {
            out_dir: out_dir.to_path_buf(),
            outputs: Vec::new(),
            stages: Vec::new(),
            current: None,
        }
    }

    pub fn stage(&mut self, name: &str) {
        self.finish_stage();
        self.current = Some((name.to_string(), Instant::now()));
    }

    fn finish_stage(&mut self) {
        if let Some((stage, start)) = self.current.take() {
            self.stages.push(StageTiming {
                stage,
                wall_ms: start.elapsed().as_millis(),
            });
        }
    }

    /// Write an artifact into the output directory and record its digest.
    pub fn write(&mut self, name: &str, contents: &str) -> std::io::Result<()> {
        let path = self.out_dir.join(name);
        std::fs::write(&path, contents)?;
        self.outputs.push(FileDigest {
            file: name.to_string(),
            sha256: sha256_hex(contents.as_bytes()),
            bytes: contents.len() as u64,
        });
        Ok(())
    }

    pub fn into_parts(mut self) -> (Vec<FileDigest>, Vec<StageTiming>) {
        self.finish_stage();
        (self.outputs, self.stages)
    }
}
