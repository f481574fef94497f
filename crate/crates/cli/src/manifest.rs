//! Run manifests: one `manifest.json` per output directory.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub role: String,
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments after the program name, as given.
    pub argv: Vec<String>,
    /// Working directory the command ran in; relative paths in `argv`
    /// resolve against it on replay.
    pub cwd: PathBuf,
    pub config: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub seed: u64,
    pub threads: usize,
    pub wall_seconds: f64,
    pub cpu_seconds: f64,
    /// Output file names relative to the directory.
    pub outputs: Vec<String>,
    pub summary: serde_json::Value,
}

impl RunManifest {
    pub fn load(path: &Path) -> CliResult<Self> {
        Ok(hisgraph::io::read_json(path)?)
    }

    pub fn input(&self, role: &str) -> Option<&InputDigest> {
        self.inputs.iter().find(|i| i.role == role)
    }
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let mut file = fs::File::open(path).map_err(|e| hisgraph::Error::Io {
        path: path.to_owned(),
        source: e,
    })?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

/// Process CPU time (user + system) in seconds.
pub fn cpu_seconds() -> f64 {
    // SAFETY: getrusage only writes into the struct we pass.
    let usage = unsafe {
        let mut usage: libc::rusage = std::mem::zeroed();
        if libc::getrusage(libc::RUSAGE_SELF, &mut usage) != 0 {
            return 0.0;
        }
        usage
    };
    let secs = |t: libc::timeval| t.tv_sec as f64 + t.tv_usec as f64 * 1e-6;
    secs(usage.ru_utime) + secs(usage.ru_stime)
}

/// Collects outputs for one command run and writes the manifest last.
pub struct Run {
    pub dir: PathBuf,
    command: String,
    argv: Vec<String>,
    seed: u64,
    inputs: Vec<InputDigest>,
    outputs: Vec<String>,
    started: Instant,
    cpu_start: f64,
}

impl Run {
    /// Prepares `dir`: creates it, refuses a directory owned by a different
    /// command, and deletes the outputs of an earlier run of this command.
    pub fn start(dir: &Path, command: &str, argv: Vec<String>, seed: u64) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
        let manifest = dir.join(MANIFEST_FILE);
        if manifest.exists() {
            let old = RunManifest::load(&manifest)?;
            if old.command != command {
                return Err(CliError::usage(format!(
                    "{} already holds `{}` output; choose another --out-dir",
                    dir.display(),
                    old.command
                )));
            }
            for name in &old.outputs {
                let _ = fs::remove_file(dir.join(name));
            }
            let _ = fs::remove_file(&manifest);
        }
        Ok(Self {
            dir: dir.to_owned(),
            command: command.to_owned(),
            argv,
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            started: Instant::now(),
            cpu_start: cpu_seconds(),
        })
    }

    pub fn input(&mut self, role: &str, path: &Path) -> CliResult<()> {
        let sha256 = sha256_file(path)?;
        self.inputs.push(InputDigest {
            role: role.to_owned(),
            path: fs::canonicalize(path).unwrap_or_else(|_| path.to_owned()),
            sha256,
        });
        Ok(())
    }

    /// Path for output `name`, recorded in the manifest.
    pub fn output(&mut self, name: &str) -> PathBuf {
        self.outputs.push(name.to_owned());
        self.dir.join(name)
    }

    pub fn finish(self, config: serde_json::Value, summary: serde_json::Value) -> CliResult<PathBuf> {
        let manifest = RunManifest {
            tool: "hisgraph".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: self.command,
            argv: self.argv,
            cwd: std::env::current_dir().unwrap_or_default(),
            config,
            inputs: self.inputs,
            seed: self.seed,
            threads: rayon::current_num_threads(),
            wall_seconds: self.started.elapsed().as_secs_f64(),
            cpu_seconds: cpu_seconds() - self.cpu_start,
            outputs: self.outputs,
            summary,
        };
        let path = self.dir.join(MANIFEST_FILE);
        hisgraph::io::write_json(&path, &manifest)?;
        Ok(path)
    }
}
