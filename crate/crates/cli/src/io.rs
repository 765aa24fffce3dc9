//! Input resolution, output files and run manifests.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;

use selfdual::catalog::{hex_digest, Catalog};
use selfdual::codes::CodeFile;
use selfdual::LinearCode;

/// A code read from a file or taken from the built-in catalog.
pub struct NamedCode {
    pub name: String,
    pub code: LinearCode,
    /// Digest of the file bytes, or of the canonical code file for
    /// built-in codes.
    pub digest: String,
    pub source: String,
}

/// Resolves `spec` as a path to a code file, falling back to a built-in
/// code name.
pub fn load_code(spec: &str, catalog: &Catalog) -> Result<NamedCode> {
    let path = Path::new(spec);
    if path.is_file() {
        return load_code_file(path);
    }
    if catalog.contains(spec) {
        let code = catalog.code(spec)?;
        let digest = hex_digest(CodeFile::from_code(spec, &code).to_json().as_bytes());
        return Ok(NamedCode { name: spec.to_string(), code, digest, source: format!("builtin:{spec}") });
    }
    Err(selfdual::Error::Argument(format!("{spec} is neither a code file nor a built-in code name")).into())
}

pub fn load_code_file(path: &Path) -> Result<NamedCode> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| selfdual::Error::Parse(format!("{} is not UTF-8", path.display())))?;
    let file = CodeFile::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let code = file.to_code().with_context(|| format!("reading rows of {}", path.display()))?;
    let name = if file.name.is_empty() {
        path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    } else {
        file.name
    };
    Ok(NamedCode { name, code, digest: hex_digest(&bytes), source: path.display().to_string() })
}

/// Code files named on the command line; directories contribute their
/// `*.json` files in name order.
pub fn collect_code_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(input)
                .with_context(|| format!("listing {}", input.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json") && !is_manifest(p))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(input.clone());
        }
    }
    Ok(out)
}

fn is_manifest(p: &Path) -> bool {
    p.file_name().is_some_and(|n| n.to_string_lossy().ends_with(".manifest.json"))
}

/// Parses `"4,8,9"` into integers.
pub fn parse_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| selfdual::Error::Parse(format!("{s:?} is not a coordinate")).into())
        })
        .collect()
}

/// Metadata written next to every output file.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub input_digests: BTreeMap<String, String>,
    pub threads: usize,
    pub wall_time_secs: f64,
    pub output_digests: BTreeMap<String, String>,
}

/// Collects inputs and outputs of one command run.
pub struct Run {
    command: String,
    parameters: serde_json::Value,
    threads: usize,
    started: Instant,
    inputs: BTreeMap<String, String>,
    outputs: BTreeMap<String, String>,
}

impl Run {
    pub fn new(command: &str, parameters: impl Serialize, threads: usize) -> Self {
        Self {
            command: command.to_string(),
            parameters: serde_json::to_value(parameters).unwrap_or(serde_json::Value::Null),
            threads,
            started: Instant::now(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, code: &NamedCode) {
        self.inputs.insert(code.source.clone(), code.digest.clone());
    }

    pub fn input_bytes(&mut self, label: &str, bytes: &[u8]) {
        self.inputs.insert(label.to_string(), hex_digest(bytes));
    }

    /// Writes `text` to `path`, or to standard output when `path` is `None`.
    pub fn emit(&mut self, path: Option<&Path>, text: &str) -> Result<()> {
        match path {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                }
                fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
                self.outputs.insert(p.display().to_string(), hex_digest(text.as_bytes()));
            }
            None => print!("{text}"),
        }
        Ok(())
    }

    /// Writes the manifest to `path` if any output went to a file.
    pub fn finish(self, path: Option<&Path>) -> Result<()> {
        let Some(path) = path else { return Ok(()) };
        if self.outputs.is_empty() {
            return Ok(());
        }
        let manifest = RunManifest {
            command: self.command,
            parameters: self.parameters,
            input_digests: self.inputs,
            threads: self.threads,
            wall_time_secs: self.started.elapsed().as_secs_f64(),
            output_digests: self.outputs,
        };
        fs::write(path, serde_json::to_string_pretty(&manifest)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

/// `out.json` -> `out.json.manifest.json`.
pub fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}
