//! File formats: point-set/measure files, expansion files, and JSON reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use sphere_disc::{GegenbauerExpansion, PointSet, SpherePoint, WeightedMeasure};

/// A parsed point-set file: the bare points, the induced measure (equal
/// weights unless the file declares a weight column), and the raw bytes for
/// digesting.
pub struct LoadedInput {
    pub points: PointSet,
    pub measure: WeightedMeasure,
    pub weighted: bool,
    pub bytes: Vec<u8>,
}

/// Parse a point-set file.
///
/// Format: blank lines and `#` comments are ignored; the first payload line
/// is `dim <d>` optionally followed by the word `weights`; every following
/// line holds d+1 coordinates (plus a trailing weight when declared),
/// whitespace-separated. Weights must sum to 1 within 1e-9 (taken as-is),
/// within 1e-6 (rescaled), and are rejected beyond that.
pub fn load_pointset(path: &Path) -> Result<LoadedInput> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = std::str::from_utf8(&bytes)
        .with_context(|| format!("{} is not valid UTF-8", path.display()))?;

    let mut dim: Option<usize> = None;
    let mut weighted = false;
    let mut points: Vec<SpherePoint> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let payload = line.split('#').next().unwrap_or("").trim();
        if payload.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = payload.split_whitespace().collect();
        let Some(d) = dim else {
            if tokens.len() < 2 || tokens[0] != "dim" {
                bail!(
                    "{}:{line_no}: expected header `dim <d> [weights]`, found {payload:?}",
                    path.display()
                );
            }
            let d: usize = tokens[1]
                .parse()
                .with_context(|| format!("{}:{line_no}: bad dimension", path.display()))?;
            if d < 1 {
                bail!("{}:{line_no}: dimension must be at least 1", path.display());
            }
            match tokens.get(2) {
                None => {}
                Some(&"weights") => weighted = true,
                Some(other) => bail!(
                    "{}:{line_no}: unexpected header token {other:?}",
                    path.display()
                ),
            }
            dim = Some(d);
            continue;
        };
        let expected = d + 1 + usize::from(weighted);
        if tokens.len() != expected {
            bail!(
                "{}:{line_no}: expected {expected} columns, found {}",
                path.display(),
                tokens.len()
            );
        }
        let mut values = Vec::with_capacity(expected);
        for tok in &tokens {
            let v: f64 = tok.parse().with_context(|| {
                format!("{}:{line_no}: bad number {tok:?}", path.display())
            })?;
            values.push(v);
        }
        let coords = values[..d + 1].to_vec();
        let point = SpherePoint::new(coords)
            .with_context(|| format!("{}:{line_no}: rejected point", path.display()))?;
        points.push(point);
        if weighted {
            weights.push(values[d + 1]);
        }
    }

    if dim.is_none() {
        bail!("{}: missing `dim <d>` header", path.display());
    }
    if points.is_empty() {
        bail!("{}: no points", path.display());
    }
    let points = PointSet::new(points)?;
    let measure = if weighted {
        let sum: f64 = weights.iter().sum();
        let dev = (sum - 1.0).abs();
        if dev > 1e-6 {
            bail!(
                "{}: weights sum to {sum}, outside the 1e-6 rescale band",
                path.display()
            );
        }
        if dev > 1e-9 {
            eprintln!("note: {}: weights sum to {sum}; rescaled", path.display());
        }
        // Hand the measure constructor an exactly unit mass in either band.
        if dev > 1e-13 {
            for w in &mut weights {
                *w /= sum;
            }
        }
        let atoms = points.points().iter().cloned().zip(weights).collect();
        WeightedMeasure::new(atoms)?
    } else {
        WeightedMeasure::equal_weights(&points)
    };
    Ok(LoadedInput {
        points,
        measure,
        weighted,
        bytes,
    })
}

/// Write a point set in the format `load_pointset` reads.
pub fn save_pointset(path: &Path, set: &PointSet) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "dim {}", set.dim()).expect("string write");
    for p in set.points() {
        let row: Vec<String> = p.coords().iter().map(|c| format!("{c}")).collect();
        writeln!(out, "{}", row.join(" ")).expect("string write");
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Write an expansion: `lambda <l>`, `n_max <n>`, then one coefficient per
/// line in shortest-roundtrip decimal form, so a reload is bit-for-bit.
pub fn save_expansion(path: &Path, exp: &GegenbauerExpansion) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "lambda {}", exp.lambda()).expect("string write");
    writeln!(out, "n_max {}", exp.n_max()).expect("string write");
    for c in exp.coeffs() {
        writeln!(out, "{c}").expect("string write");
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Read an expansion file written by `save_expansion`.
pub fn load_expansion(path: &Path) -> Result<GegenbauerExpansion> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lambda: Option<f64> = None;
    let mut n_max: Option<usize> = None;
    let mut coeffs: Vec<f64> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let payload = line.split('#').next().unwrap_or("").trim();
        if payload.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = payload.split_whitespace().collect();
        match (lambda.is_none(), n_max.is_none()) {
            (true, _) => {
                if tokens.len() != 2 || tokens[0] != "lambda" {
                    bail!(
                        "{}:{line_no}: expected `lambda <value>`",
                        path.display()
                    );
                }
                lambda = Some(tokens[1].parse().with_context(|| {
                    format!("{}:{line_no}: bad lambda", path.display())
                })?);
            }
            (false, true) => {
                if tokens.len() != 2 || tokens[0] != "n_max" {
                    bail!("{}:{line_no}: expected `n_max <value>`", path.display());
                }
                n_max = Some(tokens[1].parse().with_context(|| {
                    format!("{}:{line_no}: bad n_max", path.display())
                })?);
            }
            (false, false) => {
                if tokens.len() != 1 {
                    bail!(
                        "{}:{line_no}: expected one coefficient per line",
                        path.display()
                    );
                }
                coeffs.push(tokens[0].parse().with_context(|| {
                    format!("{}:{line_no}: bad coefficient", path.display())
                })?);
            }
        }
    }
    let (Some(lambda), Some(n_max)) = (lambda, n_max) else {
        bail!("{}: missing lambda/n_max header", path.display());
    };
    if coeffs.len() != n_max + 1 {
        bail!(
            "{}: n_max {n_max} promises {} coefficients, found {}",
            path.display(),
            n_max + 1,
            coeffs.len()
        );
    }
    Ok(GegenbauerExpansion::new(lambda, coeffs)?)
}

/// Machine-readable run record. Field order and the sorted `results` map
/// make the serialization stable; `wall_ms` is the only field allowed to
/// differ between identical runs.
#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub seed: u64,
    pub results: BTreeMap<String, serde_json::Value>,
    pub versions: BTreeMap<String, String>,
    pub wall_ms: u128,
}

impl Report {
    pub fn new(command: &str, inputs_digest: String, seed: u64) -> Self {
        let mut versions = BTreeMap::new();
        versions.insert("sphere-disc".to_string(), sphere_disc::VERSION.to_string());
        versions.insert(
            "sphere-disc-cli".to_string(),
            env!("CARGO_PKG_VERSION").to_string(),
        );
        Report {
            command: command.to_string(),
            inputs_digest,
            seed,
            results: BTreeMap::new(),
            versions,
            wall_ms: 0,
        }
    }

    pub fn insert(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).context("serializing report")?;
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))
    }
}

/// SHA-256 over the given parts, hex-encoded; parts are length-prefixed so
/// distinct splits cannot collide.
pub fn digest_parts(parts: &[&[u8]]) -> String {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part);
    }
    let out = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in out {
        write!(hex, "{byte:02x}").expect("string write");
    }
    hex
}
