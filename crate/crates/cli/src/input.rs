//! Reading inputs from files or stdin, with a digest of every byte read.

use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use sublo::lattice::LatticeJson;
use sublo::poset::PosetJson;
use sublo::term::{parse_identity, Identity, IdentityFile};
use sublo::{FinLattice, LatticeMap, Poset};

#[derive(Clone, Debug, Serialize)]
pub struct Digest256 {
    pub source: String,
    pub sha256: String,
}

#[derive(Default)]
pub struct Input {
    pub digests: Vec<Digest256>,
}

impl Input {
    /// Reads a path, or stdin for `-`. Empty input is an error.
    pub fn read(&mut self, source: &str) -> Result<String> {
        let text = if source == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            s
        } else {
            std::fs::read_to_string(source).with_context(|| format!("reading {source}"))?
        };
        if text.trim().is_empty() {
            bail!("{source}: empty input");
        }
        let hash = Sha256::digest(text.as_bytes());
        self.digests.push(Digest256 {
            source: source.to_string(),
            sha256: hash.iter().map(|b| format!("{b:02x}")).collect(),
        });
        Ok(text)
    }
}

pub fn read_lattice(inputs: &mut Input, source: &str) -> Result<FinLattice> {
    let text = inputs.read(source)?;
    let json: LatticeJson = serde_json::from_str(&text).with_context(|| format!("{source}: lattice JSON"))?;
    Ok(FinLattice::from_json(&json)?)
}

pub fn read_poset(inputs: &mut Input, source: &str) -> Result<Poset> {
    let text = inputs.read(source)?;
    let json: PosetJson = serde_json::from_str(&text).with_context(|| format!("{source}: poset JSON"))?;
    Ok(Poset::from_json(&json)?)
}

/// JSON identity file, or a bare `(= lhs rhs)` / `(<= lhs rhs)` form.
pub fn read_identity(inputs: &mut Input, path: &Path) -> Result<Identity> {
    let source = path.to_string_lossy();
    let text = inputs.read(&source)?;
    if text.trim_start().starts_with('{') {
        let file: IdentityFile = serde_json::from_str(&text).with_context(|| format!("{source}: identity JSON"))?;
        Ok(file.to_identity()?)
    } else {
        let body = text.lines().map(|l| l.split(';').next().unwrap_or("")).collect::<String>();
        if body.trim().is_empty() {
            bail!("{source}: placeholder with no identity transcribed");
        }
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Ok(parse_identity(&name, &text)?)
    }
}

/// `{"values": [...]}` or a bare array.
pub fn parse_map(text: &str) -> Result<LatticeMap> {
    if let Ok(m) = serde_json::from_str::<LatticeMap>(text) {
        return Ok(m);
    }
    let values: Vec<usize> = serde_json::from_str(text).context("map JSON")?;
    Ok(LatticeMap::new(values))
}

pub enum Loaded {
    Lattice(FinLattice),
    Poset(Poset),
}

/// Lattice JSON if it has `leq_pairs`, poset JSON if it has `elements`.
pub fn read_any(inputs: &mut Input, source: &str) -> Result<Loaded> {
    let text = inputs.read(source)?;
    let v: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("{source}: JSON"))?;
    if v.get("leq_pairs").is_some() {
        let json: LatticeJson = serde_json::from_value(v)?;
        Ok(Loaded::Lattice(FinLattice::from_json(&json)?))
    } else if v.get("elements").is_some() {
        let json: PosetJson = serde_json::from_value(v)?;
        Ok(Loaded::Poset(Poset::from_json(&json)?))
    } else {
        bail!("{source}: neither lattice nor poset JSON")
    }
}
