//! A workspace is a directory of model files plus `wautom.toml`, which
//! records user-defined semirings and how many models and other
//! definitions refer to each.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use wautom_core::construct::{direct_product, lattice_from_poset, modulo_ring, PosetDescription, Registry};
use wautom_core::semiring::{SemiringError, SemiringRef};

pub const MANIFEST: &str = "wautom.toml";

#[derive(Debug, Error)]
pub enum WorkspaceError {
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: malformed manifest: {reason}")]
    Manifest { path: String, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Lattice,
    Zmod,
    Product,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Definition {
    pub name: String,
    pub kind: Kind,
    /// Poset text (`@conditions`/`@le`) for lattices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<String>,
    #[serde(default)]
    pub references: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default, rename = "semiring")]
    pub semirings: Vec<Definition>,
}

#[derive(Debug)]
pub struct Workspace {
    dir: PathBuf,
    manifest: Manifest,
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> WorkspaceError + '_ {
    move |source| WorkspaceError::Io { path: path.display().to_string(), source }
}

/// Name-like tokens of a semiring expression such as `product(z,fractions(integers))`.
fn name_tokens(expr: &str) -> impl Iterator<Item = &str> {
    expr.split(|c: char| c == '(' || c == ')' || c == ',' || c.is_whitespace()).filter(|s| !s.is_empty())
}

impl Definition {
    fn build(&self, registry: &Registry) -> Result<SemiringRef, SemiringError> {
        let missing = |what: &str| SemiringError::MalformedElement {
            semiring: "semiring definition".to_string(),
            token: format!("{}: missing {what}", self.name),
        };
        match self.kind {
            Kind::Lattice => {
                let text = self.poset.as_deref().ok_or_else(|| missing("poset"))?;
                lattice_from_poset(&PosetDescription::parse(text)?)
            }
            Kind::Zmod => modulo_ring(self.modulus.ok_or_else(|| missing("modulus"))?),
            Kind::Product => {
                let l = registry.resolve(self.left.as_deref().ok_or_else(|| missing("left"))?)?;
                let r = registry.resolve(self.right.as_deref().ok_or_else(|| missing("right"))?)?;
                Ok(direct_product(l, r))
            }
        }
    }

    fn mentions(&self, name: &str) -> bool {
        [&self.left, &self.right].into_iter().flatten().any(|e| name_tokens(e).any(|t| t == name))
    }
}

impl Workspace {
    /// Opens `dir`, reading the manifest when there is one.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, WorkspaceError> {
        let dir = dir.into();
        let path = dir.join(MANIFEST);
        let manifest = if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(io(&path))?;
            toml::from_str(&text)
                .map_err(|e| WorkspaceError::Manifest { path: path.display().to_string(), reason: e.to_string() })?
        } else {
            Manifest::default()
        };
        Ok(Workspace { dir, manifest })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    /// Built-ins plus every definition, in manifest order.
    pub fn registry(&self) -> Result<Registry, WorkspaceError> {
        let mut reg = Registry::with_builtins();
        for def in &self.manifest.semirings {
            let sr = def.build(&reg)?;
            reg.register(&def.name, sr)?;
        }
        Ok(reg)
    }

    fn save(&self) -> Result<(), WorkspaceError> {
        let path = self.dir.join(MANIFEST);
        let text = toml::to_string(&self.manifest)
            .map_err(|e| WorkspaceError::Manifest { path: path.display().to_string(), reason: e.to_string() })?;
        std::fs::write(&path, text).map_err(io(&path))
    }

    /// `@semiring` expressions of the model files in the workspace.
    fn model_semirings(&self) -> Result<Vec<String>, WorkspaceError> {
        let mut out = Vec::new();
        let entries = match std::fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(io(&self.dir)(e)),
        };
        let mut paths: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for p in paths {
            if !p.is_file() || p.file_name().is_some_and(|n| n == MANIFEST) {
                continue;
            }
            let Ok(text) = std::fs::read_to_string(&p) else { continue };
            for line in text.lines() {
                let content = line.split('#').next().unwrap_or("").trim();
                if let Some(rest) = content.strip_prefix("@semiring") {
                    out.push(rest.trim().to_string());
                }
            }
        }
        Ok(out)
    }

    /// Recounts references from model files and other definitions.
    pub fn refresh_references(&mut self) -> Result<(), WorkspaceError> {
        let used = self.model_semirings()?;
        let defs = self.manifest.semirings.clone();
        for def in &mut self.manifest.semirings {
            let from_models = used.iter().filter(|e| name_tokens(e).any(|t| t == def.name)).count();
            let from_defs = defs.iter().filter(|d| d.name != def.name && d.mentions(&def.name)).count();
            def.references = (from_models + from_defs) as u64;
        }
        Ok(())
    }

    fn define(&mut self, def: Definition) -> Result<SemiringRef, WorkspaceError> {
        let mut reg = self.registry()?;
        if reg.contains(&def.name) || reg.resolve(&def.name).is_ok() {
            return Err(SemiringError::DuplicateName(def.name).into());
        }
        let sr = def.build(&reg)?;
        let sr = reg.register(&def.name, sr)?;
        self.manifest.semirings.push(def);
        self.refresh_references()?;
        self.save()?;
        Ok(sr)
    }

    pub fn define_lattice(&mut self, name: &str, poset_text: &str) -> Result<SemiringRef, WorkspaceError> {
        // store the normalized description
        let desc = PosetDescription::parse(poset_text)?;
        self.define(Definition {
            name: name.to_string(),
            kind: Kind::Lattice,
            poset: Some(desc.to_text()),
            modulus: None,
            left: None,
            right: None,
            references: 0,
        })
    }

    pub fn define_zmod(&mut self, name: &str, q: u64) -> Result<SemiringRef, WorkspaceError> {
        self.define(Definition {
            name: name.to_string(),
            kind: Kind::Zmod,
            poset: None,
            modulus: Some(q),
            left: None,
            right: None,
            references: 0,
        })
    }

    pub fn define_product(&mut self, name: &str, left: &str, right: &str) -> Result<SemiringRef, WorkspaceError> {
        self.define(Definition {
            name: name.to_string(),
            kind: Kind::Product,
            poset: None,
            modulus: None,
            left: Some(left.to_string()),
            right: Some(right.to_string()),
            references: 0,
        })
    }

    /// Removes a definition that nothing refers to.
    pub fn delete(&mut self, name: &str) -> Result<(), WorkspaceError> {
        if Registry::is_builtin(name) {
            return Err(SemiringError::Builtin(name.to_string()).into());
        }
        self.refresh_references()?;
        let pos = self
            .manifest
            .semirings
            .iter()
            .position(|d| d.name == name)
            .ok_or_else(|| SemiringError::UnknownSemiring(name.to_string()))?;
        let references = self.manifest.semirings[pos].references;
        if references > 0 {
            return Err(SemiringError::InUse { name: name.to_string(), references: references as usize }.into());
        }
        self.manifest.semirings.remove(pos);
        self.save()
    }
}
