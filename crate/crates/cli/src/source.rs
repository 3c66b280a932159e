use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use hypercurve::generators::{boolean, braid, dihedral, h3, type_b};
use hypercurve::{Arrangement, Error};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Braid,
    #[value(name = "typeB", alias = "type-b")]
    TypeB,
    Dihedral,
    Boolean,
    H3,
    File,
}

/// Which arrangement a command runs on.
#[derive(Clone, Debug, Args)]
pub struct Source {
    #[arg(long, value_enum, global = true)]
    pub family: Option<Family>,
    /// Strands for `braid`, rank for `typeB` and `boolean`.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Polygon size for `dihedral`.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Arrangement JSON for `file`.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
}

fn need(v: Option<usize>, flag: &str, family: &str) -> Result<usize, Error> {
    v.ok_or_else(|| Error::Validation(format!("--family {family} needs --{flag}")))
}

impl Source {
    pub fn build(&self) -> anyhow::Result<Arrangement> {
        let family = self.family.ok_or_else(|| Error::Validation("missing --family".into()))?;
        let a = match family {
            Family::Braid => braid(need(self.n, "n", "braid")?)?,
            Family::TypeB => type_b(need(self.n, "n", "typeB")?)?,
            Family::Dihedral => dihedral(need(self.m, "m", "dihedral")?)?,
            Family::Boolean => boolean(need(self.n, "n", "boolean")?)?,
            Family::H3 => h3()?,
            Family::File => {
                let path = self.file.as_ref().ok_or_else(|| Error::Validation("--family file needs --file".into()))?;
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let v: Value = serde_json::from_str(&text)
                    .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
                integer_normals(&v)?;
                Arrangement::from_json(&v)?
            }
        };
        Ok(a)
    }
}

fn integer_normals(v: &Value) -> Result<(), Error> {
    let rows = v.get("normals").and_then(Value::as_array);
    let ok = rows.is_some_and(|rows| {
        rows.iter().all(|r| r.as_array().is_some_and(|r| r.iter().all(|e| e.is_i64())))
    });
    if ok {
        Ok(())
    } else {
        Err(Error::Validation("arrangement files must list integer normals".into()))
    }
}

/// SHA-256 of the compact arrangement JSON.
pub fn content_hash(a: &Arrangement) -> String {
    let bytes = serde_json::to_vec(&a.to_json()).expect("arrangement JSON serializes");
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}
